"""Seeded randomized law suites with self-contained counterexample documents.

A suite is a pair (generate, check).  ``generate(rng, size)`` returns a list of
serializable inputs and ``check(inputs)`` returns None or a failure reason.
A failing trial is dumped as a reproducer record holding the encoded inputs,
so ``replay`` can rerun the check without the generator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import codec
from .chain import classify_chain_map, gen_acyclic_cof, gen_cof, identity_map, pushout_product_chain
from .errors import LocsysError, UnknownSuite
from .groupoid import (
    FinGroupoid,
    GroupoidFunctor,
    classify_functor,
    cyclic_group,
    delooping,
    full_subgroupoid,
    groupoid_pullback,
    identity_functor,
    pi0,
    product,
    product_functor,
    projection,
    skeletize,
    symmetric_group,
)
from .integral import (
    LocMorphism,
    LocObject,
    classify_integral,
    external_hom,
    external_pushout_product,
    external_tensor,
    hom_enumerate,
    tensor_hom_transpose_loc,
    tensor_hom_untranspose_loc,
)
from .linalg import Field
from .local_systems import (
    coset_representatives,
    identity_system_map,
    induction_comparison,
    is_iso_system_map,
    mate_comparison,
    projection_formula_map,
    pull_map,
    pull_system,
    push_left,
    push_right,
    skeletal_transport_iso,
    strong_closed_comparison,
    strong_monoidal_comparison,
)
from .random_objects import acyclic_system, random_functor, random_groupoid, random_system, summand_inclusion

Inputs = List[object]
Generator = Callable[[random.Random, int, Optional[Field]], Inputs]
Check = Callable[[Inputs], Optional[str]]

FIELDS = (Field(2), Field(3), Field(5), Field(0))


@dataclass
class Suite:
    name: str
    generate: Generator
    check: Check


@dataclass
class SuiteReport:
    name: str
    trials: int
    failures: List[Tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"failures": [{"seed": s, "reproducer": r} for s, r in self.failures], "suite": self.name, "trials": self.trials}


_SUITES: Dict[str, Suite] = {}


def register(name: str, generate: Generator, check: Check) -> None:
    _SUITES[name] = Suite(name, generate, check)


def unregister(name: str) -> None:
    _SUITES.pop(name, None)


def suite_names() -> List[str]:
    return sorted(_SUITES)


def get_suite(name: str) -> Suite:
    if name not in _SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(suite_names())}")
    return _SUITES[name]


def trial_seed(seed: int, trial: int) -> int:
    return seed * 1_000_003 + trial


def reproducer(name: str, seed: int, size: int, inputs: Inputs, reason: str) -> str:
    return codec.dumps({
        "format_version": codec.FORMAT_VERSION,
        "inputs": [codec.to_record(x) for x in inputs],
        "reason": reason,
        "seed": seed,
        "size": size,
        "suite": name,
    })


def run_check(s: Suite, inputs: Inputs) -> Optional[str]:
    try:
        return s.check(inputs)
    except LocsysError as e:
        return f"{type(e).__name__}: {e}"


def verify(name: str, seed: int = 0, trials: int = 10, size: int = 2, field: Optional[Field] = None) -> SuiteReport:
    """Run ``trials`` seeded trials; ``field`` pins the scalars where the suite allows a choice."""
    s = get_suite(name)
    report = SuiteReport(name, trials)
    for t in range(trials):
        ts = trial_seed(seed, t)
        inputs = s.generate(random.Random(ts), size, field)
        reason = run_check(s, inputs)
        if reason is not None:
            report.failures.append((ts, reproducer(name, ts, size, inputs, reason)))
    return report


def replay(text: str) -> Optional[str]:
    """Rerun the check stored in a reproducer; None when it now passes."""
    import json

    rec = json.loads(text)
    if rec.get("format_version") != codec.FORMAT_VERSION:
        from .errors import VersionMismatch

        raise VersionMismatch("reproducer has the wrong format_version")
    s = get_suite(rec["suite"])
    inputs = [codec.from_record(r).payload for r in rec["inputs"]]
    return run_check(s, inputs)


# ---------------------------------------------------------------- shared generators


def _small(rng: random.Random, size: int, groups=("1", "C2")) -> FinGroupoid:
    return random_groupoid(rng, max(1, size + 1), groups)


def _field(rng: random.Random, fld: Optional[Field], choices: Sequence[Field] = FIELDS) -> Field:
    return fld if fld is not None else rng.choice(choices)


def _is_id(m) -> bool:
    return all(c == identity_map(c.source) for c in m.components)


# ---------------------------------------------------------------- projection formula


def _gen_projection(rng, size, fld):
    F = _field(rng, fld)
    X, Y = _small(rng, size), _small(rng, size)
    f = random_functor(X, Y, rng)
    return [f, random_system(X, F, rng, max_dim=size), random_system(Y, F, rng, max_dim=size)]


def _check_projection(inputs):
    f, r, v = inputs
    if not is_iso_system_map(projection_formula_map(f, r, v)):
        return "projection formula comparison is not invertible"
    if not _is_id(strong_monoidal_comparison(f, v, v)) or not _is_id(strong_closed_comparison(f, v, v)):
        return "pullback is not strictly monoidal closed"
    return None


# ---------------------------------------------------------------- Beck-Chevalley


def _gen_bc(rng, size, fld):
    F = _field(rng, fld)
    X, Y, Z = _small(rng, size), _small(rng, size), _small(rng, max(1, size - 1))
    f = random_functor(X, Y, rng)
    comps = pi0(Y)
    pick = [c for c in comps if rng.random() < 0.5] or [comps[0]]
    _, incl = full_subgroupoid(Y, sorted(o for c in pick for o in c))
    return [f, random_system(X, F, rng, max_dim=size), Z, incl]


def _check_bc(inputs):
    f, v, Z, incl = inputs
    X, Y = f.source, f.target
    P, Q = product(X, Z), product(Y, Z)
    u, k = projection([X, Z], 0, P), projection([Y, Z], 0, Q)
    g = product_functor([f, identity_functor(Z)])
    if not is_iso_system_map(mate_comparison(f, g, u, k, v)):
        return "base change along a product projection fails"
    _, p1, p2 = groupoid_pullback(f, incl)
    if not is_iso_system_map(mate_comparison(f, p2, p1, incl, v)):
        return "base change along a component inclusion fails"
    return None


# ---------------------------------------------------------------- pushout products


def _gen_generators(rng, size, fld):
    F = _field(rng, fld, (Field(2), Field(3), Field(0)))
    m, n = rng.randint(0, size), rng.randint(0, size)
    second = gen_acyclic_cof(n, F) if rng.random() < 0.5 else gen_cof(n, F)
    return [gen_cof(m, F), second]


def _check_generators(inputs):
    a, b = inputs
    flags = classify_chain_map(pushout_product_chain(a, b))
    want_we = classify_chain_map(a).we or classify_chain_map(b).we
    if not flags.cof:
        return "pushout product of generators is not a cofibration"
    if flags.we != want_we:
        return f"pushout product has we={flags.we}, expected {want_we}"
    return None


def _gen_bifunctor(rng, size, fld):
    # semisimple choices: groups of order 1, 2, 3 with char 0 or 5
    F = _field(rng, fld, (Field(0), Field(5)))
    groups = ("1", "C2", "C3")
    legs = []
    for acyclic in (False, rng.random() < 0.5):
        X = random_groupoid(rng, max(1, size), groups)
        v = random_system(X, F, rng, max_dim=1)
        extra = acyclic_system(X, F, rng) if acyclic else random_system(X, F, rng, max_dim=1)
        inc = summand_inclusion(v, extra)
        legs.append(LocMorphism(LocObject(X, v), LocObject(X, inc.target), identity_functor(X), inc))
    return legs


def _check_bifunctor(inputs):
    m, n = inputs
    fm, fn = classify_integral(m), classify_integral(n)
    if not (fm.cof.is_yes and fn.cof.is_yes):
        return "inputs are not certified cofibrations"
    flags = classify_integral(external_pushout_product(m, n).morphism)
    if not flags.cof.is_yes:
        return f"pushout product cofibration status {flags.cof.status}: {flags.cof.evidence}"
    if (fm.we or fn.we) and not flags.we:
        return "pushout product with an acyclic input is not acyclic"
    return None


# ---------------------------------------------------------------- external hom adjunction


def _gen_adjunction(rng, size, fld):
    F = _field(rng, fld, (Field(2),))
    X = random_groupoid(rng, 2, ("1", "C2"))
    Z = random_groupoid(rng, 2, ("1", "C2"))
    from .groupoid import discrete

    Y = discrete(rng.randint(1, 2))
    sysf = lambda b: random_system(b, F, rng, max_dim=1, window=(0, 0))
    return [LocObject(X, sysf(X)), LocObject(Y, sysf(Y)), LocObject(Z, sysf(Z))]


def _check_adjunction(inputs):
    v, r, w = inputs
    eh = external_hom(r, w)
    left = hom_enumerate(external_tensor(v, r), w)
    right = hom_enumerate(v, eh.obj)
    if len(left) != len(right):
        return f"hom counts differ: {len(left)} vs {len(right)}"
    keys = {codec.encode(m) for m in right}
    images = set()
    for m in left:
        t = tensor_hom_transpose_loc(m, v, r, eh)
        images.add(codec.encode(t))
        if tensor_hom_untranspose_loc(t, v, r, eh) != m:
            return "transposes are not mutually inverse"
    if images != keys:
        return "transpose is not a bijection"
    return None


# ---------------------------------------------------------------- skeletization


def _gen_skeleton(rng, size, fld):
    F = _field(rng, fld)
    X = random_groupoid(rng, max(1, 2 * size + 2))
    return [X, random_system(X, F, rng, max_dim=size)]


def _check_skeleton(inputs):
    X, v = inputs
    sk = skeletize(X)
    pi = sk.p @ sk.iota
    if pi != identity_functor(sk.skeleton):
        return "p o iota is not the identity"
    ip = sk.iota @ sk.p
    for m in range(X.n_morphisms):
        s, t = X.src[m], X.tgt[m]
        if X.comp[(sk.gamma[t], ip.mor_map[m])] != X.comp[(m, sk.gamma[s])]:
            return f"gamma is not natural at {X.mor_labels[m]}"
    if not classify_functor(sk.iota).we:
        return "iota is not an equivalence"
    if not is_iso_system_map(skeletal_transport_iso(sk.p, sk.iota, sk.gamma, v)):
        return "skeletal transport is not invertible"
    return None


# ---------------------------------------------------------------- induced section


def subgroup_inclusions() -> List[GroupoidFunctor]:
    """C2 <= C4, C3 <= S3 and C2 <= S3 as functors of deloopings."""
    c4, c2 = delooping(cyclic_group(4)), delooping(cyclic_group(2))
    s3, c3 = delooping(symmetric_group(3)), delooping(cyclic_group(3))
    t = symmetric_group(3)
    three = [g for g in range(6) if g and t[g][g] != 0]
    r = three[0]
    two = next(g for g in range(1, 6) if t[g][g] == 0)
    return [
        GroupoidFunctor(c2, c4, [0], [0, 2]),
        GroupoidFunctor(c3, s3, [0], [0, r, t[r][r]]),
        GroupoidFunctor(c2, s3, [0], [0, two]),
    ]


def _gen_induced(rng, size, fld):
    f = rng.choice(subgroup_inclusions())
    F = _field(rng, fld)
    return [f, random_system(f.source, F, rng, max_dim=size)]


def _check_induced(inputs):
    f, v = inputs
    ic = induction_comparison(f, v)
    k = len(coset_representatives(f))
    c = v.at[0]
    if any(ic.forward.target.dim(n) != k * c.dim(n) for n in set(c.dims) | set(ic.forward.target.dims)):
        return "induced dimension is not index times dimension"
    if ic.backward @ ic.forward != identity_map(ic.forward.source):
        return "section map has no left inverse"
    if ic.forward @ ic.backward != identity_map(ic.forward.target):
        return "section map has no right inverse"
    return None


# ---------------------------------------------------------------- triangle identities


def _gen_triangles(rng, size, fld):
    F = _field(rng, fld)
    X, Y = _small(rng, size), _small(rng, size)
    f = random_functor(X, Y, rng)
    return [f, random_system(X, F, rng, max_dim=size), random_system(Y, F, rng, max_dim=size)]


def triangle_failures(f: GroupoidFunctor, v, w) -> Optional[str]:
    fv = pull_system(f, w)
    L = push_left(f, v)
    L2 = push_left(f, pull_system(f, L.system))
    if L2.counit(L.system) @ L.map(L.unit, L2) != identity_system_map(L.system):
        return "left adjoint: counit o f_!(unit) is not the identity"
    Lw = push_left(f, fv)
    if pull_map(f, Lw.counit(w)) @ Lw.unit != identity_system_map(fv):
        return "left adjoint: f^*(counit) o unit is not the identity"
    R = push_right(f, v)
    R2 = push_right(f, pull_system(f, R.system))
    if R2.map(R.counit, R) @ R2.unit(R.system) != identity_system_map(R.system):
        return "right adjoint: f_*(counit) o unit is not the identity"
    Rw = push_right(f, fv)
    if Rw.counit @ pull_map(f, Rw.unit(w)) != identity_system_map(fv):
        return "right adjoint: counit o f^*(unit) is not the identity"
    return None


def _check_triangles(inputs):
    return triangle_failures(*inputs)


register("projection-formula", _gen_projection, _check_projection)
register("beck-chevalley", _gen_bc, _check_bc)
register("pushout-product-generators", _gen_generators, _check_generators)
register("quillen-bifunctor", _gen_bifunctor, _check_bifunctor)
register("external-hom-adjunction", _gen_adjunction, _check_adjunction)
register("skeletization", _gen_skeleton, _check_skeleton)
register("induced-section", _gen_induced, _check_induced)
register("triangle-identities", _gen_triangles, _check_triangles)
