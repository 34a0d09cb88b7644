"""The fifteen acceptance criteria, each reported as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

import pathlib
import random
import sys
import time
from typing import Callable, Dict, List, Optional, Tuple

import pytest

from locsys import codec
from locsys.chain import (
    chain_map_solution_dim,
    classify_chain_map,
    gen_acyclic_cof,
    gen_cof,
    hom_complex,
    homology,
    pushout_product_chain,
)
from locsys.groupoid import (
    SetMap,
    cyclic_group,
    delooping,
    full_subgroupoid,
    groupoid_pullback,
    identity_functor,
    pi0,
    product,
    product_functor,
    projection,
    pushout_product_fiber_formula,
    set_pushout_product,
)
from locsys.integral import (
    LocMorphism,
    LocObject,
    classify_integral,
    external_pushout_product,
    external_push_comparison,
    external_tensor,
    external_tensor_adjunct_defect,
    external_tensor_map,
    homotopy_quotient_square,
    is_iso_loc,
    loc_coproduct,
    component_decomposition,
    square_is_pullback,
    tensor_coproduct_comparison,
    tensor_square,
)
from locsys.linalg import Field, kernel_basis
from locsys.local_systems import (
    identity_system_map,
    is_iso_system_map,
    mate_comparison,
    projection_formula_map,
    pull_map,
    pull_system,
    strong_closed_comparison,
    strong_monoidal_comparison,
)
from locsys.random_objects import (
    acyclic_system,
    random_complex,
    random_functor,
    random_groupoid,
    random_system,
    summand_inclusion,
)
from locsys.simplicial import const, tot
from locsys.suites import _check_adjunction, _check_induced, _check_skeleton, _gen_adjunction, subgroup_inclusions, triangle_failures

F2, F3, F5, Q = Field(2), Field(3), Field(5), Field(0)
DATA = pathlib.Path(__file__).parent / "data"
BUDGET_SECONDS = 60.0

Result = Tuple[bool, str]


def _first_failure(checks) -> Optional[str]:
    for label, ok in checks:
        if not ok:
            return label
    return None


# ---------------------------------------------------------------- criteria


def c01_pushout_product_generators() -> Result:
    start = time.perf_counter()
    for fld in (F2, F3, Q):
        for m in range(3):
            for n in range(3):
                a = classify_chain_map(pushout_product_chain(gen_cof(m, fld), gen_cof(n, fld)))
                if not a.cof or a.we:
                    return False, f"gen_cof({m}) x gen_cof({n}) over {fld}: {a.to_dict()}"
                b = classify_chain_map(pushout_product_chain(gen_cof(m, fld), gen_acyclic_cof(n, fld)))
                if not (b.cof and b.we):
                    return False, f"gen_cof({m}) x gen_acyclic_cof({n}) over {fld}: {b.to_dict()}"
    took = time.perf_counter() - start
    return took < 1.0, f"18 pushout products in {took:.2f}s"


def c02_cycles_are_chain_maps() -> Result:
    rng = random.Random(2)
    for t in range(50):
        v, w = random_complex(F5, rng, -2, 2, 3), random_complex(F5, rng, -2, 2, 3)
        h = hom_complex(v, w)
        z0 = kernel_basis(h.d(0)).cols if h.dim(-1) else h.dim(0)
        direct = chain_map_solution_dim(v, w)
        if z0 != direct:
            return False, f"pair {t}: dim Z_0 = {z0}, direct solutions = {direct}"
    return True, "50 pairs agree"


def c03_tot_const() -> Result:
    rng = random.Random(3)
    for t in range(25):
        fld = rng.choice((F2, F3, F5, Q))
        v, D = random_complex(fld, rng), rng.choice((1, 2, 3))
        if homology(tot(const(v, D))) != homology(v):
            return False, f"instance {t} (D={D})"
    return True, "25 instances"


def c04_skeletization() -> Result:
    rng = random.Random(4)
    for t in range(20):
        x = random_groupoid(rng, 6, ("1", "C2", "C3", "S3"))
        reason = _check_skeleton([x, random_system(x, rng.choice((F3, Q)), rng, max_dim=1)])
        if reason:
            return False, f"groupoid {t}: {reason}"
    return True, "20 groupoids"


def c05_triangle_identities() -> Result:
    rng = random.Random(5)
    for t in range(30):
        fld = rng.choice((F2, F3, F5, Q))
        x, y = random_groupoid(rng, 4, ("1", "C2", "C3")), random_groupoid(rng, 4, ("1", "C2", "C3"))
        f = random_functor(x, y, rng)
        reason = triangle_failures(f, random_system(x, fld, rng), random_system(y, fld, rng))
        if reason:
            return False, f"instance {t}: {reason}"
    return True, "30 instances, both adjunctions"


def c06_induction() -> Result:
    rng = random.Random(6)
    for f in subgroup_inclusions()[:2]:
        for _ in range(3):
            reason = _check_induced([f, random_system(f.source, F5, rng)])
            if reason:
                return False, reason
    return True, "C2 <= C4 and C3 <= S3 over F_5"


def c07_projection_formula() -> Result:
    rng = random.Random(7)
    for t in range(25):
        fld = rng.choice((F2, F3, F5, Q))
        x, y = random_groupoid(rng, 3, ("1", "C2")), random_groupoid(rng, 3, ("1", "C2"))
        f = random_functor(x, y, rng)
        r, v, w = random_system(x, fld, rng), random_system(y, fld, rng), random_system(y, fld, rng)
        bad = _first_failure([
            ("projection formula", is_iso_system_map(projection_formula_map(f, r, v))),
            ("strong monoidal", is_iso_system_map(strong_monoidal_comparison(f, v, w))),
            ("strong closed", is_iso_system_map(strong_closed_comparison(f, v, w))),
        ])
        if bad:
            return False, f"instance {t}: {bad}"
    return True, "25 instances each"


def c08_beck_chevalley() -> Result:
    rng = random.Random(8)
    for t in range(15):
        fld = rng.choice((F2, F3, F5, Q))
        x, y, z = (random_groupoid(rng, 3, ("1", "C2")) for _ in range(3))
        f = random_functor(x, y, rng)
        v = random_system(x, fld, rng)
        u, k = projection([x, z], 0, product(x, z)), projection([y, z], 0, product(y, z))
        if not is_iso_system_map(mate_comparison(f, product_functor([f, identity_functor(z)]), u, k, v)):
            return False, f"product square {t}"
        comps = pi0(y)
        pick = sorted(o for c in comps if rng.random() < 0.5 for o in c) or comps[0]
        _, incl = full_subgroupoid(y, pick)
        _, p1, p2 = groupoid_pullback(f, incl)
        if not is_iso_system_map(mate_comparison(f, p2, p1, incl, v)):
            return False, f"component square {t}"
    return True, "15 instances each"


def _skeleton_we(rng, fld) -> LocMorphism:
    from locsys.groupoid import skeletize

    x = random_groupoid(rng, 3, ("1", "C2"))
    sk = skeletize(x)
    v = random_system(x, fld, rng)
    src = LocObject(sk.skeleton, pull_system(sk.iota, v))
    return LocMorphism(src, LocObject(x, v), sk.iota, identity_system_map(src.system))


def c09_external_tensor_homotopical() -> Result:
    rng = random.Random(9)
    for t in range(25):
        fld = rng.choice((F2, F3, F5, Q))
        m, n = _skeleton_we(rng, fld), _skeleton_we(rng, fld)
        if not classify_integral(external_tensor_map(m, n)).we:
            return False, f"we (x) we not we, instance {t}"
    for t in range(10):
        fld = rng.choice((F5, Q))
        legs = []
        for acyclic in (False, t % 2 == 1):
            x = random_groupoid(rng, 2, ("1", "C2", "C3"))
            v = random_system(x, fld, rng, max_dim=1)
            extra = acyclic_system(x, fld, rng) if acyclic else random_system(x, fld, rng, max_dim=1)
            inc = summand_inclusion(v, extra)
            legs.append(LocMorphism(LocObject(x, v), LocObject(x, inc.target), identity_functor(x), inc))
        want_we = any(classify_integral(m).we for m in legs)
        flags = classify_integral(external_pushout_product(*legs).morphism)
        if not flags.cof.is_yes or (want_we and not flags.we):
            return False, f"pushout product instance {t}: {flags.to_dict()}"
    return True, "25 we instances, 10 pushout products"


def c10_external_hom_adjunction() -> Result:
    rng = random.Random(10)
    for t in range(8):
        reason = _check_adjunction(_gen_adjunction(rng, 1, None))
        if reason:
            return False, f"instance {t}: {reason}"
    return True, "8 instances, full hom-set bijections over F_2"


def c11_quotient_square() -> Result:
    rng = random.Random(11)
    for n in (2, 3):
        for _ in range(3):
            fld = rng.choice((F2, F3, F5))
            sq = homotopy_quotient_square(random_system(delooping(cyclic_group(n)), fld, rng))
            if not square_is_pullback(sq) or not classify_integral(sq.right).fib:
                return False, f"C{n} square"
            x = random_groupoid(rng, 2, ("1", "C2"))
            w = LocObject(x, random_system(x, fld, rng))
            if not square_is_pullback(tensor_square(sq, w)):
                return False, f"C{n} square tensored"
    return True, "C2 and C3 squares, plain and tensored"


def c12_coproducts() -> Result:
    rng = random.Random(12)
    for t in range(15):
        fld = rng.choice((F2, F3, F5, Q))
        objs = [LocObject(x, random_system(x, fld, rng)) for x in (random_groupoid(rng, 2, ("1", "C2")) for _ in range(rng.randint(1, 3)))]
        wx = random_groupoid(rng, 2, ("1", "C2"))
        w = LocObject(wx, random_system(wx, fld, rng))
        bad = _first_failure([
            ("left distributivity", is_iso_loc(tensor_coproduct_comparison(objs, w, True))),
            ("right distributivity", is_iso_loc(tensor_coproduct_comparison(objs, w, False))),
            ("component decomposition", is_iso_loc(component_decomposition(loc_coproduct(objs).obj))),
        ])
        if bad:
            return False, f"instance {t}: {bad}"
    return True, "15 coproduct instances"


def c13_products_and_adjuncts() -> Result:
    from locsys.random_objects import random_system_map

    rng = random.Random(13)
    for t in range(15):
        fld = rng.choice((F2, F3, F5, Q))
        objs = []
        for _ in range(4):
            x = random_groupoid(rng, 2, ("1", "C2"))
            objs.append(LocObject(x, random_system(x, fld, rng)))
        a, b, c, d = objs
        f, g = random_functor(a.base, c.base, rng), random_functor(b.base, d.base, rng)
        fg = product_functor([f, g])
        pulled = pull_system(fg, external_tensor(c, d).system)
        separate = external_tensor(LocObject(a.base, pull_system(f, c.system)), LocObject(b.base, pull_system(g, d.system))).system
        if pulled != separate:
            return False, f"pullback through products, instance {t}"
        if not is_iso_system_map(external_push_comparison(f, g, a.system, b.system)):
            return False, f"pushforward through products, instance {t}"
        m = LocMorphism(a, c, f, random_system_map(a.system, pull_system(f, c.system), rng))
        n = LocMorphism(b, d, g, random_system_map(b.system, pull_system(g, d.system), rng))
        if not all(x.is_zero() for x in external_tensor_adjunct_defect(m, n).components):
            return False, f"adjunct of external tensor, instance {t}"
    return True, "15 instances each"


def _oracle_fibers(f: SetMap, g: SetMap) -> Dict[Tuple[int, int], int]:
    """Connected components of the gluing graph by depth-first search."""
    nodes = [("L", a, b) for a in range(f.domain) for b in range(g.codomain)]
    nodes += [("R", a, b) for a in range(f.codomain) for b in range(g.domain)]
    adj = {v: [] for v in nodes}
    for a in range(f.domain):
        for b in range(g.domain):
            u, v = ("L", a, g.images[b]), ("R", f.images[a], b)
            adj[u].append(v)
            adj[v].append(u)
    seen, fibers = set(), {(a, b): 0 for a in range(f.codomain) for b in range(g.codomain)}
    for v in nodes:
        if v in seen:
            continue
        stack = [v]
        seen.add(v)
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        side, a, b = v
        fibers[(f.images[a], b) if side == "L" else (a, g.images[b])] += 1
    return fibers


def c14_set_pushout_product() -> Result:
    rng = random.Random(14)

    def rand_map():
        m = rng.randint(1, 6)
        return SetMap(tuple(rng.randrange(m) for _ in range(rng.randint(0, 6))), m)

    for t in range(100):
        f, g = rand_map(), rand_map()
        got = set_pushout_product(f, g).fibers
        if got != _oracle_fibers(f, g):
            return False, f"pair {t}: brute-force pushout disagrees"
        if got != pushout_product_fiber_formula(f, g):
            return False, f"pair {t}: three-case census disagrees"
    return True, "100 pairs"


def c15_codec_round_trip() -> Result:
    docs = sorted(DATA.glob("*.doc"))
    for p in docs:
        text = p.read_text(encoding="utf-8")
        if codec.encode(codec.decode(text).payload) != text:
            return False, p.name
    return bool(docs), f"{len(docs)} corpus documents"


CRITERIA: List[Tuple[int, str, Callable[[], Result]]] = [
    (1, "pushout-product axiom on generators", c01_pushout_product_generators),
    (2, "mapping-complex cycles are chain maps", c02_cycles_are_chain_maps),
    (3, "tot of const preserves homology", c03_tot_const),
    (4, "skeletization contract", c04_skeletization),
    (5, "Kan adjunction triangle identities", c05_triangle_identities),
    (6, "induction from a subgroup", c06_induction),
    (7, "Frobenius and projection formula", c07_projection_formula),
    (8, "Beck-Chevalley squares", c08_beck_chevalley),
    (9, "external tensor is homotopical and Quillen", c09_external_tensor_homotopical),
    (10, "external tensor / external hom adjunction", c10_external_hom_adjunction),
    (11, "homotopy quotient square", c11_quotient_square),
    (12, "coproduct distributivity", c12_coproducts),
    (13, "products, pushforward and adjuncts", c13_products_and_adjuncts),
    (14, "set pushout-product oracle", c14_set_pushout_product),
    (15, "codec round trip", c15_codec_round_trip),
]


def run_all(write=print) -> Dict[int, Tuple[bool, str, float]]:
    results = {}
    total = time.perf_counter()
    for num, title, fn in CRITERIA:
        start = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as e:  # a crash is a failure of that criterion only
            ok, detail = False, f"{type(e).__name__}: {e}"
        took = time.perf_counter() - start
        results[num] = (ok, detail, took)
        write(f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {title} ({detail}; {took:.2f}s)")
    elapsed = time.perf_counter() - total
    results[0] = (elapsed < BUDGET_SECONDS, f"total {elapsed:.1f}s", elapsed)
    write(f"[{'PASS' if elapsed < BUDGET_SECONDS else 'FAIL'}] all criteria in {elapsed:.1f}s (budget {BUDGET_SECONDS:.0f}s)")
    return results


@pytest.fixture(scope="module")
def results(request):
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    lines = []

    def write(line):
        lines.append(line)
        if reporter is not None:
            reporter.write_line(line)

    if reporter is not None:
        reporter.write_line("")
    return run_all(write)


@pytest.mark.parametrize("num", [n for n, _, _ in CRITERIA])
def test_criterion(results, num):
    ok, detail, _ = results[num]
    assert ok, detail


def test_total_runtime(results):
    ok, detail, _ = results[0]
    assert ok, detail


if __name__ == "__main__":
    res = run_all()
    sys.exit(0 if all(ok for ok, _, _ in res.values()) else 1)
