"""Objects (X, V) and morphisms (f, phi: V -> f^* W) of the total category of local systems.

Morphisms store the contravariant component; the covariant adjunct
f_! V -> W is computed on demand.  Base functors compose strictly, so
composition needs no coherence data.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .chain import (
    ChainComplex,
    ChainMap,
    chain_pushout,
    curry,
    direct_sum_many,
    direct_sum_map_many,
    hom_complex,
    identity_map,
    is_degreewise_surjective,
    is_iso,
    is_quasi_iso,
    map_into_sum,
    sum_projection,
    uncurry,
    zero_complex,
)
from .errors import (
    BudgetExceeded,
    FieldMismatch,
    NotDiscreteBase,
    ObjectMismatch,
    RationalFieldUnsupported,
    ShapeMismatch,
    UnsupportedBasePushout,
)
from .groupoid import (
    FinGroupoid,
    GroupoidFunctor,
    classify_functor,
    component_of,
    coprojection,
    disjoint_union_many,
    enumerate_functors,
    full_subgroupoid,
    functor_groupoid,
    groupoid_pullback,
    identity_functor,
    is_discrete,
    point,
    product_functor,
    product_many,
    projection,
)
from .linalg import Field, Matrix
from .local_systems import (
    CofAnswer,
    LocalSystem,
    SystemMap,
    base_change_transpose,
    classify_system_map,
    constant_system,
    cup_tensor,
    cup_tensor_map,
    identity_system_map,
    internal_hom,
    natural_map_space,
    pull_map,
    pull_system,
    push_left,
    push_right,
    system_pullback,
    system_pushout,
    zero_system,
)

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class LocObject:
    base: FinGroupoid
    system: LocalSystem

    def __post_init__(self):
        if self.system.base != self.base:
            raise ObjectMismatch("system does not live over the stated base")

    @property
    def field(self) -> Field:
        return self.system.field


@dataclass(frozen=True)
class LocMorphism:
    """A base functor f: X -> Y with component phi: V -> f^* W."""

    source: LocObject
    target: LocObject
    f: GroupoidFunctor
    phi: SystemMap

    def __post_init__(self):
        if self.f.source != self.source.base or self.f.target != self.target.base:
            raise ObjectMismatch("base functor does not match the objects")
        if self.phi.source != self.source.system:
            raise ObjectMismatch("component source is not the source system")
        if self.phi.target != pull_system(self.f, self.target.system):
            raise ObjectMismatch("component target is not f^* of the target system")


def identity_loc(a: LocObject) -> LocMorphism:
    return LocMorphism(a, a, identity_functor(a.base), identity_system_map(a.system))


def compose_loc(psi: LocMorphism, phi: LocMorphism) -> LocMorphism:
    """(g, psi) o (f, phi) = (g o f, f^* psi o phi)."""
    if phi.target != psi.source:
        raise ObjectMismatch("morphisms are not composable")
    return LocMorphism(phi.source, psi.target, psi.f @ phi.f, pull_map(phi.f, psi.phi) @ phi.phi)


def adjunct(m: LocMorphism) -> SystemMap:
    """The covariant form f_! V -> W."""
    return base_change_transpose(m.f, m.phi, m.target.system)


def from_adjunct(f: GroupoidFunctor, source: LocObject, target: LocObject, psi: SystemMap) -> LocMorphism:
    kan = push_left(f, source.system)
    if psi.source != kan.system:
        raise ShapeMismatch("adjunct source is not f_! V")
    return LocMorphism(source, target, f, kan.untranspose(psi))


@dataclass(frozen=True)
class IntegralFlags:
    we: bool
    fib: bool
    cof: CofAnswer

    def to_dict(self) -> dict:
        return {"cof": self.cof.status, "fib": self.fib, "we": self.we}


def classify_integral(m: LocMorphism) -> IntegralFlags:
    base = classify_functor(m.f)
    we = base.we and all(is_quasi_iso(c) for c in m.phi.components)
    fib = base.fib and all(is_degreewise_surjective(c) for c in m.phi.components)
    if not base.cof:
        cof = CofAnswer("no", "base functor is not injective on objects")
    else:
        cof = classify_system_map(adjunct(m)).cof
    return IntegralFlags(we, fib, cof)


def is_iso_loc(m: LocMorphism) -> bool:
    from .groupoid import is_isomorphism

    return is_isomorphism(m.f) and all(is_iso(c) for c in m.phi.components)


# ---------------------------------------------------------------- external tensor


def external_tensor(a: LocObject, b: LocObject) -> LocObject:
    if a.field != b.field:
        raise FieldMismatch("external tensor of systems over different fields")
    xs = [a.base, b.base]
    base = product_many(xs)
    pa, pb = projection(xs, 0, base), projection(xs, 1, base)
    return LocObject(base, cup_tensor(pull_system(pa, a.system), pull_system(pb, b.system)))


def external_tensor_map(m: LocMorphism, n: LocMorphism) -> LocMorphism:
    src = external_tensor(m.source, n.source)
    tgt = external_tensor(m.target, n.target)
    xs = [m.source.base, n.source.base]
    pa, pb = projection(xs, 0, src.base), projection(xs, 1, src.base)
    phi = cup_tensor_map(pull_map(pa, m.phi), pull_map(pb, n.phi))
    fg = product_functor([m.f, n.f])
    return LocMorphism(src, tgt, fg, SystemMap(src.system, pull_system(fg, tgt.system), phi.components))


def external_tensor_system_map(phi: SystemMap, gamma: SystemMap) -> SystemMap:
    """phi (x) gamma over the product base, for system maps over fixed bases."""
    xs = [phi.base, gamma.base]
    base = product_many(xs)
    pa, pb = projection(xs, 0, base), projection(xs, 1, base)
    return cup_tensor_map(pull_map(pa, phi), pull_map(pb, gamma))


def _component_image(f: GroupoidFunctor) -> Optional[List[int]]:
    """Objects of the target hit by f, if f is an isomorphism onto a union of components."""
    x, y = f.source, f.target
    if len(set(f.obj_map)) != x.n_objects:
        return None
    image = set(f.obj_map)
    for a in range(x.n_objects):
        for b in range(x.n_objects):
            if sorted(f.mor_map[m] for m in x.hom(a, b)) != sorted(y.hom(f.obj_map[a], f.obj_map[b])):
                return None
    comp = component_of(y)
    for o in image:
        if any(comp[p] == comp[o] and p not in image for p in range(y.n_objects)):
            return None
    return sorted(image)


@dataclass
class PushoutProduct:
    morphism: LocMorphism
    full: SystemMap  # the pushout-product map over the whole product of targets


def external_pushout_product(m: LocMorphism, n: LocMorphism) -> PushoutProduct:
    """Pushout-product of two morphisms under the external tensor.

    Supported when each base functor is an isomorphism onto a union of
    connected components (identities, maps out of the empty groupoid and
    coprojections are the main cases); then the base pushout is the full
    subgroupoid of X' x Y' on pairs with a coordinate in the image.
    """
    if m.source.field != n.source.field:
        raise FieldMismatch("pushout product over different fields")
    img_f, img_g = _component_image(m.f), _component_image(n.f)
    if img_f is None or img_g is None:
        raise UnsupportedBasePushout("base functors must include a union of connected components")
    fld = m.source.field
    a_t, b_t = m.target, n.target
    phi_t, gamma_t = adjunct(m), adjunct(n)  # f_! V -> V', g_! W -> W'
    xs = [a_t.base, b_t.base]
    base = product_many(xs)
    pa, pb = projection(xs, 0, base), projection(xs, 1, base)
    fv, gw = phi_t.source, gamma_t.source
    left = cup_tensor_map(pull_map(pa, phi_t), identity_system_map(pull_system(pb, gw)))
    right = cup_tensor_map(identity_system_map(pull_system(pa, fv)), pull_map(pb, gamma_t))
    po = system_pushout(left, right)
    to_v = cup_tensor_map(identity_system_map(pull_system(pa, a_t.system)), pull_map(pb, gamma_t))
    to_w = cup_tensor_map(pull_map(pa, phi_t), identity_system_map(pull_system(pb, b_t.system)))
    full = po.universal(to_v, to_w)
    set_f, set_g = set(img_f), set(img_g)
    ny = b_t.base.n_objects
    objs = [o for o in range(base.n_objects) if (o // ny) in set_f or (o % ny) in set_g]
    sub, incl = full_subgroupoid(base, objs)
    src = LocObject(sub, pull_system(incl, po.system))
    tgt = external_tensor(a_t, b_t)
    comp = pull_map(incl, full)
    return PushoutProduct(LocMorphism(src, tgt, incl, comp), full)


# ---------------------------------------------------------------- external hom


@dataclass
class ExternalHom:
    r: LocObject
    w: LocObject
    obj: LocObject
    evals: List[GroupoidFunctor]

    def restriction_at(self, fmap: Sequence[int]) -> Tuple[LocalSystem, ChainMap]:
        """(p_Y)_* [r, f^* w] over the point, with its comparison iso to the fiber at f."""
        Y, Z = self.r.base, self.w.base
        f = _discrete_functor(Y, Z, fmap)
        h = internal_hom(self.r.system, pull_system(f, self.w.system))
        kan = push_right(GroupoidFunctor(Y, point(), [0] * Y.n_objects, [0] * Y.n_morphisms), h)
        fiber_index = _tuple_index(fmap, Z.n_objects)
        fiber = self.obj.system.at[fiber_index]
        pieces = [kan.counit.components[y] for y in range(Y.n_objects)]
        cmp = map_into_sum(pieces, fiber) if pieces else ChainMap(kan.system.at[0], fiber)
        return kan.system, cmp


def _tuple_index(t: Sequence[int], base: int) -> int:
    idx = 0
    for v in t:
        idx = idx * base + v
    return idx


def _discrete_functor(Y: FinGroupoid, Z: FinGroupoid, fmap: Sequence[int]) -> GroupoidFunctor:
    return GroupoidFunctor(Y, Z, list(fmap), [Z.identity[o] for o in fmap])


def external_hom(r: LocObject, w: LocObject) -> ExternalHom:
    """The right adjoint of r (x) (-) for r over a discrete base Y, as a system over Z^Y."""
    Y, Z = r.base, w.base
    if not is_discrete(Y):
        raise NotDiscreteBase("the first argument must live over a discrete groupoid")
    fld = r.field
    zy, evals = functor_groupoid(Y, Z)
    at, along = [], []
    factors = []
    for y in range(Y.n_objects):
        ry = constant_system(Z, r.system.at[y])
        factors.append(pull_system(evals[y], internal_hom(ry, w.system)))
    for o in range(zy.n_objects):
        at.append(direct_sum_many([fac.at[o] for fac in factors], fld))
    for m in range(zy.n_morphisms):
        s, t = zy.src[m], zy.tgt[m]
        along.append(direct_sum_map_many([fac.along[m] for fac in factors], at[s], at[t]))
    return ExternalHom(r, w, LocObject(zy, LocalSystem(zy, at, along, fld)), evals)


def tensor_hom_transpose_loc(m: LocMorphism, v: LocObject, r: LocObject, eh: ExternalHom) -> LocMorphism:
    """(F, phi): V (x) R -> W  gives  (F^flat, psi): V -> (R -| W)."""
    X, Y, Z = v.base, r.base, eh.w.base
    ny = Y.n_objects
    nzo, nzm = Z.n_objects, Z.n_morphisms
    F = m.f
    om = [_tuple_index([F.obj_map[x * ny + y] for y in range(ny)], nzo) for x in range(X.n_objects)]
    ny_m = Y.n_morphisms  # equals ny for a discrete base
    mm = []
    for a in range(X.n_morphisms):
        mm.append(_tuple_index([F.mor_map[a * ny_m + Y.identity[y]] for y in range(ny)], nzm))
    flat = GroupoidFunctor(X, eh.obj.base, om, mm)
    tgt_sys = pull_system(flat, eh.obj.system)
    comps = []
    for x in range(X.n_objects):
        pieces = []
        for y in range(ny):
            pieces.append(curry(m.phi.components[x * ny + y], v.system.at[x], r.system.at[y]))
        comps.append(map_into_sum(pieces, tgt_sys.at[x]) if pieces else ChainMap(v.system.at[x], tgt_sys.at[x]))
    return LocMorphism(v, eh.obj, flat, SystemMap(v.system, tgt_sys, comps))


def tensor_hom_untranspose_loc(m: LocMorphism, v: LocObject, r: LocObject, eh: ExternalHom) -> LocMorphism:
    """Inverse of :func:`tensor_hom_transpose_loc`."""
    X, Y, Z = v.base, r.base, eh.w.base
    ny = Y.n_objects
    src = external_tensor(v, r)
    G = m.f
    om, mm = [], []
    for t in range(src.base.n_objects):
        x, y = divmod(t, ny)
        om.append(eh.evals[y].obj_map[G.obj_map[x]])
    for t in range(src.base.n_morphisms):
        a, b = divmod(t, Y.n_morphisms)
        y = Y.src[b]
        mm.append(eh.evals[y].mor_map[G.mor_map[a]])
    F = GroupoidFunctor(src.base, eh.w.base, om, mm)
    tgt_sys = pull_system(F, eh.w.system)
    comps = []
    for t in range(src.base.n_objects):
        x, y = divmod(t, ny)
        fiber = m.phi.target.at[x]
        parts = [hom_complex(r.system.at[k], eh.w.system.at[eh.evals[k].obj_map[G.obj_map[x]]]) for k in range(ny)]
        proj = sum_projection(parts, y, fiber)
        comps.append(uncurry(proj @ m.phi.components[x], r.system.at[y], tgt_sys.at[t]))
    return LocMorphism(src, eh.w, F, SystemMap(src.system, tgt_sys, comps))


# ---------------------------------------------------------------- (co)limits


@dataclass
class LocCoproduct:
    obj: LocObject
    injections: List[LocMorphism]


def loc_coproduct(objs: Sequence[LocObject], field: Optional[Field] = None) -> LocCoproduct:
    """Disjoint-union base; the system restricts to each input on its summand."""
    if objs:
        field = objs[0].field
    if any(o.field != field for o in objs):
        raise FieldMismatch("coproduct over different fields")
    bases = [o.base for o in objs]
    total = disjoint_union_many(bases)
    at, along = [], []
    for o in objs:
        at.extend(o.system.at)
        along.extend(o.system.along)
    obj = LocObject(total, LocalSystem(total, at, along, field))
    inj = []
    for i, o in enumerate(objs):
        q = coprojection(bases, i, total)
        inj.append(LocMorphism(o, obj, q, identity_system_map(o.system)))
    return LocCoproduct(obj, inj)


def restrict_to_component_union(a: LocObject, objs: Sequence[int]) -> Tuple[LocObject, GroupoidFunctor]:
    sub, incl = full_subgroupoid(a.base, objs)
    return LocObject(sub, pull_system(incl, a.system)), incl


@dataclass
class LocProduct:
    obj: LocObject
    pr1: LocMorphism
    pr2: LocMorphism


def loc_product(a: LocObject, b: LocObject) -> LocProduct:
    """Product base with the direct sum of the pulled-back systems."""
    if a.field != b.field:
        raise FieldMismatch("product over different fields")
    xs = [a.base, b.base]
    base = product_many(xs)
    pa, pb = projection(xs, 0, base), projection(xs, 1, base)
    va, vb = pull_system(pa, a.system), pull_system(pb, b.system)
    fld = a.field
    at = [direct_sum_many([va.at[o], vb.at[o]], fld) for o in range(base.n_objects)]
    along = [direct_sum_map_many([va.along[m], vb.along[m]], at[base.src[m]], at[base.tgt[m]]) for m in range(base.n_morphisms)]
    obj = LocObject(base, LocalSystem(base, at, along, fld))
    p1 = SystemMap(obj.system, va, [sum_projection([va.at[o], vb.at[o]], 0, at[o]) for o in range(base.n_objects)])
    p2 = SystemMap(obj.system, vb, [sum_projection([va.at[o], vb.at[o]], 1, at[o]) for o in range(base.n_objects)])
    return LocProduct(obj, LocMorphism(obj, a, pa, p1), LocMorphism(obj, b, pb, p2))


@dataclass
class LocPullback:
    obj: LocObject
    pr1: LocMorphism
    pr2: LocMorphism
    pullback_data: object
    pr1_base: GroupoidFunctor
    pr2_base: GroupoidFunctor

    def universal(self, m1: LocMorphism, m2: LocMorphism) -> LocMorphism:
        """The morphism into the pullback induced by a commuting cone (m1, m2)."""
        from .groupoid import pairing

        P = self.obj.base
        src = m1.source
        # base functor into the groupoid pullback
        pairs_o = {(a, c): i for i, (a, c) in enumerate(zip(self.pr1_base.obj_map, self.pr2_base.obj_map))}
        pairs_m = {(a, c): i for i, (a, c) in enumerate(zip(self.pr1_base.mor_map, self.pr2_base.mor_map))}
        om = [pairs_o[(m1.f.obj_map[o], m2.f.obj_map[o])] for o in range(src.base.n_objects)]
        mm = [pairs_m[(m1.f.mor_map[k], m2.f.mor_map[k])] for k in range(src.base.n_morphisms)]
        u = GroupoidFunctor(src.base, P, om, mm)
        pulled = pull_system(u, self.obj.system)
        data = self.pullback_data.data
        comps = [
            data[u.obj_map[o]].universal(m1.phi.components[o], m2.phi.components[o])
            for o in range(src.base.n_objects)
        ]
        return LocMorphism(src, self.obj, u, SystemMap(src.system, pulled, comps))


def loc_pullback(m1: LocMorphism, m2: LocMorphism) -> LocPullback:
    """Pullback of A -> C <- B: groupoid pullback P, and the fiber pullback of the pulled-back systems."""
    if m1.target != m2.target:
        raise ObjectMismatch("cospan legs have different targets")
    P, q1, q2 = groupoid_pullback(m1.f, m2.f)
    a1 = pull_map(q1, m1.phi)  # q1^* A -> q1^* f1^* C
    a2 = pull_map(q2, m2.phi)
    if a1.target != a2.target:
        raise ObjectMismatch("pulled-back cospan does not share its target")
    pb = system_pullback(a1, a2)
    obj = LocObject(P, pb.system)
    p1 = LocMorphism(obj, m1.source, q1, pb.pr1)
    p2 = LocMorphism(obj, m2.source, q2, pb.pr2)
    return LocPullback(obj, p1, p2, pb, q1, q2)


# ---------------------------------------------------------------- homotopy quotient square


@dataclass
class QuotientSquare:
    top_left: LocObject
    top_right: LocObject
    bottom_left: LocObject
    bottom_right: LocObject
    top: LocMorphism
    left: LocMorphism
    right: LocMorphism
    bottom: LocMorphism


def homotopy_quotient_square(v: LocalSystem) -> QuotientSquare:
    """pt^* V -> V over BG, down to 0 over pt -> 0 over BG."""
    BG = v.base
    fld = v.field
    pt = point()
    inc = GroupoidFunctor(pt, BG, [0], [BG.identity[0]])
    tl = LocObject(pt, pull_system(inc, v))
    tr = LocObject(BG, v)
    bl = LocObject(pt, zero_system(pt, fld))
    br = LocObject(BG, zero_system(BG, fld))
    top = LocMorphism(tl, tr, inc, identity_system_map(tl.system))
    to_zero = lambda s, z: SystemMap(s, z, [ChainMap(c, zero_complex(fld)) for c in s.at])
    left = LocMorphism(tl, bl, identity_functor(pt), to_zero(tl.system, bl.system))
    right = LocMorphism(tr, br, identity_functor(BG), to_zero(v, br.system))
    bottom = LocMorphism(bl, br, inc, identity_system_map(bl.system))
    return QuotientSquare(tl, tr, bl, br, top, left, right, bottom)


def square_is_pullback(sq: QuotientSquare) -> bool:
    """Compare the top-left corner with loc_pullback(right, bottom) via the universal map."""
    pb = loc_pullback(sq.right, sq.bottom)
    u = pb.universal(sq.top, sq.left)
    return is_iso_loc(u)


def tensor_square(sq: QuotientSquare, w: LocObject) -> QuotientSquare:
    """The square with every corner and edge tensored externally with w."""
    ident = identity_loc(w)
    t = lambda o: external_tensor(o, w)
    tm = lambda m: external_tensor_map(m, ident)
    return QuotientSquare(
        t(sq.top_left), t(sq.top_right), t(sq.bottom_left), t(sq.bottom_right),
        tm(sq.top), tm(sq.left), tm(sq.right), tm(sq.bottom),
    )


# ---------------------------------------------------------------- enumeration


def budget_from_env() -> int:
    raw = os.environ.get("LOCSYS_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def hom_count(a: LocObject, b: LocObject) -> int:
    if a.field.is_rational:
        raise RationalFieldUnsupported("enumeration needs a finite field")
    p = a.field.p
    return sum(p ** len(natural_map_space(a.system, pull_system(f, b.system))) for f in enumerate_functors(a.base, b.base))


def hom_enumerate(a: LocObject, b: LocObject, budget: Optional[int] = None) -> List[LocMorphism]:
    """Every morphism a -> b: base functors in order, then coefficient vectors over the solution basis."""
    if a.field.is_rational or b.field.is_rational:
        raise RationalFieldUnsupported("enumeration needs a finite field")
    if budget is None:
        budget = budget_from_env()
    p = a.field.p
    plans = []
    needed = 0
    for f in enumerate_functors(a.base, b.base):
        tgt = pull_system(f, b.system)
        basis = natural_map_space(a.system, tgt)
        plans.append((f, tgt, basis))
        needed += p ** len(basis)
        if needed > budget:
            raise BudgetExceeded(needed, budget)
    out = []
    for f, tgt, basis in plans:
        zero = SystemMap(a.system, tgt, [ChainMap(s, t) for s, t in zip(a.system.at, tgt.at)])
        for coeffs in itertools.product(range(p), repeat=len(basis)):
            m = zero
            for c, bvec in zip(coeffs, basis):
                if c:
                    m = m + _scale_system_map(bvec, c)
            out.append(LocMorphism(a, b, f, m))
    return out


def _scale_system_map(m: SystemMap, c: int) -> SystemMap:
    comps = [ChainMap(x.source, x.target, {n: blk.scale(c) for n, blk in x.components.items()}) for x in m.components]
    return SystemMap(m.source, m.target, comps)


def external_push_comparison(f: GroupoidFunctor, g: GroupoidFunctor, v: LocalSystem, w: LocalSystem) -> SystemMap:
    """(f x g)_!(v (x) w) -> f_! v (x) g_! w, the transpose of unit_v (x) unit_w."""
    kf, kg = push_left(f, v), push_left(g, w)
    src = external_tensor(LocObject(f.source, v), LocObject(g.source, w))
    tgt = external_tensor(LocObject(f.target, kf.system), LocObject(g.target, kg.system))
    fg = product_functor([f, g])
    u = external_tensor_system_map(kf.unit, kg.unit)
    pulled = pull_system(fg, tgt.system)
    if u.target != pulled:
        raise ShapeMismatch("external tensor does not commute with pullback strictly")
    return push_left(fg, src.system).transpose(SystemMap(src.system, pulled, u.components), tgt.system)


def external_tensor_adjunct_defect(m: LocMorphism, n: LocMorphism) -> SystemMap:
    """adjunct(m (x) n) minus (adjunct m (x) adjunct n) o comparison; zero when coherent."""
    lhs = adjunct(external_tensor_map(m, n))
    rhs = external_tensor_system_map(adjunct(m), adjunct(n)) @ external_push_comparison(m.f, n.f, m.source.system, n.source.system)
    return lhs - rhs


# ---------------------------------------------------------------- coproduct comparisons


def coproduct_universal(cp: LocCoproduct, maps: Sequence[LocMorphism]) -> LocMorphism:
    """The map out of a coproduct induced by one morphism per summand."""
    if len(maps) != len(cp.injections):
        raise ShapeMismatch("one morphism per summand expected")
    target = maps[0].target if maps else None
    om, mm, comps = [], [], []
    for inj, m in zip(cp.injections, maps):
        if m.source != inj.source or m.target != target:
            raise ObjectMismatch("cocone legs do not match the coproduct")
        om.extend(m.f.obj_map)
        mm.extend(m.f.mor_map)
        comps.extend(m.phi.components)
    if target is None:
        raise ShapeMismatch("empty cocone needs an explicit target")
    f = GroupoidFunctor(cp.obj.base, target.base, om, mm)
    return LocMorphism(cp.obj, target, f, SystemMap(cp.obj.system, pull_system(f, target.system), comps))


def tensor_coproduct_comparison(objs: Sequence[LocObject], w: LocObject, left: bool = True) -> LocMorphism:
    """The canonical map from the coproduct of the a_i (x) w to (coproduct a_i) (x) w.

    With left=False the coproduct sits in the second factor instead.
    """
    cp = loc_coproduct(objs)
    ident = identity_loc(w)
    if left:
        pieces = [external_tensor(a, w) for a in objs]
        legs = [external_tensor_map(inj, ident) for inj in cp.injections]
    else:
        pieces = [external_tensor(w, a) for a in objs]
        legs = [external_tensor_map(ident, inj) for inj in cp.injections]
    return coproduct_universal(loc_coproduct(pieces), legs)


def component_decomposition(a: LocObject) -> LocMorphism:
    """The map from the coproduct of the restrictions to the components of a back to a."""
    from .groupoid import pi0

    parts, legs = [], []
    for comp in pi0(a.base):
        r, incl = restrict_to_component_union(a, comp)
        parts.append(r)
        legs.append(LocMorphism(r, a, incl, identity_system_map(r.system)))
    return coproduct_universal(loc_coproduct(parts, a.field), legs)
