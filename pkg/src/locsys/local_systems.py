"""Local systems of chain complexes over finite groupoids.

A local system assigns a complex to every object and a chain isomorphism to
every morphism.  Left and right Kan extensions along a functor are computed
as coends and ends: an explicit presentation followed by a cokernel (resp.
kernel), with transition maps obtained by relabelling presentation blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .chain import (
    BlockSum,
    ChainComplex,
    ChainMap,
    CokernelData,
    KernelData,
    block_map,
    chain_cokernel,
    chain_kernel,
    chain_pullback,
    chain_pushout,
    classify_chain_map,
    conjugate_hom,
    curry,
    direct_sum_many,
    direct_sum_map_many,
    hom_complex,
    identity_map,
    is_chain_map,
    is_degreewise_injective,
    is_iso,
    sphere,
    tensor,
    tensor_map,
    uncurry,
    zero_complex,
)
from .errors import (
    BaseMismatch,
    FieldMismatch,
    FunctorialityViolation,
    NaturalityViolation,
    ShapeMismatch,
)
from .groupoid import FinGroupoid, GroupoidFunctor, aut, delooping, pi0
from .linalg import Field, Matrix, hstack, kernel_basis, kron, vstack


class LocalSystem:
    """A functor from a finite groupoid to chain complexes.

    ``at[x]`` is the complex at object index x and ``along[m]`` the chain map
    for morphism index m.
    """

    def __init__(self, base: FinGroupoid, at: Sequence[ChainComplex], along: Sequence[ChainMap], field: Optional[Field] = None):
        if len(at) != base.n_objects or len(along) != base.n_morphisms:
            raise ShapeMismatch("system size does not match its base")
        if field is None:
            if not at:
                raise ShapeMismatch("field required for a system over the empty groupoid")
            field = at[0].field
        self.base = base
        self.field = field
        self.at: Tuple[ChainComplex, ...] = tuple(at)
        self.along: Tuple[ChainMap, ...] = tuple(along)
        for c in self.at:
            if c.field != field:
                raise FieldMismatch("system complexes over different fields")
        for m, a in enumerate(self.along):
            if a.source != self.at[base.src[m]] or a.target != self.at[base.tgt[m]]:
                raise ShapeMismatch(f"along({base.mor_labels[m]}) has the wrong endpoints")

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, LocalSystem)
            and self.field == other.field
            and self.base == other.base
            and self.at == other.at
            and self.along == other.along
        )

    def __hash__(self):
        return hash((self.base, self.at))

    def __repr__(self) -> str:
        return f"LocalSystem(over {self.base!r}, dims {[c.dims for c in self.at]})"


class SystemMap:
    """A natural map between two systems over the same base."""

    def __init__(self, source: LocalSystem, target: LocalSystem, components: Sequence[ChainMap]):
        if source.base != target.base:
            raise BaseMismatch("system map between different bases")
        if len(components) != source.base.n_objects:
            raise ShapeMismatch("one component per object required")
        for x, c in enumerate(components):
            if c.source != source.at[x] or c.target != target.at[x]:
                raise ShapeMismatch(f"component at {source.base.objects[x]} has the wrong endpoints")
        self.source = source
        self.target = target
        self.components: Tuple[ChainMap, ...] = tuple(components)

    @property
    def base(self) -> FinGroupoid:
        return self.source.base

    def __matmul__(self, other: "SystemMap") -> "SystemMap":
        return compose_system_maps(self, other)

    def __add__(self, other: "SystemMap") -> "SystemMap":
        return SystemMap(self.source, self.target, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "SystemMap") -> "SystemMap":
        return SystemMap(self.source, self.target, [a - b for a, b in zip(self.components, other.components)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SystemMap)
            and self.source == other.source
            and self.target == other.target
            and self.components == other.components
        )

    def __hash__(self):
        return hash(self.components)

    def __repr__(self) -> str:
        return f"SystemMap({len(self.components)} components)"


# ---------------------------------------------------------------- validation


def validate_system(v: LocalSystem) -> None:
    x = v.base
    for m, a in enumerate(v.along):
        if not is_chain_map(a):
            raise FunctorialityViolation(x.mor_labels[m])
    for o, e in enumerate(x.identity):
        if v.along[e] != identity_map(v.at[o]):
            raise FunctorialityViolation(x.mor_labels[e])
    for (g, f), h in x.comp.items():
        if v.along[h] != v.along[g] @ v.along[f]:
            raise FunctorialityViolation(x.mor_labels[h])


def validate_system_map(phi: SystemMap) -> None:
    x = phi.base
    for o, c in enumerate(phi.components):
        if not is_chain_map(c):
            raise NaturalityViolation(x.objects[o])
    for m in range(x.n_morphisms):
        a, b = x.src[m], x.tgt[m]
        if phi.target.along[m] @ phi.components[a] != phi.components[b] @ phi.source.along[m]:
            raise NaturalityViolation(x.mor_labels[m])


def is_natural(phi: SystemMap) -> bool:
    try:
        validate_system_map(phi)
    except NaturalityViolation:
        return False
    return True


# ---------------------------------------------------------------- basic systems


def constant_system(base: FinGroupoid, c: ChainComplex) -> LocalSystem:
    ident = identity_map(c)
    return LocalSystem(base, [c] * base.n_objects, [ident] * base.n_morphisms, c.field)


def unit_system(base: FinGroupoid, field: Field) -> LocalSystem:
    return constant_system(base, sphere(0, field))


def zero_system(base: FinGroupoid, field: Field) -> LocalSystem:
    return constant_system(base, zero_complex(field))


def identity_system_map(v: LocalSystem) -> SystemMap:
    return SystemMap(v, v, [identity_map(c) for c in v.at])


def zero_system_map(v: LocalSystem, w: LocalSystem) -> SystemMap:
    return SystemMap(v, w, [ChainMap(a, b) for a, b in zip(v.at, w.at)])


def compose_system_maps(g: SystemMap, f: SystemMap) -> SystemMap:
    if f.target != g.source:
        raise ShapeMismatch("system maps are not composable")
    return SystemMap(f.source, g.target, [a @ b for a, b in zip(g.components, f.components)])


def is_iso_system_map(phi: SystemMap) -> bool:
    return all(is_iso(c) for c in phi.components)


def representation_system(base: FinGroupoid, c: ChainComplex, action: Sequence[ChainMap]) -> LocalSystem:
    """System over a one-object base from a chain-level action, one map per morphism."""
    return LocalSystem(base, [c], action, c.field)


def regular_representation(table: Sequence[Sequence[int]], field: Field, degree: int = 0) -> LocalSystem:
    """K[G] in one degree over BG, with g acting by left multiplication on the basis."""
    bg = delooping(table)
    n = len(table)
    c = ChainComplex(field, {degree: n})
    action = []
    for g in range(n):
        rows = [[field.zero] * n for _ in range(n)]
        for h in range(n):
            rows[table[g][h]][h] = field.one
        action.append(ChainMap(c, c, {degree: Matrix._raw(field, rows, n)}))
    return LocalSystem(bg, [c], action, field)


def direct_sum_systems(vs: Sequence[LocalSystem], base: FinGroupoid, field: Field) -> LocalSystem:
    at = [direct_sum_many([v.at[x] for v in vs], field) for x in range(base.n_objects)]
    along = [
        direct_sum_map_many([v.along[m] for v in vs], at[base.src[m]], at[base.tgt[m]])
        for m in range(base.n_morphisms)
    ]
    return LocalSystem(base, at, along, field)


# ---------------------------------------------------------------- pullback along a functor


def pull_system(f: GroupoidFunctor, w: LocalSystem) -> LocalSystem:
    """f^* w = w o f."""
    if f.target != w.base:
        raise BaseMismatch("functor target is not the system's base")
    return LocalSystem(f.source, [w.at[y] for y in f.obj_map], [w.along[m] for m in f.mor_map], w.field)


def pull_map(f: GroupoidFunctor, phi: SystemMap) -> SystemMap:
    return SystemMap(pull_system(f, phi.source), pull_system(f, phi.target), [phi.components[y] for y in f.obj_map])


# ---------------------------------------------------------------- tensor and hom


def _same_base(v: LocalSystem, w: LocalSystem) -> None:
    if v.base != w.base:
        raise BaseMismatch("systems live over different bases")
    if v.field != w.field:
        raise FieldMismatch("systems over different fields")


def cup_tensor(v: LocalSystem, w: LocalSystem) -> LocalSystem:
    _same_base(v, w)
    at = [tensor(a, b) for a, b in zip(v.at, w.at)]
    along = [tensor_map(a, b) for a, b in zip(v.along, w.along)]
    return LocalSystem(v.base, at, along, v.field)


def cup_tensor_map(phi: SystemMap, gamma: SystemMap) -> SystemMap:
    return SystemMap(
        cup_tensor(phi.source, gamma.source),
        cup_tensor(phi.target, gamma.target),
        [tensor_map(a, b) for a, b in zip(phi.components, gamma.components)],
    )


def internal_hom(v: LocalSystem, w: LocalSystem) -> LocalSystem:
    """Objectwise mapping complexes; along(m) sends f to w(m) o f o v(m)^-1."""
    _same_base(v, w)
    x = v.base
    at = [hom_complex(a, b) for a, b in zip(v.at, w.at)]
    along = [conjugate_hom(v.along[x.inverse[m]], w.along[m]) for m in range(x.n_morphisms)]
    return LocalSystem(x, at, along, v.field)


def internal_hom_end(v: LocalSystem, w: LocalSystem) -> Tuple[LocalSystem, SystemMap]:
    """The internal hom as an end, with its comparison map to :func:`internal_hom`.

    At x the end consists of families F[x', a] in [v_x', w_x'] indexed by
    a: x -> x', subject to w(g) F[x', a] = F[x'', g a] v(g) for every
    generator g: x' -> x''.  The comparison evaluates a family at a = id_x.
    """
    _same_base(v, w)
    X = v.base
    fld = v.field
    homs = [hom_complex(a, b) for a, b in zip(v.at, w.at)]
    pres: List[BlockSum] = []
    kers: List[KernelData] = []
    for x in range(X.n_objects):
        p = BlockSum(fld, [((X.tgt[a], a), homs[X.tgt[a]]) for a in X.outgoing[x]])
        eq_items, entries = [], []
        for g in X.generators:
            s, t = X.src[g], X.tgt[g]
            target_c = hom_complex(v.at[s], w.at[t])
            post = conjugate_hom(identity_map(v.at[s]), w.along[g])
            pre = conjugate_hom(v.along[g], identity_map(w.at[t]))
            for a in X.hom(x, s):
                key = (g, a)
                eq_items.append((key, target_c))
                entries.append((key, (s, a), post))
                entries.append((key, (t, X.comp[(g, a)]), -pre))
        eqs = BlockSum(fld, eq_items)
        kers.append(chain_kernel(block_map(p, eqs, entries)))
        pres.append(p)
    conj = internal_hom(v, w)
    at = [k.complex for k in kers]
    along = []
    for b in range(X.n_morphisms):
        x, y = X.src[b], X.tgt[b]
        comps = {}
        for n in at[x].dims:
            if not at[y].dim(n):
                continue
            incl = kers[x].inclusion.comp(n)
            rows = []
            for r in kers[y].free[n]:
                (t, a2), inner = pres[y].locate(n, r)
                rows.append(incl.data[pres[x].index(n, (t, X.comp[(a2, b)]), inner)])
            comps[n] = Matrix._raw(fld, rows, at[x].dim(n))
        along.append(ChainMap(at[x], at[y], comps))
    end = LocalSystem(X, at, along, fld)
    cmp = []
    for x in range(X.n_objects):
        e = X.identity[x]
        comps = {}
        for n in at[x].dims:
            if conj.at[x].dim(n):
                rows = pres[x].rows_of(n, (x, e))
                comps[n] = kers[x].inclusion.comp(n).submatrix(rows, range(at[x].dim(n)))
        cmp.append(ChainMap(at[x], conj.at[x], comps))
    return end, SystemMap(end, conj, cmp)


def tensor_hom_transpose(phi: SystemMap, t: LocalSystem, v: LocalSystem) -> SystemMap:
    """Curry phi: t (x) v -> w into t -> [v, w], objectwise."""
    if phi.source != cup_tensor(t, v):
        raise ShapeMismatch("source is not t (x) v")
    w = phi.target
    return SystemMap(t, internal_hom(v, w), [curry(c, t.at[x], v.at[x]) for x, c in enumerate(phi.components)])


def tensor_hom_untranspose(psi: SystemMap, v: LocalSystem, w: LocalSystem) -> SystemMap:
    """Inverse of :func:`tensor_hom_transpose`."""
    if psi.target != internal_hom(v, w):
        raise ShapeMismatch("target is not [v, w]")
    t = psi.source
    return SystemMap(cup_tensor(t, v), w, [uncurry(c, v.at[x], w.at[x]) for x, c in enumerate(psi.components)])


def evaluation_system(v: LocalSystem, w: LocalSystem) -> SystemMap:
    """[v, w] (x) v -> w."""
    h = internal_hom(v, w)
    return tensor_hom_untranspose(identity_system_map(h), v, w)


# ---------------------------------------------------------------- Kan extensions


@dataclass
class LeftKan:
    """f_! v as a coend, with the data needed for unit, counit and transposes."""

    f: GroupoidFunctor
    source: LocalSystem
    system: LocalSystem
    unit: SystemMap
    pres: List[BlockSum] = dc_field(repr=False)
    quot: List[CokernelData] = dc_field(repr=False)

    def transpose(self, phi: SystemMap, w: LocalSystem) -> SystemMap:
        """phi: v -> f^* w  gives  f_! v -> w, [(a, u)] |-> w(a) phi_x(u)."""
        if phi.source != self.source or phi.target != pull_system(self.f, w):
            raise ShapeMismatch("transpose expects a map v -> f^* w")
        Y = self.f.target
        comps = []
        for y in range(Y.n_objects):
            src = self.system.at[y]
            cm = {}
            for n in src.dims:
                if not w.at[y].dim(n):
                    continue
                cols = []
                for c in self.quot[y].chosen[n]:
                    (x, a), inner = self.pres[y].locate(n, c)
                    col = (w.along[a].comp(n) @ phi.components[x].comp(n)).column(inner)
                    cols.append(col)
                cm[n] = Matrix._raw(self.system.field, [list(r) for r in zip(*cols)], len(cols))
            comps.append(ChainMap(src, w.at[y], cm))
        return SystemMap(self.system, w, comps)

    def untranspose(self, psi: SystemMap) -> SystemMap:
        """psi: f_! v -> w  gives  f^* psi o unit: v -> f^* w."""
        return pull_map(self.f, psi) @ self.unit

    def counit(self, w: LocalSystem) -> SystemMap:
        """For this Kan extension of v = f^* w: the map f_! f^* w -> w."""
        return self.transpose(identity_system_map(self.source), w)

    def map(self, phi: SystemMap, other: "LeftKan") -> SystemMap:
        """f_!(phi) for phi: self.source -> other.source."""
        Y = self.f.target
        fld = self.system.field
        comps = []
        for y in range(Y.n_objects):
            src, tgt = self.system.at[y], other.system.at[y]
            cm = {}
            for n in src.dims:
                if not tgt.dim(n):
                    continue
                proj = other.quot[y].projection.comp(n)
                cols = []
                for c in self.quot[y].chosen[n]:
                    (x, a), inner = self.pres[y].locate(n, c)
                    rows = other.pres[y].rows_of(n, (x, a))
                    col = phi.components[x].comp(n).column(inner)
                    cols.append([fld.elem(sum(proj.data[i][r] * v for r, v in zip(rows, col))) for i in range(proj.rows)])
                cm[n] = Matrix.from_columns(fld, cols, tgt.dim(n))
            comps.append(ChainMap(src, tgt, cm))
        return SystemMap(self.system, other.system, comps)


def push_left(f: GroupoidFunctor, v: LocalSystem) -> LeftKan:
    """Left Kan extension f_! v.

    At y the presentation has one block v_x for each pair (x, a) with
    a: f(x) -> y; a generator g: x -> x' of the source identifies
    (a o f(g), u) with (a, v(g) u).
    """
    if f.source != v.base:
        raise BaseMismatch("functor source is not the system's base")
    X, Y = f.source, f.target
    fld = v.field
    pres, quot = [], []
    for y in range(Y.n_objects):
        p = BlockSum(fld, [((x, a), v.at[x]) for x in range(X.n_objects) for a in Y.hom(f.obj_map[x], y)])
        rel_items, entries = [], []
        for g in X.generators:
            s, t = X.src[g], X.tgt[g]
            for a in Y.hom(f.obj_map[t], y):
                key = (g, a)
                rel_items.append((key, v.at[s]))
                entries.append(((s, Y.comp[(a, f.mor_map[g])]), key, identity_map(v.at[s])))
                entries.append(((t, a), key, -v.along[g]))
        r = BlockSum(fld, rel_items)
        quot.append(chain_cokernel(block_map(r, p, entries)))
        pres.append(p)
    at = [q.complex for q in quot]
    along = []
    for b in range(Y.n_morphisms):
        y, y2 = Y.src[b], Y.tgt[b]
        cm = {}
        for n in at[y].dims:
            if not at[y2].dim(n):
                continue
            proj = quot[y2].projection.comp(n)
            idx = []
            for c in quot[y].chosen[n]:
                (x, a), inner = pres[y].locate(n, c)
                idx.append(pres[y2].index(n, (x, Y.comp[(b, a)]), inner))
            cm[n] = proj.submatrix(range(proj.rows), idx)
        along.append(ChainMap(at[y], at[y2], cm))
    out = LocalSystem(Y, at, along, fld)
    unit = []
    pulled = pull_system(f, out)
    for x in range(X.n_objects):
        y = f.obj_map[x]
        cm = {}
        for n in v.at[x].dims:
            if at[y].dim(n):
                rows = pres[y].rows_of(n, (x, Y.identity[y]))
                proj = quot[y].projection.comp(n)
                cm[n] = proj.submatrix(range(proj.rows), rows)
        unit.append(ChainMap(v.at[x], pulled.at[x], cm))
    return LeftKan(f, v, out, SystemMap(v, pulled, unit), pres, quot)


@dataclass
class RightKan:
    """f_* v as an end, with the data needed for unit, counit and transposes."""

    f: GroupoidFunctor
    source: LocalSystem
    system: LocalSystem
    counit: SystemMap
    pres: List[BlockSum] = dc_field(repr=False)
    kers: List[KernelData] = dc_field(repr=False)

    def _coords(self, y: int, n: int, row_fn) -> Matrix:
        """Matrix whose rows are row_fn(x, a, inner) at the free rows of the kernel at y."""
        rows = []
        for r in self.kers[y].free[n]:
            (x, a), inner = self.pres[y].locate(n, r)
            rows.append(row_fn(x, a, inner))
        return rows

    def transpose(self, psi: SystemMap, w: LocalSystem) -> SystemMap:
        """psi: f^* w -> v  gives  w -> f_* v, u |-> (psi_x w(a) u) over a: y -> f(x)."""
        if psi.target != self.source or psi.source != pull_system(self.f, w):
            raise ShapeMismatch("transpose expects a map f^* w -> v")
        Y = self.f.target
        fld = self.system.field
        comps = []
        for y in range(Y.n_objects):
            tgt = self.system.at[y]
            cm = {}
            for n in w.at[y].dims:
                if not tgt.dim(n):
                    continue
                cache = {}

                def row(x, a, inner, n=n, cache=cache):
                    if (x, a) not in cache:
                        cache[(x, a)] = psi.components[x].comp(n) @ w.along[a].comp(n)
                    return list(cache[(x, a)].data[inner])

                cm[n] = Matrix._raw(fld, self._coords(y, n, row), w.at[y].dim(n))
            comps.append(ChainMap(w.at[y], tgt, cm))
        return SystemMap(w, self.system, comps)

    def untranspose(self, chi: SystemMap) -> SystemMap:
        """chi: w -> f_* v  gives  counit o f^* chi: f^* w -> v."""
        return self.counit @ pull_map(self.f, chi)

    def unit(self, w: LocalSystem) -> SystemMap:
        """For this Kan extension of v = f^* w: the map w -> f_* f^* w."""
        return self.transpose(identity_system_map(self.source), w)

    def map(self, phi: SystemMap, other: "RightKan") -> SystemMap:
        """f_*(phi) for phi: self.source -> other.source."""
        Y = self.f.target
        fld = self.system.field
        comps = []
        for y in range(Y.n_objects):
            src, tgt = self.system.at[y], other.system.at[y]
            cm = {}
            for n in src.dims:
                if not tgt.dim(n):
                    continue
                incl = self.kers[y].inclusion.comp(n)

                def row(x, a, inner, n=n, incl=incl, y=y):
                    rows = self.pres[y].rows_of(n, (x, a))
                    coeffs = phi.components[x].comp(n).data[inner]
                    return [
                        fld.elem(sum(c * incl.data[r][j] for c, r in zip(coeffs, rows)))
                        for j in range(incl.cols)
                    ]

                rows_out = []
                for r in other.kers[y].free[n]:
                    (x, a), inner = other.pres[y].locate(n, r)
                    rows_out.append(row(x, a, inner))
                cm[n] = Matrix._raw(fld, rows_out, src.dim(n))
            comps.append(ChainMap(src, tgt, cm))
        return SystemMap(self.system, other.system, comps)


def push_right(f: GroupoidFunctor, v: LocalSystem) -> RightKan:
    """Right Kan extension f_* v.

    At y the presentation has one block v_x for each pair (x, a) with
    a: y -> f(x); a generator g: x -> x' imposes v(g) F[x, a] = F[x', f(g) a].
    """
    if f.source != v.base:
        raise BaseMismatch("functor source is not the system's base")
    X, Y = f.source, f.target
    fld = v.field
    pres, kers = [], []
    for y in range(Y.n_objects):
        p = BlockSum(fld, [((x, a), v.at[x]) for x in range(X.n_objects) for a in Y.hom(y, f.obj_map[x])])
        eq_items, entries = [], []
        for g in X.generators:
            s, t = X.src[g], X.tgt[g]
            for a in Y.hom(y, f.obj_map[s]):
                key = (g, a)
                eq_items.append((key, v.at[t]))
                entries.append((key, (s, a), v.along[g]))
                entries.append((key, (t, Y.comp[(f.mor_map[g], a)]), -identity_map(v.at[t])))
        e = BlockSum(fld, eq_items)
        kers.append(chain_kernel(block_map(p, e, entries)))
        pres.append(p)
    at = [k.complex for k in kers]
    along = []
    for b in range(Y.n_morphisms):
        y, y2 = Y.src[b], Y.tgt[b]
        cm = {}
        for n in at[y].dims:
            if not at[y2].dim(n):
                continue
            incl = kers[y].inclusion.comp(n)
            rows = []
            for r in kers[y2].free[n]:
                (x, a), inner = pres[y2].locate(n, r)
                rows.append(incl.data[pres[y].index(n, (x, Y.comp[(a, b)]), inner)])
            cm[n] = Matrix._raw(fld, rows, at[y].dim(n))
        along.append(ChainMap(at[y], at[y2], cm))
    out = LocalSystem(Y, at, along, fld)
    pulled = pull_system(f, out)
    counit = []
    for x in range(X.n_objects):
        y = f.obj_map[x]
        cm = {}
        for n in v.at[x].dims:
            if at[y].dim(n):
                rows = pres[y].rows_of(n, (x, Y.identity[y]))
                cm[n] = kers[y].inclusion.comp(n).submatrix(rows, range(at[y].dim(n)))
        counit.append(ChainMap(pulled.at[x], v.at[x], cm))
    return RightKan(f, v, out, SystemMap(pulled, v, counit), pres, kers)


def base_change_transpose(f: GroupoidFunctor, phi: SystemMap, w: LocalSystem) -> SystemMap:
    """The f_! -| f^* transpose: phi: v -> f^* w  gives  f_! v -> w."""
    return push_left(f, phi.source).transpose(phi, w)


def base_change_untranspose(f: GroupoidFunctor, psi: SystemMap, v: LocalSystem) -> SystemMap:
    """Inverse of :func:`base_change_transpose`: psi: f_! v -> w  gives  v -> f^* w."""
    kan = push_left(f, v)
    if psi.source != kan.system:
        raise ShapeMismatch("source is not f_! v")
    return kan.untranspose(psi)


# ---------------------------------------------------------------- skeletal transport


def skeletal_transport_iso(p: GroupoidFunctor, iota: GroupoidFunctor, gamma: Sequence[int], v: LocalSystem) -> SystemMap:
    """The isomorphism p^* iota^* v -> v given by v(gamma_x) at each object."""
    src = pull_system(p, pull_system(iota, v))
    return SystemMap(src, v, [v.along[g] for g in gamma])


# ---------------------------------------------------------------- (co)limits of systems


@dataclass
class SystemPushout:
    system: LocalSystem
    inl: SystemMap
    inr: SystemMap
    data: List[object]

    def universal(self, beta: SystemMap, gamma: SystemMap) -> SystemMap:
        return SystemMap(
            self.system,
            beta.target,
            [d.universal(b, g) for d, b, g in zip(self.data, beta.components, gamma.components)],
        )


def system_pushout(alpha: SystemMap, beta: SystemMap) -> SystemPushout:
    """Objectwise pushout of B <- A -> C; along maps are induced on the quotients."""
    X = alpha.base
    data = [chain_pushout(a, b) for a, b in zip(alpha.components, beta.components)]
    at = [d.complex for d in data]
    along = []
    for m in range(X.n_morphisms):
        x, y = X.src[m], X.tgt[m]
        bc = {n: vstack_blocks(alpha.target.along[m].comp(n), beta.target.along[m].comp(n)) for n in data[x].summed.dims}
        along.append(data[x].quotient.induced(data[y].quotient, bc))
    out = LocalSystem(X, at, along, alpha.source.field)
    inl = SystemMap(alpha.target, out, [d.inl for d in data])
    inr = SystemMap(beta.target, out, [d.inr for d in data])
    return SystemPushout(out, inl, inr, data)


def vstack_blocks(a: Matrix, b: Matrix) -> Matrix:
    """Block diagonal of two matrices."""
    from .linalg import block_diag

    return block_diag(a.field, [a, b])


@dataclass
class SystemPullback:
    system: LocalSystem
    pr1: SystemMap
    pr2: SystemMap
    data: List[object]

    def universal(self, beta: SystemMap, gamma: SystemMap) -> SystemMap:
        return SystemMap(
            beta.source,
            self.system,
            [d.universal(b, g) for d, b, g in zip(self.data, beta.components, gamma.components)],
        )


def system_pullback(alpha: SystemMap, beta: SystemMap) -> SystemPullback:
    """Objectwise pullback of B -> D <- C."""
    X = alpha.base
    data = [chain_pullback(a, b) for a, b in zip(alpha.components, beta.components)]
    at = [d.complex for d in data]
    along = []
    for m in range(X.n_morphisms):
        x, y = X.src[m], X.tgt[m]
        incl = data[x].kernel.inclusion
        mats = {n: vstack_blocks(alpha.source.along[m].comp(n), beta.source.along[m].comp(n)) @ incl.comp(n) for n in at[x].dims}
        along.append(data[y].kernel.lift(mats, at[x]))
    out = LocalSystem(X, at, along, alpha.source.field)
    return SystemPullback(out, SystemMap(out, alpha.source, [d.pr1 for d in data]), SystemMap(out, beta.source, [d.pr2 for d in data]), data)


def system_cokernel(phi: SystemMap) -> Tuple[LocalSystem, SystemMap]:
    X = phi.base
    data = [chain_cokernel(c) for c in phi.components]
    along = [
        data[X.src[m]].induced(data[X.tgt[m]], {n: phi.target.along[m].comp(n) for n in data[X.src[m]].complex.dims})
        for m in range(X.n_morphisms)
    ]
    out = LocalSystem(X, [d.complex for d in data], along, phi.source.field)
    return out, SystemMap(phi.target, out, [d.projection for d in data])


# ---------------------------------------------------------------- natural maps


def natural_map_space(v: LocalSystem, w: LocalSystem) -> List[SystemMap]:
    """A basis of the space of natural chain maps v -> w (direct linear solve).

    Unknowns are the entries of every component, row-major per (object, degree);
    equations are the chain-map conditions and naturality along generators.
    """
    _same_base(v, w)
    X = v.base
    fld = v.field
    layout = []  # (x, n, offset, rows, cols)
    off = 0
    for x in range(X.n_objects):
        for n in v.at[x].dims:
            r, c = w.at[x].dim(n), v.at[x].dim(n)
            if r:
                layout.append((x, n, off, r, c))
                off += r * c
    total = off
    pos = {(x, n): (o, r, c) for x, n, o, r, c in layout}
    eqs: List[list] = []

    def add_block_rows(blocks):
        # blocks: list of ((x, n), coefficient matrix acting on vec(phi_{x,n}))
        nrows = blocks[0][1].rows
        rows = [[fld.zero] * total for _ in range(nrows)]
        for key, mat in blocks:
            o = pos[key][0]
            for i, row in enumerate(mat.data):
                for j, val in enumerate(row):
                    if val:
                        rows[i][o + j] = fld.elem(rows[i][o + j] + val)
        eqs.extend(rows)

    for x in range(X.n_objects):
        a, b = v.at[x], w.at[x]
        for n in sorted(set(a.dims) | set(b.dims)):
            # d^w_n phi_n - phi_{n-1} d^v_n = 0
            blocks = []
            if (x, n) in pos and b.dim(n - 1):
                blocks.append(((x, n), kron(b.d(n), Matrix.identity(fld, a.dim(n)))))
            if (x, n - 1) in pos and a.dim(n):
                blocks.append(((x, n - 1), kron(Matrix.identity(fld, b.dim(n - 1)), a.d(n).T).scale(-1)))
            if blocks:
                add_block_rows(blocks)
    for g in X.generators:
        s, t = X.src[g], X.tgt[g]
        for n in v.at[s].dims:
            if not w.at[t].dim(n):
                continue
            blocks = []
            if (s, n) in pos:
                blocks.append(((s, n), kron(w.along[g].comp(n), Matrix.identity(fld, v.at[s].dim(n)))))
            if (t, n) in pos:
                blocks.append(((t, n), kron(Matrix.identity(fld, w.at[t].dim(n)), v.along[g].comp(n).T).scale(-1)))
            add_block_rows(blocks)
    if total == 0:
        return []
    if eqs:
        basis = kernel_basis(Matrix._raw(fld, eqs, total)).columns()
    else:
        basis = [tuple(fld.one if i == j else fld.zero for i in range(total)) for j in range(total)]
    return [_vector_to_system_map(v, w, layout, vec) for vec in basis]


def _vector_to_system_map(v, w, layout, vec) -> SystemMap:
    fld = v.field
    comps: List[Dict[int, Matrix]] = [dict() for _ in range(v.base.n_objects)]
    for x, n, o, r, c in layout:
        comps[x][n] = Matrix._raw(fld, [list(vec[o + i * c: o + (i + 1) * c]) for i in range(r)], c)
    return SystemMap(v, w, [ChainMap(v.at[x], w.at[x], comps[x]) for x in range(v.base.n_objects)])


def natural_map_dimension(v: LocalSystem, w: LocalSystem) -> int:
    return len(natural_map_space(v, w))


# ---------------------------------------------------------------- classification


@dataclass(frozen=True)
class CofAnswer:
    """Tri-state cofibration verdict: "yes" and "no" carry evidence."""

    status: str
    evidence: str = ""

    @property
    def is_yes(self) -> bool:
        return self.status == "yes"


@dataclass(frozen=True)
class SystemFlags:
    we: bool
    fib: bool
    cof: CofAnswer

    def to_dict(self) -> dict:
        return {"cof": self.cof.status, "fib": self.fib, "we": self.we}


def group_orders(x: FinGroupoid) -> List[int]:
    return [len(x.hom(c[0], c[0])) for c in pi0(x)]


def is_semisimple_for(x: FinGroupoid, fld: Field) -> bool:
    return fld.p == 0 or all(order % fld.p for order in group_orders(x))


def is_projective_module(fld: Field, group_elems: Sequence[int], table: Sequence[Sequence[int]], action: Sequence[Matrix]) -> bool:
    """Whether the module given by ``action[i]`` (for the i-th group element) is projective.

    Solves for an equivariant section s of the free cover K[G] (x) M -> M,
    (h, i) |-> h e_i.  Unknown s has |G| d rows and d columns.
    """
    d = action[0].rows if action else 0
    if d == 0:
        return True
    order = len(group_elems)
    nvar = order * d * d
    eqs = []

    def var(h, i, j):
        # entry of s in row (h, i), column j
        return (h * d + i) * d + j

    # sum_h rho(h) s_h = identity
    for r in range(d):
        for j in range(d):
            row = [fld.zero] * nvar
            for h in range(order):
                for i in range(d):
                    c = action[h][r, i]
                    if c:
                        row[var(h, i, j)] = fld.elem(row[var(h, i, j)] + c)
            rhs = fld.one if r == j else fld.zero
            eqs.append(row + [rhs])
    # equivariance s rho(g) = (L_g (x) 1) s, read at block h: s_h = s_{gh} rho(g)
    for g in range(order):
        for h in range(order):
            gh = table[g][h]
            for i in range(d):
                for j in range(d):
                    row = [fld.zero] * nvar
                    row[var(h, i, j)] = fld.one
                    for k in range(d):
                        c = action[g][k, j]
                        if c:
                            row[var(gh, i, k)] = fld.elem(row[var(gh, i, k)] - c)
                    eqs.append(row + [fld.zero])
    from .linalg import solve_right

    a = Matrix._raw(fld, [r[:-1] for r in eqs], nvar)
    b = Matrix._raw(fld, [[r[-1]] for r in eqs], 1)
    return solve_right(a, b) is not None


def classify_system_map(phi: SystemMap) -> SystemFlags:
    X = phi.base
    flags = [classify_chain_map(c) for c in phi.components]
    we = all(f.we for f in flags)
    fib = all(f.fib for f in flags)
    cof: CofAnswer
    bad = [x for x, c in enumerate(phi.components) if not is_degreewise_injective(c)]
    if bad:
        x = bad[0]
        c = phi.components[x]
        deg = next(n for n in c.source.dims if not _injective(c.comp(n)))
        cof = CofAnswer("no", f"component at {X.objects[x]} is not injective in degree {deg}")
    elif is_semisimple_for(X, phi.source.field):
        cof = CofAnswer("yes", "injective and the field is semisimple for every automorphism group")
    elif _cokernel_projective(phi):
        cof = CofAnswer("yes", "injective with cokernel projective over every automorphism group algebra")
    else:
        cof = CofAnswer("unknown", "")
    return SystemFlags(we, fib, cof)


def _injective(m: Matrix) -> bool:
    from .linalg import is_injective

    return is_injective(m)


def _cokernel_projective(phi: SystemMap) -> bool:
    X = phi.base
    coker, _ = system_cokernel(phi)
    for comp in pi0(X):
        b = comp[0]
        els, table = aut(X, b)
        for n in coker.at[b].dims:
            action = [coker.along[m].comp(n) for m in els]
            if not is_projective_module(phi.source.field, els, table, action):
                return False
    return True


# ---------------------------------------------------------------- canonical comparison maps


def projection_formula_map(f: GroupoidFunctor, r: LocalSystem, v: LocalSystem) -> SystemMap:
    """f_!(r (x) f^* v) -> (f_! r) (x) v, the transpose of unit_r (x) id."""
    fr = push_left(f, r)
    fv = pull_system(f, v)
    phi = cup_tensor_map(fr.unit, identity_system_map(fv))
    return push_left(f, cup_tensor(r, fv)).transpose(phi, cup_tensor(fr.system, v))


def strong_monoidal_comparison(f: GroupoidFunctor, v: LocalSystem, w: LocalSystem) -> SystemMap:
    """f^*(v (x) w) -> f^* v (x) f^* w; componentwise the identity."""
    a, b = pull_system(f, cup_tensor(v, w)), cup_tensor(pull_system(f, v), pull_system(f, w))
    return SystemMap(a, b, [identity_map(c) for c in a.at])


def strong_closed_comparison(f: GroupoidFunctor, v: LocalSystem, w: LocalSystem) -> SystemMap:
    """f^*[v, w] -> [f^* v, f^* w]; componentwise the identity."""
    a, b = pull_system(f, internal_hom(v, w)), internal_hom(pull_system(f, v), pull_system(f, w))
    return SystemMap(a, b, [identity_map(c) for c in a.at])


def mate_comparison(f: GroupoidFunctor, g: GroupoidFunctor, u: GroupoidFunctor, k: GroupoidFunctor, v: LocalSystem) -> SystemMap:
    """For a commuting square k o f' = f o u (here f' = g), the map g_! u^* v -> k^* f_! v.

    It is the transpose of u^*(unit_v): u^* v -> u^* f^* f_! v = g^* k^* f_! v.
    """
    fv = push_left(f, v)
    uv = pull_system(u, v)
    target = pull_system(k, fv.system)
    phi = pull_map(u, fv.unit)
    if phi.target != pull_system(g, target):
        raise ShapeMismatch("square does not commute strictly")
    return push_left(g, uv).transpose(phi, target)


def coset_representatives(f: GroupoidFunctor) -> List[int]:
    """Least morphism of each left coset g f(H), for f: BH -> BG injective on morphisms."""
    G = f.target
    image = set(f.mor_map)
    reps, seen = [], set()
    for g in range(G.n_morphisms):
        if g in seen:
            continue
        coset = {G.comp[(g, h)] for h in image}
        reps.append(min(coset))
        seen |= coset
    return reps


@dataclass
class InductionComparison:
    """The section-built isomorphism (G/H) . v -> f_! v and its inverse."""

    forward: ChainMap
    backward: ChainMap


def induction_comparison(f: GroupoidFunctor, v: LocalSystem) -> InductionComparison:
    """For f: BH -> BG injective on morphisms.

    Forward sends (coset i, u) to the class of (sigma_i, u); backward sends
    the class of (g, u) to ([g], h u) with f(h) = sigma[g]^-1 g.
    """
    H, G = f.source, f.target
    reps = coset_representatives(f)
    kan = push_left(f, v)
    fld = v.field
    c = v.at[0]
    k = len(reps)
    summed = direct_sum_many([c] * k, fld)
    target = kan.system.at[0]
    pres = kan.pres[0]
    coset_of = {}
    for i, s in enumerate(reps):
        for h in f.mor_map:
            coset_of[G.comp[(s, h)]] = i
    pre_h = {m: i for i, m in enumerate(f.mor_map)}
    fwd, bwd = {}, {}
    for n in c.dims:
        dim = c.dim(n)
        if target.dim(n):
            proj = kan.quot[0].projection.comp(n)
            cols = []
            for i, s in enumerate(reps):
                rows = pres.rows_of(n, (0, s))
                for u in range(dim):
                    cols.append(proj.column(rows[u]))
            fwd[n] = Matrix.from_columns(fld, cols, target.dim(n))
        # backward on the presentation, then through the chosen section
        blocks = []
        for idx in kan.quot[0].chosen.get(n, ()):
            (_, g), inner = pres.locate(n, idx)
            i = coset_of[g]
            h = pre_h[G.comp[(G.inverse[reps[i]], g)]]
            col = [fld.zero] * (k * dim)
            act = v.along[h].comp(n)
            for r in range(dim):
                col[i * dim + r] = act[r, inner]
            blocks.append(col)
        if blocks:
            bwd[n] = Matrix.from_columns(fld, blocks, k * dim)
    return InductionComparison(ChainMap(summed, target, fwd), ChainMap(target, summed, bwd))
