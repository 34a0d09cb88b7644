"""Truncated simplicial objects in chain complexes and their normalized total complex."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable, Dict, Hashable, List, Mapping, Sequence, Tuple

from .chain import (
    ChainComplex,
    ChainMap,
    KernelData,
    chain_kernel,
    direct_sum_many,
    identity_map,
    is_chain_map,
    is_quasi_iso,
    map_into_sum,
    tensor,
    tensor_map,
    zero_complex,
)
from .errors import ShapeMismatch, SimplicialIdentityViolation
from .linalg import Field, Matrix


@dataclass(frozen=True)
class TruncSimplicialComplex:
    """Levels V_0..V_D with faces[(n, i)]: V_n -> V_{n-1} and degens[(n, i)]: V_n -> V_{n+1}."""

    field: Field
    D: int
    levels: Tuple[ChainComplex, ...]
    faces: Mapping[Tuple[int, int], ChainMap]
    degens: Mapping[Tuple[int, int], ChainMap]

    def __post_init__(self):
        if len(self.levels) != self.D + 1:
            raise ShapeMismatch(f"expected {self.D + 1} levels, got {len(self.levels)}")
        for n in range(1, self.D + 1):
            for i in range(n + 1):
                f = self.faces.get((n, i))
                if f is None or f.source != self.levels[n] or f.target != self.levels[n - 1]:
                    raise ShapeMismatch(f"face d_{i} at level {n} missing or misshapen")
        for n in range(self.D):
            for i in range(n + 1):
                s = self.degens.get((n, i))
                if s is None or s.source != self.levels[n] or s.target != self.levels[n + 1]:
                    raise ShapeMismatch(f"degeneracy s_{i} at level {n} missing or misshapen")

    def d(self, n: int, i: int) -> ChainMap:
        return self.faces[(n, i)]

    def s(self, n: int, i: int) -> ChainMap:
        return self.degens[(n, i)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncSimplicialComplex)
            and self.field == other.field
            and self.D == other.D
            and self.levels == other.levels
            and dict(self.faces) == dict(other.faces)
            and dict(self.degens) == dict(other.degens)
        )

    def __hash__(self):
        return hash((self.D, self.levels))


@dataclass(frozen=True)
class TruncSimplicialMap:
    source: TruncSimplicialComplex
    target: TruncSimplicialComplex
    levels: Tuple[ChainMap, ...]

    def __post_init__(self):
        if self.source.D != self.target.D or len(self.levels) != self.source.D + 1:
            raise ShapeMismatch("simplicial map levels do not match")
        for n, m in enumerate(self.levels):
            if m.source != self.source.levels[n] or m.target != self.target.levels[n]:
                raise ShapeMismatch(f"level {n} has the wrong endpoints")

    def __matmul__(self, other: "TruncSimplicialMap") -> "TruncSimplicialMap":
        return TruncSimplicialMap(other.source, self.target, tuple(a @ b for a, b in zip(self.levels, other.levels)))


def validate_simplicial(v: TruncSimplicialComplex) -> None:
    """Check every simplicial identity among the stored levels."""
    D = v.D
    for (n, i), m in list(v.faces.items()) + list(v.degens.items()):
        if not is_chain_map(m):
            raise SimplicialIdentityViolation(i, i, n, "chain map")
    for n in range(2, D + 1):
        for j in range(n + 1):
            for i in range(j):
                if v.d(n - 1, i) @ v.d(n, j) != v.d(n - 1, j - 1) @ v.d(n, i):
                    raise SimplicialIdentityViolation(i, j, n, "d_i d_j = d_{j-1} d_i")
    for n in range(D):
        ident = identity_map(v.levels[n])
        for j in range(n + 1):
            sj = v.s(n, j)
            for i in range(n + 2):
                lhs = v.d(n + 1, i) @ sj
                if i < j:
                    rhs = v.s(n - 1, j - 1) @ v.d(n, i)
                    rule = "d_i s_j = s_{j-1} d_i"
                elif i in (j, j + 1):
                    rhs = ident
                    rule = "d_j s_j = d_{j+1} s_j = id"
                else:
                    rhs = v.s(n - 1, j) @ v.d(n, i - 1)
                    rule = "d_i s_j = s_j d_{i-1}"
                if lhs != rhs:
                    raise SimplicialIdentityViolation(i, j, n, rule)
    for n in range(D - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                if v.s(n + 1, i) @ v.s(n, j) != v.s(n + 1, j + 1) @ v.s(n, i):
                    raise SimplicialIdentityViolation(i, j, n, "s_i s_j = s_{j+1} s_i")


def validate_simplicial_map(phi: TruncSimplicialMap) -> None:
    src, tgt = phi.source, phi.target
    for (n, i), f in src.faces.items():
        if tgt.d(n, i) @ phi.levels[n] != phi.levels[n - 1] @ f:
            raise SimplicialIdentityViolation(i, i, n, "map commutes with d_i")
    for (n, i), s in src.degens.items():
        if tgt.s(n, i) @ phi.levels[n] != phi.levels[n + 1] @ s:
            raise SimplicialIdentityViolation(i, i, n, "map commutes with s_i")


def const(c: ChainComplex, D: int) -> TruncSimplicialComplex:
    ident = identity_map(c)
    faces = {(n, i): ident for n in range(1, D + 1) for i in range(n + 1)}
    degens = {(n, i): ident for n in range(D) for i in range(n + 1)}
    return TruncSimplicialComplex(c.field, D, tuple([c] * (D + 1)), faces, degens)


def const_map(phi: ChainMap, D: int) -> TruncSimplicialMap:
    return TruncSimplicialMap(const(phi.source, D), const(phi.target, D), tuple([phi] * (D + 1)))


def ev0(v: TruncSimplicialComplex) -> ChainComplex:
    return v.levels[0]


def identity_simplicial_map(v: TruncSimplicialComplex) -> TruncSimplicialMap:
    return TruncSimplicialMap(v, v, tuple(identity_map(c) for c in v.levels))


def level_tensor(v: TruncSimplicialComplex, w: TruncSimplicialComplex) -> TruncSimplicialComplex:
    if v.D != w.D:
        raise ShapeMismatch("skeletal degrees differ")
    levels = tuple(tensor(a, b) for a, b in zip(v.levels, w.levels))
    faces = {k: tensor_map(v.faces[k], w.faces[k]) for k in v.faces}
    degens = {k: tensor_map(v.degens[k], w.degens[k]) for k in v.degens}
    return TruncSimplicialComplex(v.field, v.D, levels, faces, degens)


def level_tensor_map(phi: TruncSimplicialMap, gamma: TruncSimplicialMap) -> TruncSimplicialMap:
    return TruncSimplicialMap(
        level_tensor(phi.source, gamma.source),
        level_tensor(phi.target, gamma.target),
        tuple(tensor_map(a, b) for a, b in zip(phi.levels, gamma.levels)),
    )


# ---------------------------------------------------------------- normalization and tot


def normalized_levels(v: TruncSimplicialComplex) -> List[KernelData]:
    """N_n = intersection of ker d_i for i < n, as kernels inside V_n."""
    out = []
    for n, c in enumerate(v.levels):
        if n == 0:
            out.append(chain_kernel(ChainMap(c, zero_complex(v.field))))
            continue
        targets = [v.levels[n - 1]] * n
        total = direct_sum_many(targets, v.field)
        stacked = map_into_sum([v.d(n, i) for i in range(n)], total)
        out.append(chain_kernel(stacked))
    return out


@dataclass
class TotData:
    complex: ChainComplex
    normalized: List[KernelData]
    layout: Dict[int, List[Tuple[int, int, int]]]  # degree k -> [(s, t, offset)]


def _tot_data(v: TruncSimplicialComplex) -> TotData:
    fld = v.field
    norm = normalized_levels(v)
    # simplicial differential (-1)^s d_s restricted to normalized pieces
    delta: Dict[int, ChainMap] = {}
    for s in range(1, v.D + 1):
        ns, nt = norm[s], norm[s - 1]
        mats = {t: v.d(s, s).comp(t) @ ns.inclusion.comp(t) for t in ns.complex.dims}
        m = nt.lift(mats, ns.complex)
        delta[s] = m if s % 2 == 0 else -m
    degrees = sorted({s + t for s in range(v.D + 1) for t in norm[s].complex.dims})
    dims: Dict[int, int] = {}
    layout: Dict[int, List[Tuple[int, int, int]]] = {}
    for k in degrees:
        off = 0
        lay = []
        for s in range(v.D + 1):
            dim = norm[s].complex.dim(k - s)
            if dim:
                lay.append((s, k - s, off))
                off += dim
        layout[k] = lay
        dims[k] = off
    diffs = {}
    for k in degrees:
        if not dims.get(k - 1):
            continue
        rows = [[fld.zero] * dims[k] for _ in range(dims[k - 1])]
        tgt = {(s, t): o for s, t, o in layout[k - 1]}
        for s, t, o in layout[k]:
            nc = norm[s].complex
            if (s, t - 1) in tgt:
                _paste(rows, nc.d(t), tgt[(s, t - 1)], o)
            if s >= 1 and (s - 1, t) in tgt:
                blk = delta[s].comp(t)
                _paste(rows, blk if t % 2 == 0 else blk.scale(-1), tgt[(s - 1, t)], o)
        diffs[k] = Matrix._raw(fld, rows, dims[k])
    return TotData(ChainComplex(fld, dims, diffs), norm, layout)


def _paste(rows: list, blk: Matrix, ro: int, co: int) -> None:
    for i, r in enumerate(blk.data):
        for j, x in enumerate(r):
            if x:
                rows[ro + i][co + j] = x


def tot(v: TruncSimplicialComplex) -> ChainComplex:
    """Normalized total complex: Tot_k is the sum of N_{s,t} over s + t = k."""
    return _tot_data(v).complex


def tot_map(phi: TruncSimplicialMap) -> ChainMap:
    a, b = _tot_data(phi.source), _tot_data(phi.target)
    fld = phi.source.field
    # restrict each level map to the normalized pieces
    pieces = {}
    for s in range(phi.source.D + 1):
        ns, nt = a.normalized[s], b.normalized[s]
        mats = {t: phi.levels[s].comp(t) @ ns.inclusion.comp(t) for t in ns.complex.dims}
        pieces[s] = nt.lift(mats, ns.complex)
    comps = {}
    for k, lay in a.layout.items():
        if not b.complex.dim(k):
            continue
        rows = [[fld.zero] * a.complex.dim(k) for _ in range(b.complex.dim(k))]
        tgt = {(s, t): o for s, t, o in b.layout[k]}
        for s, t, o in lay:
            if (s, t) in tgt:
                _paste(rows, pieces[s].comp(t), tgt[(s, t)], o)
        comps[k] = Matrix._raw(fld, rows, a.complex.dim(k))
    return ChainMap(a.complex, b.complex, comps)


def is_total_we(phi: TruncSimplicialMap) -> bool:
    return is_quasi_iso(tot_map(phi))


def is_homotopically_constant(v: TruncSimplicialComplex) -> bool:
    maps = list(v.faces.values()) + list(v.degens.values())
    return all(is_quasi_iso(m) for m in maps)


# ---------------------------------------------------------------- linearized simplicial sets


def linearize(
    simplices: Sequence[Sequence[Hashable]],
    face: Callable[[int, int, Hashable], Hashable],
    degen: Callable[[int, int, Hashable], Hashable],
    c: ChainComplex,
) -> TruncSimplicialComplex:
    """K[S] (x) c for a truncated simplicial set S given level by level."""
    fld = c.field
    D = len(simplices) - 1
    levels = tuple(direct_sum_many([c] * len(simplices[n]), fld) for n in range(D + 1))

    def perm_map(n_src: int, n_tgt: int, fn) -> ChainMap:
        index = {x: k for k, x in enumerate(simplices[n_tgt])}
        src, tgt = levels[n_src], levels[n_tgt]
        comps = {}
        for t in c.dims:
            dim = c.dim(t)
            rows = [[fld.zero] * src.dim(t) for _ in range(tgt.dim(t))]
            for k, x in enumerate(simplices[n_src]):
                kk = index[fn(x)]
                for u in range(dim):
                    rows[kk * dim + u][k * dim + u] = fld.one
            comps[t] = Matrix._raw(fld, rows, src.dim(t))
        return ChainMap(src, tgt, comps)

    faces = {(n, i): perm_map(n, n - 1, lambda x, n=n, i=i: face(n, i, x)) for n in range(1, D + 1) for i in range(n + 1)}
    degens = {(n, i): perm_map(n, n + 1, lambda x, n=n, i=i: degen(n, i, x)) for n in range(D) for i in range(n + 1)}
    return TruncSimplicialComplex(fld, D, levels, faces, degens)


def standard_simplex_levels(k: int, D: int, boundary: bool = False) -> List[List[Tuple[int, ...]]]:
    """Simplices of Delta[k] (or its boundary) up to level D, as non-decreasing vertex tuples."""
    out = []
    for n in range(D + 1):
        lvl = [tuple(s) for s in combinations_with_replacement(range(k + 1), n + 1)]
        if boundary:
            lvl = [s for s in lvl if len(set(s)) < k + 1]
        out.append(lvl)
    return out


def _delete(n: int, i: int, x: tuple) -> tuple:
    return x[:i] + x[i + 1:]


def _repeat(n: int, i: int, x: tuple) -> tuple:
    return x[: i + 1] + x[i:]


def simplex_object(k: int, D: int, c: ChainComplex, boundary: bool = False) -> TruncSimplicialComplex:
    """K[Delta[k]] (x) c, or K[boundary Delta[k]] (x) c, truncated at level D."""
    return linearize(standard_simplex_levels(k, D, boundary), _delete, _repeat, c)


def vertex_inclusion(k: int, vertex: int, D: int, c: ChainComplex) -> TruncSimplicialMap:
    """const(c) -> K[Delta[k]] (x) c picking the constant simplices at one vertex."""
    src = const(c, D)
    tgt = simplex_object(k, D, c)
    fld = c.field
    levels = []
    for n in range(D + 1):
        simplices = standard_simplex_levels(k, D)[n]
        pos = simplices.index(tuple([vertex] * (n + 1)))
        comps = {}
        for t in c.dims:
            dim = c.dim(t)
            rows = [[fld.zero] * dim for _ in range(tgt.levels[n].dim(t))]
            for u in range(dim):
                rows[pos * dim + u][u] = fld.one
            comps[t] = Matrix._raw(fld, rows, dim)
        levels.append(ChainMap(c, tgt.levels[n], comps))
    return TruncSimplicialMap(src, tgt, tuple(levels))
