"""Bounded chain complexes of finite-dimensional vector spaces.

A complex stores only its nonzero degrees; the differential ``d(n)`` maps
degree ``n`` to degree ``n - 1``.  Tensor products use Koszul signs and the
mapping complex uses ``D(f) = d o f - (-1)^k f o d`` on degree ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import FieldMismatch, NotAChainMap, NotAComplex, ShapeError
from .linalg import (
    Field,
    Matrix,
    block_diag,
    cokernel,
    hstack,
    image_basis,
    is_injective,
    is_invertible,
    is_surjective,
    kernel_basis,
    kernel_with_free,
    kron,
    rref,
    selection,
    solve_right,
    vstack,
)


def _as_matrix(field: Field, m, rows: int, cols: int, what: str) -> Matrix:
    if not isinstance(m, Matrix):
        m = Matrix.from_rows(field, m, cols) if len(m) else Matrix.zeros(field, 0, cols)
    if m.field != field:
        raise FieldMismatch(what)
    if m.shape != (rows, cols):
        raise ShapeError(f"{what}: expected {(rows, cols)}, got {m.shape}")
    return m


class ChainComplex:
    """A finitely supported chain complex over an exact field."""

    __slots__ = ("field", "dims", "diffs")

    def __init__(self, field: Field, dims: Mapping[int, int], diffs: Optional[Mapping[int, object]] = None):
        self.field = field
        self.dims: Dict[int, int] = {int(n): int(k) for n, k in sorted(dims.items()) if k}
        if any(k < 0 for k in self.dims.values()):
            raise ShapeError("negative dimension")
        diffs = dict(diffs or {})
        self.diffs: Dict[int, Matrix] = {}
        for n, m in diffs.items():
            rows, cols = self.dim(n - 1), self.dim(n)
            m = _as_matrix(field, m, rows, cols, f"d_{n}")
            if rows and cols:
                self.diffs[n] = m
        for n in self.dims:
            if self.dim(n - 1) and n not in self.diffs:
                self.diffs[n] = Matrix.zeros(field, self.dim(n - 1), self.dim(n))
        self.diffs = dict(sorted(self.diffs.items()))

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def d(self, n: int) -> Matrix:
        m = self.diffs.get(n)
        if m is None:
            return Matrix.zeros(self.field, self.dim(n - 1), self.dim(n))
        return m

    @property
    def degrees(self) -> List[int]:
        return list(self.dims)

    @property
    def window(self) -> Tuple[int, int]:
        if not self.dims:
            return (0, -1)
        return (min(self.dims), max(self.dims))

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not self.dims

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ChainComplex)
            and self.field == other.field
            and self.dims == other.dims
            and self.diffs == other.diffs
        )

    def __hash__(self):
        return hash((self.field, tuple(self.dims.items())))

    def __repr__(self) -> str:
        return f"ChainComplex({self.field}, dims={self.dims})"


class ChainMap:
    """A degree-zero map of complexes; ``comp(n)`` is target.dim(n) x source.dim(n)."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: ChainComplex, target: ChainComplex, components: Optional[Mapping[int, object]] = None):
        if source.field != target.field:
            raise FieldMismatch("chain map between different fields")
        self.source = source
        self.target = target
        f = source.field
        self.components: Dict[int, Matrix] = {}
        for n, m in (components or {}).items():
            m = _as_matrix(f, m, target.dim(n), source.dim(n), f"component {n}")
            if m.rows and m.cols:
                self.components[n] = m
        for n in source.dims:
            if target.dim(n) and n not in self.components:
                self.components[n] = Matrix.zeros(f, target.dim(n), source.dim(n))
        self.components = dict(sorted(self.components.items()))

    @property
    def field(self) -> Field:
        return self.source.field

    def comp(self, n: int) -> Matrix:
        m = self.components.get(n)
        if m is None:
            return Matrix.zeros(self.field, self.target.dim(n), self.source.dim(n))
        return m

    def degrees(self) -> List[int]:
        return sorted(set(self.source.dims) | set(self.target.dims))

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        return compose(self, other)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target, {n: self.comp(n) + other.comp(n) for n in self.components})

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: -m for n, m in self.components.items()})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + (-other)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.components.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ChainMap)
            and self.source == other.source
            and self.target == other.target
            and self.components == other.components
        )

    def __hash__(self):
        return hash((hash(self.source), hash(self.target)))

    def __repr__(self) -> str:
        return f"ChainMap({self.source!r} -> {self.target!r})"


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """g o f."""
    if f.target != g.source:
        raise ShapeError("composition of non-composable chain maps")
    return ChainMap(f.source, g.target, {n: g.comp(n) @ f.comp(n) for n in f.source.dims if g.target.dim(n)})


def identity_map(c: ChainComplex) -> ChainMap:
    return ChainMap(c, c, {n: Matrix.identity(c.field, k) for n, k in c.dims.items()})


def zero_map(c: ChainComplex, d: ChainComplex) -> ChainMap:
    return ChainMap(c, d)


def zero_complex(field: Field) -> ChainComplex:
    return ChainComplex(field, {})


def validate_complex(c: ChainComplex) -> None:
    for n, m in c.diffs.items():
        if m.shape != (c.dim(n - 1), c.dim(n)):
            raise ShapeError(f"d_{n} has shape {m.shape}")
    for n in c.dims:
        if c.dim(n - 1) and c.dim(n - 2) and not (c.d(n - 1) @ c.d(n)).is_zero():
            raise NotAComplex(n)


def validate_chain_map(phi: ChainMap) -> None:
    s, t = phi.source, phi.target
    for n in phi.degrees():
        if not (t.d(n) @ phi.comp(n) - phi.comp(n - 1) @ s.d(n)).is_zero():
            raise NotAChainMap(n)


def is_chain_map(phi: ChainMap) -> bool:
    try:
        validate_chain_map(phi)
    except NotAChainMap:
        return False
    return True


# ---------------------------------------------------------------- generators


def sphere(d: int, field: Field) -> ChainComplex:
    """K concentrated in degree d."""
    return ChainComplex(field, {d: 1})


def disk(n: int, field: Field) -> ChainComplex:
    """K in degrees n and n-1 joined by the identity."""
    return ChainComplex(field, {n: 1, n - 1: 1}, {n: Matrix.identity(field, 1)})


def gen_cof(n: int, field: Field) -> ChainMap:
    """The generating cofibration sphere(n-1) -> disk(n)."""
    return ChainMap(sphere(n - 1, field), disk(n, field), {n - 1: Matrix.identity(field, 1)})


def gen_acyclic_cof(n: int, field: Field) -> ChainMap:
    """The generating acyclic cofibration 0 -> disk(n)."""
    return ChainMap(zero_complex(field), disk(n, field))


def shift(c: ChainComplex, k: int) -> ChainComplex:
    """Reindex so that degree n moves to n + k; differentials are negated for odd k."""
    sign = -1 if k % 2 else 1
    return ChainComplex(c.field, {n + k: v for n, v in c.dims.items()}, {n + k: m.scale(sign) for n, m in c.diffs.items()})


# ---------------------------------------------------------------- homology


def _homology_basis(c: ChainComplex, n: int) -> Tuple[Matrix, Matrix]:
    """(boundary basis, homology representatives) in degree n as column matrices."""
    z = kernel_basis(c.d(n))
    b = image_basis(c.d(n + 1))
    if z.cols == 0:
        return b, z
    _, piv = rref(hstack([b, z]))
    reps = [p - b.cols for p in piv if p >= b.cols]
    return b, z.submatrix(range(z.rows), reps)


def homology(c: ChainComplex) -> Dict[int, int]:
    """Betti numbers in every degree where they are nonzero."""
    out = {}
    for n in c.dims:
        h = _homology_basis(c, n)[1].cols
        if h:
            out[n] = h
    return out


def homology_representatives(c: ChainComplex, n: int) -> Matrix:
    return _homology_basis(c, n)[1]


def induced_homology_map(phi: ChainMap) -> Dict[int, Matrix]:
    """Matrix of H_n(phi) in the pivot-deterministic homology bases, every degree of either side."""
    out = {}
    f = phi.field
    for n in phi.degrees():
        _, hs = _homology_basis(phi.source, n)
        bt, ht = _homology_basis(phi.target, n)
        if hs.cols == 0 or ht.cols == 0:
            out[n] = Matrix.zeros(f, ht.cols, hs.cols)
            continue
        img = phi.comp(n) @ hs
        coords = solve_right(hstack([bt, ht]), img)
        assert coords is not None, "image of a cycle is not a cycle"
        out[n] = coords.submatrix(range(bt.cols, bt.cols + ht.cols), range(hs.cols))
    return out


@dataclass(frozen=True)
class ChainFlags:
    we: bool
    fib: bool
    cof: bool

    def to_dict(self) -> dict:
        return {"cof": self.cof, "fib": self.fib, "we": self.we}


def is_quasi_iso(phi: ChainMap) -> bool:
    return all(is_invertible(m) for m in induced_homology_map(phi).values())


def is_degreewise_injective(phi: ChainMap) -> bool:
    return all(is_injective(phi.comp(n)) for n in phi.source.dims)


def is_degreewise_surjective(phi: ChainMap) -> bool:
    return all(is_surjective(phi.comp(n)) for n in phi.target.dims)


def is_iso(phi: ChainMap) -> bool:
    return phi.source.dims == phi.target.dims and all(is_invertible(m) for m in phi.components.values())


def classify_chain_map(phi: ChainMap) -> ChainFlags:
    return ChainFlags(
        we=is_quasi_iso(phi),
        fib=is_degreewise_surjective(phi),
        cof=is_degreewise_injective(phi),
    )


# ---------------------------------------------------------------- sums


def set_tensor(k: int, c: ChainComplex) -> ChainComplex:
    """k-fold direct sum of c, blocks in index order."""
    return direct_sum_many([c] * k, c.field)


def direct_sum(c: ChainComplex, d: ChainComplex) -> ChainComplex:
    if c.field != d.field:
        raise FieldMismatch("direct sum")
    return direct_sum_many([c, d], c.field)


def direct_sum_many(cs: Sequence[ChainComplex], field: Field) -> ChainComplex:
    degs = sorted({n for c in cs for n in c.dims})
    dims = {n: sum(c.dim(n) for c in cs) for n in degs}
    diffs = {n: block_diag(field, [c.d(n) for c in cs]) for n in degs}
    return ChainComplex(field, dims, diffs)


def direct_sum_map_many(maps: Sequence[ChainMap], source: ChainComplex, target: ChainComplex) -> ChainMap:
    f = source.field
    return ChainMap(source, target, {n: block_diag(f, [m.comp(n) for m in maps]) for n in source.dims})


def direct_sum_map(phi: ChainMap, psi: ChainMap) -> ChainMap:
    return direct_sum_map_many([phi, psi], direct_sum(phi.source, psi.source), direct_sum(phi.target, psi.target))


def sum_injection(cs: Sequence[ChainComplex], i: int, total: Optional[ChainComplex] = None) -> ChainMap:
    field = cs[i].field
    total = total or direct_sum_many(cs, field)
    comps = {}
    for n in cs[i].dims:
        off = sum(c.dim(n) for c in cs[:i])
        comps[n] = selection(field, total.dim(n), range(off, off + cs[i].dim(n)))
    return ChainMap(cs[i], total, comps)


def sum_projection(cs: Sequence[ChainComplex], i: int, total: Optional[ChainComplex] = None) -> ChainMap:
    inj = sum_injection(cs, i, total)
    return ChainMap(inj.target, inj.source, {n: m.T for n, m in inj.components.items()})


def map_into_sum(maps: Sequence[ChainMap], target: ChainComplex) -> ChainMap:
    """The map (f_1, ..., f_k): X -> Y_1 + ... + Y_k."""
    src = maps[0].source
    return ChainMap(src, target, {n: vstack([m.comp(n) for m in maps]) for n in src.dims if target.dim(n)})


def map_out_of_sum(maps: Sequence[ChainMap], source: ChainComplex) -> ChainMap:
    """The map [f_1 ... f_k]: X_1 + ... + X_k -> Y."""
    tgt = maps[0].target
    return ChainMap(source, tgt, {n: hstack([m.comp(n) for m in maps]) for n in source.dims if tgt.dim(n)})


# ---------------------------------------------------------------- tensor


def tensor_layout(c: ChainComplex, d: ChainComplex, k: int) -> List[Tuple[int, int, int]]:
    """Summands (m, n, offset) of (c (x) d)_k, m ascending."""
    out = []
    off = 0
    for m in c.dims:
        n = k - m
        if d.dim(n):
            out.append((m, n, off))
            off += c.dim(m) * d.dim(n)
    return out


def tensor(c: ChainComplex, d: ChainComplex) -> ChainComplex:
    if c.field != d.field:
        raise FieldMismatch("tensor")
    f = c.field
    degs = sorted({m + n for m in c.dims for n in d.dims})
    dims = {k: sum(c.dim(m) * d.dim(n) for m, n, _ in tensor_layout(c, d, k)) for k in degs}
    diffs = {}
    for k in degs:
        if not dims.get(k - 1):
            continue
        rows_lay = {(m, n): off for m, n, off in tensor_layout(c, d, k - 1)}
        cols = [[f.zero] * dims[k] for _ in range(dims[k - 1])]
        for m, n, off in tensor_layout(c, d, k):
            blocks = []
            if (m - 1, n) in rows_lay:
                blocks.append((rows_lay[(m - 1, n)], kron(c.d(m), Matrix.identity(f, d.dim(n)))))
            if (m, n - 1) in rows_lay:
                sign = -1 if m % 2 else 1
                blocks.append((rows_lay[(m, n - 1)], kron(Matrix.identity(f, c.dim(m)), d.d(n)).scale(sign)))
            for roff, blk in blocks:
                for i, row in enumerate(blk.data):
                    target = cols[roff + i]
                    for j, x in enumerate(row):
                        if x:
                            target[off + j] = x
        diffs[k] = Matrix._raw(f, cols, dims[k])
    return ChainComplex(f, dims, diffs)


def tensor_map(phi: ChainMap, gamma: ChainMap) -> ChainMap:
    f = phi.field
    src = tensor(phi.source, gamma.source)
    tgt = tensor(phi.target, gamma.target)
    comps = {}
    for k in src.dims:
        if not tgt.dim(k):
            continue
        blocks = []
        tl = {(m, n): off for m, n, off in tensor_layout(phi.target, gamma.target, k)}
        rows = [[f.zero] * src.dim(k) for _ in range(tgt.dim(k))]
        for m, n, off in tensor_layout(phi.source, gamma.source, k):
            if (m, n) not in tl:
                continue
            blk = kron(phi.comp(m), gamma.comp(n))
            roff = tl[(m, n)]
            for i, row in enumerate(blk.data):
                for j, x in enumerate(row):
                    if x:
                        rows[roff + i][off + j] = x
        comps[k] = Matrix._raw(f, rows, src.dim(k))
    return ChainMap(src, tgt, comps)


# ---------------------------------------------------------------- mapping complex


def hom_layout(c: ChainComplex, d: ChainComplex, k: int) -> List[Tuple[int, int, int, int]]:
    """Summands (n, offset, rows, cols) of [c, d]_k = sum_n Hom(c_n, d_{n+k}); entries row-major."""
    out = []
    off = 0
    for n in c.dims:
        r = d.dim(n + k)
        if r:
            out.append((n, off, r, c.dim(n)))
            off += r * c.dim(n)
    return out


def _hom_degrees(c: ChainComplex, d: ChainComplex) -> List[int]:
    return sorted({m - n for n in c.dims for m in d.dims})


def hom_complex(c: ChainComplex, d: ChainComplex) -> ChainComplex:
    if c.field != d.field:
        raise FieldMismatch("hom_complex")
    f = c.field
    degs = _hom_degrees(c, d)
    lay = {k: hom_layout(c, d, k) for k in degs}
    dims = {k: sum(r * s for _, _, r, s in lay[k]) for k in degs}
    diffs = {}
    for k in degs:
        if not dims.get(k - 1):
            continue
        rows_lay = {n: off for n, off, _, _ in lay[k - 1]}
        rows = [[f.zero] * dims[k] for _ in range(dims[k - 1])]
        sign = 1 if k % 2 else -1  # -(-1)^k
        for n, off, r, s in lay[k]:
            blocks = []
            if n in rows_lay and d.dim(n + k - 1):
                blocks.append((rows_lay[n], kron(d.d(n + k), Matrix.identity(f, s))))
            if n + 1 in rows_lay:
                blocks.append((rows_lay[n + 1], kron(Matrix.identity(f, r), c.d(n + 1).T).scale(sign)))
            for roff, blk in blocks:
                for i, row in enumerate(blk.data):
                    for j, x in enumerate(row):
                        if x:
                            rows[roff + i][off + j] = (rows[roff + i][off + j] + x) % f.p if f.p else rows[roff + i][off + j] + x
        diffs[k] = Matrix._raw(f, rows, dims[k])
    return ChainComplex(f, dims, diffs)


def hom_element_blocks(c: ChainComplex, d: ChainComplex, k: int, vec: Sequence) -> Dict[int, Matrix]:
    """Unflatten a vector of [c, d]_k into its matrices Hom(c_n, d_{n+k})."""
    f = c.field
    out = {}
    for n, off, r, s in hom_layout(c, d, k):
        out[n] = Matrix._raw(f, [list(vec[off + i * s: off + (i + 1) * s]) for i in range(r)], s)
    return out


def hom_element_vector(c: ChainComplex, d: ChainComplex, k: int, blocks: Mapping[int, Matrix]) -> list:
    f = c.field
    vec = []
    for n, _, r, s in hom_layout(c, d, k):
        m = blocks.get(n)
        vec.extend(m.entries if m is not None else [f.zero] * (r * s))
    return vec


def chain_map_from_cycle(c: ChainComplex, d: ChainComplex, vec: Sequence) -> ChainMap:
    """Read a degree-0 element of [c, d] as a family of matrices c_n -> d_n."""
    return ChainMap(c, d, hom_element_blocks(c, d, 0, vec))


def curry(phi: ChainMap, t: ChainComplex, v: ChainComplex) -> ChainMap:
    """Transpose phi: t (x) v -> w to t -> [v, w]; t_i goes to (v_s |-> phi(t_i (x) v_s))."""
    w = phi.target
    f = phi.field
    hom = hom_complex(v, w)
    comps = {}
    for a in t.dims:
        if not hom.dim(a):
            continue
        cols = []
        for i in range(t.dim(a)):
            vec = []
            for n, _, r, s in hom_layout(v, w, a):
                k = a + n
                off = next(o for m, nn, o in tensor_layout(t, v, k) if m == a)
                pk = phi.comp(k)
                for row in range(r):
                    vec.extend(pk[row, off + i * s + j] for j in range(s))
            cols.append(vec)
        comps[a] = Matrix.from_columns(f, cols, hom.dim(a))
    return ChainMap(t, hom, comps)


def uncurry(psi: ChainMap, v: ChainComplex, w: ChainComplex) -> ChainMap:
    """Inverse of :func:`curry`."""
    t = psi.source
    f = psi.field
    src = tensor(t, v)
    comps = {}
    for k in src.dims:
        if not w.dim(k):
            continue
        rows = [[f.zero] * src.dim(k) for _ in range(w.dim(k))]
        for a, n, off in tensor_layout(t, v, k):
            pa = psi.comp(a)
            hl = {nn: (o, r, s) for nn, o, r, s in hom_layout(v, w, a)}
            if n not in hl:
                continue
            hoff, r, s = hl[n]
            for i in range(t.dim(a)):
                for row in range(r):
                    for j in range(s):
                        rows[row][off + i * s + j] = pa[hoff + row * s + j, i]
        comps[k] = Matrix._raw(f, rows, src.dim(k))
    return ChainMap(src, w, comps)


def evaluation(v: ChainComplex, w: ChainComplex) -> ChainMap:
    """The evaluation map [v, w] (x) v -> w."""
    return uncurry(identity_map(hom_complex(v, w)), v, w)


def postcompose_hom(c: ChainComplex, g: ChainMap) -> ChainMap:
    """[c, g]: [c, d] -> [c, d'] sending f to g o f."""
    return conjugate_hom(identity_map(c), g, c)


def conjugate_hom(a_inv: ChainMap, b: ChainMap, c_src: Optional[ChainComplex] = None) -> ChainMap:
    """[c', d] -> [c, d'] sending f to b o f o a_inv, where a_inv: c -> c' and b: d -> d'.

    Used with a_inv the inverse transport of the source, so that the map
    is f |-> b f a^{-1}.
    """
    c, c2 = a_inv.source, a_inv.target
    d, d2 = b.source, b.target
    f = b.field
    src = hom_complex(c2, d)
    tgt = hom_complex(c, d2)
    comps = {}
    for k in src.dims:
        if not tgt.dim(k):
            continue
        tl = {n: (o, r, s) for n, o, r, s in hom_layout(c, d2, k)}
        rows = [[f.zero] * src.dim(k) for _ in range(tgt.dim(k))]
        for n, off, r, s in hom_layout(c2, d, k):
            if n not in tl:
                continue
            toff, _, _ = tl[n]
            blk = kron(b.comp(n + k), a_inv.comp(n).T)
            for i, row in enumerate(blk.data):
                for j, x in enumerate(row):
                    if x:
                        rows[toff + i][off + j] = x
        comps[k] = Matrix._raw(f, rows, src.dim(k))
    return ChainMap(src, tgt, comps)


def chain_map_solution_dim(c: ChainComplex, d: ChainComplex) -> int:
    """Dimension of the space of chain maps c -> d, by solving d o phi = phi o d directly."""
    f = c.field
    unknowns = []  # (n, row, col)
    index = {}
    for n in c.dims:
        for i in range(d.dim(n)):
            for j in range(c.dim(n)):
                index[(n, i, j)] = len(unknowns)
                unknowns.append((n, i, j))
    eqs = []
    for n in sorted(set(c.dims) | set(d.dims)):
        # (d_n^d phi_n - phi_{n-1} d_n^c)[i, j] for i < dim d_{n-1}, j < dim c_n
        for i in range(d.dim(n - 1)):
            for j in range(c.dim(n)):
                row = [f.zero] * len(unknowns)
                for k in range(d.dim(n)):
                    coeff = d.d(n)[i, k]
                    if coeff:
                        u = index[(n, k, j)]
                        row[u] = f.elem(row[u] + coeff)
                for k in range(c.dim(n - 1)):
                    coeff = c.d(n)[k, j]
                    if coeff:
                        u = index[(n - 1, i, k)]
                        row[u] = f.elem(row[u] - coeff)
                eqs.append(row)
    if not unknowns:
        return 0
    if not eqs:
        return len(unknowns)
    return kernel_basis(Matrix._raw(f, eqs, len(unknowns))).cols


# ---------------------------------------------------------------- kernels and cokernels


@dataclass
class CokernelData:
    complex: ChainComplex
    projection: ChainMap
    sections: Dict[int, Matrix]
    chosen: Dict[int, tuple]  # presentation indices whose images form the quotient basis

    def induced(self, other: "CokernelData", m: Mapping[int, Matrix]) -> ChainMap:
        """Map of quotients induced by degreewise matrices m between the presentations."""
        comps = {}
        for n in self.complex.dims:
            if other.complex.dim(n):
                comps[n] = other.projection.comp(n) @ m[n] @ self.sections[n]
        return ChainMap(self.complex, other.complex, comps)


def chain_cokernel(phi: ChainMap) -> CokernelData:
    f = phi.field
    b = phi.target
    dims, proj, sec, chosen = {}, {}, {}, {}
    for n in b.dims:
        ck = cokernel(phi.comp(n))
        dims[n] = ck.dim
        proj[n] = ck.projection
        sec[n] = ck.section
        chosen[n] = ck.chosen
    diffs = {}
    for n in b.dims:
        if dims.get(n) and dims.get(n - 1):
            diffs[n] = proj[n - 1] @ b.d(n) @ sec[n]
    q = ChainComplex(f, dims, diffs)
    return CokernelData(
        q,
        ChainMap(b, q, {n: proj[n] for n in b.dims if dims[n]}),
        {n: sec[n] for n in q.dims},
        {n: chosen[n] for n in q.dims},
    )


@dataclass
class KernelData:
    complex: ChainComplex
    inclusion: ChainMap
    free: Dict[int, list]  # coordinates of a kernel vector are its entries at these rows

    def lift(self, m: Mapping[int, Matrix], source: ChainComplex) -> ChainMap:
        """Factor degreewise matrices landing in the kernel through the inclusion."""
        comps = {}
        for n in source.dims:
            if self.complex.dim(n):
                x = solve_right(self.inclusion.comp(n), m[n])
                if x is None:
                    raise ShapeError(f"degree {n} does not land in the kernel")
                comps[n] = x
        return ChainMap(source, self.complex, comps)


def chain_kernel(phi: ChainMap) -> KernelData:
    f = phi.field
    a = phi.source
    kf = {n: kernel_with_free(phi.comp(n)) for n in a.dims}
    bases = {n: kf[n][0] for n in a.dims}
    dims = {n: m.cols for n, m in bases.items()}
    diffs = {}
    for n in a.dims:
        if dims.get(n) and dims.get(n - 1):
            x = solve_right(bases[n - 1], a.d(n) @ bases[n])
            assert x is not None
            diffs[n] = x
    k = ChainComplex(f, dims, diffs)
    return KernelData(k, ChainMap(k, a, {n: bases[n] for n in k.dims}), {n: kf[n][1] for n in k.dims})


@dataclass
class PushoutData:
    complex: ChainComplex
    inl: ChainMap
    inr: ChainMap
    quotient: CokernelData
    summed: ChainComplex

    def universal(self, beta: ChainMap, gamma: ChainMap) -> ChainMap:
        """The map out of the pushout induced by a cocone (beta, gamma)."""
        tgt = beta.target
        comps = {}
        for n in self.complex.dims:
            if tgt.dim(n):
                comps[n] = hstack([beta.comp(n), gamma.comp(n)]) @ self.quotient.sections[n]
        return ChainMap(self.complex, tgt, comps)


def chain_pushout(phi: ChainMap, psi: ChainMap) -> PushoutData:
    """Pushout of B <- A -> C as (B + C) / im(phi, -psi)."""
    if phi.field != psi.field:
        raise FieldMismatch("pushout")
    if phi.source != psi.source:
        raise ShapeError("span legs have different sources")
    b, c = phi.target, psi.target
    s = direct_sum(b, c)
    rel = map_into_sum([phi, -psi], s)
    q = chain_cokernel(rel)
    inl = q.projection @ sum_injection([b, c], 0, s)
    inr = q.projection @ sum_injection([b, c], 1, s)
    return PushoutData(q.complex, inl, inr, q, s)


@dataclass
class PullbackData:
    complex: ChainComplex
    pr1: ChainMap
    pr2: ChainMap
    kernel: KernelData

    def universal(self, beta: ChainMap, gamma: ChainMap) -> ChainMap:
        """The map into the pullback induced by a cone (beta, gamma)."""
        src = beta.source
        return self.kernel.lift({n: vstack([beta.comp(n), gamma.comp(n)]) for n in src.dims}, src)


def chain_pullback(phi: ChainMap, psi: ChainMap) -> PullbackData:
    """Pullback of B -> D <- C as ker(phi, -psi) inside B + C."""
    if phi.field != psi.field:
        raise FieldMismatch("pullback")
    if phi.target != psi.target:
        raise ShapeError("cospan legs have different targets")
    b, c = phi.source, psi.source
    s = direct_sum(b, c)
    rel = map_out_of_sum([phi, -psi], s)
    k = chain_kernel(rel)
    pr1 = sum_projection([b, c], 0, s) @ k.inclusion
    pr2 = sum_projection([b, c], 1, s) @ k.inclusion
    return PullbackData(k.complex, pr1, pr2, k)


def pushout_product_chain(phi: ChainMap, gamma: ChainMap) -> ChainMap:
    """The map (X' (x) Y) +_{X (x) Y} (X (x) Y') -> X' (x) Y'."""
    if phi.field != gamma.field:
        raise FieldMismatch("pushout product")
    x, x2 = phi.source, phi.target
    y, y2 = gamma.source, gamma.target
    po = chain_pushout(tensor_map(phi, identity_map(y)), tensor_map(identity_map(x), gamma))
    return po.universal(tensor_map(identity_map(x2), gamma), tensor_map(phi, identity_map(y2)))


# ---------------------------------------------------------------- block sums


class BlockSum:
    """A direct sum of labelled complexes with index bookkeeping per degree."""

    def __init__(self, field: Field, items: Sequence[Tuple[object, ChainComplex]]):
        self.field = field
        self.keys = [k for k, _ in items]
        self.parts = dict(items)
        self.complex = direct_sum_many([c for _, c in items], field)
        self.offsets: Dict[int, Dict[object, int]] = {}
        self._locate: Dict[int, List[Tuple[object, int]]] = {}
        for n in self.complex.dims:
            off = 0
            table: Dict[object, int] = {}
            loc: List[Tuple[object, int]] = []
            for k, c in items:
                table[k] = off
                loc.extend((k, i) for i in range(c.dim(n)))
                off += c.dim(n)
            self.offsets[n] = table
            self._locate[n] = loc

    def index(self, n: int, key, inner: int) -> int:
        return self.offsets[n][key] + inner

    def locate(self, n: int, index: int) -> Tuple[object, int]:
        return self._locate[n][index]

    def rows_of(self, n: int, key) -> range:
        off = self.offsets[n][key]
        return range(off, off + self.parts[key].dim(n))


def block_map(src: BlockSum, tgt: BlockSum, entries) -> ChainMap:
    """Assemble a map between block sums from (target key, source key, ChainMap) triples; entries add."""
    f = src.field
    p = f.p
    comps = {}
    mats = {n: [[f.zero] * src.complex.dim(n) for _ in range(tgt.complex.dim(n))] for n in src.complex.dims if tgt.complex.dim(n)}
    for tkey, skey, m in entries:
        for n, blk in m.components.items():
            if n not in mats:
                continue
            rows = mats[n]
            ro = tgt.offsets[n][tkey]
            co = src.offsets[n][skey]
            for i, row in enumerate(blk.data):
                target_row = rows[ro + i]
                for j, x in enumerate(row):
                    if x:
                        v = target_row[co + j] + x
                        target_row[co + j] = v % p if p else v
    for n, rows in mats.items():
        comps[n] = Matrix._raw(f, rows, src.complex.dim(n))
    return ChainMap(src.complex, tgt.complex, comps)
