"""Exact dense linear algebra over prime fields F_p and the rationals.

Scalars of F_p are Python ints in [0, p); rationals are ``fractions.Fraction``.
All elimination uses the first nonzero entry of each column as pivot, so every
basis produced here is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import DimensionMismatch, FieldMismatch, LocsysError


@lru_cache(maxsize=None)
def _is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


@dataclass(frozen=True)
class Field:
    """An exact field: F_p for a prime ``p``, or Q when ``p == 0``."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not (2 <= self.p < 2**31 and _is_prime(self.p)):
            raise LocsysError(f"modulus must be a prime in [2, 2^31), got {self.p}")

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def rational(cls) -> "Field":
        return cls(0)

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``"Fp:5"`` or ``"Q"``."""
        text = text.strip()
        if text == "Q":
            return cls(0)
        if text.startswith("Fp:"):
            return cls(int(text[3:]))
        raise LocsysError(f"unknown field {text!r}")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def elem(self, x):
        """Coerce an int, Fraction or ``"a/b"`` string into this field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise LocsysError(f"{x} is not defined in F_{self.p}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def inv(self, x):
        if self.p:
            return pow(x, -1, self.p)
        return 1 / x

    def __str__(self) -> str:
        return f"Fp:{self.p}" if self.p else "Q"


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix; ``data`` is a tuple of row tuples."""

    field: Field
    rows: int
    cols: int
    data: tuple

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        data = tuple(tuple(field.elem(x) for x in r) for r in rows)
        n = cols if cols is not None else (len(data[0]) if data else 0)
        for r in data:
            if len(r) != n:
                raise DimensionMismatch("ragged matrix rows")
        return cls(field, len(data), n, data)

    @classmethod
    def _raw(cls, field: Field, rows: list, cols: int) -> "Matrix":
        # trusted constructor: entries already reduced
        return cls(field, len(rows), cols, tuple(tuple(r) for r in rows))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> "Matrix":
        if not columns:
            return cls.zeros(field, rows, 0)
        return cls.from_rows(field, list(zip(*columns)), len(columns))

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple:
        return tuple(x for r in self.data for x in r)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "Matrix":
        if self.rows == 0:
            return Matrix.zeros(self.field, self.cols, 0)
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.data)))

    def is_zero(self) -> bool:
        return all(not x for r in self.data for x in r)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def __add__(self, other: "Matrix") -> "Matrix":
        _check_same(self, other)
        p = self.field.p
        if p:
            rows = [[(x + y) % p for x, y in zip(r, s)] for r, s in zip(self.data, other.data)]
        else:
            rows = [[x + y for x, y in zip(r, s)] for r, s in zip(self.data, other.data)]
        return Matrix._raw(self.field, rows, self.cols)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field.elem(c)
        p = self.field.p
        if p:
            rows = [[x * c % p for x in r] for r in self.data]
        else:
            rows = [[x * c for x in r] for r in self.data]
        return Matrix._raw(self.field, rows, self.cols)

    def submatrix(self, row_idx: Iterable[int], col_idx: Iterable[int]) -> "Matrix":
        ci = list(col_idx)
        rows = [[self.data[i][j] for j in ci] for i in row_idx]
        return Matrix._raw(self.field, rows, len(ci))

    def tolist(self) -> list:
        return [list(r) for r in self.data]


def _check_same(a: Matrix, b: Matrix) -> None:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if a.cols == 0 or b.cols == 0:
        return Matrix.zeros(a.field, a.rows, b.cols)
    p = a.field.p
    zero = 0 if p else Fraction(0)
    # row-combination form: skips zero entries of a, which dominate in block matrices
    brows = [[(j, y) for j, y in enumerate(row) if y] for row in b.data]
    rows = []
    for r in a.data:
        acc = [zero] * b.cols
        for k, x in enumerate(r):
            if x:
                for j, y in brows[k]:
                    acc[j] += x * y
        rows.append([v % p for v in acc] if p else acc)
    return Matrix._raw(a.field, rows, b.cols)


def _rref_inplace(a: list, p: int, limit: int) -> list:
    """Reduce the list-of-lists ``a`` to reduced row echelon form.

    Pivots are searched only among the first ``limit`` columns.
    Returns the pivot columns.
    """
    m = len(a)
    pivots = []
    r = 0
    for c in range(limit):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        row = a[r]
        x = row[c]
        if p:
            if x != 1:
                inv = pow(x, -1, p)
                row = [v * inv % p for v in row]
                a[r] = row
            for i in range(m):
                if i != r:
                    f = a[i][c]
                    if f:
                        a[i] = [(u - f * v) % p for u, v in zip(a[i], row)]
        else:
            if x != 1:
                row = [v / x for v in row]
                a[r] = row
            for i in range(m):
                if i != r:
                    f = a[i][c]
                    if f:
                        a[i] = [u - f * v if v else u for u, v in zip(a[i], row)]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: Matrix) -> tuple:
    """Return (reduced row echelon form, pivot columns)."""
    a = [list(r) for r in m.data]
    piv = _rref_inplace(a, m.field.p, m.cols)
    return Matrix._raw(m.field, a, m.cols), piv


def rank(m: Matrix) -> int:
    a = [list(r) for r in m.data]
    return len(_rref_inplace(a, m.field.p, m.cols))


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the null space, one per free column."""
    return kernel_with_free(m)[0]


def kernel_with_free(m: Matrix) -> tuple:
    """(kernel basis, free columns); basis column j is 1 at free[j] and 0 at the other free positions.

    Hence the coordinates of a kernel vector are its entries at the free positions.
    """
    f = m.field
    a = [list(r) for r in m.data]
    piv = _rref_inplace(a, f.p, m.cols)
    pivset = set(piv)
    cols = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [f.zero] * m.cols
        v[free] = f.one
        for k, c in enumerate(piv):
            x = a[k][free]
            if x:
                v[c] = (-x) % f.p if f.p else -x
        cols.append(v)
    free_cols = [c for c in range(m.cols) if c not in pivset]
    if not cols:
        return Matrix.zeros(f, m.cols, 0), free_cols
    return Matrix._raw(f, [list(r) for r in zip(*cols)], len(cols)), free_cols


def solve_right(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """Solve a @ x = b; free variables are set to zero. None if inconsistent."""
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if a.rows != b.rows:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    f = a.field
    aug = [list(r) + list(s) for r, s in zip(a.data, b.data)]
    piv = _rref_inplace(aug, f.p, a.cols)
    n = a.cols
    for i in range(len(piv), a.rows):
        if any(aug[i][n:]):
            return None
    x = [[f.zero] * b.cols for _ in range(n)]
    for k, c in enumerate(piv):
        x[c] = aug[k][n:]
    return Matrix._raw(f, x, b.cols)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise DimensionMismatch(f"non-square {m.shape}")
    x = solve_right(m, Matrix.identity(m.field, m.rows))
    if x is None or rank(m) != m.rows:
        raise LocsysError("matrix is singular")
    return x


def image_basis(m: Matrix) -> Matrix:
    """The pivot columns of ``m``, a basis of its column space."""
    _, piv = rref(m)
    return m.submatrix(range(m.rows), piv)


class Cokernel(NamedTuple):
    projection: Matrix
    dim: int
    section: Matrix  # projection @ section = identity
    chosen: tuple  # section column k is the standard vector e_{chosen[k]}


def cokernel(m: Matrix) -> Cokernel:
    """Quotient of the target by the column span of ``m``.

    The column basis of ``m`` is extended by the first standard vectors not in
    its span; the projection sends those standard vectors to the quotient
    basis, and the section is the corresponding selection.
    """
    f = m.field
    b = image_basis(m)
    aug = [list(r) + [f.one if i == j else f.zero for j in range(m.rows)] for i, r in enumerate(b.data)]
    piv = _rref_inplace(aug, f.p, b.cols + m.rows)
    comp = [c - b.cols for c in piv if c >= b.cols]
    t = hstack([b, _selection(f, m.rows, comp)])
    tinv = inverse(t)
    proj = tinv.submatrix(range(b.cols, m.rows), range(m.rows))
    return Cokernel(proj, len(comp), _selection(f, m.rows, comp), tuple(comp))


def _selection(f: Field, n: int, idx: Sequence[int]) -> Matrix:
    z, o = f.zero, f.one
    rows = [[o if idx[k] == i else z for k in range(len(idx))] for i in range(n)]
    return Matrix._raw(f, rows, len(idx))


def selection(f: Field, n: int, idx: Sequence[int]) -> Matrix:
    """n x len(idx) matrix whose k-th column is the standard vector e_{idx[k]}."""
    return _selection(f, n, list(idx))


def hstack(ms: Sequence[Matrix]) -> Matrix:
    if not ms:
        raise DimensionMismatch("empty hstack")
    f, r = ms[0].field, ms[0].rows
    for m in ms:
        if m.field != f:
            raise FieldMismatch("hstack")
        if m.rows != r:
            raise DimensionMismatch("hstack row counts differ")
    rows = [[x for m in ms for x in m.data[i]] for i in range(r)]
    return Matrix._raw(f, rows, sum(m.cols for m in ms))


def vstack(ms: Sequence[Matrix]) -> Matrix:
    if not ms:
        raise DimensionMismatch("empty vstack")
    f, c = ms[0].field, ms[0].cols
    for m in ms:
        if m.field != f:
            raise FieldMismatch("vstack")
        if m.cols != c:
            raise DimensionMismatch("vstack column counts differ")
    return Matrix(f, sum(m.rows for m in ms), c, tuple(r for m in ms for r in m.data))


def block_diag(field: Field, ms: Sequence[Matrix]) -> Matrix:
    rows_total = sum(m.rows for m in ms)
    cols_total = sum(m.cols for m in ms)
    z = field.zero
    rows = []
    off = 0
    for m in ms:
        for r in m.data:
            rows.append([z] * off + list(r) + [z] * (cols_total - off - m.cols))
        off += m.cols
    assert len(rows) == rows_total
    return Matrix._raw(field, rows, cols_total)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product: entry ((i,k),(j,l)) = a[i,j] * b[k,l], pairs ordered lexicographically."""
    if a.field != b.field:
        raise FieldMismatch("kron")
    p = a.field.p
    rows = []
    for ra in a.data:
        for rb in b.data:
            if p:
                rows.append([x * y % p for x in ra for y in rb])
            else:
                rows.append([x * y for x in ra for y in rb])
    return Matrix._raw(a.field, rows, a.cols * b.cols)


def is_injective(m: Matrix) -> bool:
    return rank(m) == m.cols


def is_surjective(m: Matrix) -> bool:
    return rank(m) == m.rows


def is_invertible(m: Matrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows
