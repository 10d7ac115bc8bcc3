"""Canonical exact linear algebra.

Pivoting always takes the first nonzero entry in column order, so every
result is deterministic and identical across fields.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from ncp2.errors import DimensionMismatch, FieldMismatch, InvalidInput
from ncp2.exact.fields import QQ, Field, PrimeField, common_field

__all__ = [
    "Matrix", "Subspace", "rref", "kernel", "intersect", "span", "plucker",
    "det", "Echelon", "solve_kernel_vector",
]


def _check_field(field: Field, values) -> list:
    return [field(v) for v in values]


@dataclass(frozen=True)
class Matrix:
    field: Field
    nrows: int
    ncols: int
    rows: tuple

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field | None = None, ncols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if field is None:
            field = common_field((x for r in rows for x in r), default=QQ)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged matrix rows")
        return cls(field, len(rows), ncols, tuple(tuple(_check_field(field, r)) for r in rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field = QQ) -> "Matrix":
        z = field.zero
        return cls(field, nrows, ncols, tuple(tuple(z for _ in range(ncols)) for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.ncols, self.nrows, tuple(zip(*self.rows)) if self.nrows else ())

    def _same_field(self, other: "Matrix"):
        if other.field != self.field:
            raise FieldMismatch("matrices over %s and %s" % (self.field, other.field))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch("%dx%d @ %dx%d" % (self.nrows, self.ncols, other.nrows, other.ncols))
        cols = other.transpose().rows
        z = self.field.zero
        out = []
        for r in self.rows:
            out.append(tuple(sum((a * b for a, b in zip(r, c)), z) for c in cols))
        return Matrix(self.field, self.nrows, other.ncols, tuple(out))

    def apply(self, vec: Sequence) -> tuple:
        z = self.field.zero
        return tuple(sum((a * b for a, b in zip(r, vec)), z) for r in self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(self.field, self.nrows, self.ncols,
                      tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix(self.field, self.nrows, self.ncols, tuple(tuple(c * a for a in r) for r in self.rows))

    def rank(self) -> int:
        return rref(self)[1]

    def det(self):
        return det(self)

    def to_json(self) -> list:
        return [[self.field.format(x) for x in r] for r in self.rows]


def _rref_lists(rows: list, ncols: int, field: Field):
    """In-place RREF of a list of lists; returns the pivot column list."""
    if isinstance(field, PrimeField):
        return _rref_modp(rows, ncols, field)
    pivots = []
    prow = 0
    nrows = len(rows)
    for col in range(ncols):
        if prow == nrows:
            break
        sel = None
        for r in range(prow, nrows):
            if rows[r][col]:
                sel = r
                break
        if sel is None:
            continue
        rows[prow], rows[sel] = rows[sel], rows[prow]
        piv = rows[prow]
        inv = field.one / piv[col]
        if piv[col] != 1:
            piv = [x * inv for x in piv]
            rows[prow] = piv
        for r in range(nrows):
            if r != prow:
                f = rows[r][col]
                if f:
                    rr = rows[r]
                    rows[r] = [a - f * b if b else a for a, b in zip(rr, piv)]
        pivots.append(col)
        prow += 1
    return pivots


def _rref_modp(rows: list, ncols: int, field: PrimeField):
    p = field.p
    ints = [[x.v for x in r] for r in rows]
    pivots = []
    prow = 0
    nrows = len(ints)
    for col in range(ncols):
        if prow == nrows:
            break
        sel = None
        for r in range(prow, nrows):
            if ints[r][col]:
                sel = r
                break
        if sel is None:
            continue
        ints[prow], ints[sel] = ints[sel], ints[prow]
        inv = pow(ints[prow][col], -1, p)
        piv = [(x * inv) % p for x in ints[prow]]
        ints[prow] = piv
        for r in range(nrows):
            if r != prow:
                f = ints[r][col]
                if f:
                    ints[r] = [(a - f * b) % p for a, b in zip(ints[r], piv)]
        pivots.append(col)
        prow += 1
    mk = field
    rows[:] = [[mk(x) for x in r] for r in ints]
    return pivots


def rref(m: Matrix) -> tuple[Matrix, int]:
    """Reduced row-echelon form (same shape as ``m``) and rank."""
    rows = [list(r) for r in m.rows]
    pivots = _rref_lists(rows, m.ncols, m.field)
    return Matrix(m.field, m.nrows, m.ncols, tuple(tuple(r) for r in rows)), len(pivots)


def det(m: Matrix):
    if m.nrows != m.ncols:
        raise DimensionMismatch("determinant of a non-square matrix")
    field = m.field
    rows = [list(r) for r in m.rows]
    n = m.nrows
    result = field.one
    for col in range(n):
        sel = next((r for r in range(col, n) if rows[r][col]), None)
        if sel is None:
            return field.zero
        if sel != col:
            rows[col], rows[sel] = rows[sel], rows[col]
            result = -result
        piv = rows[col][col]
        result = result * piv
        inv = field.one / piv
        for r in range(col + 1, n):
            f = rows[r][col]
            if f:
                f = f * inv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return result


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of field^ambient held by its canonical RREF basis."""

    field: Field
    ambient: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.field == other.field and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def contains(self, vec: Sequence) -> bool:
        if len(vec) != self.ambient:
            raise DimensionMismatch("vector length %d vs ambient %d" % (len(vec), self.ambient))
        return span(self.field, list(self.basis) + [list(vec)], self.ambient).dim == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        _compatible(self, other)
        return span(self.field, list(self.basis) + list(other.basis), self.ambient)

    def annihilator(self) -> "Subspace":
        """Vectors pairing to zero (dot product) with every basis vector."""
        if not self.basis:
            return full_space(self.ambient, self.field)
        return kernel(Matrix(self.field, self.dim, self.ambient, self.basis))

    def pivots(self) -> list:
        return [next(i for i, x in enumerate(r) if x) for r in self.basis]

    def to_matrix(self) -> Matrix:
        return Matrix(self.field, self.dim, self.ambient, self.basis)

    def to_json(self) -> list:
        return [[self.field.format(x) for x in r] for r in self.basis]


def _compatible(a: Subspace, b: Subspace):
    if a.ambient != b.ambient:
        raise DimensionMismatch("ambient dimensions %d and %d" % (a.ambient, b.ambient))
    if a.field != b.field:
        raise FieldMismatch("subspaces over %s and %s" % (a.field, b.field))


def span(field: Field, vectors: Iterable[Sequence], ambient: int) -> Subspace:
    rows = []
    for v in vectors:
        if len(v) != ambient:
            raise DimensionMismatch("vector length %d vs ambient %d" % (len(v), ambient))
        rows.append([field(x) for x in v])
    if not rows:
        return Subspace(field, ambient, ())
    pivots = _rref_lists(rows, ambient, field)
    return Subspace(field, ambient, tuple(tuple(r) for r in rows[:len(pivots)]))


def full_space(n: int, field: Field = QQ) -> Subspace:
    return Subspace(field, n, Matrix.identity(n, field).rows)


def kernel(m: Matrix) -> Subspace:
    """Right kernel {v : m v = 0} as a canonical Subspace."""
    rows = [list(r) for r in m.rows]
    pivots = _rref_lists(rows, m.ncols, m.field)
    field = m.field
    zero, one = field.zero, field.one
    free = [c for c in range(m.ncols) if c not in set(pivots)]
    vecs = []
    for f in free:
        v = [zero] * m.ncols
        v[f] = one
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][f]
        vecs.append(v)
    return span(field, vecs, m.ncols)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _compatible(a, b)
    rows = list(a.annihilator().basis) + list(b.annihilator().basis)
    if not rows:
        return full_space(a.ambient, a.field)
    return kernel(Matrix(a.field, len(rows), a.ambient, tuple(rows)))


def solve_kernel_vector(m: Matrix):
    """The unique (up to scale) kernel vector, or None if the kernel is not a line."""
    k = kernel(m)
    return k.basis[0] if k.dim == 1 else None


def plucker(s: Subspace) -> tuple:
    """Maximal minors in lexicographic order of column subsets, first nonzero scaled to 1."""
    k, n = s.dim, s.ambient
    if k == 0:
        raise InvalidInput("Plucker coordinates of the zero subspace")
    rows = s.basis
    coords = []
    for cols in combinations(range(n), k):
        sub = Matrix(s.field, k, k, tuple(tuple(r[c] for c in cols) for r in rows))
        coords.append(det(sub))
    lead = next(c for c in coords if c)
    inv = s.field.one / lead
    return tuple(c * inv for c in coords)


class Echelon:
    """Incrementally maintained row-echelon basis of sparse vectors.

    Vectors are dicts column -> nonzero scalar.  Used for the large but very
    sparse spanning sets arising from tensor-algebra ideals.  Over F_p the
    entries are kept as plain ints for speed.
    """

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.pivots: dict = {}
        self._p = field.p if isinstance(field, PrimeField) else None

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _convert(self, vec: dict) -> dict:
        if self._p is None:
            f = self.field
            return {c: f(x) for c, x in vec.items() if x}
        p = self._p
        out = {}
        for c, x in vec.items():
            v = (x.v if hasattr(x, "v") else int(x)) % p
            if v:
                out[c] = v
        return out

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return True if it increased the rank."""
        v = self._convert(vec)
        p = self._p
        pivots = self.pivots
        while v:
            c = min(v)
            prow = pivots.get(c)
            if prow is None:
                a = v[c]
                if p is None:
                    inv = self.field.one / a
                    pivots[c] = {k: x * inv for k, x in v.items()}
                else:
                    inv = pow(a, -1, p)
                    pivots[c] = {k: (x * inv) % p for k, x in v.items()}
                return True
            f = v[c]
            if p is None:
                for k, x in prow.items():
                    nx = v.get(k, 0) - f * x
                    if nx:
                        v[k] = nx
                    else:
                        v.pop(k, None)
            else:
                for k, x in prow.items():
                    nx = (v.get(k, 0) - f * x) % p
                    if nx:
                        v[k] = nx
                    else:
                        v.pop(k, None)
        return False
