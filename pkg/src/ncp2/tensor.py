"""3x3x3 tensors in V0 (x) V1 (x) V2: contractions, geometricity, the normal
form N_uvw, the determinantal cubic, triples, relations and stability labels.

Axis conventions (fixed everywhere):
  coordinates T[i][j][k], flat index 9i + 3j + k;
  contracting axis 0 gives a matrix on V1 (x) V2 indexed [j][k],
  axis 1 gives V2 (x) V0 indexed [k][i], axis 2 gives V0 (x) V1 indexed [i][j].
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from ncp2.cubic import cubic_is_smooth
from ncp2.errors import (DegenerateInput, DimensionMismatch, Inconclusive, InternalInconsistency,
                         InvalidInput, NoDeterminantalCurve, NotGeometric, UnsupportedField)
from ncp2.exact.fields import QQ, QW, Cyclo, Field, GF, PrimeField, common_field, is_prime
from ncp2.exact.linalg import Matrix, Subspace, intersect, plucker, span
from ncp2.hesse import CurvePoint, HesseCurve, graph_forms, graph_image, projective_point
from ncp2.poly import Poly, det3_linear, perm_sign

__all__ = ["Tensor333", "normal_form", "determinant_tensor", "contract", "slice_", "matrix_of_linear_forms",
           "det_cubic", "is_geometric", "geometricity_report", "TripleModel", "triple_of_tensor",
           "relation_subspace", "quadruple_of_triple", "classify_stability", "StabilityReport",
           "DEFAULT_PRIMES"]

DEFAULT_PRIMES = (7, 13, 19)
AXIS_NAMES = ("x0", "y0", "z0"), ("x1", "y1", "z1"), ("x2", "y2", "z2")


@dataclass(frozen=True)
class Tensor333:
    field: Field
    coords: tuple

    @classmethod
    def from_flat(cls, values: Sequence, field: Field | None = None) -> "Tensor333":
        values = list(values)
        if len(values) != 27:
            raise DimensionMismatch("a 3x3x3 tensor needs 27 coordinates, got %d" % len(values))
        if field is None:
            field = common_field(values)
        return cls(field, tuple(field(v) for v in values))

    @classmethod
    def from_terms(cls, terms: dict, field: Field = QQ) -> "Tensor333":
        vals = [field.zero] * 27
        for (i, j, k), c in terms.items():
            vals[9 * i + 3 * j + k] = vals[9 * i + 3 * j + k] + field(c)
        return cls(field, tuple(vals))

    @classmethod
    def basis_product(cls, i: int, j: int, k: int, field: Field = QQ) -> "Tensor333":
        return cls.from_terms({(i, j, k): 1}, field)

    def __getitem__(self, ijk):
        i, j, k = ijk
        return self.coords[9 * i + 3 * j + k]

    def __bool__(self):
        return any(self.coords)

    def __add__(self, other: "Tensor333") -> "Tensor333":
        return Tensor333(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scale(self, c) -> "Tensor333":
        c = self.field(c)
        return Tensor333(self.field, tuple(a * c for a in self.coords))

    def canonical(self) -> "Tensor333":
        return Tensor333(self.field, projective_point(self.coords, self.field))

    def proportional(self, other: "Tensor333") -> bool:
        if not self or not other:
            return not self and not other
        return self.canonical().coords == other.canonical().coords

    def change_basis(self, g0, g1, g2) -> "Tensor333":
        """(g0 (x) g1 (x) g2) T with each g a 3x3 matrix (rows) acting on its factor."""
        m = [[[self.field(x) for x in r] for r in (g.rows if hasattr(g, "rows") else g)] for g in (g0, g1, g2)]
        z = self.field.zero
        out = []
        for a in range(3):
            for b in range(3):
                for c in range(3):
                    s = z
                    for i in range(3):
                        gi = m[0][a][i]
                        if not gi:
                            continue
                        for j in range(3):
                            gj = m[1][b][j]
                            if not gj:
                                continue
                            for k in range(3):
                                t = self.coords[9 * i + 3 * j + k]
                                if t:
                                    s = s + gi * gj * m[2][c][k] * t
                    out.append(s)
        return Tensor333(self.field, tuple(out))

    def change_field(self, field: Field) -> "Tensor333":
        return Tensor333(field, tuple(field(c) for c in self.coords))

    def to_json(self) -> list:
        return [self.field.format(c) for c in self.coords]

    def cyclic_shift(self) -> "Tensor333":
        """S[j][k][i] = T[i][j][k]: relabel V1 -> V0, V2 -> V1, V0 -> V2."""
        vals = [self.field.zero] * 27
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    vals[9 * j + 3 * k + i] = self.coords[9 * i + 3 * j + k]
        return Tensor333(self.field, tuple(vals))


def normal_form(u, v, w, field: Field | None = None) -> Tensor333:
    """w (x0x1x2 + y0y1y2 + z0z1z2) + u (x0z1y2 + y0x1z2 + z0y1x2) + v (x0y1z2 + y0z1x2 + z0x1y2)."""
    if field is None:
        field = common_field([u, v, w])
    u, v, w = field(u), field(v), field(w)
    if not (u or v or w):
        raise InvalidInput("normal form of (0,0,0)")
    terms = {}
    for t in ((0, 0, 0), (1, 1, 1), (2, 2, 2)):
        terms[t] = w
    for t in ((0, 2, 1), (1, 0, 2), (2, 1, 0)):
        terms[t] = u
    for t in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        terms[t] = v
    return Tensor333.from_terms(terms, field)


def determinant_tensor(field: Field = QQ) -> Tensor333:
    return Tensor333.from_terms({p: perm_sign(p) for p in permutations(range(3))}, field)


def _other_axes(axis: int) -> tuple:
    if axis not in (0, 1, 2):
        raise InvalidInput("axis must be 0, 1 or 2")
    return (axis + 1) % 3, (axis + 2) % 3


def _index(axis: int, a: int, r: int, c: int) -> int:
    """Flat index of the entry with axis coordinate a, row r, column c."""
    idx = [0, 0, 0]
    idx[axis] = a
    idx[(axis + 1) % 3] = r
    idx[(axis + 2) % 3] = c
    return 9 * idx[0] + 3 * idx[1] + idx[2]


def contract(T: Tensor333, axis: int, covector: Sequence) -> Matrix:
    _other_axes(axis)
    f = T.field
    cv = [f(c) for c in covector]
    if len(cv) != 3:
        raise DimensionMismatch("covector needs 3 entries")
    if not any(cv):
        raise InvalidInput("zero covector")
    rows = []
    for r in range(3):
        row = []
        for c in range(3):
            s = f.zero
            for a in range(3):
                if cv[a]:
                    s = s + cv[a] * T.coords[_index(axis, a, r, c)]
            row.append(s)
        rows.append(row)
    return Matrix.from_rows(rows, f)


def slice_(T: Tensor333, axis: int, index: int) -> Matrix:
    f = T.field
    e = [f.zero] * 3
    e[index] = f.one
    return contract(T, axis, e)


def matrix_of_linear_forms(T: Tensor333, axis: int = 0) -> list:
    """M(x)[r][c] = sum_a T[.., a, ..] x_a with x the coordinates of the contracted axis."""
    _other_axes(axis)
    f = T.field
    gens = Poly.gens(3, f, AXIS_NAMES[axis])
    out = []
    for r in range(3):
        row = []
        for c in range(3):
            entry = Poly.zero(3, f, AXIS_NAMES[axis])
            for a in range(3):
                t = T.coords[_index(axis, a, r, c)]
                if t:
                    entry = entry + gens[a] * t
            row.append(entry)
        out.append(row)
    return out


def det_cubic(T: Tensor333, axis: int = 0) -> Poly:
    return det3_linear(matrix_of_linear_forms(T, axis))


def axis_slices(T: Tensor333, axis: int) -> list:
    """The three slices along ``axis`` as vectors of length 9 (row-major on the other two axes)."""
    return [[x for r in slice_(T, axis, a).rows for x in r] for a in range(3)]


# --- geometricity -------------------------------------------------------------

def _rank_le_one(m: Matrix) -> bool:
    r = m.rows
    for i in range(3):
        for k in range(i + 1, 3):
            for j in range(3):
                for l in range(j + 1, 3):
                    if r[i][j] * r[k][l] - r[i][l] * r[k][j]:
                        return False
    return True


def _reduce_tensor(T: Tensor333, p: int) -> Tensor333 | None:
    f = GF(p)
    if isinstance(T.field, PrimeField):
        return T if T.field.p == p else None
    if T.field == QW and not f.has_omega() and any(isinstance(c, Cyclo) and c.b for c in T.coords):
        return None
    try:
        return T.change_field(f)
    except InvalidInput:
        return None


def _first_witness(T: Tensor333, axis: int):
    """Canonical projective covector with contraction rank <= 1 over a prime field, else None."""
    p = T.field.p
    vals = [c.v for c in T.coords]
    slabs = [[[vals[_index(axis, a, r, c)] for c in range(3)] for r in range(3)] for a in range(3)]
    cands = [(1, y, z) for y in range(p) for z in range(p)] + [(0, 1, z) for z in range(p)] + [(0, 0, 1)]
    for cv in cands:
        m = [[(cv[0] * slabs[0][r][c] + cv[1] * slabs[1][r][c] + cv[2] * slabs[2][r][c]) % p
              for c in range(3)] for r in range(3)]
        if all((m[i][j] * m[k][l] - m[i][l] * m[k][j]) % p == 0
               for i, k in ((0, 1), (0, 2), (1, 2)) for j, l in ((0, 1), (0, 2), (1, 2))):
            f = T.field
            return tuple(f(x) for x in cv)
    return None


def _lift(cv, p: int) -> tuple:
    return tuple(((c.v + p // 2) % p) - p // 2 for c in cv)


def _axis_smooth_certificate(T: Tensor333, axis: int):
    """True when det M(x) on this axis is a smooth cubic (so no rank <= 1 covector exists)."""
    F = det_cubic(T, axis)
    if not F:
        return False
    try:
        return cubic_is_smooth(F)
    except UnsupportedField:
        return False


def _bad_primes(T: Tensor333, axis: int, primes) -> set:
    """Primes where the exact smooth det cubic acquires a singularity or T fails to reduce."""
    bad = set()
    smooth_exact = T.field.characteristic == 0 and _axis_smooth_certificate(T, axis)
    for p in primes:
        Tp = _reduce_tensor(T, p)
        if Tp is None:
            bad.add(p)
            continue
        if smooth_exact:
            try:
                if not cubic_is_smooth(det_cubic(Tp, axis)):
                    bad.add(p)
            except (UnsupportedField, DegenerateInput):
                bad.add(p)
    return bad


def _next_primes(start: int, count: int, avoid: set, need_omega: bool) -> list:
    out, p = [], start
    while len(out) < count:
        p += 1
        if p != 3 and is_prime(p) and p not in avoid and (not need_omega or p % 3 == 1):
            out.append(p)
    return out


@dataclass(frozen=True)
class AxisVerdict:
    axis: int
    geometric: bool
    primes: tuple
    witness: tuple | None
    exact: str

    def to_json(self) -> dict:
        return {"axis": self.axis, "geometric": self.geometric, "primes": list(self.primes),
                "witness": None if self.witness is None else [str(c) for c in self.witness],
                "certificate": self.exact}


@dataclass(frozen=True)
class GeometricityReport:
    geometric: bool
    axes: tuple

    def to_json(self) -> dict:
        return {"geometric": self.geometric, "axes": [a.to_json() for a in self.axes]}


def _axis_verdict(T: Tensor333, axis: int, primes) -> AxisVerdict:
    f = T.field
    if isinstance(f, PrimeField):
        wit = _first_witness(T, axis)
        return AxisVerdict(axis, wit is None, (f.p,), None if wit is None else tuple(c.v for c in wit), "scan")
    need_omega = any(isinstance(c, Cyclo) and c.b for c in T.coords)
    primes = list(primes)
    bad = _bad_primes(T, axis, primes)
    good = [p for p in primes if p not in bad]
    good += _next_primes(max(primes), len(primes) - len(good), bad | set(primes), need_omega)
    results = {}
    witness = None
    for p in good:
        Tp = _reduce_tensor(T, p)
        if Tp is None:
            raise Inconclusive("tensor does not reduce modulo %d" % p)
        wit = _first_witness(Tp, axis)
        results[p] = wit
        if wit is not None and witness is None and f.characteristic == 0:
            lifted = _lift(wit, p)
            if _rank_le_one(contract(T, axis, lifted)):
                witness = lifted
    found = {p for p, w in results.items() if w is not None}
    if witness is not None:
        # an exact rank <= 1 covector reduces to a witness modulo every good prime
        if len(found) != len(good):
            raise Inconclusive("exact witness on axis %d not seen modulo %s" % (axis, sorted(set(good) - found)))
        return AxisVerdict(axis, False, tuple(good), witness, "exact-witness")
    if found:
        if len(found) != len(good):
            raise Inconclusive("primes disagree on axis %d: witnesses modulo %s only" % (axis, sorted(found)))
        raise Inconclusive("rank <= 1 covectors on axis %d modulo every prime but none lifts exactly" % axis)
    cert = "smooth-det" if _axis_smooth_certificate(T, axis) else "scan"
    return AxisVerdict(axis, True, tuple(good), None, cert)


def geometricity_report(T: Tensor333, primes=DEFAULT_PRIMES) -> GeometricityReport:
    if not T:
        raise InvalidInput("zero tensor")
    axes = tuple(_axis_verdict(T, a, primes) for a in range(3))
    return GeometricityReport(all(a.geometric for a in axes), axes)


def is_geometric(T: Tensor333, primes=DEFAULT_PRIMES) -> bool:
    return geometricity_report(T, primes).geometric


# --- relations and triples ------------------------------------------------------

def relation_subspace(T: Tensor333) -> Subspace:
    """Span of the axis-2 slices inside V0 (x) V1 (index 3i + j)."""
    s = span(T.field, axis_slices(T, 2), 9)
    if s.dim != 3:
        raise DegenerateInput("axis-2 contraction has rank %d; not a relation point" % s.dim)
    return s


def slice_forms(T: Tensor333, axis: int = 2) -> list:
    """Axis slices as bilinear Polys in the six variables of the two remaining factors."""
    a1, a2 = _other_axes(axis)
    names = AXIS_NAMES[a1] + AXIS_NAMES[a2]
    f = T.field
    out = []
    for v in axis_slices(T, axis):
        terms = {}
        for r in range(3):
            for c in range(3):
                e = [0] * 6
                e[r] += 1
                e[3 + c] += 1
                terms[tuple(e)] = v[3 * r + c]
        out.append(Poly(6, terms, f, names))
    return out


def _forms_to_vectors(forms) -> list:
    vecs = []
    for g in forms:
        v = [g.field.zero] * 9
        for e, c in g.terms.items():
            i = e.index(1)
            j = e.index(1, 3) - 3
            v[3 * i + j] = c
        vecs.append(v)
    return vecs


@dataclass(frozen=True)
class TripleModel:
    curve: Poly
    forms: tuple
    smooth: bool
    L0: str = "pullback of O(1) from factor 0"
    L1: str = "pullback of O(1) from factor 1"
    translation: tuple | None = None
    parameter: tuple | None = None

    def to_json(self) -> dict:
        f = self.curve.field
        fmt = lambda pt: None if pt is None else [f.format(c) for c in pt]
        return {"curve": self.curve.to_json(), "smooth": self.smooth,
                "forms": [g.to_json() for g in self.forms], "L0": self.L0, "L1": self.L1,
                "translation": fmt(self.translation), "parameter": fmt(self.parameter)}


def triple_of_tensor(T: Tensor333, check_geometric: bool = True, primes=DEFAULT_PRIMES) -> TripleModel:
    if not T:
        raise InvalidInput("zero tensor")
    F = det_cubic(T, 0)
    if not F:
        raise NoDeterminantalCurve("det M(x) vanishes identically")
    if check_geometric and not is_geometric(T, primes):
        raise NotGeometric("tensor is not geometric")
    smooth = cubic_is_smooth(F) if F.field.characteristic != 2 else False
    forms = tuple(slice_forms(T, 2))
    f = T.field
    o = (f.one, -f.one, f.zero)
    translation = parameter = None
    if smooth and not F.evaluate(list(o)):
        q = graph_image(forms, o)
        translation = q
        parameter = projective_point((q[1], q[0], q[2]), f)
    return TripleModel(F.with_names(AXIS_NAMES[0]), forms, smooth, translation=translation, parameter=parameter)


def quadruple_of_triple(p, field: Field | None = None) -> Tensor333:
    """The line (R0 (x) V2) cap (V0 (x) R1) built from the graph forms of the triple of (u:v:w)."""
    u, v, w = projective_point(p, field)
    f = field or common_field([u, v, w])
    # both relation spaces are the (v,u,w) graph forms; R1 lives on V1 (x) V2
    vecs = _forms_to_vectors(graph_forms((v, u, w), f))
    R0 = span(f, vecs, 9)
    R1 = span(f, vecs, 9)
    if R0.dim != 3:
        raise InternalInconsistency("graph forms of %r are dependent" % ((u, v, w),))
    left = [[r[m // 3] if m % 3 == k else f.zero for m in range(27)] for r in R0.basis for k in range(3)]
    right = [[r[m - 9 * i] if m // 9 == i else f.zero for m in range(27)] for r in R1.basis for i in range(3)]
    # left: (r (x) e_k)[3*(3i+j) + k] = r[3i+j]; right: (e_i (x) r)[9i + (3j+k)] = r[3j+k]
    A = span(f, left, 27)
    B = span(f, right, 27)
    W = intersect(A, B)
    if W.dim != 1:
        raise InternalInconsistency("(R0 (x) V2) cap (V0 (x) R1) has dimension %d" % W.dim)
    return Tensor333(f, W.basis[0])


# --- stability ------------------------------------------------------------------

STABLE = "stable"
DET_DEGENERATE = "not-stable: det-degenerate"
SINGULAR_CURVE = "not-stable: singular-curve"
NOT_GEOMETRIC = "not-geometric"


@dataclass(frozen=True)
class StabilityReport:
    label: str
    geometric: bool | None
    det_zero: bool
    smooth: bool | None

    def to_json(self) -> dict:
        return {"label": self.label, "geometric": self.geometric, "det_identically_zero": self.det_zero,
                "smooth_curve": self.smooth}


def classify_stability(T: Tensor333, primes=DEFAULT_PRIMES) -> StabilityReport:
    """Labels, in order: det-degenerate, singular-curve, not-geometric, stable."""
    if not T:
        raise InvalidInput("zero tensor")
    F = det_cubic(T, 0)
    try:
        geometric = is_geometric(T, primes)
    except Inconclusive:
        geometric = None
    if not F:
        return StabilityReport(DET_DEGENERATE, geometric, True, None)
    smooth = cubic_is_smooth(F)
    if not smooth:
        return StabilityReport(SINGULAR_CURVE, geometric, False, False)
    if geometric is None:
        raise Inconclusive("geometricity undecided for a tensor with smooth determinantal cubic")
    if not geometric:
        return StabilityReport(NOT_GEOMETRIC, False, False, True)
    return StabilityReport(STABLE, True, False, True)
