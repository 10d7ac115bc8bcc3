"""The Hesse pencil t0 (x^3 + y^3 + z^3) + t1 xyz, its group law with origin
o = (1:-1:0), translations, torsion and the bilinear graph forms.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from ncp2.errors import (DegenerateInput, DimensionMismatch, InvalidInput, PencilDegenerate,
                         SingularCurve, UnsupportedField)
from ncp2.exact.fields import Field, PrimeField, common_field
from ncp2.exact.linalg import Matrix, kernel
from ncp2.poly import Poly

__all__ = ["projective_point", "HesseCurve", "CurvePoint", "member_through", "pencil_member",
           "base_points", "graph_forms", "graph_image", "graph_matrix"]


def projective_point(coords, field: Field | None = None) -> tuple:
    """Canonical representative: first nonzero coordinate equal to 1."""
    coords = list(coords)
    if field is None:
        field = common_field(coords)
    coords = [field(c) for c in coords]
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise InvalidInput("(0:...:0) is not a projective point")
    inv = field.one / lead
    return tuple(c * inv for c in coords)


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


@dataclass(frozen=True)
class CurvePoint:
    curve: "HesseCurve"
    coords: tuple

    def __iter__(self):
        return iter(self.coords)

    def __add__(self, other: "CurvePoint") -> "CurvePoint":
        return self.curve.add(self, other)

    def __neg__(self) -> "CurvePoint":
        return self.curve.neg(self)

    def __sub__(self, other: "CurvePoint") -> "CurvePoint":
        return self.curve.add(self, self.curve.neg(other))

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        return self.coords == other.coords and self.curve == other.curve

    def __hash__(self):
        return hash(self.coords)

    def to_json(self) -> list:
        f = self.curve.field
        return [f.format(c) for c in self.coords]

    def __repr__(self):
        return "(%s)" % ":".join(self.curve.field.format(c) for c in self.coords)


class HesseCurve:
    """Member t0 (x^3+y^3+z^3) + t1 xyz of the Hesse pencil."""

    def __init__(self, t0, t1, field: Field | None = None):
        if field is None:
            field = common_field([t0, t1])
        t0, t1 = field(t0), field(t1)
        if not t0 and not t1:
            raise PencilDegenerate("(t0:t1) = (0:0) does not define a member")
        # canonical pencil coordinates
        if t0:
            t0, t1 = field.one, t1 / t0
        else:
            t1 = field.one
        self.t0, self.t1, self.field = t0, t1, field
        x, y, z = Poly.gens(3, field, ("x", "y", "z"))
        self.cubic = (x ** 3 + y ** 3 + z ** 3) * t0 + x * y * z * t1
        self._grad = self.cubic.gradient()

    def __eq__(self, other):
        return isinstance(other, HesseCurve) and (self.t0, self.t1, self.field) == (other.t0, other.t1, other.field)

    def __hash__(self):
        return hash((self.t0, self.t1))

    def __repr__(self):
        f = self.field
        return "HesseCurve(%s : %s)" % (f.format(self.t0), f.format(self.t1))

    def to_json(self) -> dict:
        return {"t0": self.field.format(self.t0), "t1": self.field.format(self.t1),
                "cubic": self.cubic.to_json()}

    # --- predicates ----------------------------------------------------------
    def contains(self, pt) -> bool:
        coords = pt.coords if isinstance(pt, CurvePoint) else pt
        return not self.cubic.evaluate(list(coords))

    def is_smooth(self) -> bool:
        """False exactly for (t0:t1) = (0:1) and t1^3 = -27 t0^3 (the four triangles)."""
        return bool(self.t0) and bool(self.t1 ** 3 + self.t0 ** 3 * 27)

    def _require_smooth(self):
        if not self.is_smooth():
            raise SingularCurve("%r is singular; no group law" % self)

    def point(self, coords) -> CurvePoint:
        c = projective_point(coords, self.field)
        if not self.contains(c):
            raise InvalidInput("%r does not lie on %r" % (c, self))
        return CurvePoint(self, c)

    def origin(self) -> CurvePoint:
        f = self.field
        return CurvePoint(self, (f.one, -f.one, f.zero))

    def gradient(self, coords) -> tuple:
        return tuple(g.evaluate(list(coords)) for g in self._grad)

    # --- chord and tangent ---------------------------------------------------
    def third_intersection(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        """Third point of C on the line PQ (tangent line when P = Q)."""
        for X in (P, Q):
            if X.curve != self:
                raise InvalidInput("point %r is on a different curve" % (X,))
        p, q = P.coords, Q.coords
        F = self.cubic
        if p != q:
            # F(sP + tQ) = st (s A + t B) with A = grad F(P).Q, B = grad F(Q).P
            A = _dot(self.gradient(p), q)
            B = _dot(self.gradient(q), p)
            if not A and not B:
                raise DegenerateInput("line through %r and %r lies on the curve" % (P, Q))
            r = tuple(B * pi - A * qi for pi, qi in zip(p, q))
            return CurvePoint(self, projective_point(r, self.field))
        g = self.gradient(p)
        if not any(g):
            raise SingularCurve("%r is a singular point" % (P,))
        D = None
        f = self.field
        for k in range(3):
            e = [f.zero] * 3
            e[k] = f.one
            cand = _cross(g, e)
            if any(cand) and any(_cross(cand, p)):
                D = cand
                break
        # F(sP + tD) = t^2 (s B + t F(D)) with B = grad F(D).P
        FD = F.evaluate(list(D))
        B = _dot(self.gradient(D), p)
        if not FD and not B:
            raise DegenerateInput("tangent line at %r lies on the curve" % (P,))
        r = tuple(FD * pi - B * di for pi, di in zip(p, D))
        return CurvePoint(self, projective_point(r, self.field))

    def neg(self, P: CurvePoint) -> CurvePoint:
        """Inverse: the coordinate swap (x:y:z) -> (y:x:z)."""
        self._require_smooth()
        x, y, z = P.coords
        return CurvePoint(self, projective_point((y, x, z), self.field))

    def neg_chord(self, P: CurvePoint) -> CurvePoint:
        """Inverse via the chord through o."""
        self._require_smooth()
        return self.third_intersection(self.origin(), P)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        self._require_smooth()
        R = self.third_intersection(P, Q)
        return self.third_intersection(self.origin(), R)

    def translate(self, p: CurvePoint, P: CurvePoint) -> CurvePoint:
        return self.add(p, P)

    def mul(self, n: int, P: CurvePoint) -> CurvePoint:
        self._require_smooth()
        if n < 0:
            return self.mul(-n, self.neg(P))
        result, base = self.origin(), P
        while n:
            if n & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            n >>= 1
        return result

    def order(self, P: CurvePoint, bound: int = 10000) -> int:
        o = self.origin()
        Q, k = P, 1
        while Q != o:
            Q = self.add(Q, P)
            k += 1
            if k > bound:
                raise InvalidInput("order exceeds %d" % bound)
        return k

    # --- finite fields -------------------------------------------------------
    def points(self) -> list:
        """All points over a prime field, in canonical lexicographic order."""
        f = self.field
        if not isinstance(f, PrimeField):
            raise UnsupportedField("point enumeration needs a finite field")
        out = []
        for x, y, z in _projective_plane(f):
            if self.contains((x, y, z)):
                out.append(CurvePoint(self, (x, y, z)))
        return out

    def random_point(self, rng: random.Random) -> CurvePoint:
        pts = self.points()
        return pts[rng.randrange(len(pts))]


def _projective_plane(f: PrimeField):
    one, zero = f.one, f.zero
    els = f.elements()
    for y in els:
        for z in els:
            yield (one, y, z)
    for z in els:
        yield (zero, one, z)
    yield (zero, zero, one)


def pencil_member(t0, t1, field: Field | None = None) -> HesseCurve:
    return HesseCurve(t0, t1, field)


def member_through(p, field: Field | None = None) -> HesseCurve:
    """The member uvw (x^3+y^3+z^3) - (u^3+v^3+w^3) xyz through (u:v:w)."""
    u, v, w = projective_point(p, field)
    t0 = u * v * w
    t1 = -(u ** 3 + v ** 3 + w ** 3)
    if not t0 and not t1:
        raise PencilDegenerate("(%s) is a base point of the pencil" % ":".join(map(str, (u, v, w))))
    return HesseCurve(t0, t1, field or common_field([u, v, w]))


def base_points(curve_or_field) -> list:
    """The nine points with one zero coordinate and the other two in ratio 1 : -zeta."""
    if isinstance(curve_or_field, HesseCurve):
        curve, f = curve_or_field, curve_or_field.field
    else:
        curve, f = None, curve_or_field
    if not f.has_omega():
        raise UnsupportedField("%s has no primitive cube root of unity" % f)
    w = f.omega()
    roots = [f.one, w, w * w]
    raw = []
    for zeta in roots:
        raw.append((f.one, -zeta, f.zero))
        raw.append((f.zero, f.one, -zeta))
        raw.append((f.one, f.zero, -zeta))
    pts = [projective_point(c, f) for c in raw]
    if curve is None:
        return pts
    return [curve.point(c) for c in pts]


def graph_forms(p, field: Field | None = None) -> list:
    """f1 = a y0 z1 + b z0 y1 + c x0 x1 and its cyclic companions, in x0,y0,z0,x1,y1,z1."""
    a, b, c = projective_point(p, field) if field is not None else tuple(p)
    f = field or common_field([a, b, c])
    a, b, c = f(a), f(b), f(c)
    x0, y0, z0, x1, y1, z1 = Poly.gens(6, f, ("x0", "y0", "z0", "x1", "y1", "z1"))
    return [y0 * z1 * a + z0 * y1 * b + x0 * x1 * c,
            z0 * x1 * a + x0 * z1 * b + y0 * y1 * c,
            x0 * y1 * a + y0 * x1 * b + z0 * z1 * c]


def graph_matrix(forms, q) -> Matrix:
    """Rows: coefficients of each form in (x1, y1, z1) after x0 := q."""
    forms = list(forms)
    if any(g.nvars != 6 for g in forms):
        raise DimensionMismatch("bilinear forms in six variables expected")
    f = forms[0].field
    q = [f(c) for c in q]
    rows = []
    for g in forms:
        row = [f.zero] * 3
        for e, c in g.terms.items():
            if sum(e[:3]) != 1 or sum(e[3:]) != 1:
                raise InvalidInput("form is not bilinear")
            i = e.index(1)
            j = e.index(1, 3) - 3
            row[j] = row[j] + c * q[i]
        rows.append(row)
    return Matrix.from_rows(rows, f)


def graph_image(forms, q) -> tuple:
    """The unique (x1:y1:z1) with f_i(q, x1) = 0 for all i."""
    m = graph_matrix(forms, q)
    k = kernel(m)
    if k.dim != 1:
        raise DegenerateInput("bilinear system at %r has a %d-dimensional solution space" % (tuple(q), k.dim))
    return projective_point(k.basis[0], m.field)
