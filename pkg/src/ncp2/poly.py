"""Sparse multivariate polynomials over the exact fields, and the Laurent-data
expansion used for GK-dimension profiles.

Terms are kept in a dict exponent-tuple -> nonzero coefficient; iteration
and serialization always use graded-lex order (highest term first).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Mapping, Sequence

from ncp2.errors import DimensionMismatch, FieldMismatch, InvalidInput
from ncp2.exact.fields import QQ, Field, common_field, parse_scalar

__all__ = ["Poly", "grlex_key", "det3_linear", "LaurentData", "GKProfile", "gk_profile", "perm_sign"]


def grlex_key(exp: tuple):
    return (sum(exp), exp)


class Poly:
    __slots__ = ("nvars", "field", "terms", "names")

    def __init__(self, nvars: int, terms: Mapping | None = None, field: Field = QQ, names: Sequence[str] | None = None):
        self.nvars = nvars
        self.field = field
        self.names = tuple(names) if names is not None else None
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise DimensionMismatch("exponent %r in %d variables" % (e, nvars))
                c = field(c)
                if c:
                    clean[e] = c
        self.terms = clean

    @classmethod
    def _raw(cls, nvars, terms, field, names):
        p = cls.__new__(cls)
        p.nvars, p.terms, p.field, p.names = nvars, terms, field, names
        return p

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, field: Field = QQ, names=None) -> "Poly":
        return cls(nvars, None, field, names)

    @classmethod
    def const(cls, c, nvars: int, field: Field = QQ, names=None) -> "Poly":
        return cls(nvars, {(0,) * nvars: c}, field, names)

    @classmethod
    def var(cls, i: int, nvars: int, field: Field = QQ, names=None) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, field, names)

    @classmethod
    def gens(cls, nvars: int, field: Field = QQ, names=None) -> list:
        return [cls.var(i, nvars, field, names) for i in range(nvars)]

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1, field: Field = QQ, names=None) -> "Poly":
        return cls(len(exp), {tuple(exp): coeff}, field, names)

    @classmethod
    def linear(cls, coeffs: Sequence, field: Field | None = None, names=None) -> "Poly":
        n = len(coeffs)
        if field is None:
            field = common_field(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, terms, field, names)

    # basic protocol ---------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise DimensionMismatch("polynomials in %d and %d variables" % (self.nvars, other.nvars))
            if other.field != self.field:
                raise FieldMismatch("polynomials over %s and %s" % (self.field, other.field))
            return other
        return Poly.const(other, self.nvars, self.field, self.names)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self == self._coerce(other)
        except Exception:
            return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(), key=lambda t: t[0])))

    def __add__(self, other):
        o = self._coerce(other)
        terms = dict(self.terms)
        for e, c in o.terms.items():
            v = terms.get(e)
            if v is None:
                terms[e] = c
            else:
                v = v + c
                if v:
                    terms[e] = v
                else:
                    del terms[e]
        return Poly._raw(self.nvars, terms, self.field, self.names)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()}, self.field, self.names)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.field(other)
            if not c:
                return Poly.zero(self.nvars, self.field, self.names)
            return Poly._raw(self.nvars, {e: v * c for e, v in self.terms.items()}, self.field, self.names)
        o = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly._raw(self.nvars, {e: c for e, c in out.items() if c}, self.field, self.names)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise InvalidInput("negative polynomial power")
        result = Poly.const(1, self.nvars, self.field, self.names)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Poly":
        return self * c

    # structure --------------------------------------------------------------
    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise InvalidInput("zero polynomial has no leading term")
        return self.sorted_terms()[0]

    def leading_coefficient(self):
        return self.leading_term()[1]

    def monic(self) -> "Poly":
        return self * (self.field.one / self.leading_coefficient())

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if len(degs) > 1:
            return False
        return degree is None or not degs or degs == {degree}

    def coefficient(self, exp: Sequence[int]):
        return self.terms.get(tuple(exp), self.field.zero)

    def monomials(self) -> list:
        return [e for e, _ in self.sorted_terms()]

    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Poly(self.nvars, out, self.field, self.names)

    def gradient(self) -> list:
        return [self.diff(i) for i in range(self.nvars)]

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise DimensionMismatch("evaluation point of length %d for %d variables" % (len(point), self.nvars))
        f = self.field
        pt = [f(x) for x in point]
        total = f.zero
        for e, c in self.terms.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term = term * x ** k
            total = total + term
        return total

    def compose(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute variable i -> images[i] (all images share one ring)."""
        if len(images) != self.nvars:
            raise DimensionMismatch("need %d images" % self.nvars)
        ring = images[0]
        result = Poly.zero(ring.nvars, ring.field, ring.names)
        cache: dict = {}
        for e, c in self.terms.items():
            term = Poly.const(c, ring.nvars, ring.field, ring.names)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            result = result + term
        return result

    def linear_substitution(self, m) -> "Poly":
        """x_i -> sum_j m[i][j] x_j for a square matrix given as rows."""
        rows = m.rows if hasattr(m, "rows") else m
        images = [Poly.linear(list(r), self.field, self.names) for r in rows]
        return self.compose(images)

    def change_field(self, field: Field) -> "Poly":
        return Poly(self.nvars, {e: field(c) for e, c in self.terms.items()}, field, self.names)

    def with_names(self, names) -> "Poly":
        return Poly._raw(self.nvars, self.terms, self.field, tuple(names))

    # serialization ----------------------------------------------------------
    def to_json(self) -> list:
        return [[list(e), self.field.format(c)] for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: list, nvars: int | None = None, field: Field | None = None) -> "Poly":
        if nvars is None:
            if not data:
                raise InvalidInput("cannot infer arity of an empty polynomial")
            nvars = len(data[0][0])
        coeffs = [parse_scalar(c) if isinstance(c, str) else c for _, c in data]
        if field is None:
            field = common_field(coeffs)
        return cls(nvars, {tuple(e): c for (e, _), c in zip(data, coeffs)}, field)

    def __repr__(self):
        if not self.terms:
            return "0"
        names = self.names or tuple("x%d" % i for i in range(self.nvars))
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else "%s^%d" % (n, k) for n, k in zip(names, e) if k)
            cs = self.field.format(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append("(%s)*%s" % (cs, mono))
        return " + ".join(parts).replace("+ -", "- ")


def perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def det3_linear(m: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a 3x3 matrix of linear forms (cofactor expansion)."""
    if len(m) != 3 or any(len(r) != 3 for r in m):
        raise DimensionMismatch("det3_linear needs a 3x3 matrix")
    for r in m:
        for e in r:
            if e and not e.is_homogeneous(1):
                raise InvalidInput("entry %r is not a linear form" % (e,))
    a, b, c = m
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def det_permutation_sum(m: Sequence[Sequence]):
    """Leibniz formula; independent of det3_linear's cofactor route."""
    n = len(m)
    total = None
    for perm in permutations(range(n)):
        term = m[0][perm[0]]
        for i in range(1, n):
            term = term * m[i][perm[i]]
        term = term * perm_sign(perm)
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class LaurentData:
    """Integer Laurent polynomial sum_k coeffs[k] t^(low + k)."""

    low: int
    coeffs: tuple

    @classmethod
    def from_dict(cls, d: Mapping[int, int]) -> "LaurentData":
        d = {int(k): int(v) for k, v in d.items() if v}
        if not d:
            return cls(0, ())
        lo, hi = min(d), max(d)
        return cls(lo, tuple(d.get(k, 0) for k in range(lo, hi + 1)))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], low: int = 0) -> "LaurentData":
        return cls.from_dict({low + i: c for i, c in enumerate(coeffs)})

    def as_dict(self) -> dict:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c}

    def at_one(self) -> int:
        return sum(self.coeffs)

    def __add__(self, other: "LaurentData") -> "LaurentData":
        d = self.as_dict()
        for k, v in other.as_dict().items():
            d[k] = d.get(k, 0) + v
        return LaurentData.from_dict(d)

    def __sub__(self, other: "LaurentData") -> "LaurentData":
        return self + other.scale(-1)

    def scale(self, c: int) -> "LaurentData":
        return LaurentData.from_dict({k: c * v for k, v in self.as_dict().items()})

    def __mul__(self, other: "LaurentData") -> "LaurentData":
        d: dict = {}
        for k1, v1 in self.as_dict().items():
            for k2, v2 in other.as_dict().items():
                d[k1 + k2] = d.get(k1 + k2, 0) + v1 * v2
        return LaurentData.from_dict(d)

    def divide_one_minus_t(self) -> "LaurentData":
        """Exact quotient by (1 - t); requires value 0 at t = 1."""
        if self.at_one() != 0:
            raise InvalidInput("(1-t) does not divide a Laurent polynomial with q(1) != 0")
        # q = (1 - t) h  <=>  h_k = sum_{m <= k} q_m
        out, acc = [], 0
        for c in self.coeffs:
            acc += c
            out.append(acc)
        assert out[-1] == 0 if out else True
        return LaurentData.from_coeffs(out[:-1], self.low)

    def to_json(self) -> dict:
        return {str(k): v for k, v in sorted(self.as_dict().items())}


ONE_MINUS_T = LaurentData(0, (1, -1))


@dataclass(frozen=True)
class GKProfile:
    rank: int
    a: int
    b: int
    f_at_1: int
    gkdim: int | None
    remainder: LaurentData

    def to_json(self) -> dict:
        return {"r": self.rank, "a": self.a, "b": self.b, "f_at_1": self.f_at_1,
                "gkdim": self.gkdim, "f": self.remainder.to_json()}


def _gk_from_signs(r: int, a: int, b: int, f1: int) -> int | None:
    if r > 0:
        return 3
    if r == 0 and a > 0:
        return 2
    if r == 0 and a == 0 and b > 0:
        return 1
    if r == 0 and a == 0 and b == 0 and f1 > 0:
        return 0
    return None


def gk_profile(q: LaurentData) -> GKProfile:
    """Expand q = r + a(1-t) + b(1-t)^2 + f(t)(1-t)^3 and read off the GK-dimension.

    ``gkdim`` is None when the sign pattern matches no row of the table
    (such a q is not the characteristic polynomial of a module).
    """
    r = q.at_one()
    q1 = (q - LaurentData.from_dict({0: r})).divide_one_minus_t()
    a = q1.at_one()
    q2 = (q1 - LaurentData.from_dict({0: a})).divide_one_minus_t()
    b = q2.at_one()
    f = (q2 - LaurentData.from_dict({0: b})).divide_one_minus_t()
    f1 = f.at_one()
    return GKProfile(r, a, b, f1, _gk_from_signs(r, a, b, f1), f)


def reconstruct(profile: GKProfile) -> LaurentData:
    s = ONE_MINUS_T
    return (LaurentData.from_dict({0: profile.rank})
            + s.scale(profile.a)
            + (s * s).scale(profile.b)
            + profile.remainder * s * s * s)


def characteristic_polynomial(dims: Sequence[int]) -> LaurentData:
    """q(t) = h(t)(1-t)^3 for a finite list of graded dimensions (truncated)."""
    h = LaurentData.from_coeffs(list(dims))
    q = h * ONE_MINUS_T * ONE_MINUS_T * ONE_MINUS_T
    return LaurentData.from_dict({k: v for k, v in q.as_dict().items() if k < len(dims)})
