"""Exact scalar fields: Q, Q(w) with w^2 + w + 1 = 0, and F_p for primes p != 3.

Elements are plain Python objects with arithmetic operators so that generic
code (elimination, polynomial arithmetic) can be written once.  Rationals are
:class:`fractions.Fraction`; the other two fields use the small classes below.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from ncp2.errors import FieldMismatch, InvalidInput, UnsupportedField

__all__ = [
    "Field", "Rationals", "Cyclotomic", "PrimeField", "Cyclo", "ModP",
    "QQ", "QW", "GF", "is_prime", "field_of", "common_field", "parse_scalar",
    "format_scalar", "parse_field",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Cyclo:
    """a + b*w in Q(w), stored as two reduced Fractions."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = a if isinstance(a, Fraction) else Fraction(a)
        self.b = b if isinstance(b, Fraction) else Fraction(b)

    @staticmethod
    def _lift(x):
        if isinstance(x, Cyclo):
            return x
        if isinstance(x, (int, Fraction)):
            return Cyclo(x, 0)
        if isinstance(x, ModP):
            raise FieldMismatch("cannot combine Q(w) and F_%d elements" % x.p)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Cyclo(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Cyclo(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Cyclo(o.a - self.a, o.b - self.b)

    def __neg__(self):
        return Cyclo(-self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclo(self.a * other, self.b * other)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        # w^2 = -1 - w
        bd = self.b * o.b
        return Cyclo(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def conjugate(self) -> "Cyclo":
        # w -> w^2 = -1 - w
        return Cyclo(self.a - self.b, -self.b)

    def inverse(self) -> "Cyclo":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(w)")
        c = self.conjugate()
        return Cyclo(c.a / n, c.b / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = Cyclo(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Cyclo):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return "Cyclo(%s)" % QW.format(self)


class ModP:
    """Residue class v mod p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _lift(self, x):
        if isinstance(x, ModP):
            if x.p != self.p:
                raise FieldMismatch("F_%d vs F_%d" % (self.p, x.p))
            return x.v
        if isinstance(x, int):
            return x
        if isinstance(x, (Fraction, Cyclo)):
            raise FieldMismatch("cannot combine F_%d with %r" % (self.p, x))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ModP(o - self.v, self.p)

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def inverse(self) -> "ModP":
        if self.v == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.p)
        return ModP(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return ModP(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ModP(o, self.p) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ModP(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return (other - self.v) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return "ModP(%d, %d)" % (self.v, self.p)


class Field:
    """Common interface of the three supported fields."""

    name = "abstract"
    characteristic = 0

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def has_omega(self) -> bool:
        return False

    def omega(self):
        raise UnsupportedField("%s has no primitive cube root of unity" % self.name)

    def contains(self, x) -> bool:
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def parse(self, s: str):
        return self(parse_scalar(s))

    def __repr__(self):
        return self.name


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else "%d/%d" % (q.numerator, q.denominator)


class Rationals(Field):
    name = "rational"
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, Cyclo):
            if x.b != 0:
                raise FieldMismatch("%r is not rational" % x)
            return x.a
        if isinstance(x, ModP):
            raise FieldMismatch("F_%d element given to Q" % x.p)
        if isinstance(x, str):
            return self(parse_scalar(x))
        raise InvalidInput("cannot coerce %r into Q" % (x,))

    def contains(self, x) -> bool:
        return isinstance(x, (int, Fraction))

    def format(self, x) -> str:
        return _fmt_fraction(self(x))


class Cyclotomic(Field):
    name = "cyclotomic"
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, Cyclo):
            return x
        if isinstance(x, (int, Fraction)):
            return Cyclo(x, 0)
        if isinstance(x, ModP):
            raise FieldMismatch("F_%d element given to Q(w)" % x.p)
        if isinstance(x, str):
            return self(parse_scalar(x))
        raise InvalidInput("cannot coerce %r into Q(w)" % (x,))

    def has_omega(self) -> bool:
        return True

    def omega(self):
        return Cyclo(0, 1)

    def contains(self, x) -> bool:
        return isinstance(x, (int, Fraction, Cyclo))

    def format(self, x) -> str:
        x = self(x)
        b = x.b
        sign = "-" if b < 0 else "+"
        return "%s%s%sw" % (_fmt_fraction(x.a), sign, _fmt_fraction(abs(b)))


class PrimeField(Field):
    characteristic: int

    def __init__(self, p: int):
        if not is_prime(p):
            raise InvalidInput("%d is not prime" % p)
        if p == 3:
            raise UnsupportedField("characteristic 3 is excluded")
        self.p = p
        self.characteristic = p
        self.name = "F%d" % p

    def __call__(self, x):
        if isinstance(x, ModP):
            if x.p != self.p:
                raise FieldMismatch("F_%d element given to F_%d" % (x.p, self.p))
            return x
        if isinstance(x, int):
            return ModP(x, self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise InvalidInput("%s has no reduction mod %d" % (x, self.p))
            return ModP(x.numerator * pow(x.denominator, -1, self.p), self.p)
        if isinstance(x, Cyclo):
            if x.b == 0:
                return self(x.a)
            return self(x.a) + self(x.b) * self.omega()
        if isinstance(x, str):
            return self(parse_scalar(x))
        raise InvalidInput("cannot coerce %r into F_%d" % (x, self.p))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def has_omega(self) -> bool:
        return self.p % 3 == 1

    def omega(self):
        """The smallest residue of exact multiplicative order 3."""
        if not self.has_omega():
            raise UnsupportedField("F_%d has no primitive cube root of unity (p != 1 mod 3)" % self.p)
        for g in range(2, self.p):
            if pow(g, 3, self.p) == 1:
                return ModP(g, self.p)
        raise AssertionError("unreachable")

    def contains(self, x) -> bool:
        return isinstance(x, int) or (isinstance(x, ModP) and x.p == self.p)

    def format(self, x) -> str:
        return "%d mod %d" % (self(x).v, self.p)

    def elements(self):
        return [ModP(v, self.p) for v in range(self.p)]


QQ = Rationals()
QW = Cyclotomic()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_of(x) -> Field | None:
    """Smallest field that naturally houses ``x``; ``None`` for plain ints."""
    if isinstance(x, ModP):
        return GF(x.p)
    if isinstance(x, Cyclo):
        return QW
    if isinstance(x, Fraction):
        return QQ
    if isinstance(x, int):
        return None
    raise InvalidInput("not a scalar: %r" % (x,))


def common_field(values, default: Field = QQ) -> Field:
    """Field containing every value; raises FieldMismatch on incompatible mixes."""
    found = None
    for v in values:
        f = field_of(v)
        if f is None:
            continue
        if found is None:
            found = f
        elif f is found or f == found:
            continue
        elif {f, found} == {QQ, QW}:
            found = QW
        else:
            raise FieldMismatch("entries from %s and %s" % (found, f))
    return found if found is not None else default


_FRAC = r"[+-]?\d+(?:/\d+)?"
_MODP_RE = re.compile(r"^\s*([+-]?\d+)\s*mod\s*(\d+)\s*$")
_RAT_RE = re.compile(r"^\s*(%s)\s*$" % _FRAC)


def parse_scalar(s: str):
    """Parse ``"p/q"``, ``"a+bw"`` or ``"v mod p"``."""
    if not isinstance(s, str):
        raise InvalidInput("expected a string scalar, got %r" % (s,))
    m = _MODP_RE.match(s)
    if m:
        return GF(int(m.group(2)))(int(m.group(1)))
    m = _RAT_RE.match(s)
    if m:
        return Fraction(m.group(1))
    t = s.replace(" ", "")
    if t.endswith("w"):
        body = t[:-1].rstrip("*")
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut > 0:
            a_part, b_part = body[:cut], body[cut:]
        else:
            a_part, b_part = "0", body
        try:
            a = Fraction(a_part)
            b = Fraction(b_part + "1") if b_part in ("", "+", "-") else Fraction(b_part)
        except ValueError:
            raise InvalidInput("cannot parse scalar %r" % s) from None
        return Cyclo(a, b)
    raise InvalidInput("cannot parse scalar %r" % s)


def format_scalar(x, field: Field | None = None) -> str:
    if field is None:
        field = field_of(x) or QQ
    return field.format(x)


def parse_field(spec: str) -> Field:
    """``rational``/``Q``, ``cyclotomic``/``Q(w)``, or ``prime:P``/``F7``/``7``."""
    s = spec.strip().lower()
    if s in ("rational", "q", "qq"):
        return QQ
    if s in ("cyclotomic", "q(w)", "qw", "q(omega)"):
        return QW
    for prefix in ("prime:", "f", "gf", "p"):
        if s.startswith(prefix) and s[len(prefix):].isdigit():
            return GF(int(s[len(prefix):]))
    if s.isdigit():
        return GF(int(s))
    raise InvalidInput("unknown field %r" % spec)
