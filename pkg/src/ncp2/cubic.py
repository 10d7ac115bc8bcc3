"""Ternary-cubic invariants S (degree 4) and T (degree 6) and the smoothness test.

The invariants are not copied from a table: they are recovered as the
kernel of the sl3 coefficient derivations on weight-zero coefficient
polynomials, then scaled so that on y^2 z - x^3 - a x z^2 - b z^3 one gets
S = a and T = b.  The discriminant is then 4 S^3 + 27 T^2.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement

from ncp2.errors import DegenerateInput, InvalidInput, UnsupportedField
from ncp2.exact.fields import QQ
from ncp2.exact.linalg import Matrix, kernel
from ncp2.poly import Poly, grlex_key

__all__ = ["CUBIC_MONOMIALS", "cubic_coefficients", "aronhold_forms", "cubic_invariants_ST",
           "cubic_discriminant", "cubic_is_smooth"]

CUBIC_MONOMIALS = tuple(sorted(
    [(i, j, 3 - i - j) for i in range(4) for j in range(4 - i)], key=grlex_key, reverse=True))
_INDEX = {e: k for k, e in enumerate(CUBIC_MONOMIALS)}


def _check_cubic(F: Poly):
    if F.nvars != 3:
        raise InvalidInput("expected a ternary form, got %d variables" % F.nvars)
    if F and not F.is_homogeneous(3):
        raise InvalidInput("expected a homogeneous cubic")


def cubic_coefficients(F: Poly) -> list:
    _check_cubic(F)
    return [F.coefficient(e) for e in CUBIC_MONOMIALS]


def _weight(mono: tuple) -> tuple:
    w = [0, 0, 0]
    for k, n in enumerate(mono):
        if n:
            e = CUBIC_MONOMIALS[k]
            for i in range(3):
                w[i] += n * e[i]
    return tuple(w)


def _derivation(a: int, b: int, P: Poly) -> Poly:
    """Coefficient action of x_a d/dx_b:  c_f -> (f_b + 1) c_{f + 1_b - 1_a}."""
    out = Poly.zero(10, P.field)
    for k, f in enumerate(CUBIC_MONOMIALS):
        if not f[a]:
            continue
        src = list(f)
        src[a] -= 1
        src[b] += 1
        image = Poly.var(_INDEX[tuple(src)], 10, P.field) * (f[b] + 1)
        dP = P.diff(k)
        if dP:
            out = out + dP * image
    return out


@lru_cache(maxsize=None)
def _invariant_space(degree: int) -> tuple:
    target = (degree, degree, degree)
    monos = []
    for combo in combinations_with_replacement(range(10), degree):
        e = [0] * 10
        for k in combo:
            e[k] += 1
        e = tuple(e)
        if _weight(e) == target:
            monos.append(e)
    columns = []
    for e in monos:
        m = Poly.monomial(e, 1, QQ)
        images = [_derivation(a, b, m) for a in range(3) for b in range(3) if a != b]
        columns.append(images)
    # rows indexed by (derivation, output monomial)
    keys = sorted({(d, o) for col in columns for d, img in enumerate(col) for o in img.terms})
    row_of = {k: r for r, k in enumerate(keys)}
    rows = [[0] * len(monos) for _ in keys]
    for j, col in enumerate(columns):
        for d, img in enumerate(col):
            for o, c in img.terms.items():
                rows[row_of[(d, o)]][j] = c
    ker = kernel(Matrix.from_rows(rows, QQ, ncols=len(monos)))
    return tuple(Poly(10, dict(zip(monos, v)), QQ) for v in ker.basis)


def _weierstrass(a, b, field=QQ) -> Poly:
    x, y, z = Poly.gens(3, field)
    return y * y * z - x ** 3 - x * z * z * a - z ** 3 * b


@lru_cache(maxsize=None)
def aronhold_forms() -> tuple:
    """(S, T) as polynomials in the ten coefficients (grlex monomial order)."""
    (s_raw,) = _invariant_space(4)
    (t_raw,) = _invariant_space(6)
    # probes: S must be proportional to a, T to b on the calibration family
    s1 = s_raw.evaluate(cubic_coefficients(_weierstrass(1, 0)))
    t1 = t_raw.evaluate(cubic_coefficients(_weierstrass(0, 1)))
    return s_raw * (1 / s1), t_raw * (1 / t1)


def _eval_in_field(form: Poly, coeffs: list, field):
    try:
        return form.change_field(field).evaluate([field(c) for c in coeffs])
    except InvalidInput as exc:
        raise UnsupportedField("invariant normalization not defined in %s" % field) from exc


def cubic_invariants_ST(F: Poly):
    coeffs = cubic_coefficients(F)
    S, T = aronhold_forms()
    return _eval_in_field(S, coeffs, F.field), _eval_in_field(T, coeffs, F.field)


def cubic_discriminant(F: Poly):
    S, T = cubic_invariants_ST(F)
    return S ** 3 * 4 + T ** 2 * 27


def cubic_is_smooth(F: Poly) -> bool:
    _check_cubic(F)
    if not F:
        raise DegenerateInput("zero cubic has no curve")
    if F.field.characteristic in (2,):
        raise UnsupportedField("discriminant test needs characteristic != 2, 3")
    return bool(cubic_discriminant(F))
