import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncp2.errors import DimensionMismatch, FieldMismatch, InvalidInput, UnsupportedField
from ncp2.exact.fields import (GF, QQ, QW, Cyclo, ModP, common_field, format_scalar, parse_field,
                               parse_scalar)
from ncp2.exact.linalg import Matrix, Subspace, full_space, intersect, kernel, plucker, rref, span
from oracles import brute_force_kernel_dim

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
cyclos = st.builds(Cyclo, fractions, fractions)


# --- fields -----------------------------------------------------------------------

def test_omega_squared():
    w = Cyclo(0, 1)
    assert w * w == Cyclo(-1, -1)
    assert w ** 3 == 1
    assert 1 + w + w * w == 0


def test_rationals_reduced():
    x = QQ(Fraction(6, -4))
    assert (x.numerator, x.denominator) == (-3, 2)


@given(cyclos, cyclos, cyclos)
def test_cyclotomic_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(cyclos)
def test_cyclotomic_inverse(a):
    if a:
        assert a * a.inverse() == 1
        assert a.norm() == (a * a.conjugate()).a


def test_prime_field_omega_and_mixing():
    f = GF(13)
    w = f.omega()
    assert w.v == 3 and w ** 3 == 1 and w != 1
    with pytest.raises(FieldMismatch):
        ModP(1, 7) + ModP(1, 13)
    with pytest.raises(FieldMismatch):
        ModP(1, 7) + Fraction(1, 2)
    with pytest.raises(UnsupportedField):
        GF(3)
    with pytest.raises(UnsupportedField):
        GF(5).omega()
    with pytest.raises(InvalidInput):
        GF(9)


def test_cyclotomic_in_prime_field():
    f = GF(7)
    x = f(Cyclo(1, 2))
    assert x == 1 + 2 * f.omega().v


def test_common_field():
    assert common_field([1, Fraction(1, 2)]) == QQ
    assert common_field([1, Cyclo(0, 1)]) == QW
    assert common_field([ModP(2, 7), 3]) == GF(7)
    with pytest.raises(FieldMismatch):
        common_field([ModP(2, 7), Cyclo(0, 1)])


@pytest.mark.parametrize("text,value", [
    ("3/4", Fraction(3, 4)), ("-2", Fraction(-2)), ("0+1w", Cyclo(0, 1)),
    ("1/2-3/4w", Cyclo(Fraction(1, 2), Fraction(-3, 4))), ("w", Cyclo(0, 1)), ("5 mod 7", ModP(5, 7)),
])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


@given(cyclos)
def test_cyclotomic_format_roundtrip(a):
    assert parse_scalar(format_scalar(a, QW)) == a


@given(fractions)
def test_rational_format_roundtrip(a):
    assert parse_scalar(QQ.format(a)) == a


def test_parse_field():
    assert parse_field("rational") == QQ
    assert parse_field("cyclotomic") == QW
    assert parse_field("prime:13") == GF(13)


# --- linear algebra ------------------------------------------------------------------

def test_rref_examples():
    I = Matrix.identity(3)
    r, k = rref(I)
    assert k == 3 and r == I
    Z = Matrix.zeros(2, 5)
    r, k = rref(Z)
    assert k == 0
    r, k = rref(Matrix.from_rows([[1, 2], [2, 4]]))
    assert k == 1 and r.rows[0] == (1, 2)


def test_rref_field_mismatch():
    with pytest.raises(FieldMismatch):
        Matrix.from_rows([[ModP(1, 7), ModP(1, 13)]])


def test_kernel_examples():
    assert kernel(Matrix.identity(3)).dim == 0
    k = kernel(Matrix.from_rows([[1, 1, 1]]))
    assert k.dim == 2 and k.contains([1, -1, 0])
    assert kernel(Matrix.zeros(2, 4)).dim == 4


def test_intersect_examples():
    a = span(QQ, [[1, 0, 0], [0, 1, 0]], 3)
    b = span(QQ, [[0, 1, 0], [0, 0, 1]], 3)
    assert intersect(a, b) == span(QQ, [[0, 1, 0]], 3)
    assert intersect(a, a) == a
    with pytest.raises(DimensionMismatch):
        intersect(a, full_space(4))


def test_plucker_examples():
    s = span(QQ, [[1 if i == j else 0 for i in range(9)] for j in range(3)], 9)
    p = plucker(s)
    assert len(p) == 84 and p[0] == 1 and sum(1 for c in p if c) == 1
    s2 = span(QQ, [s.basis[2], s.basis[0], [2 * x for x in s.basis[1]]], 9)
    assert plucker(s2) == p
    with pytest.raises(InvalidInput):
        plucker(Subspace(QQ, 9, ()))


def _random_rows(rng, nrows, ncols, field):
    return [[field(rng.randint(-3, 3)) for _ in range(ncols)] for _ in range(nrows)]


@pytest.mark.parametrize("field", [QQ, GF(7), QW])
def test_dimension_formula(field):
    rng = random.Random(11)
    for _ in range(15):
        n = rng.randint(2, 6)
        A = span(field, _random_rows(rng, rng.randint(0, n), n, field), n)
        B = span(field, _random_rows(rng, rng.randint(0, n), n, field), n)
        assert (A + B).dim + intersect(A, B).dim == A.dim + B.dim


@pytest.mark.parametrize("field", [QQ, GF(5)])
def test_rref_idempotent_and_basis_independent(field):
    rng = random.Random(3)
    for _ in range(10):
        m = Matrix.from_rows(_random_rows(rng, 4, 5, field), field)
        r, k = rref(m)
        assert rref(r)[0] == r
        rows = list(m.rows)
        rng.shuffle(rows)
        mixed = [[a + b for a, b in zip(rows[0], rows[1])]] + rows[1:]
        assert span(field, m.rows, 5) == span(field, mixed, 5)


@pytest.mark.parametrize("p", [2, 5])
def test_kernel_matches_enumeration(p):
    rng = random.Random(p)
    f = GF(p)
    for _ in range(10):
        ncols = rng.randint(1, 3)
        rows = [[rng.randrange(p) for _ in range(ncols)] for _ in range(rng.randint(1, 3))]
        assert kernel(Matrix.from_rows(rows, f)).dim == brute_force_kernel_dim(rows, ncols, p)


def test_subspace_canonical_basis_shape():
    s = span(QQ, [[0, 2, 4], [0, 1, 3], [0, 0, 0]], 3)
    piv = s.pivots()
    assert piv == sorted(piv)
    assert all(r[c] == 1 for r, c in zip(s.basis, piv))


@settings(max_examples=30)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=4))
def test_kernel_dimension_rank_nullity(rows):
    m = Matrix.from_rows(rows, QQ)
    assert kernel(m).dim == 4 - m.rank()
    for v in kernel(m).basis:
        assert all(x == 0 for x in m.apply(v))
