import random

import pytest

from ncp2.cubic import cubic_is_smooth
from ncp2.errors import (DegenerateInput, InvalidInput, NoDeterminantalCurve, NotGeometric,
                         PencilDegenerate, SingularCurve, UnsupportedField)
from ncp2.exact.fields import GF, QQ, QW, Cyclo
from ncp2.exact.linalg import Matrix, det, span
from ncp2.hesse import (HesseCurve, base_points, graph_forms, graph_image, graph_matrix, member_through,
                        projective_point)
from ncp2.poly import Poly, det_permutation_sum
from ncp2.tensor import (DET_DEGENERATE, SINGULAR_CURVE, STABLE, Tensor333, classify_stability,
                         contract, det_cubic, determinant_tensor, geometricity_report, is_geometric,
                         normal_form, quadruple_of_triple, relation_subspace, triple_of_tensor)

F7, F13, F19 = GF(7), GF(13), GF(19)


def random_unimodular(rng, steps=6):
    m = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    for _ in range(steps):
        i, j = rng.sample(range(3), 2)
        c = rng.choice([-2, -1, 1, 2])
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    return m


def transpose(m):
    return [list(r) for r in zip(*m)]


# --- Hesse pencil and group law -----------------------------------------------------

def test_member_through_canonical_form():
    C = member_through((1, 2, 3))
    assert (C.t0, C.t1) == (1, -6)
    assert member_through((1, 2, 3), F13).t1 == 7
    assert len(member_through((1, 2, 3), F13).points()) == 18


def test_base_point_rejected():
    with pytest.raises(PencilDegenerate):
        member_through((1, -1, 0))
    with pytest.raises(PencilDegenerate):
        HesseCurve(0, 0)


def test_smooth_members():
    assert HesseCurve(1, 0).is_smooth()
    assert not HesseCurve(0, 1).is_smooth()
    assert not HesseCurve(1, -3).is_smooth()
    assert not HesseCurve(1, Cyclo(0, -3)).is_smooth()
    assert not HesseCurve(1, Cyclo(3, 3)).is_smooth()   # -3 w^2 = 3 + 3w
    for t in range(-6, 7):
        C = HesseCurve(1, t)
        assert C.is_smooth() == cubic_is_smooth(C.cubic)


def test_singular_member_has_no_group_law():
    C = HesseCurve(1, -3)
    with pytest.raises(SingularCurve):
        C.add(C.origin(), C.origin())


def test_exhaustive_group_law_f7():
    C = HesseCurve(1, 3, F7)
    pts = C.points()
    o = C.origin()
    assert len(pts) == 9
    for P in pts:
        assert C.add(o, P) == P
        assert C.add(P, C.neg(P)) == o
        assert C.neg(P) == C.neg_chord(P)
        for Q in pts:
            assert C.add(P, Q) == C.add(Q, P)
            PQ = C.add(P, Q)
            for R in pts:
                assert C.add(PQ, R) == C.add(P, C.add(Q, R))


@pytest.mark.parametrize("field", [F13, F19])
def test_negation_swap_is_chord(field):
    C = member_through((1, 2, 3), field) if field is F13 else HesseCurve(1, 1, field)
    rng = random.Random(field.p)
    for _ in range(50):
        P = C.random_point(rng)
        assert C.neg(P) == C.neg_chord(P)


def test_base_points_are_three_torsion():
    for C in (member_through((1, 2, 3), F13), member_through((1, 2, 3), QW)):
        pts = base_points(C)
        assert len(set(pts)) == 9
        o = C.origin()
        assert o in pts
        for P in pts:
            assert C.mul(3, P) == o


def test_base_points_need_omega():
    with pytest.raises(UnsupportedField):
        base_points(GF(5))


def test_group_order_over_f13():
    C = member_through((1, 2, 3), F13)
    pts = C.points()
    assert all(len(pts) % C.order(P) == 0 for P in pts)


def test_graph_forms_translate():
    C = member_through((1, 2, 3), F13)
    forms = graph_forms((1, 2, 3), F13)
    rng = random.Random(1)
    shift = C.point((1, 2, 3))
    for _ in range(20):
        q = C.random_point(rng)
        assert graph_matrix(forms, q.coords).rank() == 2
        img = C.point(graph_image(forms, q.coords))
        assert img == C.add(q, shift)


def test_graph_image_degenerate_off_curve():
    forms = graph_forms((1, 2, 3), F13)
    C = member_through((1, 2, 3), F13)
    f = F13
    off = [pt for pt in [(f.one, f(k), f.zero) for k in range(13)] if not C.contains(pt)][0]
    with pytest.raises(DegenerateInput):
        graph_image(forms, off)


# --- tensors ------------------------------------------------------------------------

def test_normal_form_positions():
    N = normal_form(1, 2, 3)
    assert N[0, 0, 0] == N[1, 1, 1] == N[2, 2, 2] == 3
    assert N[0, 2, 1] == N[1, 0, 2] == N[2, 1, 0] == 1
    assert N[0, 1, 2] == N[1, 2, 0] == N[2, 0, 1] == 2
    assert sum(1 for c in N.coords if c) == 9
    with pytest.raises(InvalidInput):
        normal_form(0, 0, 0)


def test_contract_examples():
    T = Tensor333.basis_product(0, 1, 2)
    m = contract(T, 0, [1, 0, 0])
    assert m.rows[1][2] == 1 and m.rank() == 1
    assert contract(T, 0, [0, 1, 0]).rank() == 0
    assert contract(T, 1, [0, 1, 0]).rank() == 1


def test_det_identity_symbolic():
    # independent construction of M(x) with entries in k[u, v, w, x0, y0, z0]
    u, v, w, x0, y0, z0 = Poly.gens(6, QQ, ("u", "v", "w", "x0", "y0", "z0"))
    X = (x0, y0, z0)
    coef = {}
    for t in ((0, 0, 0), (1, 1, 1), (2, 2, 2)):
        coef[t] = w
    for t in ((0, 2, 1), (1, 0, 2), (2, 1, 0)):
        coef[t] = u
    for t in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        coef[t] = v
    zero = Poly.zero(6)
    M = [[sum((coef[(a, r, c)] * X[a] for a in range(3) if (a, r, c) in coef), zero) for c in range(3)]
         for r in range(3)]
    expected = (u ** 3 + v ** 3 + w ** 3) * x0 * y0 * z0 - u * v * w * (x0 ** 3 + y0 ** 3 + z0 ** 3)
    assert det_permutation_sum(M) == expected


def test_det_cubic_is_hesse_member():
    x, y, z = Poly.gens(3, QQ, ("x0", "y0", "z0"))
    rng = random.Random(9)
    for _ in range(10):
        u, v, w = [rng.randint(-5, 5) for _ in range(3)]
        if not (u or v or w):
            continue
        F = det_cubic(normal_form(u, v, w))
        assert F == (u ** 3 + v ** 3 + w ** 3) * x * y * z - u * v * w * (x ** 3 + y ** 3 + z ** 3)


def test_det_cubic_frozen():
    x, y, z = Poly.gens(3, QQ, ("x0", "y0", "z0"))
    assert det_cubic(normal_form(1, 2, 3)) == -6 * x ** 3 + 36 * x * y * z - 6 * y ** 3 - 6 * z ** 3


def test_det_cubic_covariance():
    rng = random.Random(4)
    T = normal_form(1, 2, 3)
    for _ in range(5):
        g0, g1, g2 = ([[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)] for _ in range(3))
        d12 = det(Matrix.from_rows(g1)) * det(Matrix.from_rows(g2))
        lhs = det_cubic(T.change_basis(g0, g1, g2))
        rhs = det_cubic(T).linear_substitution(transpose(g0)) * d12
        assert lhs == rhs


def test_triple_roundtrip():
    rng = random.Random(6)
    done = 0
    while done < 20:
        p = [rng.randint(-7, 7) for _ in range(3)]
        if not any(p):
            continue
        try:
            C = member_through(p)
        except PencilDegenerate:
            continue
        if not C.is_smooth():
            continue
        model = triple_of_tensor(normal_form(*p), check_geometric=done < 3)
        assert model.smooth
        assert model.parameter == projective_point(p, QQ)
        done += 1


def test_triple_frozen_translation():
    model = triple_of_tensor(normal_form(1, 2, 3))
    assert model.translation == projective_point((2, 1, 3), QQ)
    assert model.parameter == projective_point((1, 2, 3), QQ)


def test_triple_rejections():
    with pytest.raises(NoDeterminantalCurve):
        triple_of_tensor(normal_form(1, -1, 0))
    with pytest.raises(NotGeometric):
        triple_of_tensor(normal_form(0, 0, 1))


def test_relation_subspace_is_graph_span():
    rng = random.Random(8)
    for _ in range(5):
        u, v, w = [rng.randint(1, 9) for _ in range(3)]
        R = relation_subspace(normal_form(u, v, w))
        rows = []
        for g in graph_forms((v, u, w), QQ):
            row = [QQ.zero] * 9
            for e, c in g.terms.items():
                row[3 * e.index(1) + e.index(1, 3) - 3] = c
            rows.append(row)
        assert R == span(QQ, rows, 9)


def test_quadruple_reconstruction():
    rng = random.Random(12)
    done = 0
    while done < 10:
        p = [rng.randint(-6, 6) for _ in range(3)]
        try:
            if not member_through(p).is_smooth():
                continue
        except (PencilDegenerate, InvalidInput):
            continue
        assert quadruple_of_triple(p).proportional(normal_form(*p))
        done += 1


def test_geometricity_examples():
    assert is_geometric(normal_form(1, 2, 3))
    assert is_geometric(determinant_tensor())
    rep = geometricity_report(Tensor333.basis_product(0, 0, 0))
    assert not rep.geometric
    assert rep.axes[0].exact == "exact-witness"


def test_bad_prime_replaced():
    rep = geometricity_report(normal_form(1, 2, 3))
    assert 7 not in rep.axes[0].primes and len(rep.axes[0].primes) == 3


def test_classification_examples():
    assert classify_stability(normal_form(1, 2, 3)).label == STABLE
    assert classify_stability(normal_form(1, -1, 0)).label == DET_DEGENERATE
    assert classify_stability(normal_form(0, 0, 1)).label == SINGULAR_CURVE
    assert classify_stability(Tensor333.basis_product(0, 0, 0)).label == DET_DEGENERATE


def test_classification_invariant_under_basis_change():
    rng = random.Random(2)
    cases = [(normal_form(1, 2, 3), STABLE), (normal_form(1, -1, 0), DET_DEGENERATE),
             (normal_form(0, 0, 1), SINGULAR_CURVE)]
    for T, label in cases:
        for _ in range(3):
            g = [random_unimodular(rng) for _ in range(3)]
            assert classify_stability(T.change_basis(*g)).label == label


def test_geometricity_over_cyclotomic():
    T = normal_form(1, 2, 3, QW)
    assert is_geometric(T)
    w = Cyclo(0, 1)
    assert is_geometric(normal_form(1, w, 3))
