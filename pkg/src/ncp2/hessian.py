"""The Hessian group, its order-648 reflection-group lift, Reynolds-operator
invariants of degrees 6, 9, 12 and weighted-projective invariant coordinates.

Generators (all order-3 complex reflections over Q(w)):
    r1 = diag(1, 1, w),  r2 = diag(w, 1, 1),
    r3 = reflection fixing the plane x + y + z = 0 pointwise, eigenvalue w on (1,1,1).
Their closure has 648 elements; the three defining properties (order,
pencil preservation, base-point permutation) are checked by ``verify``.
"""
from __future__ import annotations

import hashlib
import json
import os
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Sequence

from ncp2.errors import DegenerateInput, InternalInconsistency, InvalidInput
from ncp2.exact.fields import QW, Cyclo, Field
from ncp2.exact.linalg import Matrix, kernel, span
from ncp2.hesse import base_points, projective_point
from ncp2.poly import Poly, grlex_key

__all__ = ["FiniteMatrixGroup", "build_group", "st25_generators", "translation_generators", "hessian_group",
           "preserves_pencil", "permutes_base_points", "reynolds", "invariants", "invariant_coordinates",
           "weighted_equal", "orbit", "WeightedPoint", "pencil_cubics", "verify",
           "reynolds_average", "invariant_seeds", "jacobian_rank"]

DEFAULT_GROUP_CAP = 5000
NAMES = ("u", "v", "w")


def _mat_mul(a: tuple, b: tuple) -> tuple:
    return tuple(a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j]
                 for i in range(3) for j in range(3))


def _projective_key(m: tuple) -> tuple:
    lead = next(x for x in m if x)
    inv = 1 / lead
    return tuple(x * inv for x in m)


def _flat(m) -> tuple:
    rows = m.rows if hasattr(m, "rows") else m
    vals = tuple(QW(x) for r in rows for x in r)
    if len(vals) != 9:
        raise InvalidInput("generators must be 3x3 matrices")
    return vals


class FiniteMatrixGroup:
    """Breadth-first closure of 3x3 matrices over Q(w)."""

    def __init__(self, generators: Sequence, cap: int = DEFAULT_GROUP_CAP):
        self.generators = tuple(_flat(g) for g in generators)
        ident = tuple(QW(1 if i == j else 0) for i in range(3) for j in range(3))
        seen = {ident}
        order = [ident]
        queue = deque([ident])
        while queue:
            x = queue.popleft()
            for g in self.generators:
                y = _mat_mul(x, g)
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    queue.append(y)
                    if len(order) > cap:
                        raise InvalidInput("group closure exceeds %d elements" % cap)
        self.elements = tuple(order)

    @property
    def order(self) -> int:
        return len(self.elements)

    def projective_order(self) -> int:
        return len({_projective_key(m) for m in self.elements})

    def scalars(self) -> list:
        return [m for m in self.elements if m[1] == m[2] == m[3] == m[5] == m[6] == m[7] == 0 and m[0] == m[4] == m[8]]

    def coset_representatives(self) -> list:
        """One element per projective class, first in closure order."""
        reps, seen = [], set()
        for m in self.elements:
            k = _projective_key(m)
            if k not in seen:
                seen.add(k)
                reps.append(m)
        return reps

    def matrices(self) -> list:
        return [Matrix(QW, 3, 3, (m[0:3], m[3:6], m[6:9])) for m in self.generators]

    def fingerprint(self) -> str:
        text = json.dumps([[QW.format(x) for x in g] for g in self.generators])
        return hashlib.sha256(text.encode()).hexdigest()


def st25_generators() -> list:
    w = Cyclo(0, 1)
    one, zero = Cyclo(1), Cyclo(0)
    r1 = [[one, zero, zero], [zero, one, zero], [zero, zero, w]]
    r2 = [[w, zero, zero], [zero, one, zero], [zero, zero, one]]
    c = (w - 1) / 3
    r3 = [[(one if i == j else zero) + c for j in range(3)] for i in range(3)]
    return [r1, r2, r3]


def translation_generators() -> list:
    w = Cyclo(0, 1)
    one, zero = Cyclo(1), Cyclo(0)
    d = [[one, zero, zero], [zero, w, zero], [zero, zero, w * w]]
    p = [[zero, zero, one], [one, zero, zero], [zero, one, zero]]
    return [d, p]


def build_group(generators, cap: int = DEFAULT_GROUP_CAP) -> FiniteMatrixGroup:
    return FiniteMatrixGroup(generators, cap)


@lru_cache(maxsize=1)
def hessian_group() -> FiniteMatrixGroup:
    return build_group(st25_generators())


# --- action on polynomials and points -------------------------------------------

def act(m: tuple, F: Poly) -> Poly:
    """F(g x)."""
    return F.change_field(QW).linear_substitution([m[0:3], m[3:6], m[6:9]])


def act_point(m: tuple, p: Sequence) -> tuple:
    p = [QW(c) for c in p]
    return projective_point([m[3 * i] * p[0] + m[3 * i + 1] * p[1] + m[3 * i + 2] * p[2] for i in range(3)], QW)


def pencil_cubics() -> tuple:
    x, y, z = Poly.gens(3, QW, NAMES)
    return x ** 3 + y ** 3 + z ** 3, x * y * z


def _coeff_vector(F: Poly, monos: list) -> list:
    return [F.coefficient(e) for e in monos]


def preserves_pencil(G, check_all: bool = False) -> bool:
    """Every generator maps x^3+y^3+z^3 and xyz into their span."""
    mats = G.elements if check_all else G.generators
    F0, F1 = pencil_cubics()
    monos = sorted({(i, j, 3 - i - j) for i in range(4) for j in range(4 - i)}, key=grlex_key, reverse=True)
    pencil = span(QW, [_coeff_vector(F0, monos), _coeff_vector(F1, monos)], 10)
    for m in mats:
        for F in (F0, F1):
            if not pencil.contains(_coeff_vector(act(m, F), monos)):
                return False
    return True


def permutes_base_points(G, check_all: bool = False) -> bool:
    pts = set(base_points(QW))
    mats = G.elements if check_all else G.generators
    return all({act_point(m, b) for b in pts} == pts for m in mats)


def verify(G: FiniteMatrixGroup | None = None) -> dict:
    G = G or hessian_group()
    scal = G.scalars()
    return {"order": G.order, "projective_order": G.projective_order(),
            "scalar_subgroup": len(scal),
            "preserves_pencil": preserves_pencil(G),
            "permutes_base_points": permutes_base_points(G),
            "generators": [[QW.format(x) for x in g] for g in G.generators],
            "fingerprint": G.fingerprint()}


# --- Reynolds operator and invariants ---------------------------------------------

def reynolds_average(G: FiniteMatrixGroup, seed: Poly) -> Poly:
    """(1/|G|) sum_g seed(g x), by explicit summation over the group.

    When G contains the scalars {1, w, w^2} and the seed is homogeneous of
    degree d, the average collapses to the projective classes (d = 0 mod 3)
    or vanishes (otherwise).
    """
    seed = seed.change_field(QW).with_names(NAMES)
    if not seed:
        return seed
    d = seed.degree()
    if seed.is_homogeneous() and len(G.scalars()) == 3:
        if d % 3:
            return Poly.zero(3, QW, NAMES)
        elems = G.coset_representatives()
    else:
        elems = G.elements
    total = Poly.zero(3, QW, NAMES)
    for m in elems:
        total = total + act(m, seed)
    return (total * Fraction(1, len(elems))).with_names(NAMES)


def _act_monomials(m: tuple, monos: list) -> list:
    """seed(g x) for every monomial seed, sharing powers of the three linear forms."""
    forms = [Poly.linear(list(m[3 * i:3 * i + 3]), QW, NAMES) for i in range(3)]
    top = max(max(e) for e in monos)
    powers = []
    for L in forms:
        pw = [Poly.const(1, 3, QW, NAMES)]
        for _ in range(top):
            pw.append(pw[-1] * L)
        powers.append(pw)
    return [powers[0][e[0]] * powers[1][e[1]] * powers[2][e[2]] for e in monos]


def _diagonal_torus_in(G: "FiniteMatrixGroup") -> bool:
    w = Cyclo(0, 1)
    one, zero = Cyclo(1), Cyclo(0)
    elems = set(G.elements)
    for k in range(3):
        d = [one, zero, zero, zero, one, zero, zero, zero, one]
        d[4 * k] = w
        if tuple(d) not in elems:
            return False
    return True


@lru_cache(maxsize=None)
def _degree_action(G: "FiniteMatrixGroup", d: int):
    """Invariants and moved forms inside the span of cube monomials of degree d.

    When G contains every diag(w^a, w^b, w^c), the Reynolds operator factors
    through the diagonal average, which keeps exactly the monomials whose
    exponents are all divisible by 3.  Both the invariants and the
    diagonal average of sum_g im(g - 1) live in that small span.
    """
    if not _diagonal_torus_in(G):
        raise InvalidInput("projection shortcut needs the diagonal 3-torus in G")
    full = _monomials(d)
    cubes = [e for e in full if all(x % 3 == 0 for x in e)]
    n = len(cubes)
    moved_rows, inv_eqs = [], []
    for g in G.generators:
        imgs = _act_monomials(g, full)
        for e, img in zip(full, imgs):
            v = img - Poly.monomial(e, 1, QW, NAMES)
            moved_rows.append(_coeff_vector(v, cubes))
        # (g - 1) restricted to the cube span, checked on every output monomial
        cube_imgs = [imgs[full.index(e)] - Poly.monomial(e, 1, QW, NAMES) for e in cubes]
        for out in full:
            inv_eqs.append([img.coefficient(out) for img in cube_imgs])
    moved = span(QW, moved_rows, n) if n else span(QW, [], 0)
    inv = kernel(Matrix.from_rows(inv_eqs, QW, ncols=n)) if n else moved
    if inv.dim + moved.dim != n:
        raise InternalInconsistency("invariants and moved forms do not split degree %d" % d)
    return cubes, inv, moved


def reynolds(G: FiniteMatrixGroup, seed: Poly) -> Poly:
    """Reynolds projection of a homogeneous seed onto the invariants.

    The averaging operator is the projection with image the invariants and
    kernel the span of all g.f - f; solving seed = r + m in that splitting
    gives the same result as ``reynolds_average`` without summing |G| terms.
    """
    seed = seed.change_field(QW).with_names(NAMES)
    if not seed:
        return seed
    if not seed.is_homogeneous():
        return reynolds_average(G, seed)
    monos, inv, moved = _degree_action(G, seed.degree())
    n = len(monos)
    if not n:
        return Poly.zero(3, QW, NAMES)
    # diagonal average first: drop monomials with an exponent not divisible by 3
    target = _coeff_vector(seed, monos)
    basis = list(inv.basis) + list(moved.basis)
    cols = [[b[r] for b in basis] + [-target[r]] for r in range(n)]
    k = kernel(Matrix.from_rows(cols, QW, ncols=len(basis) + 1))
    vec = next(v for v in k.basis if v[-1])
    vec = [x / vec[-1] for x in vec]
    r = [QW.zero] * n
    for coef, b in zip(vec[:inv.dim], inv.basis):
        for i in range(n):
            r[i] = r[i] + coef * b[i]
    return Poly(3, dict(zip(monos, r)), QW, NAMES)


def _monomials(deg: int) -> list:
    out = []
    for combo in combinations_with_replacement(range(3), deg):
        e = [0, 0, 0]
        for k in combo:
            e[k] += 1
        out.append(tuple(e))
    return sorted(set(out), key=grlex_key, reverse=True)


def jacobian_rank(polys: Sequence[Poly], point: Sequence) -> int:
    rows = [[g.diff(i).evaluate(list(point)) for i in range(3)] for g in polys]
    return Matrix.from_rows(rows, polys[0].field).rank()


def _cache_path(G: FiniteMatrixGroup) -> str | None:
    base = os.environ.get("NCP2_CACHE_DIR")
    if not base:
        return None
    return os.path.join(base, "invariants-%s.json" % G.fingerprint()[:16])


def _compute_invariants(G: FiniteMatrixGroup) -> dict:
    probe = (QW(1), QW(2), QW(3))
    found: dict = {}
    seeds: dict = {}
    for deg in (6, 9, 12):
        chosen = None
        for e in _monomials(deg):
            R = reynolds(G, Poly.monomial(e, 1, QW, NAMES))
            if not R:
                continue
            R = R.monic()
            if deg == 12:
                c6 = found[6]
                # skip seeds landing in the span of c6^2 (not a new generator)
                if span(QW, [_coeff_vector(R, _monomials(12)), _coeff_vector(c6 * c6, _monomials(12))], 91).dim < 2:
                    continue
                if jacobian_rank([found[6], found[9], R], probe) < 3:
                    continue
            chosen = (e, R)
            break
        if chosen is None:
            raise InternalInconsistency("no degree-%d invariant found" % deg)
        seeds[deg], found[deg] = chosen
    return {"seeds": seeds, "invariants": found}


def invariants(G: FiniteMatrixGroup | None = None) -> tuple:
    """(c6, c9, c12) normalized so the leading grlex coefficient is 1."""
    G = G or hessian_group()
    return _invariants_cached(G)


_INV_CACHE: dict = {}


def _invariants_cached(G: FiniteMatrixGroup) -> tuple:
    key = G.fingerprint()
    if key in _INV_CACHE:
        return _INV_CACHE[key]
    path = _cache_path(G)
    result = None
    if path and os.path.exists(path):
        try:
            with open(path) as fh:
                data = json.load(fh)
            if data.get("fingerprint") == key:
                result = tuple(Poly.from_json(data["invariants"][str(d)], 3, QW).with_names(NAMES) for d in (6, 9, 12))
        except (OSError, ValueError, KeyError):
            result = None
    if result is None:
        comp = _compute_invariants(G)
        result = tuple(comp["invariants"][d] for d in (6, 9, 12))
        if path:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            payload = {"fingerprint": key,
                       "seeds": {str(d): list(comp["seeds"][d]) for d in (6, 9, 12)},
                       "invariants": {str(d): comp["invariants"][d].to_json() for d in (6, 9, 12)}}
            tmp = path + ".tmp"
            with open(tmp, "w") as fh:
                json.dump(payload, fh, sort_keys=True)
            os.replace(tmp, path)
    _INV_CACHE[key] = result
    return result


def invariant_seeds(G: FiniteMatrixGroup | None = None) -> dict:
    return _compute_invariants(G or hessian_group())["seeds"]


# --- weighted points ------------------------------------------------------------

WEIGHTS = (6, 9, 12)


@dataclass(frozen=True)
class WeightedPoint:
    """(c6 : c9 : c12) in P(6, 9, 12); equality via weighted ratios."""

    coords: tuple
    field: Field = QW

    def ratios(self) -> dict:
        c6, c9, c12 = self.coords
        out = {}
        if c6:
            out["c9^2/c6^3"] = c9 ** 2 / c6 ** 3
            out["c12/c6^2"] = c12 / c6 ** 2
        if c9:
            out["c12^3/c9^4"] = c12 ** 3 / c9 ** 4
        return out

    def zero_pattern(self) -> tuple:
        return tuple(not c for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, WeightedPoint):
            return NotImplemented
        return weighted_equal(self, other)

    def __hash__(self):
        return hash(self.zero_pattern())

    def to_json(self) -> dict:
        f = self.field
        return {"coords": [f.format(c) for c in self.coords], "weights": list(WEIGHTS),
                "ratios": {k: f.format(v) for k, v in sorted(self.ratios().items())}}


def weighted_equal(a: WeightedPoint, b: WeightedPoint) -> bool:
    """(a6:a9:a12) ~ (b6:b9:b12) under (l^6, l^9, l^12)."""
    if a.zero_pattern() != b.zero_pattern():
        return False
    a6, a9, a12 = a.coords
    b6, b9, b12 = b.coords
    if a6:
        # mu = l^3 satisfies mu^2 = b6/a6; c9 fixes the sign of mu, c12 then follows
        return a9 ** 2 * b6 ** 3 == b9 ** 2 * a6 ** 3 and a12 * b6 ** 2 == b12 * a6 ** 2
    if a9:
        return a12 ** 3 * b9 ** 4 == b12 ** 3 * a9 ** 4
    return True


def invariant_coordinates(p, G: FiniteMatrixGroup | None = None) -> WeightedPoint:
    c6, c9, c12 = invariants(G)
    pt = [QW(x) for x in p]
    if len(pt) != 3 or not any(pt):
        raise InvalidInput("parameter must be a nonzero triple")
    vals = tuple(c.evaluate(pt) for c in (c6, c9, c12))
    if not any(vals):
        raise DegenerateInput("all three invariants vanish (nilpotent locus)")
    return WeightedPoint(vals)


def orbit(p, G: FiniteMatrixGroup | None = None) -> list:
    """Projective orbit of (u:v:w) in canonical order of first appearance."""
    G = G or hessian_group()
    start = projective_point([QW(x) for x in p], QW)
    seen = []
    keys = set()
    for m in G.coset_representatives():
        q = act_point(m, start)
        if q not in keys:
            keys.add(q)
            seen.append(q)
    return seen
