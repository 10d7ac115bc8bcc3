"""Acyclic quivers, path algebras, two-sided relation ideals and the
monomial map phi from paths to the commutative ring on the arrows.

Paths are tuples of arrow indices in traversal order (first arrow first).
"Write a_2 a_1" in composition notation means the tuple (a_1, a_2).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from ncp2.errors import CyclicQuiver, DimensionMismatch, InvalidInput
from ncp2.exact.fields import QQ, Field
from ncp2.exact.linalg import Subspace, intersect, span
from ncp2.poly import Poly

__all__ = [
    "Arrow", "Quiver", "RelationIdeal", "beilinson", "fd_quiver", "fd_ideal",
    "beilinson_ideal", "ideal_closure", "quotient_dims", "composition_image_rank",
    "phi_path", "phi_monomial", "ideal_from_moduli", "rep_is_theta_stable", "default_theta",
]


@dataclass(frozen=True)
class Arrow:
    name: str
    src: int
    dst: int


class Quiver:
    """Finite quiver without oriented cycles; vertices are referred to by label."""

    def __init__(self, vertices: Sequence, arrows: Iterable):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidInput("duplicate vertex labels")
        self._vid = {v: k for k, v in enumerate(self.vertices)}
        arr = []
        for a in arrows:
            if isinstance(a, Arrow):
                name, s, t = a.name, a.src, a.dst
            elif isinstance(a, dict):
                name, s, t = a["name"], a["src"], a["dst"]
            else:
                name, s, t = a
            if s not in self._vid or t not in self._vid:
                raise InvalidInput("arrow %s has unknown endpoint" % name)
            arr.append(Arrow(str(name), s, t))
        self.arrows = tuple(arr)
        if len({a.name for a in self.arrows}) != len(self.arrows):
            raise InvalidInput("duplicate arrow names")
        self._order = self._toposort()
        self._cache: dict = {}

    def _toposort(self) -> list:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.dst] += 1
        ready = [v for v in self.vertices if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for a in self.arrows:
                if a.src == v:
                    indeg[a.dst] -= 1
                    if indeg[a.dst] == 0:
                        ready.append(a.dst)
        if len(order) != len(self.vertices):
            raise CyclicQuiver("quiver has an oriented cycle")
        return order

    def index(self, v) -> int:
        return self._vid[v]

    def arrow_index(self, name: str) -> int:
        for k, a in enumerate(self.arrows):
            if a.name == name:
                return k
        raise InvalidInput("no arrow named %r" % name)

    def source(self, path: tuple, default=None):
        return self.arrows[path[0]].src if path else default

    def target(self, path: tuple, default=None):
        return self.arrows[path[-1]].dst if path else default

    def paths(self, i, j, length: int) -> list:
        """Paths from j to i of the given length, lexicographic in arrow index."""
        key = (i, j, length)
        if key in self._cache:
            return self._cache[key]
        if length == 0:
            out = [()] if i == j else []
        else:
            out = []
            for k, a in enumerate(self.arrows):
                if a.src == j:
                    out.extend((k,) + rest for rest in self.paths(i, a.dst, length - 1))
        self._cache[key] = out
        return out

    def max_length(self) -> int:
        best = {v: 0 for v in self.vertices}
        for v in reversed(self._order):
            for a in self.arrows:
                if a.src == v:
                    best[v] = max(best[v], best[a.dst] + 1)
        return max(best.values())

    def all_paths(self, i, j, min_length: int = 0) -> list:
        """All paths j -> i sorted by (length, lex)."""
        out = []
        for ell in range(min_length, self.max_length() + 1):
            out.extend(self.paths(i, j, ell))
        return out

    def path_dim(self, i, j) -> int:
        return len(self.all_paths(i, j))

    def path_name(self, path: tuple) -> str:
        if not path:
            return "e"
        return " ".join(self.arrows[k].name for k in reversed(path))

    def parse_path(self, text: str) -> tuple:
        """Composition notation, rightmost arrow first: 'a1 a5' -> (a5, a1)."""
        names = text.split()
        path = tuple(self.arrow_index(n) for n in reversed(names))
        for u, v in zip(path, path[1:]):
            if self.arrows[u].dst != self.arrows[v].src:
                raise InvalidInput("arrows in %r do not compose" % text)
        return path

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "arrows": [{"name": a.name, "src": a.src, "dst": a.dst} for a in self.arrows]}

    @classmethod
    def from_json(cls, data: dict) -> "Quiver":
        return cls(data["vertices"], data["arrows"])

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.vertices, self.arrows))


def beilinson() -> Quiver:
    """Vertices 0,1,2 with arrows x0,y0,z0: 0->1 and x1,y1,z1: 1->2."""
    arrows = [("%s0" % c, 0, 1) for c in "xyz"] + [("%s1" % c, 1, 2) for c in "xyz"]
    return Quiver([0, 1, 2], arrows)


def fd_quiver(d: int) -> Quiver:
    """Quiver of the collection (O, O(f), O(s), O(s+f)) on the Hirzebruch surface F_d.

    Vertices 1..4; a_1..a_d: 2->3, a_{d+1}: 1->3, a_{d+2}, a_{d+3}: 1->2,
    a_{d+4}, a_{d+5}: 3->4, a_{d+6}: 2->4.
    """
    if d < 1:
        raise InvalidInput("F_d needs d >= 1")
    arrows = [("a%d" % k, 2, 3) for k in range(1, d + 1)]
    arrows += [("a%d" % (d + 1), 1, 3), ("a%d" % (d + 2), 1, 2), ("a%d" % (d + 3), 1, 2),
               ("a%d" % (d + 4), 3, 4), ("a%d" % (d + 5), 3, 4), ("a%d" % (d + 6), 2, 4)]
    return Quiver([1, 2, 3, 4], arrows)


@dataclass(frozen=True)
class RelationIdeal:
    """Subspaces of e_i (kQ_{>=2}) e_j, keyed by (i, j) vertex labels.

    The basis of each component is ``quiver.all_paths(i, j, 2)``; components
    that are zero are omitted.
    """

    quiver: Quiver
    field: Field
    components: tuple = dc_field(default=())

    def component(self, i, j) -> Subspace:
        for key, sub in self.components:
            if key == (i, j):
                return sub
        return Subspace(self.field, len(self.quiver.all_paths(i, j, 2)), ())

    def dim(self, i, j) -> int:
        return self.component(i, j).dim

    def graded_dim(self, i, j, length: int) -> int:
        """Dimension of I meeting the length-``length`` paths (homogeneous part)."""
        basis = self.quiver.all_paths(i, j, 2)
        sub = self.component(i, j)
        cols = [k for k, p in enumerate(basis) if len(p) == length]
        if not cols:
            return 0
        one, zero = self.field.one, self.field.zero
        coord = span(self.field, [[one if k == c else zero for k in range(len(basis))] for c in cols], len(basis))
        return intersect(sub, coord).dim

    def vectors(self, i, j) -> list:
        """Basis vectors as dicts path -> scalar."""
        basis = self.quiver.all_paths(i, j, 2)
        return [{basis[k]: c for k, c in enumerate(row) if c} for row in self.component(i, j).basis]

    def dimension_matrix(self) -> list:
        vs = self.quiver.vertices
        return [[self.dim(i, j) for j in vs] for i in vs]

    def is_closed(self) -> bool:
        return ideal_closure(self) == self

    def __eq__(self, other):
        if not isinstance(other, RelationIdeal):
            return NotImplemented
        return self.quiver == other.quiver and self.field == other.field and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def to_json(self) -> dict:
        q = self.quiver
        out = []
        for (i, j), sub in self.components:
            out.append({"target": i, "source": j,
                        "basis_paths": [q.path_name(p) for p in q.all_paths(i, j, 2)],
                        "rows": sub.to_json()})
        return {"field": self.field.name, "components": out}


def _normalize(quiver: Quiver, field: Field, comps: dict) -> RelationIdeal:
    order = {v: k for k, v in enumerate(quiver.vertices)}
    items = sorted(((k, s) for k, s in comps.items() if s.dim), key=lambda t: (order[t[0][0]], order[t[0][1]]))
    return RelationIdeal(quiver, field, tuple(items))


def make_ideal(quiver: Quiver, field: Field, relations: Iterable[dict], close: bool = True) -> RelationIdeal:
    """Build from relations given as dicts path -> scalar (each within one (i,j))."""
    grouped: dict = {}
    for rel in relations:
        rel = {tuple(p): c for p, c in rel.items() if field(c)}
        if not rel:
            continue
        ends = {(quiver.target(p), quiver.source(p)) for p in rel}
        if len(ends) != 1:
            raise InvalidInput("relation mixes paths between different vertices")
        if any(len(p) < 2 for p in rel):
            raise InvalidInput("relations must lie in paths of length >= 2")
        grouped.setdefault(ends.pop(), []).append(rel)
    comps = {}
    for (i, j), rels in grouped.items():
        basis = quiver.all_paths(i, j, 2)
        idx = {p: k for k, p in enumerate(basis)}
        rows = []
        for rel in rels:
            row = [field.zero] * len(basis)
            for p, c in rel.items():
                row[idx[p]] = field(c)
            rows.append(row)
        comps[(i, j)] = span(field, rows, len(basis))
    ideal = _normalize(quiver, field, comps)
    return ideal_closure(ideal) if close else ideal


def ideal_closure(ideal: RelationIdeal) -> RelationIdeal:
    """Smallest two-sided ideal containing the given components."""
    q, f = ideal.quiver, ideal.field
    vecs: dict = {}
    for (i, j), _ in ideal.components:
        vecs[(i, j)] = ideal.vectors(i, j)
    # processing components in order of increasing max path length is not
    # needed: iterate one-arrow extensions until nothing new appears
    frontier = [(key, v) for key, vs in vecs.items() for v in vs]
    comps = {key: span(f, _rows(q, key, vs, f), len(q.all_paths(*key, 2))) for key, vs in vecs.items()}
    while frontier:
        new = []
        for (i, j), v in frontier:
            for k, a in enumerate(q.arrows):
                if a.src == i:
                    new.append(((a.dst, j), {p + (k,): c for p, c in v.items()}))
                if a.dst == j:
                    new.append(((i, a.src), {(k,) + p: c for p, c in v.items()}))
        frontier = []
        for key, v in new:
            n = len(q.all_paths(*key, 2))
            cur = comps.get(key, Subspace(f, n, ()))
            row = _rows(q, key, [v], f)[0]
            if not cur.contains(row):
                comps[key] = span(f, list(cur.basis) + [row], n)
                frontier.append((key, v))
    return _normalize(q, f, comps)


def _rows(q: Quiver, key, vecs: list, f: Field) -> list:
    basis = q.all_paths(key[0], key[1], 2)
    idx = {p: k for k, p in enumerate(basis)}
    rows = []
    for v in vecs:
        row = [f.zero] * len(basis)
        for p, c in v.items():
            row[idx[p]] = f(c)
        rows.append(row)
    return rows


def quotient_dims(ideal: RelationIdeal) -> list:
    """dim e_i (kQ/I) e_j as a matrix indexed by the vertex order."""
    q = ideal.quiver
    return [[q.path_dim(i, j) - ideal.dim(i, j) for j in q.vertices] for i in q.vertices]


def free_dims(q: Quiver) -> list:
    return [[q.path_dim(i, j) for j in q.vertices] for i in q.vertices]


def total_dim(matrix: list) -> int:
    return sum(sum(r) for r in matrix)


def composition_image_rank(ideal: RelationIdeal, i, j) -> int:
    """Rank of  sum_k [e_i kQ e_k (x) e_k I e_j] + [e_i I e_k (x) e_k kQ e_j]  ->  e_i kQ e_j,

    k running over vertices strictly between j and i (positive-length connecting paths).
    """
    q, f = ideal.quiver, ideal.field
    n = len(q.all_paths(i, j, 2))
    rows = []
    for k in q.vertices:
        if k in (i, j):
            continue
        for v in ideal.vectors(k, j):
            for p in q.all_paths(i, k, 1):
                rows.append({r + p: c for r, c in v.items()})
        for v in ideal.vectors(i, k):
            for p in q.all_paths(k, j, 1):
                rows.append({p + r: c for r, c in v.items()})
    if not rows:
        return 0
    return span(f, _rows(q, (i, j), rows, f), n).dim


# -- the monomial map -----------------------------------------------------------

def phi_path(q: Quiver, path: tuple, field: Field = QQ) -> tuple:
    """Exponent vector of the monomial prod x_a over arrows of the path."""
    e = [0] * len(q.arrows)
    for k in path:
        e[k] += 1
    return tuple(e)


def arrow_degree(q: Quiver, k: int) -> tuple:
    """deg x_a = e_{t(a)} - e_{s(a)} in Z^{Q_0}."""
    d = [0] * len(q.vertices)
    a = q.arrows[k]
    d[q.index(a.dst)] += 1
    d[q.index(a.src)] -= 1
    return tuple(d)


def multidegree(q: Quiver, exp: tuple) -> tuple:
    d = [0] * len(q.vertices)
    for k, n in enumerate(exp):
        if n:
            for v, x in enumerate(arrow_degree(q, k)):
                d[v] += n * x
    return tuple(d)


def phi_monomial(ideal: RelationIdeal) -> list:
    """Generators of J = (phi(I)): one Poly per component basis vector."""
    q, f = ideal.quiver, ideal.field
    names = [a.name for a in q.arrows]
    gens = []
    for (i, j), _ in ideal.components:
        for v in ideal.vectors(i, j):
            gens.append(Poly(len(q.arrows), {phi_path(q, p): c for p, c in v.items()}, f, names))
    return gens


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def ideal_from_moduli(gens: Sequence[Poly], q: Quiver, field: Field | None = None) -> RelationIdeal:
    """phi^{-1}(J) for J generated by Z^{Q_0}-homogeneous polynomials."""
    if field is None:
        field = gens[0].field if gens else QQ
    vid = q.vertices
    rels = []
    for g in gens:
        if g.nvars != len(q.arrows):
            raise DimensionMismatch("generator in %d variables for %d arrows" % (g.nvars, len(q.arrows)))
        if not g:
            continue
        degs = {multidegree(q, e) for e in g.terms}
        if len(degs) != 1:
            raise InvalidInput("generator %r is not homogeneous for the vertex grading" % (g,))
        deg = degs.pop()
        lead = g.leading_term()[0]
        if not _is_path_degree(deg):
            raise InvalidInput("generator degree %r is not e_i - e_j" % (deg,))
        for i in vid:
            for j in vid:
                for p in q.all_paths(i, j, 2):
                    pe = phi_path(q, p)
                    if not _divides(lead, pe):
                        continue
                    m = tuple(x - y for x, y in zip(pe, lead))
                    rel = {}
                    for e, c in g.terms.items():
                        target = tuple(x + y for x, y in zip(m, e))
                        path = _path_of_monomial(q, i, j, target)
                        if path is None:
                            raise InvalidInput("m*g leaves the image of phi")
                        rel[path] = c
                    rels.append(rel)
    return make_ideal(q, field, rels, close=False) if rels else RelationIdeal(q, field, ())


def _is_path_degree(deg: tuple) -> bool:
    return sorted(deg) == [-1] + [0] * (len(deg) - 2) + [1] if len(deg) >= 2 else False


def _path_of_monomial(q: Quiver, i, j, exp: tuple):
    for p in q.all_paths(i, j, 2):
        if phi_path(q, p) == exp:
            return p
    return None


# -- built-in ideals ---------------------------------------------------------------

def beilinson_ideal(relations: Subspace | Sequence[Sequence], field: Field | None = None) -> RelationIdeal:
    """Ideal of the Beilinson quiver from a subspace of V0 (x) V1 (word index 3i+j)."""
    q = beilinson()
    if isinstance(relations, Subspace):
        field = relations.field
        rows = relations.basis
    else:
        rows = [list(r) for r in relations]
        if field is None:
            from ncp2.exact.fields import common_field
            field = common_field([x for r in rows for x in r])
    basis = q.all_paths(2, 0, 2)
    assert basis == [(i, 3 + j) for i in range(3) for j in range(3)]
    rels = [{basis[k]: c for k, c in enumerate(r) if field(c)} for r in rows]
    return make_ideal(q, field, rels)


def fd_relations(d: int) -> list:
    """Relations of the F_d collection: I_31, I_42 and the two new length-2 relations 1 -> 4 (plus one cubic when d = 1)."""
    q = fd_quiver(d)
    P = q.parse_path
    rels = []
    for k in range(1, d):
        rels.append({P("a%d a%d" % (k, d + 3)): 1, P("a%d a%d" % (k + 1, d + 2)): -1})
    for k in range(1, d):
        rels.append({P("a%d a%d" % (d + 5, k)): 1, P("a%d a%d" % (d + 4, k + 1)): -1})
    rels.append({P("a%d a%d" % (d + 6, d + 2)): 1, P("a%d a%d" % (d + 4, d + 1)): -1})
    rels.append({P("a%d a%d" % (d + 6, d + 3)): 1, P("a%d a%d" % (d + 5, d + 1)): -1})
    if d == 1:
        # no quadratic relations through a_1, so the square 1 -> 2 -> 3 -> 4 is a generator
        rels.append({P("a6 a1 a3"): 1, P("a5 a1 a4"): -1})
    return rels


def fd_ideal(d: int, field: Field = QQ) -> RelationIdeal:
    return make_ideal(fd_quiver(d), field, fd_relations(d))


# -- stability ------------------------------------------------------------------

def default_theta(q: Quiver) -> tuple:
    """(-(n-1), 1, ..., 1): stable exactly when the first vertex generates."""
    n = len(q.vertices)
    return tuple([-(n - 1)] + [1] * (n - 1))


def subrepresentations(q: Quiver, scalars: Sequence) -> list:
    """Vertex subsets closed under the nonzero arrows (dimension vector all ones)."""
    n = len(q.vertices)
    out = []
    for mask in range(1, 1 << n):
        S = {q.vertices[k] for k in range(n) if mask >> k & 1}
        if all(not (a.src in S and scalars[k]) or a.dst in S for k, a in enumerate(q.arrows)):
            out.append(S)
    return out


def rep_is_theta_stable(q: Quiver, scalars: Sequence, theta: Sequence | None = None, semistable: bool = False) -> bool:
    """King stability for dimension vector (1,...,1): theta(S) > 0 on proper subreps S."""
    if len(scalars) != len(q.arrows):
        raise DimensionMismatch("need one scalar per arrow")
    if theta is None:
        theta = default_theta(q)
    if len(theta) != len(q.vertices):
        raise DimensionMismatch("theta has wrong length")
    if sum(theta) != 0:
        raise InvalidInput("theta(d) must be 0")
    full = set(q.vertices)
    weight = dict(zip(q.vertices, theta))
    for S in subrepresentations(q, scalars):
        if S == full:
            continue
        t = sum(weight[v] for v in S)
        if t < 0 or (t == 0 and not semistable):
            return False
    return True
