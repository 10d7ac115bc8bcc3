"""Quadratic algebras T(V)/(R), the Sklyanin family and Hilbert-series checks."""
from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product

from ncp2.errors import InvalidInput, WorkspaceCapExceeded
from ncp2.exact.fields import Field, common_field
from ncp2.exact.linalg import Echelon, Subspace, span

__all__ = ["QuadraticAlgebra", "sklyanin", "sklyanin_relations", "in_delta", "pencil_degenerate",
           "hilbert_dims", "as_regular_euler_check", "workspace_cap", "DEFAULT_WORKSPACE_CAP"]

DEFAULT_WORKSPACE_CAP = 729


def workspace_cap() -> int:
    raw = os.environ.get("NCP2_WORKSPACE_CAP")
    if raw is None or raw == "":
        return DEFAULT_WORKSPACE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InvalidInput("NCP2_WORKSPACE_CAP must be an integer, got %r" % raw)
    if cap < 1:
        raise InvalidInput("NCP2_WORKSPACE_CAP must be positive")
    return cap


@dataclass(frozen=True)
class QuadraticAlgebra:
    """Generators labelled ``labels``; R a subspace of V (x) V with word index n*i + j."""

    labels: tuple
    relations: Subspace

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def field(self) -> Field:
        return self.relations.field

    def relation_words(self) -> list:
        n = self.n
        out = []
        for row in self.relations.basis:
            terms = []
            for k, c in enumerate(row):
                if c:
                    terms.append((self.field.format(c), self.labels[k // n] + self.labels[k % n]))
            out.append(terms)
        return out


def _projective(params, what="parameters") -> tuple:
    params = tuple(params)
    if len(params) != 3:
        raise InvalidInput("%s need three entries" % what)
    f = common_field(params)
    params = tuple(f(x) for x in params)
    if not any(params):
        raise InvalidInput("%s (0,0,0) do not define a projective point" % what)
    return params


def sklyanin_relations(a, b, c) -> list:
    """f1 = a yz + b zy + c x^2, f2 = a zx + b xz + c y^2, f3 = a xy + b yx + c z^2."""
    a, b, c = _projective((a, b, c))
    z = a * 0
    rows = []
    for (p, q, r) in ((1, 2, 0), (2, 0, 1), (0, 1, 2)):
        row = [z] * 9
        row[3 * p + q] = row[3 * p + q] + a
        row[3 * q + p] = row[3 * q + p] + b
        row[3 * r + r] = row[3 * r + r] + c
        rows.append(row)
    return rows


def sklyanin(a, b, c, field: Field | None = None) -> QuadraticAlgebra:
    rows = sklyanin_relations(a, b, c)
    if field is None:
        field = common_field([x for r in rows for x in r])
    return QuadraticAlgebra(("x", "y", "z"), span(field, rows, 9))


def in_delta(a, b, c) -> bool:
    """(a:b:c) in {a^3 = b^3 = c^3} or a coordinate point."""
    a, b, c = _projective((a, b, c))
    if sum(1 for t in (a, b, c) if not t) == 2:
        return True
    return a ** 3 == b ** 3 == c ** 3


def pencil_degenerate(a, b, c) -> bool:
    """Both coefficients of the associated Hesse cubic vanish (a base point of the pencil)."""
    a, b, c = _projective((a, b, c))
    return not (a * b * c) and not (a ** 3 + b ** 3 + c ** 3)


def _words(n: int, length: int):
    return product(range(n), repeat=length)


def _word_index(n: int, word) -> int:
    k = 0
    for letter in word:
        k = k * n + letter
    return k


def ideal_rank(A: QuadraticAlgebra, d: int) -> int:
    """dim of sum_i V^i (x) R (x) V^(d-2-i) inside V^(x)d."""
    if d < 2 or not A.relations.dim:
        return 0
    n = A.n
    ech = Echelon(A.field, n ** d)
    rels = [{k: c for k, c in enumerate(r) if c} for r in A.relations.basis]
    for i in range(d - 1):
        left_mult = n ** (d - i)
        right_mult = n ** (d - 2 - i)
        for w1 in _words(n, i):
            base = _word_index(n, w1) * left_mult
            for w2 in _words(n, d - 2 - i):
                off = _word_index(n, w2)
                for r in rels:
                    ech.add({base + k * right_mult + off: c for k, c in r.items()})
    return ech.rank


def hilbert_dims(A: QuadraticAlgebra, N: int, cap: int | None = None) -> list:
    if N < 0:
        raise InvalidInput("degree bound must be >= 0")
    cap = workspace_cap() if cap is None else cap
    if A.n ** N > cap:
        raise WorkspaceCapExceeded("%d^%d = %d columns exceeds the workspace cap %d"
                                   % (A.n, N, A.n ** N, cap))
    return [A.n ** d - ideal_rank(A, d) for d in range(N + 1)]


def as_regular_euler_check(dims) -> list:
    """Per-degree test of s_d - 3 s_{d-1} + 3 s_{d-2} - s_{d-3} = [d == 0]."""
    s = lambda k: dims[k] if k >= 0 else 0
    return [s(d) - 3 * s(d - 1) + 3 * s(d - 2) - s(d - 3) == (1 if d == 0 else 0) for d in range(len(dims))]


def first_euler_failure(dims):
    for d, ok in enumerate(as_regular_euler_check(dims)):
        if not ok:
            return d
    return None
