"""Independent reference computations used only by the tests.

Each oracle takes a different route from the library code it checks:
word counting by transfer matrices, dense brute-force ranks, exhaustive
finite-field searches and a commutative model of the F_d path algebra.
"""
from itertools import product

from ncp2.exact.fields import GF
from ncp2.exact.linalg import Matrix


def transfer_matrix_counts(forbidden, n, N):
    """Words of length 0..N in n letters avoiding the given 2-letter factors."""
    A = [[0 if (i, j) in forbidden else 1 for j in range(n)] for i in range(n)]
    counts = [1]
    vec = [1] * n
    for d in range(1, N + 1):
        counts.append(sum(vec))
        vec = [sum(vec[i] * A[i][j] for i in range(n)) for j in range(n)]
    return counts


def brute_force_dim(relations, n, d, field):
    """n^d minus the rank of every w1 (x) r (x) w2 written out densely."""
    if d < 2:
        return n ** d
    rows = []
    for i in range(d - 1):
        for w1 in product(range(n), repeat=i):
            for w2 in product(range(n), repeat=d - 2 - i):
                for r in relations:
                    row = [0] * (n ** d)
                    for a in range(n):
                        for b in range(n):
                            c = r[n * a + b]
                            if c:
                                word = w1 + (a, b) + w2
                                idx = 0
                                for letter in word:
                                    idx = idx * n + letter
                                row[idx] = c
                    rows.append(row)
    return n ** d - Matrix.from_rows(rows, field, ncols=n ** d).rank()


def singular_points_mod_p(F, p):
    """Projective points over F_p where F and its gradient vanish."""
    f = GF(p)
    Fp = F.change_field(f)
    grads = Fp.gradient()
    pts = [(1, y, z) for y in range(p) for z in range(p)] + [(0, 1, z) for z in range(p)] + [(0, 0, 1)]
    out = []
    for pt in pts:
        v = [f(c) for c in pt]
        if not Fp.evaluate(v) and not any(g.evaluate(v) for g in grads):
            out.append(pt)
    return out


def brute_force_kernel_dim(rows, ncols, p):
    """Count null vectors over F_p by enumeration; return the dimension."""
    count = 0
    for v in product(range(p), repeat=ncols):
        if all(sum(r[k] * v[k] for k in range(ncols)) % p == 0 for r in rows):
            count += 1
    dim = 0
    while p ** dim < count:
        dim += 1
    assert p ** dim == count
    return dim


def fd_cox_images(d):
    """Map each F_d arrow to a monomial of the Cox-type ring k[u, v, t1, t2].

    a_k -> u t1^(d-k) t2^(k-1); U = X -> v; V = (t1, t2); W = (t1, t2).
    The kernel on paths j -> i is the ideal of the collection.
    """
    imgs = {}
    for k in range(1, d + 1):
        imgs[k - 1] = (1, 0, d - k, k - 1)
    imgs[d] = (0, 1, 0, 0)
    imgs[d + 1] = (0, 0, 1, 0)
    imgs[d + 2] = (0, 0, 0, 1)
    imgs[d + 3] = (0, 0, 1, 0)
    imgs[d + 4] = (0, 0, 0, 1)
    imgs[d + 5] = (0, 1, 0, 0)
    return imgs


def fd_cox_kernel_dim(q, d, i, j, field):
    """dim of the kernel of  paths(j -> i)  ->  k[u, v, t1, t2].  All paths have coefficient 1."""
    imgs = fd_cox_images(d)
    paths = q.all_paths(i, j, 2)
    monos = []
    for p in paths:
        e = [0, 0, 0, 0]
        for a in p:
            e = [x + y for x, y in zip(e, imgs[a])]
        monos.append(tuple(e))
    distinct = sorted(set(monos))
    rows = [[1 if monos[c] == m else 0 for c in range(len(paths))] for m in distinct]
    if not paths:
        return 0
    return len(paths) - Matrix.from_rows(rows, field, ncols=len(paths)).rank()
