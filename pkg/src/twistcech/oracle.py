"""Independent brute-force oracles.

Everything here is deliberately written against plain dense lists of
Fractions and its own elimination code, sharing nothing with the sparse
main path in linalg, so the two can certify each other.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations


class DenseMatrix:
    """Row-major dense rational matrix."""

    def __init__(self, rows):
        self.data = [[Fraction(x) for x in row] for row in rows]

    @property
    def shape(self):
        return (len(self.data), len(self.data[0]) if self.data else 0)

    def row(self, i):
        return list(self.data[i])


def dense_rank(rows) -> int:
    """Rank by full Gaussian elimination with exact pivot search."""
    if isinstance(rows, DenseMatrix):
        rows = rows.data
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    rk = 0
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m):
            if a[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        pv = a[r][c]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c] / pv
                ai, ar = a[i], a[r]
                for j in range(c, n):
                    ai[j] -= f * ar[j]
        rk += 1
        r += 1
        if r == m:
            break
    return rk


def dense_nullspace(rows) -> list:
    """Basis of the right kernel, as dense coefficient lists."""
    a = [[Fraction(x) for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    piv_of_col = {}
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m):
            if a[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_of_col[c] = r
        r += 1
        if r == m:
            break
    basis = []
    for c in range(n):
        if c in piv_of_col:
            continue
        v = [Fraction(0)] * n
        v[c] = Fraction(1)
        for pc, pr in piv_of_col.items():
            if a[pr][c]:
                v[pc] = -a[pr][c]
        basis.append(v)
    return basis


def dense_det(rows) -> Fraction:
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if a[i][c]:
                pivot = i
                break
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det *= a[c][c]
        pv = a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / pv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def dense_cofactor_det(rows) -> Fraction:
    """Determinant by cofactor expansion; a second, slower route for tests."""
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return a[0][0]
    total = Fraction(0)
    for j in range(n):
        if not a[0][j]:
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in a[1:]]
        sign = -1 if j % 2 else 1
        total += sign * a[0][j] * dense_cofactor_det(minor)
    return total


# -- limits and colimits of finite diagrams ------------------------------


def exhaustive_limit(dims: dict, arrows: list):
    """Limit of a finite diagram of vector spaces as an explicit kernel.

    dims maps node -> dimension.  arrows is a list (src, tgt, matrix) with
    matrix a dense list-of-lists mapping the src fibre to the tgt fibre;
    the limit is the subspace of the product where every arrow's equation
    x_tgt = M x_src holds.  Returns (dim, basis) with basis vectors dense
    over the product ordered by sorted node name.
    """
    nodes = sorted(dims)
    offset = {}
    total = 0
    for v in nodes:
        offset[v] = total
        total += dims[v]
    rows = []
    for src, tgt, mat in arrows:
        for i in range(dims[tgt]):
            row = [Fraction(0)] * total
            row[offset[tgt] + i] += 1
            for j in range(dims[src]):
                row[offset[src] + j] -= Fraction(mat[i][j])
            rows.append(row)
    if not rows:
        basis = []
        for k in range(total):
            v = [Fraction(0)] * total
            v[k] = Fraction(1)
            basis.append(v)
        return total, basis
    basis = dense_nullspace(rows)
    return len(basis), basis


def exhaustive_colimit(dims: dict, arrows: list):
    """Colimit of a finite diagram as an explicit cokernel.

    Same data as exhaustive_limit; the colimit is the product modulo the
    span of iota_src(x) - iota_tgt(M x).  Returns (dim, projection) where
    projection maps a dense product vector to coordinates in a chosen
    complement basis.
    """
    nodes = sorted(dims)
    offset = {}
    total = 0
    for v in nodes:
        offset[v] = total
        total += dims[v]
    relations = []
    for src, tgt, mat in arrows:
        for j in range(dims[src]):
            row = [Fraction(0)] * total
            row[offset[src] + j] += 1
            for i in range(dims[tgt]):
                row[offset[tgt] + i] -= Fraction(mat[i][j])
            relations.append(row)
    rel_rank = dense_rank(relations) if relations else 0
    return total - rel_rank, relations


# -- simplicial homology oracle ------------------------------------------


def _simplex_closure(facets):
    simplices = set()
    for f in facets:
        f = tuple(sorted(f))
        for k in range(1, len(f) + 1):
            for s in combinations(f, k):
                simplices.add(s)
    by_dim = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(s)
    for k in by_dim:
        by_dim[k].sort()
    return by_dim


def simplicial_boundaries(facets):
    """Integer boundary matrices of the simplicial complex spanned by facets."""
    by_dim = _simplex_closure(facets)
    top = max(by_dim)
    mats = {}
    for k in range(1, top + 1):
        rows = {s: i for i, s in enumerate(by_dim.get(k - 1, []))}
        mat = [[0] * len(by_dim.get(k, [])) for _ in rows]
        for j, s in enumerate(by_dim.get(k, [])):
            for a in range(len(s)):
                face = s[:a] + s[a + 1 :]
                mat[rows[face]][j] = (-1) ** a
        mats[k] = mat
    return by_dim, mats


def _diagonalize_int(mat):
    """Elementary-divisor diagonal of an integer matrix, no transforms kept."""
    a = [list(map(int, row)) for row in mat]
    n = len(a)
    p = len(a[0]) if n else 0
    t = 0
    divisors = []
    while t < min(n, p):
        best = None
        for i in range(t, n):
            for j in range(t, p):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(best[2])):
                    best = (i, j, a[i][j])
        if best is None:
            break
        bi, bj, _ = best
        a[t], a[bi] = a[bi], a[t]
        for row in a:
            row[t], row[bj] = row[bj], row[t]
        progress = True
        while progress:
            progress = False
            for i in range(t + 1, n):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        progress = True
            for j in range(t + 1, p):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        progress = True
        off = False
        for i in range(t + 1, n):
            for j in range(t + 1, p):
                if a[i][j] % a[t][t]:
                    a[t] = [x + y for x, y in zip(a[t], a[i])]
                    off = True
                    break
            if off:
                break
        if off:
            continue
        divisors.append(abs(a[t][t]))
        t += 1
    return [d for d in divisors if d]


def simplicial_homology(facets):
    """Integer homology groups: list of (free_rank, [torsion]) per dimension."""
    by_dim, mats = simplicial_boundaries(facets)
    top = max(by_dim)
    out = []
    for k in range(0, top + 1):
        nk = len(by_dim.get(k, []))
        d_k = mats.get(k, [[0] * nk for _ in range(0)])
        rank_k = dense_rank(d_k) if (k in mats and by_dim.get(k - 1)) else 0
        d_k1 = mats.get(k + 1)
        if d_k1 and by_dim.get(k + 1):
            rank_k1 = dense_rank(d_k1)
            divisors = _diagonalize_int(d_k1)
        else:
            rank_k1 = 0
            divisors = []
        free = nk - rank_k - rank_k1
        torsion = [d for d in divisors if d > 1]
        out.append((free, torsion))
    return out


# -- deterministic random fixtures ---------------------------------------


def random_fixture(seed: int, kind: str, **params):
    """Deterministic pseudo-random instances for property tests.

    kind 'matrix': params rows, cols, density, max_abs -> entry list.
    kind 'cdga': a random valid finite CDGA (built in the cdga module).
    kind 'presheaf': a random presheaf on a given site fixture.
    """
    rng = random.Random((seed, kind, tuple(sorted(params.items()))).__repr__())
    if kind == "matrix":
        rows = params.get("rows", 6)
        cols = params.get("cols", 6)
        density = params.get("density", 0.3)
        max_abs = params.get("max_abs", 5)
        entries = []
        for i in range(rows):
            for j in range(cols):
                if rng.random() < density:
                    num = rng.randint(-max_abs, max_abs)
                    if num:
                        den = rng.choice([1, 1, 1, 2, 3])
                        entries.append((i, j, Fraction(num, den)))
        return entries
    if kind == "cdga":
        from . import cdga as _cdga

        return _cdga.random_cdga(rng, max_gens=params.get("max_gens", 3))
    if kind == "presheaf":
        from . import sites as _sites

        return _sites.random_presheaf(params["site"], rng,
                                      max_pieces=params.get("max_pieces", 3))
    raise ValueError(f"unknown fixture kind {kind!r}")
