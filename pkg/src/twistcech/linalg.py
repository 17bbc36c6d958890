"""Exact sparse linear algebra over the rationals and integers.

Every cohomology computation in the package reduces to ranks, kernels and
linear solves of sparse matrices with Fraction entries.  Matrices are
immutable after construction; all operations return new values, so instances
are safe to share across threads.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import CompositionNonzero

Vec = dict  # sparse column vector: index -> nonzero Fraction


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec_add(u: Vec, v: Vec, c=Fraction(1)) -> Vec:
    """u + c*v, dropping zeros."""
    out = dict(u)
    for k, val in v.items():
        s = out.get(k, Fraction(0)) + c * val
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(v: Vec, c: Fraction) -> Vec:
    if not c:
        return {}
    return {k: c * val for k, val in v.items()}


class SparseMatrix:
    """rows x cols matrix over Q; entries maps (row, col) -> nonzero Fraction."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Mapping | Iterable = ()):
        self.rows = rows
        self.cols = cols
        ent = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for key, val in items:
            r, c = key
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry {key} out of range for {rows}x{cols}")
            v = frac(val)
            if v:
                ent[(r, c)] = v
        self.entries = ent

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def from_rows(cls, dense) -> "SparseMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        ent = {}
        for i, row in enumerate(dense):
            for j, v in enumerate(row):
                fv = frac(v)
                if fv:
                    ent[(i, j)] = fv
        return cls(rows, cols, ent)

    @classmethod
    def from_columns(cls, columns: list, rows: int) -> "SparseMatrix":
        ent = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    ent[(i, j)] = frac(v)
        return cls(rows, len(columns), ent)

    # -- accessors ------------------------------------------------------

    def __getitem__(self, key) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def column(self, j: int) -> Vec:
        return {r: v for (r, c), v in self.entries.items() if c == j}

    def columns(self) -> list:
        cols = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def row_dicts(self) -> list:
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def to_rows(self) -> list:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        ent = dict(self.entries)
        for k, v in other.entries.items():
            s = ent.get(k, Fraction(0)) + v
            if s:
                ent[k] = s
            else:
                ent.pop(k, None)
        return SparseMatrix(self.rows, self.cols, ent)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "SparseMatrix":
        c = frac(c)
        if not c:
            return SparseMatrix(self.rows, self.cols)
        return SparseMatrix(
            self.rows, self.cols, {k: c * v for k, v in self.entries.items()}
        )

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-1)

    def __mul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self!r} by {other!r}")
        by_row = [dict() for _ in range(other.rows)]
        for (r, c), v in other.entries.items():
            by_row[r][c] = v
        acc: dict = {}
        for (r, k), v in self.entries.items():
            row = by_row[k]
            if not row:
                continue
            for c, w in row.items():
                key = (r, c)
                s = acc.get(key, Fraction(0)) + v * w
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        return SparseMatrix(self.rows, other.cols, acc)

    def apply(self, v: Vec) -> Vec:
        """Matrix times sparse column vector."""
        out: dict = {}
        cols = {}
        for k, val in v.items():
            cols[k] = val
        for (r, c), w in self.entries.items():
            val = cols.get(c)
            if val is None:
                continue
            s = out.get(r, Fraction(0)) + w * val
            if s:
                out[r] = s
            else:
                out.pop(r, None)
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def hstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        ent = dict(self.entries)
        for (r, c), v in other.entries.items():
            ent[(r, c + self.cols)] = v
        return SparseMatrix(self.rows, self.cols + other.cols, ent)

    def vstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.cols:
            raise ValueError("col mismatch")
        ent = dict(self.entries)
        for (r, c), v in other.entries.items():
            ent[(r + self.rows, c)] = v
        return SparseMatrix(self.rows + other.rows, self.cols, ent)


# -- rank via sparse elimination ----------------------------------------


def rank(m: SparseMatrix) -> int:
    """Exact rank by elimination with a Markowitz-style pivot heuristic.

    Chooses pivots minimising (row_nnz-1)*(col_nnz-1) among the entries of a
    sparsest column, which keeps fill-in small on the chain-complex matrices
    this package produces.
    """
    rows: dict = {}
    col_rows: dict = {}
    for (r, c), v in m.entries.items():
        rows.setdefault(r, {})[c] = v
        col_rows.setdefault(c, set()).add(r)
    rk = 0
    while col_rows:
        # sparsest column, then cheapest row in it
        pc = min(col_rows, key=lambda c: len(col_rows[c]))
        pr = min(col_rows[pc], key=lambda r: len(rows[r]))
        rk += 1
        prow = rows.pop(pr)
        pval = prow[pc]
        for c in prow:
            s = col_rows.get(c)
            if s is not None:
                s.discard(pr)
                if not s:
                    del col_rows[c]
        targets = list(col_rows.get(pc, ()))
        for r in targets:
            row = rows[r]
            factor = row[pc] / pval
            for c, v in prow.items():
                cur = row.get(c)
                new = (cur if cur is not None else Fraction(0)) - factor * v
                if new:
                    if cur is None:
                        col_rows.setdefault(c, set()).add(r)
                    row[c] = new
                else:
                    if cur is not None:
                        del row[c]
                        s = col_rows.get(c)
                        if s is not None:
                            s.discard(r)
                            if not s:
                                del col_rows[c]
            if not row:
                del rows[r]
    return rk


class Subspace:
    """A subspace of Q^ambient_dim given by an independent list of sparse vectors."""

    def __init__(self, ambient_dim: int, basis: list):
        self.ambient_dim = ambient_dim
        self.basis = [dict(v) for v in basis]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> SparseMatrix:
        return SparseMatrix.from_columns(self.basis, self.ambient_dim)

    def contains(self, v: Vec) -> bool:
        ech = Echelon()
        for b in self.basis:
            ech.add(b)
        res, _ = ech.reduce(v)
        return not res

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


class Echelon:
    """Incremental row-style echelon of sparse vectors with combination tracking.

    add(v) reduces v against the stored vectors; if a nonzero residual is left
    it is stored (normalised) and the original index recorded.  reduce(v)
    returns (residual, combo) with v = sum combo[i] * original_i + residual.
    """

    def __init__(self):
        self.pivots: list = []  # parallel lists: pivot index, reduced vec, combo
        self.vecs: list = []
        self.combos: list = []
        self.count = 0  # originals seen so far

    def reduce(self, v: Vec):
        res = dict(v)
        combo: dict = {}
        for p, w, cmb in zip(self.pivots, self.vecs, self.combos):
            c = res.get(p)
            if c:
                for k, val in w.items():
                    s = res.get(k, Fraction(0)) - c * val
                    if s:
                        res[k] = s
                    else:
                        res.pop(k, None)
                for k, val in cmb.items():
                    s = combo.get(k, Fraction(0)) + c * val
                    if s:
                        combo[k] = s
                    else:
                        combo.pop(k, None)
        return res, combo

    def add(self, v: Vec) -> bool:
        """Insert v; returns True if it enlarged the span."""
        idx = self.count
        self.count += 1
        res, combo = self.reduce(v)
        if not res:
            return False
        p = min(res)  # smallest index as pivot: deterministic
        c = res[p]
        w = {k: val / c for k, val in res.items()}
        cmb = {k: -val / c for k, val in combo.items()}
        cmb[idx] = Fraction(1) / c  # v itself contributes
        self.pivots.append(p)
        self.vecs.append(w)
        self.combos.append(cmb)
        return True

    @property
    def dim(self) -> int:
        return len(self.pivots)


def span_basis(vectors: list, ambient_dim: int) -> Subspace:
    ech = Echelon()
    out = []
    for v in vectors:
        if ech.add(v):
            out.append(dict(v))
        # keep originals, not reduced forms: nicer witnesses
    return Subspace(ambient_dim, out)


def kernel_basis(m: SparseMatrix) -> Subspace:
    """Basis of { v : m v = 0 }; dimension is cols - rank."""
    # row-reduce, tracking pivot columns, then read off free-column vectors
    rows = [dict(r) for r in m.row_dicts() if r]
    pivots: dict = {}  # col -> reduced row
    for row in rows:
        row = dict(row)
        while row:
            j = min(row)
            if j in pivots:
                c = row[j]
                for k, v in pivots[j].items():
                    s = row.get(k, Fraction(0)) - c * v
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
            else:
                c = row[j]
                pivots[j] = {k: v / c for k, v in row.items()}
                break
    # back-substitute to full reduction
    for j in sorted(pivots, reverse=True):
        row = pivots[j]
        for j2 in sorted(pivots):
            if j2 <= j:
                continue
            c = row.get(j2)
            if c:
                for k, v in pivots[j2].items():
                    s = row.get(k, Fraction(0)) - c * v
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
        pivots[j] = row
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for j in free:
        v = {j: Fraction(1)}
        for pj, row in pivots.items():
            c = row.get(j)
            if c:
                v[pj] = -c
        basis.append(v)
    return Subspace(m.cols, basis)


def solve_linear(m: SparseMatrix, b: Vec):
    """Some x with m x = b, or None when the system is inconsistent."""
    rows = m.row_dicts()
    aug = []
    for i, row in enumerate(rows):
        r = dict(row)
        bv = b.get(i)
        if bv:
            r["rhs"] = bv
        if r:
            aug.append(r)
    pivots: dict = {}
    for row in aug:
        row = dict(row)
        while True:
            cols = [k for k in row if k != "rhs"]
            if not cols:
                if row.get("rhs"):
                    return None  # 0 = nonzero
                break
            j = min(cols)
            if j in pivots:
                c = row[j]
                for k, v in pivots[j].items():
                    s = row.get(k, Fraction(0)) - c * v
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
            else:
                c = row[j]
                pivots[j] = {k: v / c for k, v in row.items()}
                break
    x: dict = {}
    for j in sorted(pivots, reverse=True):
        row = pivots[j]
        val = row.get("rhs", Fraction(0))
        for k, v in row.items():
            if k in ("rhs", j):
                continue
            xv = x.get(k)
            if xv:
                val -= v * xv
        if val:
            x[j] = val
    return x


def cohomology_dim(d_in: SparseMatrix, d_out: SparseMatrix) -> int:
    """dim ker(d_out) - rank(d_in) for a composable pair with d_out d_in = 0."""
    if d_in.cols and d_out.rows:
        if not (d_out * d_in).is_zero():
            raise CompositionNonzero("d_out . d_in != 0")
    if d_out.cols != d_in.rows:
        raise ValueError("ambient dimension mismatch")
    return d_out.cols - rank(d_out) - rank(d_in)


def matrix_is_invertible(m: SparseMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


# -- Smith normal form ---------------------------------------------------


def smith_normal_form(m: SparseMatrix):
    """Smith normal form of an integer matrix.

    Returns (invariants, U, V) with U m V = D diagonal, d1 | d2 | ...,
    invariants the positive diagonal entries, and U, V unimodular.
    """
    A = [[int(v) for v in row] for row in m.to_rows()]
    for (r, c), v in m.entries.items():
        if v.denominator != 1:
            raise ValueError("smith_normal_form needs integer entries")
    n, p = m.rows, m.cols
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    V = [[1 if i == j else 0 for j in range(p)] for i in range(p)]

    def row_op(i, j, c):  # row_i += c * row_j
        Ai, Aj = A[i], A[j]
        for k in range(p):
            Ai[k] += c * Aj[k]
        Ui, Uj = U[i], U[j]
        for k in range(n):
            Ui[k] += c * Uj[k]

    def col_op(i, j, c):  # col_i += c * col_j
        for row in A:
            row[i] += c * row[j]
        for row in V:
            row[i] += c * row[j]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(n, p):
        # find smallest nonzero entry in the remaining block
        best = None
        for i in range(t, n):
            for j in range(t, p):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, n):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    row_op(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, p):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_op(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        dirty = True
        # divisibility fix-up: fold any non-multiple into the pivot block
        fixed = False
        for i in range(t + 1, n):
            for j in range(t + 1, p):
                if A[i][j] % A[t][t]:
                    row_op(t, i, 1)
                    fixed = True
                    break
            if fixed:
                break
        if fixed:
            continue
        if A[t][t] < 0:
            row_op(t, t, -2)
        t += 1
    invariants = [A[i][i] for i in range(min(n, p)) if A[i][i]]
    Um = SparseMatrix.from_rows(U)
    Vm = SparseMatrix.from_rows(V)
    return invariants, Um, Vm


def integer_cohomology(d_in: SparseMatrix, d_out: SparseMatrix):
    """H = ker(d_out)/im(d_in) over Z: returns (free_rank, torsion list)."""
    if d_in.cols and d_out.rows:
        if not (d_out * d_in).is_zero():
            raise CompositionNonzero("d_out . d_in != 0")
    ker = d_out.cols - rank(d_out)
    inv, _, _ = smith_normal_form(d_in)
    free = ker - len(inv)
    torsion = [d for d in inv if d not in (0, 1)]
    return free, torsion
