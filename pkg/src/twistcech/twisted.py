"""Twisted de Rham complexes on finite CDGA models.

Two models of the same cohomology: the two-periodic complex with
d = d_alg + lambda, and the z-graded complex with d = d_alg + T*lambda
(z formal of degree 2, T = d/dz).  The comparison maps psi_p, and the
gauge isomorphism exp(-gamma T) between cohomologous twists, are built as
explicit matrices so every identity can be checked exactly.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .cdga import CDGA, Element
from .errors import NotClosed
from .linalg import SparseMatrix, kernel_basis, matrix_is_invertible, rank

ONE = Fraction(1)


class TwistClass:
    """A closed degree-3 element of a CDGA."""

    def __init__(self, parent: CDGA, lam: Element):
        if lam.parent is not parent:
            raise NotClosed("twist element lives in the wrong algebra")
        if lam.coeffs and lam.degree != 3:
            raise NotClosed("twist must be homogeneous of degree 3")
        if lam.d().coeffs:
            raise NotClosed("twist is not closed")
        if max(parent.degrees) > parent.top_degree:
            raise ValueError(
                "model has basis elements above its declared top degree"
            )
        self.parent = parent
        self.lam = lam

    def __repr__(self):
        return f"TwistClass({self.parent.name}, {self.lam!r})"


class TwoPeriodicComplex:
    """Omega^even <-> Omega^odd with differential d + lambda."""

    def __init__(self, twist: TwistClass):
        c = twist.parent
        self.twist = twist
        self.parent = c
        self.even_basis = [i for i in range(c.dim) if c.degrees[i] % 2 == 0]
        self.odd_basis = [i for i in range(c.dim) if c.degrees[i] % 2 == 1]
        lmat = c.left_mult_matrix(twist.lam.coeffs)
        dmat = c.differential + lmat
        self.d_even_to_odd = _restrict(dmat, self.odd_basis, self.even_basis)
        self.d_odd_to_even = _restrict(dmat, self.even_basis, self.odd_basis)
        if not (self.d_odd_to_even * self.d_even_to_odd).is_zero():
            raise NotClosed("d_lambda^2 != 0 on the even part")
        if not (self.d_even_to_odd * self.d_odd_to_even).is_zero():
            raise NotClosed("d_lambda^2 != 0 on the odd part")

    def betti(self):
        h_even = len(self.even_basis) - rank(self.d_even_to_odd) - rank(self.d_odd_to_even)
        h_odd = len(self.odd_basis) - rank(self.d_odd_to_even) - rank(self.d_even_to_odd)
        return (h_even, h_odd)

    def differential(self, parity: int) -> SparseMatrix:
        return self.d_even_to_odd if parity % 2 == 0 else self.d_odd_to_even

    def basis(self, parity: int):
        return self.even_basis if parity % 2 == 0 else self.odd_basis


def _restrict(m: SparseMatrix, row_idx, col_idx) -> SparseMatrix:
    rpos = {g: i for i, g in enumerate(row_idx)}
    cpos = {g: i for i, g in enumerate(col_idx)}
    ent = {}
    for (r, c), v in m.entries.items():
        if r in rpos and c in cpos:
            ent[(rpos[r], cpos[c])] = v
    return SparseMatrix(len(row_idx), len(col_idx), ent)


def two_periodic_complex(t: TwistClass) -> TwoPeriodicComplex:
    return TwoPeriodicComplex(t)


class ZGradedComplex:
    """Total-degree pieces of Omega[[z]] with d = d_alg + T*lambda.

    pieces[p] lists monomials (n, j) meaning z^n * basis_j with
    2n + deg(j) = p; differentials[p] maps piece p to piece p+1.
    Pieces 0..max_degree+1 are built so H^p is available for
    p <= max_degree.
    """

    def __init__(self, twist: TwistClass, max_degree: int):
        if max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        c = twist.parent
        self.twist = twist
        self.parent = c
        self.max_degree = max_degree
        self.pieces = []
        for p in range(max_degree + 2):
            piece = []
            for j in range(c.dim):
                k = c.degrees[j]
                if k <= p and (p - k) % 2 == 0 and k <= c.top_degree:
                    piece.append(((p - k) // 2, j))
            self.pieces.append(piece)
        self.index = [
            {mono: i for i, mono in enumerate(piece)} for piece in self.pieces
        ]
        self.differentials = []
        lam = twist.lam.coeffs
        for p in range(max_degree + 1):
            tgt = self.index[p + 1]
            ent = {}
            for col, (n, j) in enumerate(self.pieces[p]):
                for r, v in c.d_coeffs({j: ONE}).items():
                    key = tgt.get((n, r))
                    if key is not None:
                        ent[(key, col)] = ent.get((key, col), Fraction(0)) + v
                if n >= 1:
                    for r, v in c.mul_coeffs(lam, {j: ONE}).items():
                        key = tgt.get((n - 1, r))
                        if key is not None:
                            ent[(key, col)] = ent.get((key, col), Fraction(0)) + n * v
            self.differentials.append(
                SparseMatrix(len(self.pieces[p + 1]), len(self.pieces[p]), ent)
            )
        for p in range(max_degree):
            if not (self.differentials[p + 1] * self.differentials[p]).is_zero():
                raise NotClosed(f"d^2 != 0 between degrees {p} and {p + 2}")

    def betti(self):
        out = []
        for p in range(self.max_degree + 1):
            ker = len(self.pieces[p]) - rank(self.differentials[p])
            img = rank(self.differentials[p - 1]) if p >= 1 else 0
            out.append(ker - img)
        return out

    def piece_dim(self, p):
        return len(self.pieces[p])


def z_graded_complex(t: TwistClass, max_degree: int) -> ZGradedComplex:
    return ZGradedComplex(t, max_degree)


def twisted_betti(c):
    """Per-parity or per-degree cohomology dimensions of a twisted complex."""
    return c.betti()


class PsiMap:
    """The comparison map from the parity-(p mod 2) space into z-degree p."""

    def __init__(self, p, matrix, source_basis, target_basis):
        self.p = p
        self.matrix = matrix
        self.source_basis = source_basis
        self.target_basis = target_basis

    def invertible(self) -> bool:
        return matrix_is_invertible(self.matrix)


def psi_map(t: TwistClass, p: int, z: ZGradedComplex | None = None) -> PsiMap:
    """psi_p sends a form of degree k = e+2i to z^(P-k)/2 * form / ((P-k)/2)!.

    The sum runs over every form degree of the right parity that fits, i.e.
    all i >= 0 with e+2i <= top_degree and (p-k)/2 >= 0; terms that would
    need a negative z-power are dropped.
    """
    if p < 1:
        raise ValueError("psi_p needs p >= 1")
    c = t.parent
    if z is None or z.max_degree + 1 < p:
        z = ZGradedComplex(t, p)
    e = p % 2
    source = [j for j in range(c.dim) if c.degrees[j] % 2 == e]
    tgt_index = z.index[p]
    ent = {}
    for col, j in enumerate(source):
        k = c.degrees[j]
        n = (p - k) // 2
        if p - k < 0:
            continue
        key = tgt_index.get((n, j))
        if key is not None:
            ent[(key, col)] = Fraction(1, factorial(n))
    matrix = SparseMatrix(len(z.pieces[p]), len(source), ent)
    return PsiMap(p, matrix, source, list(z.pieces[p]))


def psi_chain_residual(t: TwistClass, p: int, z: ZGradedComplex | None = None) -> SparseMatrix:
    """Matrix of psi_{p+1} d_per - d_z psi_p; exactly zero for a chain map."""
    if z is None or z.max_degree < p:
        z = ZGradedComplex(t, p + 1)
    per = TwoPeriodicComplex(t)
    psi_p = psi_map(t, p, z)
    psi_q = psi_map(t, p + 1, z)
    d_per = per.differential(p % 2)
    # reorder: per.basis(parity) must match psi source ordering (it does: both
    # enumerate basis indices ascending)
    lhs = psi_q.matrix * d_per
    rhs = z.differentials[p] * psi_p.matrix
    return lhs - rhs


def gauge_conjugate_twist(t: TwistClass, gamma: Element) -> TwistClass:
    return TwistClass(t.parent, t.lam + gamma.d())


class GaugeMap:
    """exp(-gamma T) from Omega[[z]]_lambda to Omega[[z]]_(lambda+d gamma)."""

    def __init__(self, parent: CDGA, gamma: Element, max_degree: int):
        if gamma.coeffs and gamma.degree != 2:
            raise ValueError("gauge parameter must be homogeneous of degree 2")
        self.parent = parent
        self.gamma = gamma
        self.max_degree = max_degree
        # z-degree pieces do not depend on the twist; borrow the untwisted ones
        zero = TwistClass(parent, parent.zero())
        self._z = ZGradedComplex(zero, max_degree)
        self.matrices = []
        c = parent
        for p in range(max_degree + 2):
            idx = self._z.index[p]
            ent = {}
            for col, (n, j) in enumerate(self._z.pieces[p]):
                acc = {j: ONE}  # (-gamma)^k * e_j accumulated
                binom = 1
                for k in range(0, n + 1):
                    if k > 0:
                        acc = c.mul_coeffs({i: -v for i, v in gamma.coeffs.items()}, acc)
                        binom = binom * (n - k + 1) // k
                    for r, v in acc.items():
                        key = idx.get((n - k, r))
                        if key is not None:
                            ent[(key, col)] = ent.get((key, col), Fraction(0)) + binom * v
            self.matrices.append(SparseMatrix(len(self._z.pieces[p]), len(self._z.pieces[p]), ent))

    def matrix(self, p):
        return self.matrices[p]

    def intertwines(self, t: TwistClass) -> bool:
        """d_(lambda+d gamma) o E == E o d_lambda in all built degrees."""
        z_src = ZGradedComplex(t, self.max_degree)
        z_tgt = ZGradedComplex(gauge_conjugate_twist(t, self.gamma), self.max_degree)
        for p in range(self.max_degree + 1):
            lhs = z_tgt.differentials[p] * self.matrices[p]
            rhs = self.matrices[p + 1] * z_src.differentials[p]
            if lhs != rhs:
                return False
        return True

    def is_invertible(self) -> bool:
        inv = GaugeMap(self.parent, -self.gamma, self.max_degree)
        for p in range(self.max_degree + 1):
            m = self.matrices[p] * inv.matrices[p]
            if m != SparseMatrix.identity(m.rows):
                return False
        return True


def gauge_transform(t: TwistClass, gamma: Element, max_degree: int) -> GaugeMap:
    return GaugeMap(t.parent, gamma, max_degree)
