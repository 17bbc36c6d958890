"""Spectral sequence of the form-degree filtration on the twisted complex.

Cohomological conventions: F^s is spanned by basis vectors of form degree
>= s, Z_r^s = { x in F^s : dx in F^(s+r) }, and

    E_r^s = Z_r^s / ( Z_(r-1)^(s+1) + d Z_(r-1)^(s-r+1) ),

all realised by explicit basis lifts so the d_r are concrete matrices.
With d = d_alg + lambda the page-1 differential is the algebra part and the
first twist contribution appears on page 3, where it must agree with
multiplication by the twist class.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotApplicable
from .linalg import Echelon, SparseMatrix, kernel_basis
from .twisted import TwistClass, TwoPeriodicComplex

ONE = Fraction(1)


class FilteredComplex:
    """A two-periodic twisted complex filtered by form degree."""

    def __init__(self, per: TwoPeriodicComplex):
        self.per = per
        c = per.parent
        self.parent = c
        self.twist = per.twist
        self.basis = {0: per.even_basis, 1: per.odd_basis}
        self.filtration = {
            u: [c.degrees[i] for i in self.basis[u]] for u in (0, 1)
        }
        self.d = {0: per.d_even_to_odd, 1: per.d_odd_to_even}
        self.top = c.top_degree

    def dim(self, u):
        return len(self.basis[u])


def filtered_complex(t: TwistClass) -> FilteredComplex:
    return FilteredComplex(TwoPeriodicComplex(t))


class Page:
    """One page: per (filtration, parity) a dim, explicit lifts, and d_r."""

    def __init__(self, r, entries, d_matrices):
        self.r = r
        self.entries = entries  # (s,u) -> {"dim": int, "lifts": [vec]}
        self.d_matrices = d_matrices  # (s,u) -> SparseMatrix into (s+r, u^1)

    def dim(self, s, u):
        e = self.entries.get((s, u))
        return e["dim"] if e else 0

    def total_dims(self):
        ev = sum(e["dim"] for (s, u), e in self.entries.items() if u == 0)
        od = sum(e["dim"] for (s, u), e in self.entries.items() if u == 1)
        return (ev, od)

    def d_is_zero(self):
        return all(m.is_zero() for m in self.d_matrices.values())


def _filtration_span(f: FilteredComplex, s, u):
    """Coordinate vectors of basis elements with form degree >= s."""
    return [
        {i: ONE}
        for i, deg in enumerate(f.filtration[u])
        if deg >= s
    ]


def _z_space(f: FilteredComplex, r, s, u):
    """Basis of Z_r^(s,u) = { x in F^s : dx in F^(s+r) } in ambient coords."""
    if r < 0:
        return _filtration_span(f, s, u)
    cols = [i for i, deg in enumerate(f.filtration[u]) if deg >= s]
    bad_rows = [i for i, deg in enumerate(f.filtration[1 - u]) if deg < s + r]
    ent = {}
    d = f.d[u]
    rpos = {g: i for i, g in enumerate(bad_rows)}
    cpos = {g: i for i, g in enumerate(cols)}
    for (rr, cc), v in d.entries.items():
        if rr in rpos and cc in cpos:
            ent[(rpos[rr], cpos[cc])] = v
    m = SparseMatrix(len(bad_rows), len(cols), ent)
    ker = kernel_basis(m)
    return [{cols[i]: v for i, v in vec.items()} for vec in ker.basis]


def pages(f: FilteredComplex, r_max: int):
    """Pages E_0..E_r_max with explicit subquotient lifts and d_r matrices."""
    out = []
    smax = f.top
    for r in range(r_max + 1):
        entries = {}
        lifts_cache = {}
        for u in (0, 1):
            for s in range(0, smax + 1):
                z = _z_space(f, r, s, u)
                ech = Echelon()
                for b in _z_space(f, r - 1, s + 1, u):
                    ech.add(b)
                for b in _z_space(f, r - 1, s - r + 1, 1 - u):
                    ech.add(f.d[1 - u].apply(b))
                boundary_dim = ech.dim
                lifts = []
                for v in z:
                    if ech.add(v):
                        lifts.append(v)
                entries[(s, u)] = {"dim": len(lifts), "lifts": lifts,
                                   "boundary_dim": boundary_dim}
                lifts_cache[(s, u)] = lifts
        d_matrices = {}
        for (s, u), e in entries.items():
            tgt = entries.get((s + r, 1 - u))
            if tgt is None:
                d_matrices[(s, u)] = SparseMatrix(0, e["dim"])
                continue
            # coordinates of [d lift] in E_r^(s+r): reduce by the boundary
            # echelon of the target, then read coefficients on target lifts
            ech = Echelon()
            for b in _z_space(f, r - 1, s + r + 1, 1 - u):
                ech.add(b)
            for b in _z_space(f, r - 1, s + 1, u):
                ech.add(f.d[u].apply(b))
            nb = ech.dim
            for lv in tgt["lifts"]:
                ech.add(lv)
            ent = {}
            for col, v in enumerate(e["lifts"]):
                dv = f.d[u].apply(v)
                res, combo = ech.reduce(dv)
                if res:
                    raise AssertionError("d(lift) escaped Z_r of the target")
                for k, cval in combo.items():
                    if k >= nb:
                        ent[(k - nb, col)] = cval
            d_matrices[(s, u)] = SparseMatrix(tgt["dim"], e["dim"], ent)
        out.append(Page(r, entries, d_matrices))
    return out


def stabilization_page(page_list):
    """First r with E_r = E_(r+1) = ... and all later d_r zero, if visible."""
    for idx, page in enumerate(page_list):
        if all(
            page.dim(s, u) == later.dim(s, u)
            for later in page_list[idx:]
            for (s, u) in page.entries
        ) and all(later.d_is_zero() for later in page_list[idx:]):
            return page.r
    return None


def d3_equals_lambda_cup(f: FilteredComplex, t: TwistClass):
    """Is d_3 on E_3 the multiplication by the twist class?

    Only meaningful when the model has zero differential, so that E_1 is the
    cohomology itself; otherwise NotApplicable is raised.  Returns
    (bool, witness) with witness None on success.
    """
    if not f.parent.differential.is_zero():
        raise NotApplicable("model differential is nonzero, E_1 is not H(X)")
    page3 = pages(f, 3)[3]
    c = f.parent
    lmat = c.left_mult_matrix(t.lam.coeffs)
    for (s, u), e in page3.entries.items():
        tgt = page3.entries.get((s + 3, 1 - u))
        dmat = page3.d_matrices[(s, u)]
        # set up target-side reduction: boundaries then target lifts
        ech = Echelon()
        for b in _z_space(f, 2, s + 4, 1 - u):
            ech.add(b)
        for b in _z_space(f, 2, s + 1, u):
            ech.add(f.d[u].apply(b))
        nb = ech.dim
        if tgt:
            for lv in tgt["lifts"]:
                ech.add(lv)
        for col, lift in enumerate(e["lifts"]):
            # cup side: multiply the degree-s component of the lift by lambda
            comp = {}
            for i, v in lift.items():
                gi = f.basis[u][i]
                if c.degrees[gi] == s:
                    comp[gi] = v
            cup = lmat.apply(comp)
            amb = {}
            pos = {g: i for i, g in enumerate(f.basis[1 - u])}
            for gi, v in cup.items():
                amb[pos[gi]] = v
            res, combo = ech.reduce(amb)
            if res:
                return False, (s, u, col, "cup image not in Z_3")
            cup_coords = {k - nb: v for k, v in combo.items() if k >= nb}
            d_coords = dmat.column(col)
            if cup_coords != d_coords:
                return False, (s, u, col, "d_3 and lambda-cup disagree")
    return True, None
