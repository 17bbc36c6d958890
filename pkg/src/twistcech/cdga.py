"""Finite-dimensional graded-commutative differential graded algebras over Q.

A CDGA here is a finite basis with declared degrees (basis element 0 is the
unit), a degree +1 differential, and a sparse multiplication table.  These
play the role of de Rham algebras of compact pieces: the declared top degree
is the model's "dimension".
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct

from .errors import CapRequired, DegreeMismatch
from .linalg import Echelon, SparseMatrix, frac, kernel_basis, rank, span_basis

ONE = Fraction(1)


class ValidationReport:
    """Accumulated axiom violations, each with a witness."""

    def __init__(self):
        self.violations = []

    def add(self, kind, witness, message):
        self.violations.append((kind, witness, message))

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "ValidationReport(ok)"
        lines = [f"  [{k}] witness={w}: {m}" for k, w, m in self.violations]
        return "ValidationReport(\n" + "\n".join(lines) + "\n)"


class Element:
    """A (possibly inhomogeneous) element of a CDGA, as a sparse coefficient vector."""

    __slots__ = ("parent", "coeffs", "degree")

    def __init__(self, parent, coeffs, degree="auto"):
        self.parent = parent
        self.coeffs = {i: frac(c) for i, c in coeffs.items() if c}
        if degree == "auto":
            degs = {parent.degrees[i] for i in self.coeffs}
            degree = degs.pop() if len(degs) == 1 else (0 if not degs else None)
        self.degree = degree

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.parent is other.parent
            and self.coeffs == other.coeffs
        )

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            s = out.get(i, Fraction(0)) + c
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return Element(self.parent, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = frac(c)
        return Element(self.parent, {i: c * v for i, v in self.coeffs.items()})

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        self._check(other)
        return Element(self.parent, self.parent.mul_coeffs(self.coeffs, other.coeffs))

    def d(self):
        return Element(self.parent, self.parent.d_coeffs(self.coeffs))

    def _check(self, other):
        if other.parent is not self.parent:
            raise DegreeMismatch("elements of different algebras")

    def homogeneous_part(self, k):
        return Element(
            self.parent,
            {i: c for i, c in self.coeffs.items() if self.parent.degrees[i] == k},
            degree=k,
        )

    def __repr__(self):
        names = self.parent.basis_names
        terms = [f"{c}*{names[i]}" for i, c in sorted(self.coeffs.items())]
        return " + ".join(terms) if terms else "0"


class CDGA:
    def __init__(self, degrees, differential, product, top_degree=None, name="",
                 basis_names=None):
        self.degrees = tuple(int(d) for d in degrees)
        n = len(self.degrees)
        if isinstance(differential, SparseMatrix):
            self.differential = differential
        else:
            self.differential = SparseMatrix(n, n, differential)
        self.product = {}
        for (i, j), vec in product.items():
            clean = {k: frac(c) for k, c in vec.items() if c}
            if clean:
                self.product[(i, j)] = clean
        self.top_degree = max(self.degrees) if top_degree is None else int(top_degree)
        self.name = name
        self.basis_names = list(basis_names) if basis_names else [
            f"e{i}" for i in range(n)
        ]

    @property
    def dim(self):
        return len(self.degrees)

    def degree_indices(self, k):
        return [i for i, d in enumerate(self.degrees) if d == k]

    def betti_input_dims(self):
        dims = {}
        for d in self.degrees:
            dims[d] = dims.get(d, 0) + 1
        return dims

    def unit(self):
        return Element(self, {0: ONE}, degree=0)

    def zero(self):
        return Element(self, {}, degree=None)

    def element(self, coeffs, degree="auto"):
        return Element(self, coeffs, degree)

    def basis_element(self, i):
        return Element(self, {i: ONE}, degree=self.degrees[i])

    def mul_coeffs(self, x: dict, y: dict) -> dict:
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                vec = self.product.get((i, j))
                if not vec:
                    continue
                ab = a * b
                for k, c in vec.items():
                    s = out.get(k, Fraction(0)) + ab * c
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def d_coeffs(self, x: dict) -> dict:
        out = {}
        ent = self.differential.entries
        cols = {}
        for (r, c), v in ent.items():
            cols.setdefault(c, {})[r] = v
        for i, a in x.items():
            col = cols.get(i)
            if not col:
                continue
            for r, v in col.items():
                s = out.get(r, Fraction(0)) + a * v
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        return out

    def left_mult_matrix(self, coeffs: dict) -> SparseMatrix:
        """Matrix of x -> (coeffs) * x on the full basis."""
        ent = {}
        for j in range(self.dim):
            img = self.mul_coeffs(coeffs, {j: ONE})
            for i, c in img.items():
                ent[(i, j)] = c
        return SparseMatrix(self.dim, self.dim, ent)

    def differential_block(self, k) -> SparseMatrix:
        """d restricted to degree k, as a map to degree k+1 in block bases."""
        src = self.degree_indices(k)
        tgt = self.degree_indices(k + 1)
        tpos = {g: i for i, g in enumerate(tgt)}
        ent = {}
        for jj, j in enumerate(src):
            for r, v in self.d_coeffs({j: ONE}).items():
                ent[(tpos[r], jj)] = v
        return SparseMatrix(len(tgt), len(src), ent)

    def __repr__(self):
        return f"CDGA({self.name or 'unnamed'}, dim={self.dim}, top={self.top_degree})"


def validate_cdga(c: CDGA) -> ValidationReport:
    """Check every CDGA axiom; each violation is reported with a witness."""
    rep = ValidationReport()
    n = c.dim
    if n == 0:
        rep.add("unit", None, "empty basis")
        return rep
    if c.degrees[0] != 0:
        rep.add("unit", 0, "basis element 0 must have degree 0")
    # degree respect
    for (r, col), v in c.differential.entries.items():
        if c.degrees[r] != c.degrees[col] + 1:
            rep.add("degree", (r, col), "differential entry does not raise degree by 1")
    for (i, j), vec in c.product.items():
        for k in vec:
            if c.degrees[k] != c.degrees[i] + c.degrees[j]:
                rep.add("degree", (i, j, k), "product entry violates grading")
    # unit
    for i in range(n):
        if c.mul_coeffs({0: ONE}, {i: ONE}) != {i: ONE}:
            rep.add("unit", (0, i), "unit fails to act as left identity")
        if c.mul_coeffs({i: ONE}, {0: ONE}) != {i: ONE}:
            rep.add("unit", (i, 0), "unit fails to act as right identity")
    # d^2 = 0
    dd = c.differential * c.differential
    if not dd.is_zero():
        witness = sorted(dd.entries)[0]
        rep.add("d_squared", witness, "d o d != 0")
    # Leibniz and graded commutativity on basis pairs
    basis_d = [c.d_coeffs({i: ONE}) for i in range(n)]
    for i in range(n):
        for j in range(n):
            ij = c.mul_coeffs({i: ONE}, {j: ONE})
            lhs = c.d_coeffs(ij)
            sign = -ONE if c.degrees[i] % 2 else ONE
            rhs = c.mul_coeffs(basis_d[i], {j: ONE})
            for k, v in c.mul_coeffs({i: ONE}, basis_d[j]).items():
                s = rhs.get(k, Fraction(0)) + sign * v
                if s:
                    rhs[k] = s
                else:
                    rhs.pop(k, None)
            if lhs != rhs:
                rep.add("leibniz", (i, j), "d(x*y) != dx*y + (-1)^|x| x*dy")
            ji = c.mul_coeffs({j: ONE}, {i: ONE})
            sgn = -ONE if (c.degrees[i] * c.degrees[j]) % 2 else ONE
            if ij != {k: sgn * v for k, v in ji.items()}:
                rep.add("commutativity", (i, j), "x*y != (-1)^(|x||y|) y*x")
    # associativity on basis triples
    for i in range(n):
        for j in range(n):
            ij = c.mul_coeffs({i: ONE}, {j: ONE})
            if not ij and not any((j, k) in c.product for k in range(n)):
                pass
            for k in range(n):
                left = c.mul_coeffs(ij, {k: ONE})
                right = c.mul_coeffs({i: ONE}, c.mul_coeffs({j: ONE}, {k: ONE}))
                if left != right:
                    rep.add("associativity", (i, j, k), "(xy)z != x(yz)")
    return rep


# -- free graded-commutative constructions --------------------------------


class FreeCDGA(CDGA):
    """CDGA with a chosen monomial basis over graded generators."""

    def __init__(self, gen_degrees, caps, monomials, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.gen_degrees = tuple(gen_degrees)
        self.caps = tuple(caps)
        self.monomials = list(monomials)  # exponent tuples, index-aligned to basis
        self.monomial_index = {m: i for i, m in enumerate(self.monomials)}

    def generator(self, g):
        exps = tuple(1 if t == g else 0 for t in range(len(self.gen_degrees)))
        return self.basis_element(self.monomial_index[exps])

    def monomial(self, exps):
        return self.basis_element(self.monomial_index[tuple(exps)])


def _monomial_degree(exps, gen_degrees):
    return sum(e * d for e, d in zip(exps, gen_degrees))


def _monomial_mul(a, b, gen_degrees, caps):
    """Merge exponent tuples with Koszul sign; None when the product vanishes."""
    out = []
    for x, y, d, cap in zip(a, b, gen_degrees, caps):
        e = x + y
        if e > cap:
            return None, 0
        out.append(e)
    # sign: each odd factor of b passes the odd factors of a with larger index
    sign = 1
    odd = [i for i, d in enumerate(gen_degrees) if d % 2]
    for bi in odd:
        if not b[bi]:
            continue
        passed = sum(a[ai] for ai in odd if ai > bi)
        if passed % 2:
            sign = -sign
    return tuple(out), sign


def _monomial_name(exps, gen_names):
    parts = []
    for e, nm in zip(exps, gen_names):
        if e == 1:
            parts.append(nm)
        elif e > 1:
            parts.append(f"{nm}^{e}")
    return "*".join(parts) if parts else "1"


def exterior_algebra(gen_degrees, caps=None, name="", gen_names=None) -> FreeCDGA:
    """Free graded-commutative algebra with zero differential.

    Odd generators square to zero; each even generator needs a truncation
    cap (its power cap+1 is set to zero).
    """
    gen_degrees = list(gen_degrees)
    if any(d < 1 for d in gen_degrees):
        raise ValueError("generator degrees must be >= 1")
    if caps is None:
        caps = {}
    full_caps = []
    for idx, d in enumerate(gen_degrees):
        if d % 2:
            full_caps.append(1)
        else:
            cap = caps.get(idx) if isinstance(caps, dict) else caps[idx]
            if cap is None:
                raise CapRequired(f"even generator {idx} (degree {d}) has no cap")
            full_caps.append(int(cap))
    ranges = [range(c + 1) for c in full_caps]
    monomials = sorted(
        iproduct(*ranges),
        key=lambda m: (_monomial_degree(m, gen_degrees), m),
    )
    index = {m: i for i, m in enumerate(monomials)}
    degrees = [_monomial_degree(m, gen_degrees) for m in monomials]
    prod = {}
    for i, a in enumerate(monomials):
        for j, b in enumerate(monomials):
            m, sign = _monomial_mul(a, b, gen_degrees, full_caps)
            if m is not None and sign:
                prod[(i, j)] = {index[m]: Fraction(sign)}
    if gen_names is None:
        gen_names = [f"g{i}" for i in range(len(gen_degrees))]
    names = [_monomial_name(m, gen_names) for m in monomials]
    return FreeCDGA(
        gen_degrees,
        full_caps,
        monomials,
        degrees,
        {},
        prod,
        top_degree=max(degrees),
        name=name,
        basis_names=names,
    )


def with_generator_differential(alg: FreeCDGA, images: dict) -> FreeCDGA:
    """Install d on a free algebra from generator images, extended by Leibniz.

    images maps generator index -> Element (or coefficient dict) of degree
    deg(gen)+1.  The result is only a complex when the images are chosen
    consistently; validate_cdga is the arbiter.
    """
    img = {}
    for g, e in images.items():
        img[g] = e.coeffs if isinstance(e, Element) else dict(e)
    ent = {}
    for col, exps in enumerate(alg.monomials):
        # d(g1^a1 ... gk^ak) as a signed sum over factor slots
        total = {}
        factors = []
        for g, e in enumerate(exps):
            factors.extend([g] * e)
        for t, g in enumerate(factors):
            if g not in img:
                continue
            before = factors[:t]
            after = factors[t + 1 :]
            sign = 1
            for h in before:
                if alg.gen_degrees[h] % 2:
                    sign = -sign
            # multiply: prefix * d(g) * suffix
            acc = {alg.monomial_index[_exps_of(before, len(alg.gen_degrees))]: Fraction(sign)}
            acc = alg.mul_coeffs(acc, img[g])
            suffix = {alg.monomial_index[_exps_of(after, len(alg.gen_degrees))]: ONE}
            acc = alg.mul_coeffs(acc, suffix)
            for k, v in acc.items():
                s = total.get(k, Fraction(0)) + v
                if s:
                    total[k] = s
                else:
                    total.pop(k, None)
        for r, v in total.items():
            ent[(r, col)] = v
    return FreeCDGA(
        alg.gen_degrees,
        alg.caps,
        alg.monomials,
        alg.degrees,
        ent,
        alg.product,
        top_degree=alg.top_degree,
        name=alg.name,
        basis_names=alg.basis_names,
    )


def _exps_of(factors, ngens):
    out = [0] * ngens
    for g in factors:
        out[g] += 1
    return tuple(out)


def truncate_cdga(c: CDGA, max_degree: int, name=None) -> CDGA:
    """Quotient by the DG ideal of everything above max_degree."""
    keep = [i for i, d in enumerate(c.degrees) if d <= max_degree]
    pos = {i: t for t, i in enumerate(keep)}
    degrees = [c.degrees[i] for i in keep]
    dent = {}
    for (r, col), v in c.differential.entries.items():
        if r in pos and col in pos:
            dent[(pos[r], pos[col])] = v
    prod = {}
    for (i, j), vec in c.product.items():
        if i in pos and j in pos:
            clean = {pos[k]: v for k, v in vec.items() if k in pos}
            if clean:
                prod[(pos[i], pos[j])] = clean
    out = CDGA(
        degrees,
        dent,
        prod,
        top_degree=min(c.top_degree, max_degree),
        name=name or f"{c.name}|<={max_degree}",
        basis_names=[c.basis_names[i] for i in keep],
    )
    out.index_map = pos  # old basis index -> new
    return out


def tensor_cdga(a: CDGA, b: CDGA) -> CDGA:
    """Graded tensor product with the Koszul sign rule."""
    pairs = sorted(
        ((i, j) for i in range(a.dim) for j in range(b.dim)),
        key=lambda p: (a.degrees[p[0]] + b.degrees[p[1]], p),
    )
    # unit pair must sit at index 0
    pairs.remove((0, 0))
    pairs.insert(0, (0, 0))
    index = {p: t for t, p in enumerate(pairs)}
    degrees = [a.degrees[i] + b.degrees[j] for (i, j) in pairs]
    prod = {}
    for t1, (i1, j1) in enumerate(pairs):
        for t2, (i2, j2) in enumerate(pairs):
            sgn = -ONE if (b.degrees[j1] * a.degrees[i2]) % 2 else ONE
            va = a.product.get((i1, i2))
            vb = b.product.get((j1, j2))
            if not va or not vb:
                continue
            vec = {}
            for k1, c1 in va.items():
                for k2, c2 in vb.items():
                    vec[index[(k1, k2)]] = sgn * c1 * c2
            prod[(t1, t2)] = vec
    dent = {}
    for t, (i, j) in enumerate(pairs):
        img = {}
        for r, v in a.d_coeffs({i: ONE}).items():
            img[index[(r, j)]] = img.get(index[(r, j)], Fraction(0)) + v
        sgn = -ONE if a.degrees[i] % 2 else ONE
        for r, v in b.d_coeffs({j: ONE}).items():
            key = index[(i, r)]
            img[key] = img.get(key, Fraction(0)) + sgn * v
        for r, v in img.items():
            if v:
                dent[(r, t)] = v
    names = [
        f"{a.basis_names[i]}|{b.basis_names[j]}" for (i, j) in pairs
    ]
    out = CDGA(
        degrees,
        dent,
        prod,
        top_degree=a.top_degree + b.top_degree,
        name=f"{a.name}(x){b.name}",
        basis_names=names,
    )
    out.pair_index = index
    return out


def identity_morphism(c: CDGA) -> "CDGAMorphism":
    return CDGAMorphism(c, c, SparseMatrix.identity(c.dim))


class CDGAMorphism:
    """Degree-0 unital algebra chain map, stored as a matrix on basis columns."""

    def __init__(self, source: CDGA, target: CDGA, matrix: SparseMatrix):
        self.source = source
        self.target = target
        self.matrix = matrix

    def apply(self, e: Element) -> Element:
        if e.parent is not self.source:
            raise DegreeMismatch("element not in the morphism's source algebra")
        return Element(self.target, self.matrix.apply(e.coeffs), degree=e.degree)

    def compose(self, other: "CDGAMorphism") -> "CDGAMorphism":
        """self o other."""
        if other.target is not self.source:
            raise DegreeMismatch("morphisms not composable")
        return CDGAMorphism(other.source, self.target, self.matrix * other.matrix)

    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        s, t, m = self.source, self.target, self.matrix
        if (m.rows, m.cols) != (t.dim, s.dim):
            rep.add("shape", (m.rows, m.cols), "matrix shape mismatch")
            return rep
        for (r, c), v in m.entries.items():
            if t.degrees[r] != s.degrees[c]:
                rep.add("degree", (r, c), "morphism entry changes degree")
        if m.apply({0: ONE}) != {0: ONE}:
            rep.add("unital", 0, "f(1) != 1")
        lhs = m * s.differential
        rhs = t.differential * m
        if lhs != rhs:
            key = sorted((lhs - rhs).entries)[0]
            rep.add("chain", key, "f does not commute with d")
        for i in range(s.dim):
            fi = m.apply({i: ONE})
            for j in range(s.dim):
                prod = s.mul_coeffs({i: ONE}, {j: ONE})
                lhs_v = m.apply(prod)
                rhs_v = t.mul_coeffs(fi, m.apply({j: ONE}))
                if lhs_v != rhs_v:
                    rep.add("multiplicative", (i, j), "f(xy) != f(x)f(y)")
        return rep


def apply_morphism(f: CDGAMorphism, e: Element) -> Element:
    return f.apply(e)


# -- cohomology ------------------------------------------------------------


def cohomology_ring(c: CDGA):
    """Per-degree cohomology dimensions and representative cocycles.

    Returns (dims, reps): dims[k] for k in 0..top_degree, reps[k] a list of
    Elements spanning a complement of the exact cocycles.
    """
    dims = []
    reps = []
    for k in range(c.top_degree + 1):
        src = c.degree_indices(k)
        dk = c.differential_block(k)
        ker = kernel_basis(dk)
        prev = c.degree_indices(k - 1)
        ech = Echelon()
        if prev:
            dprev = c.differential_block(k - 1)
            for col in dprev.columns():
                ech.add(col)
        chosen = []
        for v in ker.basis:
            if ech.add(v):
                chosen.append(v)
        dims.append(len(chosen))
        reps.append(
            [
                Element(c, {src[i]: val for i, val in v.items()}, degree=k)
                for v in chosen
            ]
        )
    return dims, reps


def betti_numbers(c: CDGA):
    dims, _ = cohomology_ring(c)
    return dims


# -- random valid instances (used by the oracle module) --------------------


def random_cdga(rng, max_gens=3) -> FreeCDGA:
    """A random valid CDGA: free generators, differential onto closed monomials."""
    ngens = rng.randint(1, max_gens)
    gen_degrees = [rng.randint(1, 3) for _ in range(ngens)]
    caps = {i: rng.randint(1, 2) for i, d in enumerate(gen_degrees) if d % 2 == 0}
    alg = exterior_algebra(gen_degrees, caps)
    # send some generators to closed monomials of matching degree built from
    # generators that are themselves sent to zero
    closed = set(range(ngens))
    images = {}
    for g in rng.sample(range(ngens), k=ngens):
        want = gen_degrees[g] + 1
        candidates = []
        for m, exps in enumerate(alg.monomials):
            if alg.degrees[m] != want:
                continue
            support = [i for i, e in enumerate(exps) if e]
            if all(i in closed and i != g for i in support):
                candidates.append(m)
        if candidates and rng.random() < 0.6:
            m = rng.choice(candidates)
            images[g] = {m: Fraction(rng.randint(1, 3))}
            closed.discard(g)
    out = with_generator_differential(alg, images) if images else alg
    out.name = f"random({ngens} gens)"
    return out
