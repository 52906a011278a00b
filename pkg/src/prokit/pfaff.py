"""Pfaff forms on the projective plane and their algebraic solutions.

A Pfaff form of degree m is a triple (w1, w2, w3) of degree-m forms in x, y, z
with x*w1 + y*w2 + z*w3 = 0.  A homogeneous f is an algebraic solution when
f divides every coefficient of w ∧ df.

Over a prime field the solutions of bounded degree can be enumerated
exhaustively; a numpy evaluation prefilter discards most candidates before
the exact divisibility test.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import GF, PolyRing, QQ, exact_divide
from .ideals import BudgetExceeded, default_budget, poly_gcd

DEFAULT_SEARCH_BUDGET = 10**6


class PfaffError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message if witness is None else f"{message}: {witness}")
        self.witness = witness


def standard_ring(field=QQ):
    return PolyRing("x y z", field)


def _three(ring):
    if ring.nvars != 3:
        raise ValueError("forms live in a ring with exactly three variables")


def euler_residual(w1, w2, w3):
    x, y, z = w1.ring.gens
    return x * w1 + y * w2 + z * w3


def _monomial_gcd(polys):
    exps = None
    for p in polys:
        for e in p.as_dict():
            exps = list(e) if exps is None else [min(a, b) for a, b in zip(exps, e)]
    return exps


class PfaffForm:
    """Validated homogeneous 1-form w1 dx + w2 dy + w3 dz satisfying Euler."""

    def __init__(self, w1, w2, w3):
        ring = w1.ring
        _three(ring)
        w1, w2, w3 = ring(w1), ring(w2), ring(w3)
        nz = [w for w in (w1, w2, w3) if not w.is_zero()]
        if not nz:
            raise PfaffError("the zero form is not a Pfaff form")
        for w in nz:
            if not w.is_homogeneous():
                raise PfaffError("coefficient is not homogeneous", w)
        degs = {w.total_degree() for w in nz}
        if len(degs) != 1:
            raise PfaffError(f"coefficients have different degrees {sorted(degs)}")
        res = euler_residual(w1, w2, w3)
        if not res.is_zero():
            raise PfaffError("Euler relation fails, residual", res)
        common = _monomial_gcd(nz)
        if common and any(common):
            raise PfaffError("coefficients share a monomial factor", ring.monomial(common))
        self.ring = ring
        self.coeffs = (w1, w2, w3)
        self.degree = degs.pop()

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, PfaffForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def scale(self, c):
        return PfaffForm(*(w.scale(c) for w in self.coeffs))

    def reduce_mod(self, p):
        """The same form over GF(p); rational denominators must be prime to p."""
        if self.ring.field.characteristic == p:
            return self
        F = GF(p)
        ring = self.ring.with_field(F)
        return PfaffForm(*(w.map_coefficients(F.reduce_rational, ring) for w in self.coeffs))

    def format(self):
        names = self.ring.names
        return " + ".join(f"({w.format()})*d{v}" for w, v in zip(self.coeffs, names))

    def __repr__(self):
        return f"PfaffForm(m={self.degree}: {self.format()})"


def pfaff_new(w1, w2, w3):
    return PfaffForm(w1, w2, w3)


def jouanolou_form(m, field=QQ):
    if m < 1:
        raise ValueError("m must be at least 1")
    R = standard_ring(field)
    x, y, z = R.gens
    return PfaffForm(x ** (m - 1) * z - y**m, y ** (m - 1) * x - z**m, z ** (m - 1) * y - x**m)


def integrability_check(w1, w2, w3):
    """w ∧ dw coefficient; zero exactly when the form is integrable."""
    d = lambda p, i: p.derivative(i)  # noqa: E731
    return w1 * (d(w3, 1) - d(w2, 2)) - w2 * (d(w3, 0) - d(w1, 2)) + w3 * (d(w2, 0) - d(w1, 1))


@dataclass(frozen=True)
class TwoForm:
    c_xy: object
    c_xz: object
    c_yz: object

    def coefficients(self):
        return (self.c_xy, self.c_xz, self.c_yz)

    def is_zero(self):
        return all(c.is_zero() for c in self.coefficients())


def _wedge(w1, w2, w3, f):
    fx, fy, fz = f.derivative(0), f.derivative(1), f.derivative(2)
    return TwoForm(w1 * fy - w2 * fx, w1 * fz - w3 * fx, w2 * fz - w3 * fy)


def wedge_df(form, f):
    w1, w2, w3 = form.coeffs if isinstance(form, PfaffForm) else form
    return _wedge(w1, w2, w3, f)


def is_algebraic_solution(form, f):
    """Cofactors (c_xy/f, c_xz/f, c_yz/f) when f divides w ∧ df, else None."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if not f.is_homogeneous():
        raise ValueError("f must be homogeneous")
    if f.is_constant():
        raise ValueError("f must be nonconstant")
    out = []
    for c in wedge_df(form, f).coefficients():
        q = exact_divide(c, f)
        if q is None:
            return None
        out.append(q)
    return tuple(out)


def exact_pair_form(f, q):
    """q df - f dq: both f and q are algebraic solutions of it."""
    if not (f.is_homogeneous() and q.is_homogeneous()):
        raise ValueError("f and q must be homogeneous")
    if f.total_degree() != q.total_degree():
        raise ValueError("f and q must have the same degree")
    if poly_gcd(f, q).total_degree() > 0:
        raise ValueError("f and q must be coprime")
    w = tuple(q * f.derivative(i) - f * q.derivative(i) for i in range(3))
    form = PfaffForm(*w)
    for s in (f, q):
        if is_algebraic_solution(form, s) is None:
            raise AssertionError(f"{s} is not a solution of its own pair form")
    return form


def projective_points(p):
    """P^2(F_p), first nonzero coordinate 1, in lexicographic order."""
    pts = []
    for lead in range(3):
        for rest in itertools.product(range(p), repeat=2 - lead):
            pts.append((0,) * lead + (1,) + rest)
    return pts


def singular_points_fp(form, p):
    F = form.reduce_mod(p)
    return [pt for pt in projective_points(p) if all(w.evaluate(pt) == 0 for w in F.coeffs)]


def _monomials(n):
    """Degree-n exponent vectors in x, y, z, degrevlex descending."""
    R = standard_ring(GF(2))
    mons = [e for e in itertools.product(range(n + 1), repeat=3) if sum(e) == n]
    return sorted(mons, key=R.order.key, reverse=True)


def candidate_count(p, n):
    M = len(_monomials(n))
    return (p**M - 1) // (p - 1)


def _candidate_blocks(p, M, chunk):
    """Coefficient vectors with first nonzero entry 1, in a fixed order."""
    for lead in range(M):
        tail = M - lead - 1
        total = p**tail
        for start in range(0, total, chunk):
            idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
            block = np.zeros((len(idx), M), dtype=np.int64)
            block[:, lead] = 1
            for k in range(tail):
                block[:, M - 1 - k] = idx % p
                idx = idx // p
            yield block


def _eval_tables(mons, pts, p):
    P = np.array(pts, dtype=np.int64)
    V = np.ones((len(pts), len(mons)), dtype=np.int64)
    Dv = [np.zeros((len(pts), len(mons)), dtype=np.int64) for _ in range(3)]
    for j, e in enumerate(mons):
        col = np.ones(len(pts), dtype=np.int64)
        for v in range(3):
            col = col * np.power(P[:, v], e[v]) % p
        V[:, j] = col
        for v in range(3):
            if e[v] == 0:
                continue
            de = list(e)
            de[v] -= 1
            c = np.full(len(pts), e[v] % p, dtype=np.int64)
            for u in range(3):
                c = c * np.power(P[:, u], de[u]) % p
            Dv[v][:, j] = c
    return V, Dv


def darboux_search_fp(form, p, n_max, budget=None, stats=None):
    """Every algebraic solution of degree 1..n_max over F_p, one per projective class.

    Output is sorted by degree and then by coefficient vector, independent of
    how the scan is chunked.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    budget = default_budget(DEFAULT_SEARCH_BUDGET) if budget is None else budget
    total = sum(candidate_count(p, n) for n in range(1, n_max + 1))
    if total > budget:
        raise BudgetExceeded(f"darboux search ({total} candidates)", budget)
    Fp = form.reduce_mod(p)
    ring = Fp.ring
    pts = projective_points(p)
    wv = np.array([[int(w.evaluate(pt)) for pt in pts] for w in Fp.coeffs], dtype=np.int64)
    found = []
    survivors = 0
    for n in range(1, n_max + 1):
        mons = _monomials(n)
        V, (Dx, Dy, Dz) = _eval_tables(mons, pts, p)
        for block in _candidate_blocks(p, len(mons), 1 << 15):
            fv = block @ V.T % p
            fx, fy, fz = block @ Dx.T % p, block @ Dy.T % p, block @ Dz.T % p
            cxy = (wv[0] * fy - wv[1] * fx) % p
            cxz = (wv[0] * fz - wv[2] * fx) % p
            cyz = (wv[1] * fz - wv[2] * fy) % p
            bad = (fv == 0) & ((cxy != 0) | (cxz != 0) | (cyz != 0))
            keep = ~bad.any(axis=1)
            for row in block[keep]:
                survivors += 1
                f = ring.from_dict({e: int(c) for e, c in zip(mons, row) if c})
                if is_algebraic_solution(Fp, f) is not None:
                    found.append((n, tuple(int(c) for c in row), f))
    found.sort(key=lambda t: (t[0], t[1]))
    if stats is not None:
        stats.update(candidates=total, survivors=survivors, points=len(pts))
    return [f for _, _, f in found]


@dataclass
class Divides:
    jets: tuple
    unit: bool = False

    outcome = "Divides"


@dataclass
class Fails:
    degree: int
    witness: object
    coefficient: str

    outcome = "Fails"


def _formal_quotient(h, f, N):
    """q with h = f*q through total degree N, or (degree, residual)."""
    n = f.min_degree()
    fn = f.homogeneous_component(n)
    comps = {k: f.homogeneous_component(k) for k in range(n, N + 1)}
    ring = f.ring
    q = {}
    for k in range(N + 1):
        r = h.homogeneous_component(k)
        for i in range(1, k - n + 1):
            qi = q.get(k - n - i)
            if qi is not None and not qi.is_zero():
                r = r - comps.get(n + i, ring.zero) * qi
        if k < n:
            if not r.is_zero():
                return None, (k, r)
            continue
        s = exact_divide(r, fn)
        if s is None:
            return None, (k, r)
        q[k - n] = s
    jet = ring.zero
    for s in q.values():
        jet = jet + s
    return jet, None


def formal_separatrix_check(w, f, N):
    """Does f divide w ∧ df in the power-series ring, through degree N?"""
    w1, w2, w3 = w.coeffs if isinstance(w, PfaffForm) else w
    f = w1.ring(f)
    if f.is_zero():
        raise ValueError("f must be nonzero")
    wedge = _wedge(w1, w2, w3, f)
    if not f.constant_coefficient() == f.ring.field.zero:
        # a unit divides everything
        return Divides(tuple(c.truncate(N) for c in wedge.coefficients()), unit=True)
    jets = []
    for name, c in zip(("xy", "xz", "yz"), wedge.coefficients()):
        jet, fail = _formal_quotient(c, f, N)
        if fail is not None:
            return Fails(fail[0], fail[1], name)
        jets.append(jet)
    return Divides(tuple(jets))


@dataclass
class LeadingFormVerdict:
    outcome: str
    leading_form: object = None
    cofactors: tuple = None
    message: str = ""


def leading_form_check(form, f, N):
    """If the jet f is a formal separatrix through degree N, its lowest
    homogeneous component should be an algebraic solution."""
    f = form.ring(f)
    n = f.min_degree()
    fn = f.homogeneous_component(n)
    need = max(2 * n, form.degree + n - 1)
    if N < need:
        return LeadingFormVerdict("PreconditionViolated", fn, message=f"N must be at least {need}")
    sep = formal_separatrix_check(form, f, N)
    if isinstance(sep, Fails):
        return LeadingFormVerdict(
            "PreconditionViolated", fn, message=f"jet fails the separatrix check at degree {sep.degree}"
        )
    if fn.is_constant():
        return LeadingFormVerdict("PreconditionViolated", fn, message="jet is a unit")
    cof = is_algebraic_solution(form, fn)
    if cof is None:
        return LeadingFormVerdict("Discrepancy", fn, message="leading form is not a solution")
    return LeadingFormVerdict("LeadingFormIsSolution", fn, cof)
