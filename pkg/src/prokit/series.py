"""Truncated power series in t over polynomial and Laurent coefficient rings.

A ``TruncatedSeries`` stores c_0, ..., c_N and is exact through t^N.  Products
are reported only as far as the inputs determine them.

Two computations live here: inversion up to t^n of a series whose bottom
coefficient may be a non-unit (coefficients then live in the ring localized
at that coefficient), and a box-bounded certifier for the absence of series
multiples with polynomial coefficients in x.
"""

import math
from dataclasses import dataclass, field as dc_field

from .algebra import QQ, PolyRing, exact_divide
from .algebra.linalg import SparseEchelon


class SeriesMismatch(ValueError):
    pass


class LocalizedPoly:
    """num / unit^k, canonical: unit does not divide num when k > 0."""

    __slots__ = ("num", "k", "unit")

    def __init__(self, num, k=0, unit=None):
        if unit is None or _is_unit_monomial(unit):
            # monomials are already units of the Laurent ring
            if unit is not None and k:
                num = exact_divide(num, unit**k)
            k, unit = 0, None
        else:
            while k > 0 and not num.is_zero():
                q = exact_divide(num, unit)
                if q is None:
                    break
                num, k = q, k - 1
            if num.is_zero():
                k = 0
        self.num = num
        self.k = k
        self.unit = unit

    @property
    def ring(self):
        return self.num.ring

    def _coerce(self, other):
        if isinstance(other, LocalizedPoly):
            if other.unit is not None and self.unit is not None and other.unit != self.unit:
                raise SeriesMismatch("localized at different elements")
            return other
        return LocalizedPoly(self.num.ring(other), 0, self.unit)

    def _unit_of(self, other):
        return self.unit if self.unit is not None else other.unit

    def __add__(self, other):
        other = self._coerce(other)
        u = self._unit_of(other)
        k = max(self.k, other.k)
        a = self.num * u ** (k - self.k) if k > self.k else self.num
        b = other.num * u ** (k - other.k) if k > other.k else other.num
        return LocalizedPoly(a + b, k, u)

    __radd__ = __add__

    def __neg__(self):
        return LocalizedPoly(-self.num, self.k, self.unit)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        return LocalizedPoly(self.num * other.num, self.k + other.k, self._unit_of(other))

    __rmul__ = __mul__

    def is_zero(self):
        return self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, LocalizedPoly):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.num == other.num and self.k == other.k and (self.k == 0 or self.unit == other.unit)

    def __hash__(self):
        return hash((self.num, self.k))

    def is_polynomial(self):
        return self.k == 0

    def format(self):
        if self.k == 0:
            return self.num.format()
        den = f"({self.unit.format()})" + (f"^{self.k}" if self.k > 1 else "")
        return f"({self.num.format()})/{den}"

    __str__ = format

    def __repr__(self):
        return f"LocalizedPoly({self.format()})"


def _is_unit_monomial(p):
    """A monomial whose variables are all Laurent is a unit."""
    if not p.is_monomial():
        return False
    e = p.leading_monomial()
    return all(k == 0 or lau for k, lau in zip(e, p.ring.laurent))


class TruncatedSeries:
    """sum_{i <= horizon} c_i t^i; ``unit`` names the localizing element if any."""

    def __init__(self, ring, coeffs, horizon=None, unit=None):
        if not isinstance(ring, PolyRing):
            raise TypeError("coefficient ring must be a PolyRing")
        if isinstance(coeffs, dict):
            horizon = max(coeffs, default=0) if horizon is None else horizon
            seq = [coeffs.get(i, 0) for i in range(horizon + 1)]
        else:
            seq = list(coeffs)
            horizon = len(seq) - 1 if horizon is None else horizon
            seq = seq[: horizon + 1] + [0] * (horizon + 1 - len(seq))
        if horizon < 0:
            raise ValueError("horizon must be nonnegative")
        self.ring = ring
        self.horizon = horizon
        self.unit = unit
        self.coeffs = tuple(self._coerce(c) for c in seq)
        if unit is None:
            u = next((c.unit for c in self.coeffs if isinstance(c, LocalizedPoly) and c.unit), None)
            if u is not None:
                self.unit = u
                self.coeffs = tuple(self._coerce(c) for c in self.coeffs)

    def _coerce(self, c):
        if isinstance(c, LocalizedPoly):
            if c.ring != self.ring:
                raise SeriesMismatch("coefficient from another ring")
            if self.unit is None or c.unit is not None:
                return c
            return LocalizedPoly(c.num, c.k, self.unit)
        p = self.ring(c)
        if self.unit is not None:
            return LocalizedPoly(p, 0, self.unit)
        return p

    @classmethod
    def parse(cls, ring, pairs, horizon):
        """From ``[(i, text), ...]`` pairs."""
        d = {}
        for i, text in pairs:
            d[int(i)] = d.get(int(i), ring.zero) + ring(text)
        return cls(ring, d, horizon)

    def _check(self, other):
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if other.ring != self.ring:
            raise SeriesMismatch("series over different coefficient rings")
        if self.unit is not None and other.unit is not None and self.unit != other.unit:
            raise SeriesMismatch("series localized at different elements")

    def _unit_of(self, other):
        return self.unit if self.unit is not None else other.unit

    def order(self):
        """Least i with c_i != 0, or None if zero through the horizon."""
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        return None

    def __getitem__(self, i):
        return self.coeffs[i]

    def __add__(self, other):
        self._check(other)
        N = min(self.horizon, other.horizon)
        u = self._unit_of(other)
        out = TruncatedSeries(self.ring, [], N, u)
        a, b = out._lift(self), out._lift(other)
        return TruncatedSeries(self.ring, [a[i] + b[i] for i in range(N + 1)], N, u)

    def __neg__(self):
        return TruncatedSeries(self.ring, [-c for c in self.coeffs], self.horizon, self.unit)

    def __sub__(self, other):
        return self + (-other)

    def _lift(self, s):
        return [self._coerce(c) for c in s.coeffs]

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.ring, [c * other for c in self.coeffs], self.horizon, self.unit)
        self._check(other)
        oa, ob = self.order(), other.order()
        # coefficient m needs every a_i b_{m-i}; unknown tails are far enough out
        N = min(
            self.horizon + (ob if ob is not None else other.horizon + 1),
            other.horizon + (oa if oa is not None else self.horizon + 1),
        )
        u = self._unit_of(other)
        tmp = TruncatedSeries(self.ring, [], 0, u)
        a, b = tmp._lift(self), tmp._lift(other)
        zero = tmp._coerce(0)
        out = []
        for m in range(N + 1):
            s = zero
            for i in range(max(0, m - other.horizon), min(m, self.horizon) + 1):
                if a[i].is_zero() or b[m - i].is_zero():
                    continue
                s = s + a[i] * b[m - i]
            out.append(s)
        return TruncatedSeries(self.ring, out, N, u)

    __rmul__ = __mul__

    def truncate(self, N):
        return TruncatedSeries(self.ring, self.coeffs[: N + 1], min(N, self.horizon), self.unit)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.horizon != other.horizon or self.ring != other.ring:
            return False
        return all(_coeff_eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def agrees_with(self, other, N):
        """Equal coefficients through t^N."""
        if self.horizon < N or other.horizon < N:
            raise ValueError(f"horizon too short to compare through t^{N}")
        return all(_coeff_eq(self.coeffs[i], other.coeffs[i]) for i in range(N + 1))

    def format(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            tp = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            s = c.format()
            if not tp:
                parts.append(s)
            elif s == "1":
                parts.append(tp)
            else:
                parts.append(f"({s})*{tp}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(t^{self.horizon + 1})"

    __str__ = format

    def __repr__(self):
        return f"TruncatedSeries({self.format()})"

    def as_pairs(self):
        return [(i, c.format()) for i, c in enumerate(self.coeffs) if not c.is_zero()]


def _coeff_eq(a, b):
    if isinstance(a, LocalizedPoly) or isinstance(b, LocalizedPoly):
        a = a if isinstance(a, LocalizedPoly) else LocalizedPoly(a)
        b = b if isinstance(b, LocalizedPoly) else LocalizedPoly(b)
    return a == b


def series_arith(op, a, b):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def t_power(ring, n, horizon):
    return TruncatedSeries(ring, {n: ring.one}, horizon)


def invert_to_tn(f, N=None):
    """g with f*g = t^n through t^N, where n is the t-order of f.

    g_0 = 1/f_n and g_{i+1} = -(sum_{j<=i} g_j f_{n+i+1-j}) / f_n, over the
    coefficient ring localized at f_n (no localization when f_n is a
    monomial of the Laurent ring).  Returns g with horizon N - n.
    """
    N = f.horizon if N is None else N
    if N > f.horizon:
        raise ValueError("N exceeds the horizon of f")
    n = f.order()
    if n is None or n > N:
        raise ValueError("f vanishes through the horizon")
    fn = f[n]
    if isinstance(fn, LocalizedPoly):
        raise ValueError("f must have polynomial coefficients")
    if _is_unit_monomial(fn):
        unit = None
        inv = LocalizedPoly(fn**-1)
    else:
        unit = fn
        inv = LocalizedPoly(fn.ring.one, 1, unit)
    coeffs = [LocalizedPoly(c, 0, unit) if not isinstance(c, LocalizedPoly) else c for c in f.coeffs]
    g = [inv]
    for i in range(N - n):
        s = LocalizedPoly(fn.ring.zero, 0, unit)
        for j in range(i + 1):
            c = coeffs[n + i + 1 - j]
            if not c.is_zero():
                s = s + g[j] * c
        g.append(-(s * inv))
    G = TruncatedSeries(fn.ring, g, N - n, unit)
    check = f * G
    if not check.truncate(N).agrees_with(t_power(fn.ring, n, N), N):
        raise AssertionError("inversion check failed")
    return G


@dataclass
class UnitEquivReport:
    n: int
    horizon: int
    witness: TruncatedSeries
    localized_at: object
    checks: dict

    @property
    def ok(self):
        return all(self.checks.values())


def unit_ideal_equiv(f, N=None):
    """Certificate that (f) = (t^n) through t^N after localizing at f_n."""
    N = f.horizon if N is None else N
    g = invert_to_tn(f, N)
    n = f.order()
    ring = f.ring
    prod = (f * g).truncate(N)
    tn = t_power(ring, n, N)
    # t^n = f*u, and f = t^n * (f / t^n)
    quotient = TruncatedSeries(ring, list(f.coeffs[n:]) + [0] * n, N, f.unit)
    back = (tn * quotient).truncate(N)
    checks = {
        "f_times_u_is_t^n": prod.agrees_with(tn, N),
        "f_divisible_by_t^n": back.truncate(N).agrees_with(f.truncate(N), N),
        "u_bottom_is_unit": not g[0].is_zero() and (g[0] * f[n]) == LocalizedPoly(ring.one, 0, g.unit),
    }
    return UnitEquivReport(n, N, g, g.unit, checks)


# ---------------------------------------------------------------------------
# certifier


def factorial_sequence(i):
    return math.factorial(i)


def theorem_series(N, a=factorial_sequence, field=QQ):
    """y + sum_{i=1}^N a_i x^{-i} t^i over k[x^±, y]."""
    ring = PolyRing("x y", field, laurent=["x"])
    x, y = ring.gens
    coeffs = [y] + [x**-i * ring.constant(a(i)) for i in range(1, N + 1)]
    return TruncatedSeries(ring, coeffs, N)


def _shape(f, N):
    ring = f.ring
    if ring.names != ("x", "y") or not ring.laurent[0] or ring.laurent[1]:
        raise ValueError("certifier expects coefficients in k[x^±, y] with names x, y")
    if f.horizon < N:
        raise ValueError(f"f is known only through t^{f.horizon}")
    if f[0] != ring.gen("y"):
        raise ValueError("t^0 coefficient must be y")
    a = [None]
    for i in range(1, N + 1):
        c = f[i]
        if isinstance(c, LocalizedPoly):
            raise ValueError("coefficients must be Laurent polynomials")
        d = c.as_dict()
        if not d:
            a.append(ring.field.zero)
            continue
        if list(d) != [(-i, 0)]:
            raise ValueError(f"t^{i} coefficient must be a scalar times x^-{i}, got {c}")
        a.append(d[(-i, 0)])
    return a


@dataclass
class PoleTrace:
    """Per index i: d_i, e_i (x-order of g_i, y-order of its bottom x-part),
    D_i, E_i (the same for the tail sum of a_j x^-j g_{i-j}).  None is +inf."""

    d: list
    e: list
    D: list
    E: list

    def rows(self):
        return list(zip(range(len(self.d)), self.d, self.e, self.D, self.E))

    def strictly_decreasing_once_negative(self):
        seen = None
        for v in self.D:
            if v is None:
                continue
            if seen is not None and v >= seen:
                return False
            if v < 0 or seen is not None:
                seen = v
        return True


def pole_trace(g):
    d, e = [], []
    for c in g.coeffs:
        terms = c.as_dict()
        if not terms:
            d.append(None)
            e.append(None)
            continue
        m = min(k[0] for k in terms)
        d.append(m)
        e.append(min(k[1] for k in terms if k[0] == m))
    D, E = [], []
    for i in range(len(d)):
        best = None
        for j in range(1, i + 1):
            if d[i - j] is None:
                continue
            v = d[i - j] - j
            if best is None or v < best:
                best = v
        D.append(best)
        if best is None:
            E.append(None)
        else:
            E.append(min(e[i - j] for j in range(1, i + 1) if d[i - j] is not None and d[i - j] - j == best))
    return PoleTrace(d, e, D, E)


@dataclass
class EmptyWithinBounds:
    box: tuple
    horizon: int
    unknowns: int
    equations: int
    rank: int
    note: str = "no nonzero solution with coefficients in the box exists; says nothing outside it"

    outcome = "EmptyWithinBounds"


@dataclass
class SolutionWithinHorizon:
    box: tuple
    horizon: int
    g: TruncatedSeries
    h: TruncatedSeries
    normalization: tuple
    trace: PoleTrace
    note: str = "a truncated solution exists in the box; inconclusive for the full series"

    outcome = "SolutionWithinHorizon"


def _norm_order(P, Xmax, D):
    cols = [(m, n) for m in range(-P, Xmax + 1) for n in range(D + 1)]
    return sorted(cols, key=lambda c: (c[1], abs(c[0]), c[0] < 0))


def certify_no_poly_multiple(f, box, N):
    """Search for g with g_0 != 0, coefficients in the box, and f*g free of
    negative x-exponents through t^N.

    ``box = (P, Xmax, D)`` bounds the x-exponents of every g_i to [-P, Xmax]
    and the y-degrees to [0, D].
    """
    P, Xmax, D = box
    if P < 0 or Xmax < -P or D < 0 or N < 0:
        raise ValueError("bad box or horizon")
    a = _shape(f, N)
    field = f.ring.field
    xs = range(-P, Xmax + 1)
    pref = _norm_order(P, Xmax, D)
    # g_0 columns get the largest indices, most preferred last
    index = {}
    for i in range(N, 0, -1):
        for m in xs:
            for n in range(D + 1):
                index[(i, m, n)] = len(index)
    for m, n in reversed(pref):
        index[(0, m, n)] = len(index)

    ech = SparseEchelon(field)
    neq = 0
    for i in range(N + 1):
        rows = {}
        for m in xs:
            if m >= 0:
                break
            for n in range(D + 1):
                rows.setdefault((m, n + 1), {})[index[(i, m, n)]] = field.one
        for j in range(1, i + 1):
            if a[j] == field.zero:
                continue
            for m in xs:
                if m - j >= 0:
                    continue
                for n in range(D + 1):
                    r = rows.setdefault((m - j, n), {})
                    col = index[(i - j, m, n)]
                    r[col] = field.add(r.get(col, field.zero), a[j])
        for r in rows.values():
            r = {c: v for c, v in r.items() if v != field.zero}
            if r:
                neq += 1
                ech.add(r)

    nunk = len(index)
    for m, n in pref:
        c = index[(0, m, n)]
        if c not in ech.pivots:
            vec = ech.kernel_vector(c)
        else:
            # a kernel vector built on free column f has v_c equal to the
            # f-entry of e_c reduced modulo the row space
            rem = ech.full_reduce({c: 1})
            if not rem:
                continue
            vec = ech.kernel_vector(max(rem))
        return _solution(f, box, N, vec, index, (0, m, n))
    return EmptyWithinBounds(box, N, nunk, neq, ech.rank)


def _solution(f, box, N, vec, index, norm):
    ring = f.ring
    field = ring.field
    coeffs = [dict() for _ in range(N + 1)]
    for (i, m, n), col in index.items():
        v = vec.get(col)
        if v:
            coeffs[i][(m, n)] = field(v)
    g = TruncatedSeries(ring, [ring.from_dict(c) for c in coeffs], N)
    h = (f.truncate(N) * g).truncate(N)
    for c in h.coeffs:
        if any(e[0] < 0 for e in c.as_dict()):
            raise AssertionError("returned solution has negative x-exponents")
    return SolutionWithinHorizon(box, N, g, h, norm, pole_trace(g))


@dataclass
class SweepResult:
    table: dict
    capped: list = dc_field(default_factory=list)
    xmax: int = 0
    D: int = 0

    def monotone(self):
        vals = [self.table[p] for p in sorted(self.table) if self.table[p] is not None]
        return all(a <= b for a, b in zip(vals, vals[1:]))


def pole_growth_sweep(a=factorial_sequence, P_range=range(0, 5), D=3, step=2, xmax=None, cap=40, field=QQ):
    """For each P, the least horizon N at which the box (P, xmax, D) is empty.

    ``xmax`` defaults to P.  Infeasibility is monotone in N, so the search
    gallops by ``step`` and then bisects.  P values whose systems stay
    feasible up to ``cap`` are listed in ``capped`` with value None.
    """
    f = theorem_series(cap, a, field)
    table, capped = {}, []

    def empty(P, N):
        box = (P, P if xmax is None else xmax, D)
        return isinstance(certify_no_poly_multiple(f, box, N), EmptyWithinBounds)

    for P in P_range:
        lo, hi = -1, None
        for N in sorted(set(range(0, cap, step)) | {cap}):
            if empty(P, N):
                hi = N
                break
            lo = N
        if hi is None:
            table[P] = None
            capped.append(P)
            continue
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if empty(P, mid):
                hi = mid
            else:
                lo = mid
        table[P] = hi
    res = SweepResult(table, capped, xmax, D)
    if not res.monotone():
        raise AssertionError("sweep is not monotone in P")
    return res
