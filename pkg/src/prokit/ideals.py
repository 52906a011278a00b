"""Groebner-basis kernel: membership, containment, intersection, nilpotency.

All decisions reduce to Buchberger completion.  The S-pair budget is an
explicit resource cap: exceeding it raises :class:`BudgetExceeded` rather
than returning a partial basis.
"""

from dataclasses import dataclass
import itertools
import os
import threading

from .algebra.fields import QQ
from .algebra.poly import DEGREVLEX, MultiPoly, PolyRing, RingMismatch, elimination_order, exact_divide

__all__ = [
    "BudgetExceeded",
    "DEFAULT_SPAIR_BUDGET",
    "Ideal",
    "groebner_basis",
    "normal_form",
    "ideal_member",
    "ideal_contains",
    "ideal_equal",
    "ideal_intersect",
    "Nilpotent",
    "NotWithinBound",
    "bounded_nilpotency",
    "radical_member",
    "special_radical",
    "poly_lcm",
    "poly_gcd",
    "quotient_dimension",
    "standard_monomials",
]

DEFAULT_SPAIR_BUDGET = 50_000


class BudgetExceeded(RuntimeError):
    """A configured resource cap was hit; no answer is returned."""

    def __init__(self, what, budget):
        self.what = what
        self.budget = budget
        super().__init__(f"{what} budget of {budget} exceeded")


def default_budget(fallback=DEFAULT_SPAIR_BUDGET):
    env = os.environ.get("PROKIT_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"PROKIT_BUDGET must be an integer, got {env!r}") from None
    return fallback


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm_exp(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _sub_scaled(p, g, c, shift, field):
    """p -= c * x^shift * g, in place on the dict ``p``."""
    zero = field.zero
    sub, mul = field.sub, field.mul
    for e, v in g.items():
        t = tuple(a + b for a, b in zip(e, shift))
        nv = sub(p.get(t, zero), mul(c, v))
        if nv == zero:
            p.pop(t, None)
        else:
            p[t] = nv


def _reduce(p, basis, key, field):
    """Full reduction of the dict ``p`` by ``basis`` = [(lm, monic dict)]."""
    p = dict(p)
    rem = {}
    while p:
        lm = max(p, key=key)
        c = p[lm]
        for glm, g in basis:
            if _divides(glm, lm):
                _sub_scaled(p, g, c, tuple(a - b for a, b in zip(lm, glm)), field)
                break
        else:
            rem[lm] = c
            del p[lm]
    return rem


def _monic(p, key, field):
    lm = max(p, key=key)
    inv = field.inv(p[lm])
    return lm, {e: field.mul(c, inv) for e, c in p.items()}


def _buchberger(polys, ring, order, budget):
    field = ring.field
    key = order.key
    basis = []  # list of (lm, dict)
    pending = set()
    reductions = 0

    def insert(lm, g):
        i = len(basis)
        basis.append((lm, g))
        for j in range(i):
            pending.add((j, i))

    for p in polys:
        r = _reduce(p, basis, key, field)
        if r:
            insert(*_monic(r, key, field))

    while pending:
        # normal strategy: least lcm degree, then index order
        i, j = min(pending, key=lambda ij: (sum(_lcm_exp(basis[ij[0]][0], basis[ij[1]][0])), ij))
        pending.discard((i, j))
        lmi, gi = basis[i]
        lmj, gj = basis[j]
        lcm = _lcm_exp(lmi, lmj)
        # product criterion
        if all(a == 0 or b == 0 for a, b in zip(lmi, lmj)):
            continue
        # chain criterion
        skip = False
        for k, (lmk, _) in enumerate(basis):
            if k == i or k == j:
                continue
            if _divides(lmk, lcm):
                if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                    skip = True
                    break
        if skip:
            continue
        reductions += 1
        if reductions > budget:
            raise BudgetExceeded("S-pair reduction", budget)
        s = {}
        _sub_scaled(s, gi, field.neg(field.one), tuple(a - b for a, b in zip(lcm, lmi)), field)
        _sub_scaled(s, gj, field.one, tuple(a - b for a, b in zip(lcm, lmj)), field)
        r = _reduce(s, basis, key, field)
        if r:
            insert(*_monic(r, key, field))

    # minimalize
    minimal = []
    for idx, (lm, g) in enumerate(basis):
        dominated = False
        for jdx, (lm2, _) in enumerate(basis):
            if jdx != idx and _divides(lm2, lm) and (lm2 != lm or jdx < idx):
                dominated = True
                break
        if not dominated:
            minimal.append((lm, g))
    # interreduce tails
    reduced = []
    for idx, (lm, g) in enumerate(minimal):
        others = [b for k, b in enumerate(minimal) if k != idx]
        tail = {e: c for e, c in g.items() if e != lm}
        tail = _reduce(tail, others, key, field)
        tail[lm] = field.one
        reduced.append((lm, tail))
    reduced.sort(key=lambda t: key(t[0]), reverse=True)
    return reduced


def groebner_basis(gens, order=None, budget=None):
    """Reduced Groebner basis (monic, sorted by leading monomial, largest first)."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatch(f"{g.ring!r} vs {ring!r}")
    if ring.has_laurent:
        raise ValueError("Groebner bases need a polynomial ring (present inverses with extra variables)")
    order = order or ring.order
    budget = default_budget() if budget is None else budget
    red = _buchberger([g.as_dict() for g in gens], ring, order, budget)
    return [MultiPoly._raw(ring, g) for _, g in red]


class Ideal:
    """Ideal of a polynomial ring with a lazily cached reduced Groebner basis."""

    def __init__(self, ring, gens=(), budget=None):
        if not isinstance(ring, PolyRing):
            raise TypeError("first argument must be a PolyRing")
        if ring.has_laurent:
            raise ValueError("ideals live in polynomial rings; present Laurent inverses with u*x - 1")
        polys = []
        for g in gens:
            g = ring(g)
            if not g.is_zero():
                polys.append(g)
        self.ring = ring
        self.gens = tuple(polys)
        self.budget = budget
        self._lock = threading.Lock()
        self._cache = {}

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens) or '0'})"

    def format(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")" if self.gens else "(0)"

    def basis(self, order=None):
        order = order or self.ring.order
        with self._lock:
            gb = self._cache.get(order)
            if gb is None:
                gb = tuple(groebner_basis(list(self.gens), order, self.budget))
                self._cache[order] = gb
        return list(gb)

    def _basis_pairs(self, order=None):
        order = order or self.ring.order
        return [(g.leading_monomial(order), g.as_dict()) for g in self.basis(order)]

    def normal_form(self, p, order=None):
        p = self.ring(p)
        order = order or self.ring.order
        rem = _reduce(p.as_dict(), self._basis_pairs(order), order.key, self.ring.field)
        return MultiPoly._raw(self.ring, rem)

    def __contains__(self, p):
        return self.normal_form(p).is_zero()

    def contains(self, other):
        """True when ``other`` (an Ideal) is a subset of ``self``."""
        if other.ring != self.ring:
            raise RingMismatch(f"{other.ring!r} vs {self.ring!r}")
        return all(g in self for g in other.gens)

    def first_non_member(self, other):
        for g in other.gens:
            if g not in self:
                return g
        return None

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.contains(other) and other.contains(self)

    def __hash__(self):
        return hash((self.ring, tuple(self.basis())))

    def is_zero(self):
        return not self.gens

    def is_unit(self):
        return self.ring.one in self

    def __add__(self, other):
        if isinstance(other, Ideal):
            if other.ring != self.ring:
                raise RingMismatch(f"{other.ring!r} vs {self.ring!r}")
            return Ideal(self.ring, self.gens + other.gens, self.budget)
        return Ideal(self.ring, self.gens + tuple(self.ring(g) for g in other), self.budget)

    def __mul__(self, other):
        if other.ring != self.ring:
            raise RingMismatch(f"{other.ring!r} vs {self.ring!r}")
        prods = {a * b for a in self.gens for b in other.gens}
        return Ideal(self.ring, sorted(prods, key=_poly_sort_key), self.budget)

    def __pow__(self, m):
        if m < 0:
            raise ValueError("negative ideal power")
        if m == 0:
            return Ideal(self.ring, [self.ring.one], self.budget)
        result = self
        for _ in range(m - 1):
            result = result * self
            result = Ideal(self.ring, result.basis(), self.budget)
        return result

    def intersect(self, other):
        return ideal_intersect(self, other)

    def quotient_dimension(self):
        return quotient_dimension(self)


def _poly_sort_key(p):
    return p.format()


def normal_form(p, ideal, order=None):
    return ideal.normal_form(p, order)


def ideal_member(p, ideal):
    return p in ideal


def ideal_contains(big, small):
    """``small ⊆ big``: every generator of ``small`` lies in ``big``."""
    return big.contains(small)


def ideal_equal(a, b):
    return a.contains(b) and b.contains(a)


def ideal_intersect(a, b):
    """``a ∩ b`` by eliminating ``u`` from ``u*a + (1-u)*b``."""
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring!r} vs {b.ring!r}")
    ring = a.ring
    if a.is_zero() or b.is_zero():
        return Ideal(ring, [], a.budget)
    u = ring.fresh_name("u")
    big = ring.extend([u], front=True, order=elimination_order(1))
    uu = big.gen(u)
    gens = [uu * g.to_ring(big) for g in a.gens] + [(1 - uu) * g.to_ring(big) for g in b.gens]
    budget = a.budget if a.budget is not None else b.budget
    gb = groebner_basis(gens, big.order, budget)
    kept = [g.to_ring(ring) for g in gb if all(e[0] == 0 for e in g.as_dict())]
    return Ideal(ring, kept, a.budget)


@dataclass(frozen=True)
class Nilpotent:
    exponent: int

    def __str__(self):
        return f"Nilpotent({self.exponent})"


@dataclass(frozen=True)
class NotWithinBound:
    bound: int

    def __str__(self):
        return f"NotWithinBound({self.bound})"


def bounded_nilpotency(p, ideal, kmax):
    """Least ``k <= kmax`` with ``p**k`` in ``ideal``; inconclusive beyond the bound."""
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    base = ideal.normal_form(p)
    power = base
    for k in range(1, kmax + 1):
        if k > 1:
            power = ideal.normal_form(power * base)
        if power.is_zero():
            return Nilpotent(k)
    return NotWithinBound(kmax)


def radical_member(p, ideal):
    """Decide ``p ∈ √ideal`` (Rabinowitsch: ``1 ∈ ideal + (1 - u p)``)."""
    ring = ideal.ring
    u = ring.fresh_name("u")
    big = ring.extend([u])
    uu = big.gen(u)
    gens = [g.to_ring(big) for g in ideal.gens] + [1 - uu * ring(p).to_ring(big)]
    return big.one in Ideal(big, gens, ideal.budget)


def poly_lcm(f, g):
    """Least common multiple (monic) through the principal intersection."""
    if f.is_zero() or g.is_zero():
        return f.ring.zero
    inter = ideal_intersect(Ideal(f.ring, [f]), Ideal(f.ring, [g]))
    (l,) = inter.basis()
    return l


def poly_gcd(f, g):
    """Greatest common divisor (monic), computed as ``f*g / lcm(f, g)``."""
    if f.is_zero():
        return g.monic() if not g.is_zero() else g
    if g.is_zero():
        return f.monic()
    q = exact_divide(f * g, poly_lcm(f, g))
    return q.monic()


def special_radical(ideal):
    """Radical of a monomial ideal, or of a principal ideal in characteristic 0."""
    ring = ideal.ring
    gens = ideal.gens
    if not gens:
        return Ideal(ring, [], ideal.budget)
    if all(g.is_monomial() for g in gens):
        sq = set()
        for g in gens:
            (e, _), = g.as_dict().items()
            sq.add(tuple(1 if k else 0 for k in e))
        minimal = sorted(
            e for e in sq if not any(o != e and _divides(o, e) for o in sq)
        )
        return Ideal(ring, [ring.monomial(e) for e in minimal], ideal.budget)
    if len(gens) == 1 and ring.field.characteristic == 0:
        (f,) = gens
        part = f
        while True:
            d = part
            for i in range(ring.nvars):
                d = poly_gcd(d, part.derivative(i))
            if d.is_constant():
                break
            part = exact_divide(part, d)
        return Ideal(ring, [part.monic()], ideal.budget)
    raise ValueError("special_radical supports monomial ideals and principal ideals over QQ only")


def standard_monomials(ideal, limit=100_000):
    """Monomials outside the leading ideal, or ``None`` if there are infinitely many."""
    ring = ideal.ring
    lms = [g.leading_monomial() for g in ideal.basis()]
    if any(not any(e) for e in lms):
        return []
    bounds = []
    for i in range(ring.nvars):
        pure = [e[i] for e in lms if all(k == 0 for j, k in enumerate(e) if j != i)]
        if not pure:
            return None
        bounds.append(min(pure))
    out = []
    for e in itertools.product(*(range(b) for b in bounds)):
        if not any(_divides(m, e) for m in lms):
            out.append(e)
            if len(out) > limit:
                raise BudgetExceeded("standard monomial", limit)
    return out


def quotient_dimension(ideal):
    """``dim_k R/I`` or ``None`` when infinite."""
    std = standard_monomials(ideal)
    return None if std is None else len(std)
