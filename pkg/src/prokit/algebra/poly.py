"""Sparse multivariate (Laurent) polynomials over an exact field."""

from fractions import Fraction
import math

from .fields import QQ, Field, FieldMismatch

__all__ = [
    "TermOrder",
    "DEGREVLEX",
    "LEX",
    "elimination_order",
    "PolyRing",
    "MultiPoly",
    "RingMismatch",
    "ZERO_DEGREE",
    "exact_divide",
]

# Degree of the zero polynomial.
ZERO_DEGREE = -math.inf

MAX_EXPONENT = 2**31 - 1


class RingMismatch(TypeError):
    """Operands live in different polynomial rings."""


def _check_exponent(e):
    if e > MAX_EXPONENT or e < -MAX_EXPONENT:
        raise OverflowError(f"exponent {e} exceeds the 32-bit exponent range")
    return e


def _grevlex_key(e):
    return (sum(e), tuple(-c for c in reversed(e)))


class TermOrder:
    """A monomial order given by a sort key; larger key = larger monomial."""

    def __init__(self, name, key):
        self.name = name
        self.key = key

    def __repr__(self):
        return f"TermOrder({self.name})"

    def __eq__(self, other):
        return isinstance(other, TermOrder) and other.name == self.name

    def __hash__(self):
        return hash(("TermOrder", self.name))


DEGREVLEX = TermOrder("degrevlex", _grevlex_key)
LEX = TermOrder("lex", tuple)


def elimination_order(k):
    """Block order: degrevlex on the first ``k`` variables, ties by degrevlex on the rest.

    Any monomial involving the first block beats every monomial that does not,
    so a Groebner basis for it eliminates those variables.
    """

    def key(e):
        return (_grevlex_key(e[:k]), _grevlex_key(e[k:]))

    return TermOrder(f"elim{k}", key)


class PolyRing:
    """Ring signature: ordered variable names, Laurent flags, field, display order."""

    def __init__(self, names, field=QQ, laurent=(), order=DEGREVLEX):
        if isinstance(names, str):
            names = [n.strip() for n in names.replace(",", " ").split()]
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for n in names:
            if not (n[:1].isalpha() and n[:1].islower() and n.isalnum() and n == n.lower()):
                raise ValueError(f"invalid variable name {n!r}")
        if not isinstance(field, Field):
            raise TypeError(f"{field!r} is not a field")
        laurent = frozenset(laurent)
        unknown = laurent - set(names)
        if unknown:
            raise ValueError(f"Laurent flags on unknown variables {sorted(unknown)}")
        self.names = names
        self.field = field
        self.laurent = tuple(n in laurent for n in names)
        self.order = order
        self.nvars = len(names)
        self._index = {n: i for i, n in enumerate(names)}

    # -- signature -----------------------------------------------------
    def _signature(self):
        return (self.names, self.laurent, self.field, self.order)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other._signature() == self._signature()

    def __hash__(self):
        return hash(self._signature())

    def __repr__(self):
        vs = ",".join(n + ("^±" if l else "") for n, l in zip(self.names, self.laurent))
        return f"{self.field.name}[{vs}]"

    @property
    def has_laurent(self):
        return any(self.laurent)

    def index(self, var):
        if isinstance(var, int):
            if not 0 <= var < self.nvars:
                raise IndexError(var)
            return var
        if isinstance(var, MultiPoly):
            var = str(var)
        try:
            return self._index[var]
        except KeyError:
            raise ValueError(f"unknown variable {var!r} in {self!r}") from None

    # -- constructors --------------------------------------------------
    @property
    def zero(self):
        return MultiPoly(self, {})

    @property
    def one(self):
        return self.constant(1)

    @property
    def gens(self):
        return tuple(self.gen(i) for i in range(self.nvars))

    def gen(self, var):
        i = self.index(var)
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): self.field.one})

    def constant(self, c):
        c = self.field(c)
        return MultiPoly(self, {(0,) * self.nvars: c} if c != self.field.zero else {})

    def monomial(self, exps, coeff=1):
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        return MultiPoly(self, {exps: self.field(coeff)})

    def from_dict(self, terms):
        field = self.field
        return MultiPoly(self, {tuple(e): field(c) for e, c in terms.items()})

    def __call__(self, value):
        if isinstance(value, MultiPoly):
            if value.ring != self:
                raise RingMismatch(f"{value.ring!r} vs {self!r}")
            return value
        if isinstance(value, str):
            from .parse import parse_poly

            return parse_poly(value, self)
        return self.constant(value)

    def parse(self, text):
        from .parse import parse_poly

        return parse_poly(text, self)

    # -- derived rings -------------------------------------------------
    def with_field(self, field):
        lau = [n for n, l in zip(self.names, self.laurent) if l]
        return PolyRing(self.names, field, lau, self.order)

    def with_order(self, order):
        lau = [n for n, l in zip(self.names, self.laurent) if l]
        return PolyRing(self.names, self.field, lau, order)

    def extend(self, new_names, front=False, order=None):
        lau = [n for n, l in zip(self.names, self.laurent) if l]
        names = tuple(new_names) + self.names if front else self.names + tuple(new_names)
        return PolyRing(names, self.field, lau, order or self.order)

    def fresh_name(self, base="u"):
        if base not in self._index:
            return base
        i = 0
        while f"{base}{i}" in self._index:
            i += 1
        return f"{base}{i}"


class MultiPoly:
    """Immutable sparse polynomial: exponent tuple -> nonzero field element."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring, terms):
        field = ring.field
        zero = field.zero
        clean = {}
        laurent = ring.laurent
        n = ring.nvars
        for e, c in terms.items():
            if c == zero:
                continue
            if len(e) != n:
                raise ValueError("exponent vector has wrong length")
            for k, lau in zip(e, laurent):
                if k < 0 and not lau:
                    raise ValueError("negative exponent on a non-Laurent variable")
                _check_exponent(k)
            clean[e] = c
        self.ring = ring
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        # Trusted fast path: terms already clean.
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        obj._hash = None
        return obj

    # -- basic protocol ------------------------------------------------
    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            try:
                return self == self.ring.constant(other)
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self.ring!r}, {self.format()!r})"

    def __str__(self):
        return self.format()

    def as_dict(self):
        return dict(self._terms)

    def terms(self, order=None):
        """(exponent, coefficient) pairs, largest monomial first."""
        key = (order or self.ring.order).key
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def monomials(self, order=None):
        return [e for e, _ in self.terms(order)]

    def coefficient(self, exps):
        return self._terms.get(tuple(exps), self.ring.field.zero)

    def leading_term(self, order=None):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        key = (order or self.ring.order).key
        e = max(self._terms, key=key)
        return e, self._terms[e]

    def leading_monomial(self, order=None):
        return self.leading_term(order)[0]

    def leading_coefficient(self, order=None):
        return self.leading_term(order)[1]

    # -- coercion ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                if other.ring.field != self.ring.field:
                    raise FieldMismatch(f"{other.ring.field!r} vs {self.ring.field!r}")
                raise RingMismatch(f"{other.ring!r} vs {self.ring!r}")
            return other
        if isinstance(other, bool):
            return None
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return None

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        field = self.ring.field
        res = dict(self._terms)
        zero = field.zero
        for e, c in other._terms.items():
            v = field.add(res.get(e, zero), c)
            if v == zero:
                res.pop(e, None)
            else:
                res[e] = v
        return MultiPoly._raw(self.ring, res)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return MultiPoly._raw(self.ring, {e: neg(c) for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        field = self.ring.field
        add, mul, zero = field.add, field.mul, field.zero
        res = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = add(res.get(e, zero), mul(c1, c2))
                if v == zero:
                    res.pop(e, None)
                else:
                    res[e] = v
        for e in res:
            for k in e:
                _check_exponent(k)
        return MultiPoly._raw(self.ring, res)

    __rmul__ = __mul__

    def scale(self, c):
        field = self.ring.field
        c = field(c)
        if c == field.zero:
            return self.ring.zero
        return MultiPoly._raw(self.ring, {e: field.mul(v, c) for e, v in self._terms.items()})

    def mul_term(self, exps, coeff):
        """Multiply by the single term ``coeff * x^exps`` (coeff already a field element)."""
        field = self.ring.field
        if coeff == field.zero:
            return self.ring.zero
        mul = field.mul
        return MultiPoly(
            self.ring,
            {tuple(a + b for a, b in zip(e, exps)): mul(c, coeff) for e, c in self._terms.items()},
        )

    def __pow__(self, n):
        if not isinstance(n, int) or isinstance(n, bool):
            return NotImplemented
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("negative power of a non-monomial")
            (e, c), = self._terms.items()
            field = self.ring.field
            return MultiPoly(self.ring, {tuple(n * k for k in e): field.pow(c, n)})
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- calculus ------------------------------------------------------
    def derivative(self, var):
        i = self.ring.index(var)
        field = self.ring.field
        res = {}
        for e, c in self._terms.items():
            k = e[i]
            if k == 0:
                continue
            v = field.mul(c, field(k))
            if v == field.zero:
                continue
            ne = list(e)
            ne[i] = k - 1
            res[tuple(ne)] = v
        return MultiPoly._raw(self.ring, res)

    def total_degree(self):
        if not self._terms:
            return ZERO_DEGREE
        return max(sum(e) for e in self._terms)

    def min_degree(self):
        if not self._terms:
            return ZERO_DEGREE
        return min(sum(e) for e in self._terms)

    def degree_in(self, var):
        i = self.ring.index(var)
        if not self._terms:
            return ZERO_DEGREE
        return max(e[i] for e in self._terms)

    def order_in(self, var):
        """Lowest exponent of ``var`` (``+inf`` for the zero polynomial)."""
        i = self.ring.index(var)
        if not self._terms:
            return math.inf
        return min(e[i] for e in self._terms)

    def homogeneous_component(self, d):
        return MultiPoly._raw(self.ring, {e: c for e, c in self._terms.items() if sum(e) == d})

    def truncate(self, d):
        """Drop all terms of total degree greater than ``d``."""
        return MultiPoly._raw(self.ring, {e: c for e, c in self._terms.items() if sum(e) <= d})

    def is_homogeneous(self):
        return len({sum(e) for e in self._terms}) <= 1

    def is_constant(self):
        return all(not any(e) for e in self._terms)

    def is_monomial(self):
        return len(self._terms) == 1

    def constant_coefficient(self):
        return self._terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def evaluate(self, point):
        """Evaluate at a point given as a sequence of field elements."""
        field = self.ring.field
        point = [field(v) for v in point]
        if len(point) != self.ring.nvars:
            raise ValueError("point has wrong dimension")
        total = field.zero
        for e, c in self._terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t = field.mul(t, field.pow(v, k))
            total = field.add(total, t)
        return total

    def map_coefficients(self, func, ring):
        """Apply ``func`` to each coefficient, landing in ``ring`` (same variables)."""
        return MultiPoly(ring, {e: func(c) for e, c in self._terms.items()})

    def to_ring(self, ring):
        """Re-express in ``ring`` by matching variable names.

        Variables missing from ``ring`` must not occur in ``self``.
        """
        if ring == self.ring:
            return self
        if ring.field != self.ring.field:
            raise FieldMismatch(f"{self.ring.field!r} vs {ring.field!r}")
        idx = []
        for i, name in enumerate(self.ring.names):
            idx.append(ring._index.get(name))
        terms = {}
        for e, c in self._terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    j = idx[i]
                    if j is None:
                        raise ValueError(
                            f"variable {self.ring.names[i]!r} does not exist in {ring!r}"
                        )
                    ne[j] = k
            terms[tuple(ne)] = c
        return MultiPoly(ring, terms)

    def substitute(self, values, ring):
        """Replace each variable by a polynomial of ``ring``.

        ``values`` maps variable names to polynomials; unmapped variables are
        carried over by name.
        """
        imgs = []
        for name in self.ring.names:
            v = values.get(name)
            imgs.append(ring(v) if v is not None else ring.gen(name))
        total = ring.zero
        for e, c in self._terms.items():
            t = ring.constant(c)
            for img, k in zip(imgs, e):
                if k:
                    t = t * img**k
            total = total + t
        return total

    def monic(self, order=None):
        if not self._terms:
            return self
        lc = self.leading_coefficient(order)
        return self.scale(self.ring.field.inv(lc))

    # -- text ----------------------------------------------------------
    def format(self):
        if not self._terms:
            return "0"
        field = self.ring.field
        names = self.ring.names
        pieces = []
        for e, c in self.terms():
            mono = []
            for name, k in zip(names, e):
                if k == 1:
                    mono.append(name)
                elif k:
                    mono.append(f"{name}^{k}")
            neg = field.is_negative(c)
            a = field.neg(c) if neg else c
            if not mono:
                body = field.format(a)
            elif a == field.one:
                body = "*".join(mono)
            else:
                body = field.format(a) + "*" + "*".join(mono)
            pieces.append((neg, body))
        out = ("-" if pieces[0][0] else "") + pieces[0][1]
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _shift_nonneg(p):
    """Multiply by a Laurent monomial so every exponent is >= 0 and minimal.

    Returns ``(shifted, shift)`` with ``shifted = p * x^shift``.
    """
    ring = p.ring
    shift = [0] * ring.nvars
    if p._terms:
        for i, lau in enumerate(ring.laurent):
            if lau:
                shift[i] = -min(e[i] for e in p._terms)
    shifted = MultiPoly._raw(
        ring, {tuple(a + b for a, b in zip(e, shift)): c for e, c in p._terms.items()}
    )
    return shifted, shift


def _poly_divide(h, f, key):
    """Divide ``h`` by ``f`` (nonnegative exponents). Quotient or None."""
    field = h.ring.field
    lm_f = max(f._terms, key=key)
    lc_inv = field.inv(f._terms[lm_f])
    rem = dict(h._terms)
    quot = {}
    zero = field.zero
    f_items = list(f._terms.items())
    while rem:
        lm = max(rem, key=key)
        if not _divides(lm_f, lm):
            return None
        c = field.mul(rem[lm], lc_inv)
        m = tuple(a - b for a, b in zip(lm, lm_f))
        quot[m] = c
        for e, fc in f_items:
            t = tuple(a + b for a, b in zip(e, m))
            v = field.sub(rem.get(t, zero), field.mul(c, fc))
            if v == zero:
                rem.pop(t, None)
            else:
                rem[t] = v
    return MultiPoly._raw(h.ring, quot)


def exact_divide(h, f):
    """Return ``q`` with ``h == f*q`` exactly, or ``None`` if ``f`` does not divide ``h``.

    A single polynomial is a Groebner basis of the ideal it generates, so
    one-divisor reduction decides divisibility.  Laurent variables are
    handled by first clearing them to minimal nonnegative exponents.
    """
    if h.ring != f.ring:
        raise RingMismatch(f"{h.ring!r} vs {f.ring!r}")
    if f.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if h.is_zero():
        return h.ring.zero
    key = h.ring.order.key
    if not h.ring.has_laurent:
        return _poly_divide(h, f, key)
    hs, sh = _shift_nonneg(h)
    fs, sf = _shift_nonneg(f)
    q = _poly_divide(hs, fs, key)
    if q is None:
        return None
    back = tuple(b - a for a, b in zip(sh, sf))
    return MultiPoly(h.ring, {tuple(a + b for a, b in zip(e, back)): c for e, c in q._terms.items()})
