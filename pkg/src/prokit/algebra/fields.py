"""Exact coefficient fields.

Elements are stored as plain Python values: :class:`fractions.Fraction`
for the rationals and ``int`` in ``[0, p)`` for prime fields.  The field
object carries the arithmetic, so two polynomials over different fields
can never be combined silently.
"""

from fractions import Fraction
import re

__all__ = ["Field", "Rationals", "PrimeField", "QQ", "GF", "FieldMismatch"]


class FieldMismatch(TypeError):
    """Raised when values from two different fields meet."""


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common interface of the exact fields."""

    characteristic = 0
    name = "?"

    zero = None
    one = None

    def __repr__(self):
        return self.name

    def is_zero(self, a):
        return a == self.zero

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if n < 0:
            return self._pow(self.inv(a), -n)
        return self._pow(a, n)

    def _pow(self, a, n):
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result


class Rationals(Field):
    characteristic = 0
    name = "QQ"

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __call__(self, value):
        if isinstance(value, bool):
            raise TypeError("booleans are not field elements")
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value.strip())
        raise TypeError(f"cannot convert {value!r} to a rational")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def format(self, a):
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def is_negative(self, a):
        return a < 0

    def reduce_rational(self, q):
        return Fraction(q)


class PrimeField(Field):
    def __init__(self, p):
        if not isinstance(p, int) or not _is_prime(p):
            raise ValueError(f"{p!r} is not a prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"
        self.zero = 0
        self.one = 1

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __call__(self, value):
        if isinstance(value, bool):
            raise TypeError("booleans are not field elements")
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            return self.reduce_rational(value)
        if isinstance(value, str):
            return self.reduce_rational(Fraction(value.strip()))
        raise TypeError(f"cannot convert {value!r} to {self.name}")

    def reduce_rational(self, q):
        """Reduce a rational mod p; the denominator must be prime to p."""
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator {q.denominator} is divisible by {self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def format(self, a):
        return str(a)

    def is_negative(self, a):
        return False

    def elements(self):
        return range(self.p)


QQ = Rationals()

_GF_CACHE = {}


def GF(p):
    """The prime field with ``p`` elements (instances are cached)."""
    try:
        return _GF_CACHE[p]
    except KeyError:
        field = _GF_CACHE[p] = PrimeField(p)
        return field


_FIELD_RE = re.compile(r"^\s*(?:GF\((\d+)\)|F_?(\d+)|(QQ|Q))\s*$")


def field_from_name(name):
    """Parse ``"QQ"``, ``"GF(5)"`` or ``"F5"``."""
    m = _FIELD_RE.match(str(name))
    if not m:
        raise ValueError(f"unknown field {name!r}")
    if m.group(3):
        return QQ
    return GF(int(m.group(1) or m.group(2)))
