"""Exact dense and sparse linear algebra over a :mod:`prokit.algebra.fields` field.

Matrices are lists of rows; vectors are lists.  Nothing here uses floating
point.
"""

from fractions import Fraction
from math import gcd

from .fields import QQ

__all__ = [
    "zeros",
    "identity",
    "matmul",
    "matvec",
    "transpose",
    "kron",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "Subspace",
    "SparseEchelon",
]


def zeros(field, rows, cols):
    return [[field.zero] * cols for _ in range(rows)]


def identity(field, n):
    m = zeros(field, n, n)
    for i in range(n):
        m[i][i] = field.one
    return m


def convert(field, matrix):
    return [[field(v) for v in row] for row in matrix]


def matmul(field, a, b, inner=None):
    """Product ``a @ b``; ``inner`` gives the shared dimension when a has no rows."""
    n = len(a)
    k = inner if inner is not None else (len(a[0]) if a else len(b))
    m = len(b[0]) if b else 0
    if b and len(b) != k:
        raise ValueError("shape mismatch in matmul")
    add, mul, zero = field.add, field.mul, field.zero
    out = []
    for i in range(n):
        row = a[i]
        if len(row) != k:
            raise ValueError("shape mismatch in matmul")
        res = [zero] * m
        for t in range(k):
            c = row[t]
            if c == zero:
                continue
            bt = b[t]
            for j in range(m):
                if bt[j] != zero:
                    res[j] = add(res[j], mul(c, bt[j]))
        out.append(res)
    return out


def matvec(field, a, v):
    add, mul, zero = field.add, field.mul, field.zero
    out = []
    for row in a:
        s = zero
        for c, x in zip(row, v):
            if c != zero and x != zero:
                s = add(s, mul(c, x))
        out.append(s)
    return out


def transpose(a, cols=None):
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*a)]


def kron(field, a, b, shape_a=None, shape_b=None):
    ra, ca = shape_a or (len(a), len(a[0]) if a else 0)
    rb, cb = shape_b or (len(b), len(b[0]) if b else 0)
    mul = field.mul
    out = zeros(field, ra * rb, ca * cb)
    for i in range(ra):
        for j in range(ca):
            x = a[i][j]
            if x == field.zero:
                continue
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k][j * cb + l] = mul(x, b[k][l])
    return out


def rref(field, matrix, ncols=None):
    """Reduced row echelon form.  Returns ``(nonzero_rows, pivot_columns)``."""
    rows = [list(r) for r in matrix]
    ncols = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    zero = field.zero
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != zero:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, v) for v in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != zero:
                f = rows[i][c]
                rows[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(field, matrix):
    return len(rref(field, matrix)[1])


def nullspace(field, matrix, ncols=None):
    """Basis of ``{v : matrix v = 0}`` as a list of vectors."""
    ncols = ncols if ncols is not None else (len(matrix[0]) if matrix else 0)
    rows, pivots = rref(field, matrix, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [field.zero] * ncols
        v[f] = field.one
        for row, p in zip(rows, pivots):
            v[p] = field.neg(row[f])
        basis.append(v)
    return basis


def solve(field, matrix, b, ncols=None):
    """One solution of ``matrix x = b`` (free variables zero), or ``None``."""
    ncols = ncols if ncols is not None else (len(matrix[0]) if matrix else 0)
    aug = [list(row) + [bi] for row, bi in zip(matrix, b)]
    rows, pivots = rref(field, aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for row, p in zip(rows, pivots):
        x[p] = row[ncols]
    return x


class Subspace:
    """Subspace of ``field^n`` held by its canonical RREF basis."""

    __slots__ = ("field", "n", "basis", "pivots")

    def __init__(self, field, n, vectors=()):
        self.field = field
        self.n = n
        vectors = [list(v) for v in vectors]
        for v in vectors:
            if len(v) != n:
                raise ValueError("vector of wrong length")
        rows, piv = rref(field, vectors, n) if vectors else ([], [])
        self.basis = [tuple(r) for r in rows]
        self.pivots = tuple(piv)

    @classmethod
    def full(cls, field, n):
        return cls(field, n, identity(field, n))

    @classmethod
    def zero(cls, field, n):
        return cls(field, n)

    @classmethod
    def column_space(cls, field, matrix, nrows):
        return cls(field, nrows, transpose(matrix) if matrix and matrix[0] else [])

    @property
    def dim(self):
        return len(self.basis)

    def is_full(self):
        return self.dim == self.n

    def is_zero(self):
        return self.dim == 0

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.n == other.n
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.n, tuple(self.basis)))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, n={self.n})"

    def reduce(self, v):
        """Remainder of ``v`` after elimination against the basis."""
        field = self.field
        v = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if c != field.zero:
                v = [field.sub(a, field.mul(c, b)) for a, b in zip(v, row)]
        return v

    def contains(self, v):
        return all(c == self.field.zero for c in self.reduce(v))

    def contains_subspace(self, other):
        return all(self.contains(v) for v in other.basis)

    def coordinates(self, v):
        """Coefficients of ``v`` in the basis; raises if ``v`` is outside."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return [v[p] for p in self.pivots]

    def basis_matrix(self):
        """``n x dim`` matrix whose columns are the basis vectors."""
        return transpose([list(b) for b in self.basis], cols=self.n) if self.basis else [
            [] for _ in range(self.n)
        ]

    def image(self, matrix, nrows):
        """Image of the subspace under ``matrix`` (``nrows x n``)."""
        vecs = [matvec(self.field, matrix, b) for b in self.basis]
        return Subspace(self.field, nrows, vecs)

    def intersect(self, other):
        field = self.field
        if self.dim == 0 or other.dim == 0:
            return Subspace(field, self.n)
        # solve sum a_i u_i - sum b_j w_j = 0
        cols = [list(u) for u in self.basis] + [[field.neg(x) for x in w] for w in other.basis]
        mat = transpose(cols)
        vecs = []
        for sol in nullspace(field, mat, len(cols)):
            v = [field.zero] * self.n
            for a, u in zip(sol[: self.dim], self.basis):
                if a != field.zero:
                    v = [field.add(x, field.mul(a, y)) for x, y in zip(v, u)]
            vecs.append(v)
        return Subspace(field, self.n, vecs)

    def complement_vector(self):
        """A standard basis vector outside the subspace (``None`` if full)."""
        pivs = set(self.pivots)
        for j in range(self.n):
            if j not in pivs:
                v = [self.field.zero] * self.n
                v[j] = self.field.one
                return v
        return None

    def quotient_map(self):
        """Matrix of ``field^n -> field^n / self`` on the non-pivot coordinates,
        and a section matrix mapping quotient coordinates back."""
        field = self.field
        free = [j for j in range(self.n) if j not in set(self.pivots)]
        q = []
        for j in range(self.n):
            e = [field.zero] * self.n
            e[j] = field.one
            r = self.reduce(e)
            q.append([r[f] for f in free])
        qmat = transpose(q, cols=len(free)) if q else []
        section = zeros(field, self.n, len(free))
        for k, f in enumerate(free):
            section[f][k] = field.one
        return qmat, section


def _content(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


class SparseEchelon:
    """Incremental sparse row echelon form.

    Over QQ rows are kept as primitive integer vectors and eliminated
    fraction-free (cross multiplication followed by content removal).
    Over a prime field ordinary modular elimination is used.  Rows are dicts
    ``column -> value``; pivots are the smallest column of each stored row.
    """

    def __init__(self, field):
        self.field = field
        self.integral = field == QQ
        self.pivots = {}

    def _normalize(self, row):
        field = self.field
        if self.integral:
            out = {}
            den = 1
            for c, v in row.items():
                v = Fraction(v)
                if v:
                    out[c] = v
                    den = den * v.denominator // gcd(den, v.denominator)
            ints = {c: int(v * den) for c, v in out.items()}
            g = _content(ints)
            if g > 1:
                ints = {c: v // g for c, v in ints.items()}
            return ints
        return {c: field(v) for c, v in row.items() if field(v) != field.zero}

    def reduce(self, row):
        """Reduce ``row`` against the stored pivots; returns the remainder dict."""
        row = self._normalize(row)
        field = self.field
        while row:
            c = min(row)
            prow = self.pivots.get(c)
            if prow is None:
                break
            row = self._eliminate(row, prow, c)
        if not row:
            return row
        # tail reduction is not needed for the zero test but keep leading column free
        return row

    def _eliminate(self, row, prow, c):
        if self.integral:
            a = prow[c]
            b = row[c]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            out = {}
            for k, v in row.items():
                out[k] = v * ma
            for k, v in prow.items():
                nv = out.get(k, 0) - v * mb
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
            g2 = _content(out) if out else 1
            if g2 > 1:
                out = {k: v // g2 for k, v in out.items()}
            return out
        field = self.field
        f = field.div(row[c], prow[c])
        out = dict(row)
        for k, v in prow.items():
            nv = field.sub(out.get(k, field.zero), field.mul(f, v))
            if nv == field.zero:
                out.pop(k, None)
            else:
                out[k] = nv
        return out

    def add(self, row):
        """Insert a row; returns True when it increased the rank."""
        rem = self.reduce(row)
        if not rem:
            return False
        self.pivots[min(rem)] = rem
        return True

    def full_reduce(self, row):
        """Remainder with every pivot column cleared (support on free columns)."""
        row = self._normalize(row)
        while True:
            hits = [c for c in row if c in self.pivots]
            if not hits:
                return row
            c = min(hits)
            row = self._eliminate(row, self.pivots[c], c)

    def in_rowspace(self, row):
        return not self.reduce(row)

    @property
    def rank(self):
        return len(self.pivots)

    def kernel_vector(self, free_col):
        """Kernel vector of the stored rows with ``free_col`` = 1 and every other
        non-pivot column 0.  Returns a dict column -> value."""
        if free_col in self.pivots:
            raise ValueError("column is a pivot column")
        field = self.field
        one = Fraction(1) if self.integral else field.one
        values = {free_col: one}
        for c in sorted(self.pivots, reverse=True):
            row = self.pivots[c]
            if self.integral:
                s = Fraction(0)
                for k, a in row.items():
                    if k != c and k in values:
                        s += a * values[k]
                val = -s / row[c]
            else:
                s = field.zero
                for k, a in row.items():
                    if k != c and k in values:
                        s = field.add(s, field.mul(a, values[k]))
                val = field.div(field.neg(s), row[c])
            if val:
                values[c] = val
        return values
