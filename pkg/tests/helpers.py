"""Random generators shared by the test-suite."""

import random
from fractions import Fraction

from prokit.algebra import MultiPoly


def random_coeff(field, rng):
    if field.characteristic:
        return rng.randrange(field.characteristic)
    return Fraction(rng.randint(-9, 9), rng.randint(1, 4))


def random_poly(ring, rng, terms=4, max_deg=3, min_exp=0, homogeneous=None):
    out = {}
    for _ in range(rng.randint(0, terms)):
        if homogeneous is not None:
            e = [0] * ring.nvars
            for _ in range(homogeneous):
                e[rng.randrange(ring.nvars)] += 1
        else:
            e = []
            for lau in ring.laurent:
                lo = min_exp if lau else 0
                e.append(rng.randint(lo, max_deg))
        out[tuple(e)] = random_coeff(ring.field, rng)
    return MultiPoly(ring, out)


def random_nonzero_poly(ring, rng, **kw):
    while True:
        p = random_poly(ring, rng, **kw)
        if not p.is_zero():
            return p


def rng_for(seed):
    return random.Random(seed)
