"""Truncated power series over Laurent polynomial coefficients.

First a unit-ideal certificate: f = (1 + x) + y t + x^-1 t^3 is invertible
once 1 + x is inverted.  Then the certifier for f = sum i! x^-i t^i, which
admits no multiple with polynomial coefficients inside any finite box, and
the contrast f' = y + x^-1 t, where g = x works.

    python3 demos/truncated_series.py
"""

from prokit.algebra import PolyRing
from prokit.series import (
    TruncatedSeries,
    certify_no_poly_multiple,
    pole_growth_sweep,
    theorem_series,
    unit_ideal_equiv,
)

R = PolyRing(["x", "y"], laurent=["x"])
x, y = R.gens
f = TruncatedSeries(R, {0: 1 + x, 1: y, 3: x ** -1}, 8)
rep = unit_ideal_equiv(f)
print("f =", f)
print("order", rep.n, "localized at", rep.localized_at, "checks", rep.checks)

g = theorem_series(12)
v = certify_no_poly_multiple(g, (4, 4, 3), 12)
print(v.outcome, f"box {v.box}, {v.unknowns} unknowns, rank {v.rank}")
print(" ", v.note)

contrast = TruncatedSeries(g.ring, {0: g.ring("y"), 1: g.ring("x^-1")}, 12)
w = certify_no_poly_multiple(contrast, (1, 1, 1), 12)
print(w.outcome, "g_0 =", w.g[0])

sweep = pole_growth_sweep(P_range=range(0, 4))
print("least empty horizon per pole order:", sweep.table, "monotone:", sweep.monotone())
