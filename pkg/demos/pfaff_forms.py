"""Pfaff forms on the projective plane.

The Jouanolou form of degree 3 is integrable and has no algebraic solution
of low degree over GF(5).  A form built from two polynomials f, q has both
as solutions, and the search finds them.

    python3 demos/pfaff_forms.py
"""

from prokit.algebra import GF
from prokit.pfaff import (
    darboux_search_fp,
    euler_residual,
    exact_pair_form,
    integrability_check,
    jouanolou_form,
    singular_points_fp,
    standard_ring,
)

J = jouanolou_form(3)
print("Jouanolou:", J)
print("  Euler residual zero:", euler_residual(*J).is_zero())
print("  integrable:", integrability_check(*J).is_zero())
stats = {}
print("  solutions mod 5 up to degree 2:", darboux_search_fp(J, 5, 2, stats=stats), stats)
print("  singular points mod 7 include (1:1:1):", (1, 1, 1) in singular_points_fp(J, 7))

R = standard_ring(GF(5))
x, y, z = R.gens
f, q = x**2 + y * z, x * z
form = exact_pair_form(f, q)
sols = darboux_search_fp(form, 5, 2)
print("pair form from", f, "and", q)
print("  found f:", f.monic() in sols, " found q:", q.monic() in sols)
