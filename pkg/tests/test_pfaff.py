import itertools

import pytest

from prokit.algebra import GF, QQ, exact_divide
from prokit.ideals import BudgetExceeded, poly_gcd
from prokit.pfaff import (
    Divides,
    Fails,
    PfaffError,
    PfaffForm,
    candidate_count,
    darboux_search_fp,
    euler_residual,
    exact_pair_form,
    formal_separatrix_check,
    integrability_check,
    is_algebraic_solution,
    jouanolou_form,
    leading_form_check,
    projective_points,
    singular_points_fp,
    standard_ring,
    wedge_df,
)

from helpers import random_nonzero_poly, rng_for

R = standard_ring()
x, y, z = R.gens
ROT = PfaffForm(y, -x, R.zero)


def naive_search(form, p, n_max):
    """Direct loop over normalized coefficient vectors, exact division only."""
    F = GF(p)
    ring = standard_ring(F)
    w = [c.map_coefficients(F.reduce_rational, ring) for c in form.coeffs]
    out = []
    for n in range(1, n_max + 1):
        mons = sorted(
            [e for e in itertools.product(range(n + 1), repeat=3) if sum(e) == n],
            key=ring.order.key,
            reverse=True,
        )
        for vec in itertools.product(range(p), repeat=len(mons)):
            nz = [c for c in vec if c]
            if not nz or nz[0] != 1:
                continue
            f = ring.from_dict({e: c for e, c in zip(mons, vec) if c})
            fx, fy, fz = (f.derivative(i) for i in range(3))
            coeffs = [w[0] * fy - w[1] * fx, w[0] * fz - w[2] * fx, w[1] * fz - w[2] * fy]
            if all(exact_divide(c, f) is not None for c in coeffs):
                out.append((n, vec, f))
    out.sort(key=lambda t: (t[0], t[1]))
    return [f for _, _, f in out]


def test_pfaff_new_examples():
    assert ROT.degree == 1
    with pytest.raises(PfaffError) as info:
        PfaffForm(z, x, y)
    assert info.value.witness == x * z + x * y + y * z
    assert jouanolou_form(3).degree == 3
    with pytest.raises(PfaffError):
        PfaffForm(x, y**2, z)


def test_jouanolou_examples():
    J = jouanolou_form(3)
    assert J.coeffs == (x**2 * z - y**3, y**2 * x - z**3, z**2 * y - x**3)
    assert jouanolou_form(1).coeffs == (z - y, x - z, y - x)
    assert euler_residual(*J).is_zero()


def test_integrability_examples():
    assert integrability_check(*jouanolou_form(3)).is_zero()
    assert integrability_check(z, x, y) == x + y + z
    f = x**3 * y + z**2 * x - 7 * y
    assert integrability_check(*(f.derivative(i) for i in range(3))).is_zero()


def test_wedge_examples():
    assert wedge_df(ROT, x).coefficients() == (x, R.zero, R.zero)
    assert wedge_df(ROT, R.constant(3)).is_zero()
    w = wedge_df(jouanolou_form(3), x)
    assert w.c_xy == -(y**2 * x - z**3) and w.c_xz == -(z**2 * y - x**3) and w.c_yz.is_zero()
    assert (0, 0, 3) in w.c_xy.as_dict()


def test_is_algebraic_solution_examples():
    for a, b in [(1, 0), (0, 1), (2, -3), (5, 7)]:
        assert is_algebraic_solution(ROT, a * x + b * y) is not None
    assert is_algebraic_solution(ROT, z) is None
    assert is_algebraic_solution(jouanolou_form(3), x) is None
    f, q = x**2 + y * z, x * z
    form = exact_pair_form(f, q)
    cof = is_algebraic_solution(form, f)
    # w ∧ df = -f (dq ∧ df)
    dq = wedge_df((q.derivative(0), q.derivative(1), q.derivative(2)), f)
    assert cof == tuple(-c for c in dq.coefficients())
    with pytest.raises(ValueError):
        is_algebraic_solution(ROT, R.zero)


def test_exact_pair_form_examples():
    assert exact_pair_form(x, y) == ROT
    form = exact_pair_form(x**2 + y * z, x * z)
    assert form.degree == 3 and integrability_check(*form).is_zero()
    with pytest.raises(ValueError):
        exact_pair_form(x, x)
    with pytest.raises(ValueError):
        exact_pair_form(x, y**2)


def test_singular_points_examples():
    pts = singular_points_fp(jouanolou_form(3), 7)
    assert (1, 1, 1) in pts
    assert singular_points_fp(ROT, 5) == [(0, 0, 1)]
    assert len(projective_points(5)) == 31
    with pytest.raises(ZeroDivisionError):
        singular_points_fp(PfaffForm(y.scale(QQ(1) / 5), -x.scale(QQ(1) / 5), R.zero), 5)


def test_search_examples():
    sols = darboux_search_fp(ROT, 5, 1)
    assert len(sols) == 6
    assert all(set(s.monomials()) <= {(1, 0, 0), (0, 1, 0)} for s in sols)
    stats = {}
    assert darboux_search_fp(jouanolou_form(3), 5, 2, stats=stats) == []
    assert stats["candidates"] == 3906 + 31
    sols = darboux_search_fp(exact_pair_form(x, y), 5, 2)
    lin = [s for s in sols if s.total_degree() == 1]
    for a, b in itertools.combinations_with_replacement(lin, 2):
        assert (a * b).monic() in sols


def test_search_budget():
    assert candidate_count(5, 3) == (5**10 - 1) // 4
    with pytest.raises(BudgetExceeded):
        darboux_search_fp(jouanolou_form(3), 5, 3, budget=10**5)


@pytest.mark.parametrize(
    "form, p, n",
    [
        (ROT, 5, 2),
        (jouanolou_form(3), 5, 2),
        (jouanolou_form(2), 3, 2),
        (exact_pair_form(x**2 + y * z, x * z), 3, 2),
        (jouanolou_form(1), 5, 2),
    ],
    ids=["rotation", "jouanolou3", "jouanolou2", "pair", "jouanolou1"],
)
def test_search_matches_naive_oracle(form, p, n):
    assert [str(s) for s in darboux_search_fp(form, p, n)] == [str(s) for s in naive_search(form, p, n)]


def random_pair(rng, F, deg):
    ring = standard_ring(F)
    while True:
        f = random_nonzero_poly(ring, rng, terms=3, homogeneous=deg)
        q = random_nonzero_poly(ring, rng, terms=3, homogeneous=deg)
        if poly_gcd(f, q).total_degree() > 0:
            continue
        try:
            return f, q, exact_pair_form(f, q)
        except PfaffError:
            continue


def test_random_pair_forms_integrable():
    rng = rng_for(51)
    for _ in range(200):
        f, q, form = random_pair(rng, QQ, rng.randint(1, 2))
        assert euler_residual(*form).is_zero()
        assert integrability_check(*form).is_zero()


def test_darboux_multiplicativity_and_scaling():
    rng = rng_for(52)
    for _ in range(20):
        f, q, form = random_pair(rng, GF(5), rng.randint(1, 2))
        cf, cq = is_algebraic_solution(form, f), is_algebraic_solution(form, q)
        cfq = is_algebraic_solution(form, f * q)
        assert cfq is not None
        for c in (2, 3):
            assert is_algebraic_solution(form.scale(c), f) is not None
        g = f + q * 2
        assert (is_algebraic_solution(form, g) is None) == (is_algebraic_solution(form.scale(4), g) is None)


def test_formal_separatrix_examples():
    v = formal_separatrix_check((-2 * x, R.one, R.zero), y - x**2, 6)
    assert isinstance(v, Divides) and all(j.is_zero() for j in v.jets)
    v = formal_separatrix_check((y, x, R.zero), x + y, 6)
    assert isinstance(v, Fails) and v.degree == 1 and v.witness == y - x
    v = formal_separatrix_check((y, -x, R.zero), x + x**2, 6)
    assert isinstance(v, Divides)
    # (1 + 2x) / (1 + x) = 1 + x - x^2 + x^3 - ...
    oracle = R.one + sum((-x) ** k * -1 for k in range(1, 6))
    assert v.jets[0] == oracle
    assert ((x + x**2) * v.jets[0]).truncate(6) == (x * (1 + 2 * x))
    v = formal_separatrix_check((y, -x, R.zero), 1 + x, 4)
    assert isinstance(v, Divides) and v.unit


def test_formal_check_agrees_with_exact_divide():
    rng = rng_for(53)
    for _ in range(30):
        f, q, form = random_pair(rng, QQ, rng.randint(1, 2))
        cof = is_algebraic_solution(form, f)
        N = form.degree + f.total_degree() + 2
        v = formal_separatrix_check(form, f, N)
        assert isinstance(v, Divides)
        assert v.jets == tuple(c.truncate(N) for c in cof)


def test_leading_form_examples():
    v = leading_form_check(ROT, x + x**2, 4)
    assert v.outcome == "LeadingFormIsSolution" and v.leading_form == x
    f, q = x**2 + y * z, x * z
    form = exact_pair_form(f, q)
    v = leading_form_check(form, f * (1 + x - 2 * y), 8)
    assert v.outcome == "LeadingFormIsSolution" and v.leading_form == f
    v = leading_form_check(jouanolou_form(3), x + y**2, 8)
    assert v.outcome == "PreconditionViolated"
    v = leading_form_check(ROT, x + x**2, 0)
    assert v.outcome == "PreconditionViolated"
