import math

import pytest

from prokit.algebra import GF, PolyRing
from prokit.series import (
    EmptyWithinBounds,
    LocalizedPoly,
    SeriesMismatch,
    SolutionWithinHorizon,
    TruncatedSeries,
    certify_no_poly_multiple,
    invert_to_tn,
    pole_growth_sweep,
    pole_trace,
    series_arith,
    t_power,
    theorem_series,
    unit_ideal_equiv,
)

from helpers import random_poly, rng_for
from oracles import dense_box_kernel

L = PolyRing("x", laurent=["x"])
(x,) = L.gens
K = PolyRing("x y", laurent=["x"])
X, Y = K.gens


def S(coeffs, N, ring=L):
    return TruncatedSeries(ring, coeffs, N)


def naive_product(a, b, N):
    # independent Cauchy product on plain coefficient lists
    out = []
    for m in range(N + 1):
        s = None
        for i in range(m + 1):
            term = a[i] * b[m - i]
            s = term if s is None else s + term
        out.append(s)
    return out


def test_series_arith_examples():
    T = PolyRing("x")
    a, b = S([1, 1], 5, T), S([1, -1], 5, T)
    assert series_arith("mul", a, b) == S([1, 0, -1], 5, T)
    z = S([], 5, T)
    assert (a * z).order() is None
    f = S([0, x, 1], 3)
    g = S([x**-1, -(x**-2), x**-3], 3)
    assert f * g == S([0, 1], 3)
    assert [c for c in (f * g).coeffs] == naive_product(f.coeffs, g.coeffs, 3)


def test_horizon_and_ring_checks():
    a, b = S([1], 5), S([1], 3)
    assert (a + b).horizon == 3
    with pytest.raises(SeriesMismatch):
        S([1], 2) + S([1], 2, PolyRing("x"))


def test_invert_examples():
    g = invert_to_tn(S([0, 1], 4))
    assert g[0] == LocalizedPoly(L.one)
    f = S([0, x, 1], 4)
    g = invert_to_tn(f)
    expected = [x**-1, -(x**-2), x**-3, -(x**-4)]
    assert [c.num for c in g.coeffs] == expected and g.unit is None
    assert (f * g).agrees_with(t_power(L, 1, 4), 4)

    f = S([0, 0, 1 + x], 6)
    g = invert_to_tn(f)
    assert g[0] == LocalizedPoly(L.one, 1, 1 + x)
    assert all(c.is_zero() for c in g.coeffs[1:])
    assert (f * g).agrees_with(t_power(L, 2, 6), 6)
    with pytest.raises(ValueError):
        invert_to_tn(S([], 4))


def test_localized_canonical_form():
    u = 1 + x
    a = LocalizedPoly(u * (x + 2), 2, u)
    assert a.k == 1 and a.num == x + 2
    assert LocalizedPoly(x * x, 1, x).k == 0


@pytest.mark.parametrize("seed", range(3))
def test_invert_random_gf7(seed):
    F = PolyRing("x", GF(7), laurent=["x"])
    rng = rng_for(40 + seed)
    for _ in range(30):
        n = rng.randint(0, 3)
        coeffs = [F.zero] * n
        while True:
            bottom = random_poly(F, rng, terms=2, max_deg=2, min_exp=-2)
            if not bottom.is_zero():
                break
        coeffs.append(bottom)
        coeffs += [random_poly(F, rng, terms=2, max_deg=2, min_exp=-2) for _ in range(12 - n)]
        f = TruncatedSeries(F, coeffs, 12)
        g = invert_to_tn(f, 12)
        # independent check: multiply numerators over a common denominator
        prod = naive_product(
            [LocalizedPoly(c, 0, g.unit) for c in f.coeffs] + [LocalizedPoly(F.zero)] * 0,
            list(g.coeffs) + [LocalizedPoly(F.zero, 0, g.unit)] * n,
            12,
        )
        for m, c in enumerate(prod):
            want = F.one if m == n else F.zero
            assert c == LocalizedPoly(want, 0, g.unit)


def test_unit_ideal_equiv_examples():
    rep = unit_ideal_equiv(S([0, 0, 0, 1], 6))
    assert rep.ok and rep.witness[0] == LocalizedPoly(L.one) and rep.n == 3
    rep = unit_ideal_equiv(S([0, x, 1], 6))
    assert rep.ok and rep.localized_at is None
    rep = unit_ideal_equiv(S([x**2, 1 + x], 5))
    assert rep.ok and rep.localized_at is None
    rep = unit_ideal_equiv(S([1 + x, x], 5))
    assert rep.ok and rep.localized_at == 1 + x


def test_certifier_trivial_horizon():
    r = certify_no_poly_multiple(theorem_series(0), (2, 2, 2), 0)
    assert isinstance(r, SolutionWithinHorizon)
    assert r.g[0] == K.one and r.h[0] == Y


def test_certifier_factorial_small_box():
    f = theorem_series(8)
    r = certify_no_poly_multiple(f, (2, 2, 2), 8)
    assert isinstance(r, EmptyWithinBounds)
    labels, kernel = dense_box_kernel(f, (2, 2, 2), 8)
    g0 = [k for k, lab in enumerate(labels) if lab[0] == 0]
    assert all(all(v[k] == 0 for k in g0) for v in kernel)


def test_certifier_contrast_instance():
    fp = TruncatedSeries(K, [Y, X**-1], 6)
    r = certify_no_poly_multiple(fp, (2, 2, 2), 6)
    assert isinstance(r, SolutionWithinHorizon)
    assert r.g == TruncatedSeries(K, [X], 6)
    assert r.h == TruncatedSeries(K, [X * Y, 1], 6)


def test_certifier_rejects_bad_shape():
    with pytest.raises(ValueError):
        certify_no_poly_multiple(TruncatedSeries(K, [Y, X**-2], 2), (1, 1, 1), 2)
    with pytest.raises(ValueError):
        certify_no_poly_multiple(TruncatedSeries(K, [X, X**-1], 2), (1, 1, 1), 2)


def test_certifier_agrees_with_dense_oracle():
    f = theorem_series(6)
    for box in [(0, 0, 1), (1, 1, 1), (1, 2, 1), (2, 1, 2)]:
        for N in range(0, 7):
            r = certify_no_poly_multiple(f, box, N)
            labels, kernel = dense_box_kernel(f, box, N)
            g0 = [k for k, lab in enumerate(labels) if lab[0] == 0]
            feasible = any(any(v[k] != 0 for k in g0) for v in kernel)
            assert feasible == isinstance(r, SolutionWithinHorizon), (box, N)


def test_returned_solutions_are_polynomial_and_traced():
    f = theorem_series(6)
    for N in range(0, 4):
        r = certify_no_poly_multiple(f, (1, 1, 2), N)
        if isinstance(r, SolutionWithinHorizon):
            h = (f.truncate(N) * r.g).truncate(N)
            assert all(e[0] >= 0 for c in h.coeffs for e in c.as_dict())
            assert r.trace.strictly_decreasing_once_negative()


def test_smaller_box_stays_empty():
    f = theorem_series(8)
    assert isinstance(certify_no_poly_multiple(f, (2, 2, 2), 8), EmptyWithinBounds)
    for box in [(1, 2, 2), (2, 1, 2), (2, 2, 1), (1, 1, 1), (0, 2, 2)]:
        assert isinstance(certify_no_poly_multiple(f, box, 8), EmptyWithinBounds)


def test_pole_trace_definitions():
    g = TruncatedSeries(K, [X**2 * Y + X**3, X**-1], 3)
    tr = pole_trace(g)
    assert tr.d == [2, -1, None, None] and tr.e[:2] == [1, 0]
    # D_1 = d_0 - 1, D_2 = min(d_1 - 1, d_0 - 2)
    assert tr.D == [None, 1, -2, -3]
    assert tr.E == [None, 1, 0, 0]


def test_pole_growth_sweep():
    res = pole_growth_sweep(P_range=range(0, 5), D=3, cap=20)
    assert res.monotone()
    assert res.table[0] <= 1
    # frozen from the certifier run and spot-checked against the dense oracle
    assert res.table == {0: 1, 1: 4, 2: 7, 3: 10, 4: 12}
    f = theorem_series(4)
    labels, kernel = dense_box_kernel(f, (1, 1, 3), 3)
    g0 = [k for k, lab in enumerate(labels) if lab[0] == 0]
    assert any(any(v[k] != 0 for k in g0) for v in kernel)
    labels, kernel = dense_box_kernel(f, (1, 1, 3), 4)
    g0 = [k for k, lab in enumerate(labels) if lab[0] == 0]
    assert not any(any(v[k] != 0 for k in g0) for v in kernel)


def test_sweep_cap_is_reported():
    res = pole_growth_sweep(P_range=[3], D=3, cap=4)
    assert res.table == {3: None} and res.capped == [3]


def test_default_sequence_satisfies_hypotheses():
    a = [math.factorial(i) for i in range(1, 15)]
    assert all(p < q for p, q in zip(a, a[1:]))
    ratios = [q / p for p, q in zip(a, a[1:])]
    assert all(p < q for p, q in zip(ratios, ratios[1:]))
