import pytest

from prokit.algebra import GF, PolyRing
from prokit.ideals import Ideal, ideal_contains, ideal_equal
from prokit.towers import (
    ADIC_WITHIN_WINDOW,
    ADMISSIBLE_WITHIN,
    COFINAL,
    INCOMPARABLE,
    INCONCLUSIVE,
    NOT_ADIC,
    NOT_ADMISSIBLE_WITNESS,
    STRICT_REFINEMENT,
    ChainError,
    DescentError,
    RingTower,
    adic_powers,
    check_adic,
    check_admissible,
    check_cofinal,
    tower_localize,
    tower_quotient,
    tower_tensor,
)

from helpers import random_nonzero_poly, rng_for

R = PolyRing("x y")
x, y = R.gens


def chain_xy_n(n=6):
    return RingTower(R, [[x * y**k] for k in range(1, n + 1)], label="xy^n")


def monomial_divides(a, b):
    return all(p <= q for p, q in zip(a, b))


def test_tower_new_examples():
    S = PolyRing("x")
    (t,) = S.gens
    T = RingTower(S, [[t], [t**2], [t**3]])
    assert len(T) == 3
    with pytest.raises(ChainError) as info:
        RingTower(R, [[x], [y]])
    assert info.value.witness == y
    assert len(chain_xy_n()) == 6


def test_constructed_chains_descend():
    T = chain_xy_n()
    for d in range(1, len(T)):
        assert ideal_contains(T.stage(d), T.stage(d + 1))


def test_check_admissible_examples():
    S = PolyRing("x")
    (t,) = S.gens
    v = check_admissible(RingTower(S, [[t], [t**2], [t**3]]), 3)
    assert v.outcome == ADMISSIBLE_WITHIN and v.bound == 3

    E = PolyRing("x t")
    X, T = E.gens
    tower = RingTower(E, [[T**2, X * T], [T**2, X * (X - 1) * T]])
    v = check_admissible(tower, 2)
    assert v.outcome == ADMISSIBLE_WITHIN and v.bound == 2
    # oracle: squares of the generators land in (t^2)
    for g in tower.stage(1).gens:
        assert g**2 in Ideal(E, [T**2])

    v = check_admissible(RingTower(R, [[x, y], [x]]), 8)
    assert v.outcome == NOT_ADMISSIBLE_WITNESS
    assert v.witness.polynomial == y
    assert y not in Ideal(R, [x]) and y**8 not in Ideal(R, [x])


def test_check_admissible_inconclusive_when_only_bound_fails():
    S = PolyRing("x")
    (t,) = S.gens
    v = check_admissible(RingTower(S, [[t], [t**5]]), 3)
    assert v.outcome == INCONCLUSIVE
    assert not v.positive


def test_check_cofinal_examples():
    S = PolyRing("x")
    (t,) = S.gens
    a = [Ideal(S, [t**n]) for n in range(1, 7)]
    b = [Ideal(S, [t ** (2 * n)]) for n in range(1, 4)]
    assert check_cofinal(a, b).outcome == COFINAL

    T = chain_xy_n()
    adic = adic_powers(Ideal(R, [x * y]), 6)
    v = check_cofinal(T, adic)
    assert v.outcome == STRICT_REFINEMENT and v.direction == "second"
    assert ideal_equal(v.witness.ideal, Ideal(R, [x**2 * y**2]))
    # monomial divisibility oracle: x^2y^2 is divisible by no x*y^n
    for n in range(1, 7):
        assert not monomial_divides((1, n), (2, 2)) or n <= 2
    for n in range(1, 7):
        assert not ideal_contains(Ideal(R, [x**2 * y**2]), T.stage(n))
    assert check_cofinal(T, T).outcome == COFINAL


def test_check_cofinal_incomparable():
    a = [Ideal(R, [x])]
    b = [Ideal(R, [y])]
    v = check_cofinal(a, b)
    assert v.outcome == INCOMPARABLE


def test_check_adic_examples():
    m = Ideal(R, [x, y])
    T = RingTower(R, adic_powers(m, 5))
    assert check_adic(T, m, 8).outcome == ADIC_WITHIN_WINDOW

    v = check_adic(chain_xy_n(), Ideal(R, [x * y]), 8)
    assert v.outcome == NOT_ADIC
    assert ideal_equal(v.witness.ideal, Ideal(R, [x**2 * y**2]))
    assert v.witness.stage == 2
    assert v.metadata["pro_noetherian"] == "automatic"

    S = PolyRing("x")
    (t,) = S.gens
    T = RingTower(S, [[t**n] for n in range(1, 7)])
    assert check_adic(T, Ideal(S, [t**2]), 8).outcome == ADIC_WITHIN_WINDOW


def test_adic_verdict_consistent_with_cofinality():
    m = Ideal(R, [x, y])
    T = RingTower(R, adic_powers(m, 4))
    assert check_adic(T, m, 8).outcome == ADIC_WITHIN_WINDOW
    assert check_cofinal(adic_powers(m, 4), T).outcome == COFINAL


def test_tower_quotient_examples():
    m = Ideal(R, [x, y])
    T = RingTower(R, adic_powers(m, 4))
    Q = tower_quotient(T, Ideal(R, [x]))
    for n in range(1, 5):
        expected = Ideal(R, [x, y**n])
        assert Q.stage(n).contains(expected) and expected.contains(Q.stage(n))
    Z = tower_quotient(T, Ideal(R))
    assert all(ideal_equal(a, b) for a, b in zip(Z, T))
    U = tower_quotient(T, Ideal(R, [1]))
    assert all(I.is_unit() for I in U)
    assert check_admissible(Q, 8).positive


def test_tower_quotient_idempotent():
    J = Ideal(R, [x**2 - y])
    T = chain_xy_n(4)
    once = tower_quotient(T, J)
    twice = tower_quotient(once, J)
    assert all(ideal_equal(a, b) for a, b in zip(once, twice))


def test_tower_localize_examples():
    T = RingTower(R, [[y**n] for n in range(1, 4)])
    L = tower_localize(T, x)
    assert L.ring.names == ("x", "y", "u")
    X, Y, U = L.ring.gens
    assert ideal_equal(L.stage(2), Ideal(L.ring, [Y**2, U * X - 1]))

    one = tower_localize(T, R.one)
    for d in range(1, 4):
        assert one.stage(d).normal_form(U - 1).is_zero()

    L = tower_localize(RingTower(R, [[x * y]]), x)
    X, Y, U = L.ring.gens
    assert L.stage(1).normal_form(Y).is_zero()
    # explicit certificate
    assert Y == U * (X * Y) - (U * X - 1) * Y

    with pytest.raises(ValueError):
        tower_localize(T, R.zero)


def test_tower_tensor_examples():
    Sx, Sy = PolyRing("x"), PolyRing("y")
    (X,), (Y,) = Sx.gens, Sy.gens
    B = RingTower(Sx, [[X**n] for n in range(1, 4)])
    C = RingTower(Sy, [[Y**n] for n in range(1, 4)])
    k = RingTower.trivial(3)
    P = tower_tensor(B, C, k, {}, {})
    for n in range(1, 4):
        assert ideal_equal(P.stage(n), Ideal(P.ring, [P.ring("x")**n, P.ring("y")**n]))

    base = RingTower(PolyRing("s"), [[]] * 3)
    P = tower_tensor(B, C, base, {"s": X}, {"s": Y})
    xx, yy = P.ring.gens
    assert (xx - yy) in P.stage(1)

    B2 = RingTower(Sx, [[X**2]])
    C3 = RingTower(Sy, [[Y**3]])
    P = tower_tensor(B2, C3, RingTower.trivial(1), {}, {})
    # monomial-basis counting: 2 * 3
    assert P.stage_dimension(1) == 6


def test_tower_tensor_rejects_non_descending_map():
    Sx, Sy = PolyRing("x"), PolyRing("y")
    (X,), (Y,) = Sx.gens, Sy.gens
    base = RingTower(PolyRing("s"), [["s"]])
    B = RingTower(Sx, [[X**2]])
    C = RingTower(Sy, [[Y]])
    with pytest.raises(DescentError):
        tower_tensor(B, C, base, {"s": X}, {"s": Y})


def test_tensor_dimensions_multiply_random():
    rng = rng_for(21)
    Sx, Sy = PolyRing("x", GF(5)), PolyRing("y", GF(5))
    (X,), (Y,) = Sx.gens, Sy.gens
    k = RingTower.trivial(1, GF(5))
    for _ in range(10):
        a, b = rng.randint(1, 4), rng.randint(1, 4)
        f = X**a + random_nonzero_poly(Sx, rng, terms=2, max_deg=a - 1) if a > 1 else X + 1
        g = Y**b + random_nonzero_poly(Sy, rng, terms=2, max_deg=b - 1) if b > 1 else Y
        B, C = RingTower(Sx, [[f]]), RingTower(Sy, [[g]])
        P = tower_tensor(B, C, k, {}, {})
        assert P.stage_dimension(1) == B.stage_dimension(1) * C.stage_dimension(1)


def test_cofinal_symmetry_random():
    rng = rng_for(22)
    for _ in range(15):
        ea = sorted(rng.sample(range(1, 7), 3))
        eb = sorted(rng.sample(range(1, 7), 3))
        A = [Ideal(R, [x ** ea[i] * y ** rng.randint(0, 2)]) for i in range(3)]
        Bc = [Ideal(R, [x ** eb[i]]) for i in range(3)]
        v1, v2 = check_cofinal(A, Bc), check_cofinal(Bc, A)
        if v1.outcome == COFINAL:
            assert v2.outcome == COFINAL
        if v1.outcome == STRICT_REFINEMENT:
            assert v2.outcome == STRICT_REFINEMENT
            assert {v1.direction, v2.direction} == {"first", "second"}
        if v1.outcome == INCOMPARABLE:
            assert v2.outcome == INCOMPARABLE
