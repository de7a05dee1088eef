import math
from fractions import Fraction

import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from snwave.exact_scalars import (
    PhasePi,
    RationalPi,
    SqrtRational,
    as_fraction,
    floor_log2,
    fraction_str,
    phase_sum_is_odd_pi,
    rationalpi_arith,
    squarefree_split,
)

rationals = st.fractions(max_denominator=10**6).filter(lambda q: abs(q) < 10**6)
nonneg = st.fractions(min_value=0, max_value=10**4, max_denominator=10**4)


def test_rationalpi_examples():
    assert rationalpi_arith(RationalPi(Fraction(4, 7)), 2, "dyadic") == RationalPi(Fraction(16, 7))
    assert rationalpi_arith(RationalPi(Fraction(6, 7)), RationalPi(-2), "add") == RationalPi(Fraction(-8, 7))
    assert rationalpi_arith(RationalPi(Fraction(24, 7)), RationalPi(8), "sub") == RationalPi(Fraction(-32, 7))
    assert rationalpi_arith(RationalPi(Fraction(1, 3)), Fraction(3, 2), "scale") == RationalPi(Fraction(1, 2))
    with pytest.raises(ValueError):
        rationalpi_arith(RationalPi(1), 1, "pow")


def test_rationalpi_rejects_floats_and_mixed_arith():
    with pytest.raises(TypeError):
        RationalPi(0.5)
    with pytest.raises(TypeError):
        as_fraction(True)
    with pytest.raises(TypeError):
        RationalPi(1) + Fraction(1)


def test_rationalpi_lowest_terms_and_json():
    x = RationalPi(Fraction(6, -14))
    assert x.coeff.denominator == 7 and x.coeff.numerator == -3
    assert x.to_json() == "-3/7"
    assert RationalPi.from_json("-3/7") == x
    assert RationalPi.parse("2") == RationalPi(2)
    assert math.isclose(float(RationalPi(Fraction(1, 2))), math.pi / 2)


@given(rationals, rationals)
def test_rationalpi_order_matches_coefficients(p, q):
    assert (RationalPi(p) < RationalPi(q)) == (p < q)
    assert (RationalPi(p) == RationalPi(q)) == (p == q)


@given(rationals, st.integers(-64, 64), st.integers(-100, 100))
def test_dyadic_scaling_distributes_over_translation(q, j, k):
    x = RationalPi(q)
    lhs = (x + RationalPi(2 * k)).dilate(j)
    rhs = x.dilate(j) + RationalPi(2 * k).dilate(j)
    assert lhs == rhs


@given(nonneg, nonneg, nonneg)
def test_sqrt_rational_algebra(a, b, c):
    x, y, z = SqrtRational(a), SqrtRational(b), SqrtRational(c)
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x.square() == a
    assert SqrtRational.from_json(x.to_json()) == x


def test_sqrt_rational_rejects_negative():
    with pytest.raises(ValueError):
        SqrtRational(Fraction(-1, 2))
    assert SqrtRational(0).is_zero()
    assert math.isclose(float(SqrtRational(Fraction(1, 2))), 1 / math.sqrt(2))


@given(rationals, rationals, rationals)
def test_phase_addition_associative_mod_two(a, b, c):
    p, q, r = PhasePi(a), PhasePi(b), PhasePi(c)
    assert (p + q) + r == p + (q + r)
    assert 0 <= (p + q).turns < 2


@given(rationals)
def test_phase_antipode(a):
    p = PhasePi(a)
    assert p.antipode().antipode() == p
    assert (p.antipode().turns - p.turns) % 2 == 1
    assert PhasePi.from_json(p.to_json()) == p


def test_phase_sum_examples():
    pi, zero, half = PhasePi(1), PhasePi(0), PhasePi(Fraction(1, 2))
    assert phase_sum_is_odd_pi(pi, zero, zero, zero) == (True, 0)
    assert phase_sum_is_odd_pi(zero, zero, zero, zero) == (False, None)
    assert phase_sum_is_odd_pi(half, half, zero, zero) == (True, 0)
    assert phase_sum_is_odd_pi(zero, zero, pi, zero) == (True, -1)
    assert phase_sum_is_odd_pi(half, zero, zero, zero) == (False, None)


@given(*[st.fractions(min_value=0, max_value=2, max_denominator=8)] * 4)
def test_phase_sum_witness_is_exact(a, b, c, d):
    ps = [PhasePi(x) for x in (a, b, c, d)]
    ok, m = phase_sum_is_odd_pi(*ps)
    s = ps[0].turns + ps[1].turns - ps[2].turns - ps[3].turns
    if ok:
        assert s == 2 * m + 1
    else:
        assert s.denominator != 1 or s.numerator % 2 == 0


@given(st.fractions(min_value=Fraction(1, 10**9), max_value=10**9))
def test_floor_log2_brackets(x):
    k = floor_log2(x)
    assert Fraction(2) ** k <= x < Fraction(2) ** (k + 1)


def test_floor_log2_rejects_nonpositive():
    with pytest.raises(ValueError):
        floor_log2(Fraction(0))


@given(st.fractions(min_value=0, max_value=10**5, max_denominator=10**4))
@example(Fraction(114909358, 9609))
def test_squarefree_split(q):
    r, s = squarefree_split(q)
    assert r * r * s == q
    # s squarefree: no square of a prime up to sqrt(s) divides it
    assert all(s % (p * p) for p in range(2, math.isqrt(s) + 1))


def test_squarefree_split_examples():
    assert squarefree_split(Fraction(8)) == (Fraction(2), 2)
    assert squarefree_split(Fraction(1, 2)) == (Fraction(1, 2), 2)
    assert squarefree_split(Fraction(9, 4)) == (Fraction(3, 2), 1)
    # 10^13 + 1 = 11 * 909090909091, beyond the old trial-division reach
    assert squarefree_split(Fraction(10**13 + 1)) == (Fraction(1), 10**13 + 1)
    assert squarefree_split(Fraction(1000003**2 * 7)) == (Fraction(1000003), 7)
    assert squarefree_split(Fraction(1000003 * 1000033)) == (Fraction(1), 1000003 * 1000033)
    assert squarefree_split(Fraction(10**18 + 1)) is None


def test_fraction_str():
    assert fraction_str(Fraction(3)) == "3"
    assert fraction_str(Fraction(-4, 6)) == "-2/3"
