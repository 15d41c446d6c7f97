from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milnor_gamma.exactnum import (
    CyclotomicNumber as C,
    GammaMonomial as G,
    cos_pi,
    cyclotomic_polynomial,
    euler_phi,
    gamma_mul,
    gamma_reflect,
    sin_pi,
    sqrt3,
)

ORDERS = (4, 12, 36, 60)
small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def cyclo(draw, order=None):
    n = draw(st.sampled_from(ORDERS)) if order is None else order
    return C(n, draw(st.lists(small, min_size=euler_phi(n), max_size=euler_phi(n))))


@st.composite
def triples(draw):
    n = draw(st.sampled_from(ORDERS))
    return draw(cyclo(n)), draw(cyclo(n)), draw(cyclo(n))


def z(n, p=1):
    return C.root_of_unity(n, p)


# -- worked identities -------------------------------------------------------


def test_i_squared_is_minus_one():
    assert z(4) * z(4) == -1


def test_sum_of_fifth_roots_vanishes():
    total = C.zero()
    for k in range(5):
        total = total + z(5, k)
    assert total.is_zero()


def test_sqrt3_from_twelfth_roots():
    s = z(12) + z(12, 11)
    assert s * s == 3
    assert sqrt3() == s


def test_product_of_roots_in_common_order():
    assert z(3) * z(4) == z(12, 7)


def test_norm_of_one_minus_zeta3():
    assert (1 - z(3)) * (1 - z(3, 2)) == 3


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    assert [euler_phi(n) for n in (1, 2, 9, 36, 60)] == [1, 1, 6, 12, 16]


def test_rationals_and_equality_across_orders():
    assert C.rational(F(3, 7), 60) == F(3, 7)
    assert z(36, 12) == z(3)
    assert (z(12) + z(12, 11)).is_rational() is False
    assert (z(8) * z(8, 7)).to_fraction() == 1
    with pytest.raises(ValueError):
        sqrt3().to_fraction()


def test_not_hashable():
    with pytest.raises(TypeError):
        hash(z(4))


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        C.zero(12).inverse()


def test_galois_conjugation():
    w = z(12, 5) + F(1, 3)
    assert w.conjugate() == z(12, 7) + F(1, 3)
    assert w.galois(5) == z(12, 25) + F(1, 3)


# -- field axioms ------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(triples())
def test_field_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0
    if not a.is_zero():
        assert a * a.inverse() == 1
        assert (b / a) * a == b


@settings(max_examples=30, deadline=None)
@given(triples())
def test_numeric_shadow(t):
    a, b, _ = t
    dps = 40
    with mpmath.workdps(dps):
        assert abs((a * b).evaluate(dps) - a.evaluate(dps) * b.evaluate(dps)) < mpmath.mpf(10) ** -25
        assert abs((a + b).evaluate(dps) - a.evaluate(dps) - b.evaluate(dps)) < mpmath.mpf(10) ** -25


@settings(max_examples=30, deadline=None)
@given(cyclo())
def test_json_round_trip(a):
    assert C.from_json(a.to_json()) == a


@settings(max_examples=30, deadline=None)
@given(cyclo(12), st.integers(min_value=-4, max_value=4))
def test_powers(a, e):
    if a.is_zero() and e < 0:
        return
    expected = C.one()
    base = a if e >= 0 else a.inverse()
    for _ in range(abs(e)):
        expected = expected * base
    assert a**e == expected


# -- Gamma monomials ---------------------------------------------------------


def test_gamma_half_becomes_root_pi():
    assert G.gamma(F(1, 2)) * 1 == G.pi_power(1)


def test_gamma_multiset_semantics():
    assert gamma_mul(G.gamma(F(1, 3)), G.gamma(F(1, 3))) == G.gamma(F(1, 3), 2)


def test_rational_factors_multiply():
    prod = G(2, 0, [(F(1, 4), 1)]) * G(F(1, 2), 0, [(F(3, 4), 1)])
    assert prod == G(1, 0, [(F(1, 4), 1), (F(3, 4), 1)])


def test_arguments_shift_into_unit_interval():
    assert G.gamma(F(7, 3)) == G(F(4, 3) * F(1, 3), 0, [(F(1, 3), 1)])
    with pytest.raises(ValueError):
        G.gamma(0)
    with pytest.raises(ValueError):
        G.gamma(F(-1, 2))


def test_reflection_of_thirds():
    mono, alg = gamma_reflect(G.gamma(F(1, 3)) * G.gamma(F(2, 3)))
    assert mono == G.pi_power(2)
    assert alg * sin_pi(F(1, 3)) == 1
    assert alg * alg * F(3, 4) == 1


def test_reflection_without_partner_is_identity():
    mono, alg = gamma_reflect(G.gamma(F(1, 4)))
    assert mono == G.gamma(F(1, 4)) and alg == 1
    mono, alg = gamma_reflect(G.pi_power(1) * G.pi_power(1))
    assert mono == G.pi_power(2) and alg == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=2, max_value=40).flatmap(
    lambda q: st.tuples(st.integers(min_value=1, max_value=q - 1), st.just(q))))
def test_reflection_law(pq):
    x = F(*pq)
    mono, alg = gamma_reflect(G.gamma(x) * G.gamma(1 - x))
    assert mono == G.pi_power(2)
    assert alg * sin_pi(x) == 1
    with mpmath.workdps(40):
        lhs = mpmath.gamma(mpmath.mpf(x.numerator) / x.denominator) * mpmath.gamma(
            1 - mpmath.mpf(x.numerator) / x.denominator)
        assert abs(alg.evaluate(40) * mpmath.pi - lhs) < mpmath.mpf(10) ** -30


def test_trig_values():
    assert cos_pi(F(1, 3)) == F(1, 2)
    assert sin_pi(F(1, 6)) == F(1, 2)
    assert sin_pi(F(1, 4)) ** 2 == F(1, 2)
    assert cos_pi(1) == -1


def test_gamma_monomial_json_and_evaluation():
    g = G(F(-2, 3), -1, [(F(1, 9), 2), (F(2, 3), 1)])
    assert G.from_json(g.to_json()) == g
    with mpmath.workdps(30):
        want = mpmath.mpf(-2) / 3 / mpmath.sqrt(mpmath.pi) * mpmath.gamma(mpmath.mpf(1) / 9) ** 2 * mpmath.gamma(
            mpmath.mpf(2) / 3)
        assert abs(g.evaluate(30) - want) < mpmath.mpf(10) ** -25
