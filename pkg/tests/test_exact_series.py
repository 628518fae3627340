import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from involut.errors import ContractViolation, NonInvertibleError, PoleError, UnsupportedOrderError
from involut.exact_series import (
    PowerSeries,
    as_rational,
    binomial,
    coefficients_equal,
    expand_phi_at_one,
    pochhammer,
    series_compose,
    series_exp,
    series_log,
    series_mul,
    series_power,
    series_reciprocal,
    series_reversion,
)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def series_from(coeffs, order=None):
    order = len(coeffs) - 1 if order is None else order
    return PowerSeries.from_coefficients(coeffs, order)


def test_pochhammer_values():
    assert pochhammer(3, 0) == 1
    assert pochhammer(3, 2) == 12
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    assert pochhammer(0, -1) == -1
    assert pochhammer(3, -1) == Fraction(1, 2)


def test_pochhammer_errors():
    with pytest.raises(PoleError):
        pochhammer(1, -1)
    with pytest.raises(UnsupportedOrderError):
        pochhammer(2, -2)


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_rational(0.1)
    assert as_rational("1/3") == Fraction(1, 3)


def test_binomial_matches_integer_case_and_halves():
    assert binomial(5, 2) == 10
    assert binomial(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert binomial(-1, 3) == -1


def test_order_must_be_positive():
    with pytest.raises(ContractViolation):
        PowerSeries((Fraction(1),))


def test_mismatched_operands():
    with pytest.raises(ContractViolation):
        series_mul(series_from([1, 2, 3]), series_from([1, 2]))
    with pytest.raises(ContractViolation):
        series_mul(series_from([1, 2]), PowerSeries.from_coefficients([1, 2], 1, point=1))


def test_operator_algebra():
    x = PowerSeries.variable(4)
    s = (1 + x) * (1 + x)
    assert list(s) == [1, 2, 1, 0, 0]
    assert list((s - 1) / 1) == [0, 2, 1, 0, 0]
    assert list(PowerSeries.constant(1, 4) / (1 - x)) == [1] * 5
    assert list(s.derivative()) == [2, 2, 0, 0, 0]
    assert list(s.integral()) == [0, 1, 1, Fraction(1, 3), 0]


def test_reciprocal_needs_nonzero_constant():
    with pytest.raises(NonInvertibleError):
        series_reciprocal(series_from([0, 1, 2]))


def test_exp_log_preconditions():
    with pytest.raises(ContractViolation):
        series_exp(series_from([1, 1]))
    with pytest.raises(ContractViolation):
        series_log(series_from([2, 1]))
    with pytest.raises(ContractViolation):
        series_compose(series_from([1, 1]), series_from([1, 1]))


def test_reversion_preconditions():
    with pytest.raises(ContractViolation):
        series_reversion(series_from([1, 1, 0]))
    with pytest.raises(NonInvertibleError):
        series_reversion(series_from([0, 0, 1]))


def test_reversion_of_x_minus_x_squared_gives_catalan():
    inv = series_reversion(series_from([0, 1, -1], 8))
    assert list(inv)[1:] == [1, 1, 2, 5, 14, 42, 132, 429]


def test_reversion_matches_sympy():
    order = 7
    coeffs = [0, 2, Fraction(-1, 3), 5, Fraction(1, 2), 0, -1, 3]
    mine = series_reversion(series_from(coeffs))
    z, u = sp.symbols("z u")
    s = sum(sp.Rational(c.numerator, c.denominator) * u**k for k, c in enumerate(map(Fraction, coeffs)))
    # undetermined coefficients solved by sympy
    ts = sp.symbols(f"t1:{order + 1}")
    t = sum(tk * z ** (k + 1) for k, tk in enumerate(ts))
    expr = sp.expand(sp.series(s.subs(u, t), z, 0, order + 1).removeO())
    sol = sp.solve([expr.coeff(z, k) - (1 if k == 1 else 0) for k in range(1, order + 1)], ts, dict=True)[0]
    for k in range(1, order + 1):
        assert mine[k] == Fraction(str(sol[ts[k - 1]]))


def test_log_matches_sympy():
    coeffs = [1, Fraction(1, 2), -3, Fraction(2, 7), 1, 0, Fraction(-5, 3)]
    mine = series_log(series_from(coeffs))
    x = sp.symbols("x")
    s = sum(sp.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(map(Fraction, coeffs)))
    ref = sp.series(sp.log(s), x, 0, len(coeffs)).removeO()
    for k in range(len(coeffs)):
        assert mine[k] == Fraction(str(ref.coeff(x, k)))


def test_fifty_random_reversions_compose_to_identity():
    rng = random.Random(50)
    for _ in range(50):
        order = rng.randint(2, 9)
        coeffs = [0, Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))]
        coeffs += [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(order - 1)]
        s = series_from(coeffs)
        inv = series_reversion(s)
        ident = PowerSeries.variable(order)
        assert series_compose(s, inv) == ident
        assert series_compose(inv, s) == ident


@settings(max_examples=40, deadline=None)
@given(st.lists(fractions, min_size=3, max_size=7), fractions.filter(lambda c: c != 0))
def test_reciprocal_round_trip(tail, c0):
    s = series_from([c0] + tail)
    one = PowerSeries.constant(1, s.truncation_order)
    assert series_mul(s, series_reciprocal(s)) == one
    assert series_reciprocal(series_reciprocal(s)) == s


@settings(max_examples=40, deadline=None)
@given(st.lists(fractions, min_size=2, max_size=6))
def test_exp_log_round_trip(tail):
    s = series_from([1] + tail)
    assert series_exp(series_log(s)) == s
    z = series_from([0] + tail)
    assert series_log(series_exp(z)) == z


@settings(max_examples=30, deadline=None)
@given(st.lists(fractions, min_size=2, max_size=6), st.integers(0, 5))
def test_power_is_repeated_product(coeffs, m):
    s = series_from(coeffs)
    acc = PowerSeries.constant(1, s.truncation_order)
    for _ in range(m):
        acc = acc * s
    assert series_power(s, m) == acc


def test_expand_phi_at_one():
    s = expand_phi_at_one(1, 2, 4)
    assert list(s) == [0, -1, -1, 0, 0]
    assert s.expansion_point == 1
    half = expand_phi_at_one(Fraction(1, 2), Fraction(3, 2), 3)
    assert coefficients_equal(half, [0, -1, Fraction(-1, 2), Fraction(1, 8)])
