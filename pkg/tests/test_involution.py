import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from involut import _series
from involut.errors import ConvergenceError, DomainError, ParameterError
from involut.involution import (
    Method,
    PhiParams,
    defining_equation_check,
    f_bisect,
    f_eval,
    g_eval,
    g_power_series,
    hypergeom_agreement_check,
    hypergeom_g,
    involution_law_check,
    log_consistency_check,
    monotonicity_check,
    neg_log_f,
    neg_log_g_eval,
    phi,
    piecewise_check,
    prudnikov_linear_check,
    scaling_check,
)

# mpmath findroot at 30 digits
F34_AT_03 = 0.97991378028697796874
F13_AT_02 = 0.88488578017961047217


def test_params_validation():
    for a, b in ((0, 1), (2, 1), (1, 1), (-1, 2)):
        with pytest.raises(ParameterError):
            PhiParams(a, b)


def test_peak_and_radius():
    p = PhiParams(1, 2)
    assert p.x0 == 0.5 and p.rho == 0.25
    assert PhiParams(3, 4).x0 == 0.75
    q = PhiParams(1, 3)
    assert q.x0 == pytest.approx(3**-0.5, rel=1e-15)
    assert q.rho == pytest.approx(q.x0 * (1 - q.x0**2), rel=1e-15)
    assert q.aprime == Fraction(1, 2) and q.is_rational
    assert not PhiParams(1.0, 2.5).is_rational


def test_phi_domain():
    with pytest.raises(DomainError):
        phi(PhiParams(1, 2), 1.5)
    assert phi(PhiParams(1, 2), 1.0) == 0.0


def test_bisection_against_mpmath():
    assert f_bisect(PhiParams(3, 4), 0.3) == pytest.approx(F34_AT_03, abs=1e-14)
    assert f_bisect(PhiParams(1, 3), 0.2) == pytest.approx(F13_AT_02, abs=1e-14)
    p = PhiParams(1, 2)
    assert f_bisect(p, 0.0) == 1.0 and f_bisect(p, 1.0) == 0.0 and f_bisect(p, p.x0) == p.x0


def test_g_examples():
    p = PhiParams(1, 2)
    assert g_eval(p, 0.9, 1e-12).value == pytest.approx(0.9, abs=1e-12)
    assert g_eval(p, 0.3, 1e-12).value == pytest.approx(0.7, abs=1e-12)
    q = PhiParams(1, 3)
    r = g_eval(q, 0.2, 1e-13)
    assert r.method is Method.SERIES and r.value == pytest.approx(F13_AT_02, abs=1e-12)
    assert r.bound_on_tail <= 1e-13


def test_series_tail_bound_is_honest():
    q = PhiParams(1, 3)
    S, s = g_power_series(q, 0.2, 1e-12)
    assert s.converged
    assert abs(S - F13_AT_02**2) <= s.tail_bound + 1e-15


def test_near_peak_uses_fallback():
    p = PhiParams(2, 3)
    left = g_eval(p, p.x0 - 1e-5, 1e-12)
    right = g_eval(p, p.x0 + 1e-5, 1e-12)
    assert left.method is Method.BISECTION and right.method is Method.LINEAR_REGIME
    assert right.value == p.x0 + 1e-5


def test_no_fallback_raises_with_partial():
    p = PhiParams(1, 2)
    with pytest.raises(ConvergenceError) as exc:
        g_eval(p, 0.49, 1e-15, max_terms=10, fallback=False)
    assert exc.value.partial is not None and exc.value.partial.terms_used == 10
    assert g_eval(p, 0.49, 1e-15, max_terms=10).method is Method.BISECTION


def test_env_var_caps_terms(monkeypatch):
    monkeypatch.setenv("INVOLUT_MAX_TERMS", "7")
    assert _series.max_terms_default() == 7
    with pytest.raises(ConvergenceError):
        g_eval(PhiParams(1, 2), 0.45, 1e-15, fallback=False)


def test_log_poch_against_mpmath():
    mp.mp.dps = 30
    for x, m in ((0.5, 3), (10.0, 9), (37.5, 36), (1e4, 9999), (2.25, 0)):
        ref = float(mp.log(mp.rf(mp.mpf(x), m)))
        got = float(_series.log_poch(np.array([x]), np.array([m]))[0])
        assert got == pytest.approx(ref, abs=2e-14 * max(1.0, abs(ref)))


def test_f_eval_both_sides():
    p = PhiParams(3, 4)
    assert f_eval(p, 0.3, 1e-12).value == pytest.approx(F34_AT_03, abs=1e-12)
    assert f_eval(p, F34_AT_03, 1e-12).value == pytest.approx(0.3, abs=1e-12)
    with pytest.raises(DomainError):
        f_eval(p, -0.1, 1e-9)


def test_neg_log_g_matches_log_of_g():
    q = PhiParams(2, 5)
    for x in (0.1, 0.4, 0.7):
        assert neg_log_g_eval(q, x, 1e-13) == pytest.approx(-math.log(g_eval(q, x, 1e-13).value), abs=1e-11)
    assert neg_log_f(q, 0.95, 1e-12) == pytest.approx(-math.log(f_bisect(q, 0.95)), rel=1e-12)


@pytest.mark.parametrize("ab", [(1, 2), (2, 3), (1, 3), (Fraction(3, 2), Fraction(5, 2))])
def test_structural_checks(ab):
    p = PhiParams(*ab)
    assert involution_law_check(p).passed
    assert defining_equation_check(p).passed
    assert piecewise_check(p).passed
    assert monotonicity_check(p).passed
    assert log_consistency_check(p).passed


def test_scaling_identity():
    p = PhiParams(1, 3)
    for x in (0.15, 0.5, 0.8):
        assert scaling_check(p, 2, x, 1e-9).passed
        assert scaling_check(p, Fraction(1, 2), x, 1e-9).passed
    with pytest.raises(ParameterError):
        scaling_check(p, 0, 0.5, 1e-9)


def test_linear_regime_through_series():
    for nu, x in ((2, 0.9), (3, 0.8), (4, 0.95)):
        r = prudnikov_linear_check(nu, x, 1e-10)
        assert r.passed and r.notes["method"] == "SERIES"
    with pytest.raises(DomainError):
        prudnikov_linear_check(2, 0.3, 1e-10)


def test_hypergeometric_form():
    for a in (2, 3, 4):
        assert hypergeom_agreement_check(a).passed
    assert hypergeom_g(2, 0.9, 1e-12) == pytest.approx(0.9, abs=1e-12)
    with pytest.raises(ParameterError):
        hypergeom_g(1, 0.3, 1e-9)
