import math

import mpmath as mp
import numpy as np
import pytest
from scipy.special import lambertw

from involut.analysis import FunctionHandle, transfer_identity_check
from involut.errors import DomainError, ParameterError
from involut.lambert import (
    INV_E,
    PUBLISHED_FIGURES,
    LambertCase,
    g_lambert,
    g_lambert_result,
    identity_chain_check,
    involution_check_lambert,
    lambert_f,
    lambert_integrals,
    lambert_series_sum,
    limit_from_ab,
    limit_order_check,
    linear_regime_check,
    log_g_lambert,
    log_g_lambert_series,
    moment_check,
    moment_closed,
    neg_log_lambert_f,
    w0,
)

# mpmath at 30 digits: lambertw, nsum, and quadrature of exp(W0) / exp(W_{-1})
W0_REF = {-0.3: -0.48940222718021496904, 0.5: 0.35173371124919582602,
          10.0: 1.7455280027406993831, 1000.0: 5.2496028524015962271}
S_REF = 0.34141814228011783994
INT_G_REF = 0.65858185771988216006
INT_F_REF = 0.31716371543976432012
G_AT_01 = 0.72924110853561732328


def test_w0_examples():
    assert w0(0.0).value == 0.0
    assert w0(math.e).value == pytest.approx(1.0, abs=1e-15)
    assert w0(-INV_E).value == pytest.approx(-1.0, abs=1e-7)
    for t, v in W0_REF.items():
        r = w0(t)
        assert r.value == pytest.approx(v, abs=1e-14)
        assert r.residual <= 1e-14 * max(1.0, abs(t))


def test_w0_matches_scipy():
    for t in np.concatenate([np.linspace(-INV_E + 1e-4, 0, 40), np.geomspace(1e-6, 1e6, 40)]):
        ref = lambertw(t).real
        assert w0(t).value == pytest.approx(ref, abs=4e-15 * max(1.0, abs(ref)))


def test_w0_near_branch_point():
    mp.mp.dps = 40
    for d in (1e-12, 1e-9, 1e-6):
        t = -INV_E + d
        ref = float(mp.lambertw(mp.mpf(t)))
        # dW/dt blows up like 1/(1 + W); allow for rounding of W e^W - t
        cond = abs(ref) / (abs(t) * (1.0 + ref))
        assert w0(t).value == pytest.approx(ref, abs=1e-15 + 1e-16 * cond)
        assert w0(t).residual <= 1e-16


def test_w0_domain():
    with pytest.raises(DomainError):
        w0(-0.4)


def test_g_lambert_examples():
    assert g_lambert(1.0, 1e-12) == 1.0
    assert g_lambert(0.5, 1e-12) == pytest.approx(0.5, abs=1e-12)
    assert g_lambert(0.1, 1e-12) == pytest.approx(G_AT_01, abs=1e-10)
    assert lambert_f(0.1) == pytest.approx(G_AT_01, abs=1e-14)
    assert g_lambert_result(INV_E + 1e-6, 1e-12).value == pytest.approx(INV_E + 1e-6, abs=1e-14)
    with pytest.raises(ParameterError):
        g_lambert(0.3, 0)


def test_log_g_lambert():
    assert log_g_lambert(1.0) == 0.0
    assert log_g_lambert(INV_E) == pytest.approx(-1.0, abs=1e-7)
    assert log_g_lambert_series(0.05, 1e-13).value == pytest.approx(log_g_lambert(0.05), abs=1e-11)


def test_limit_case():
    r = limit_from_ab(1e-3, 0.2, 1e-13)
    assert r.passed and r.max_residual <= 5e-3
    assert limit_order_check().passed


def test_series_sum_and_bound():
    S, bound = lambert_series_sum()
    assert abs(S - S_REF) <= bound
    assert bound < 1e-13


def test_terms_exceed_inverse_square_envelope():
    # so e^{-2}/n^2 cannot serve as an upper bound on the tail
    for n in (2, 10, 100, 1000):
        term = math.exp((n - 1) * math.log(n - 1) - (n + 1) * math.log(n + 1))
        assert term > math.exp(-2) / n**2


def test_moments():
    assert moment_closed(1) == pytest.approx(-0.25, abs=1e-16)
    assert moment_closed(2) == pytest.approx(2 / 27, abs=1e-16)
    assert moment_check(8, 1e-10).passed


def test_structural():
    assert involution_check_lambert().passed
    assert linear_regime_check().passed
    assert identity_chain_check().passed
    assert neg_log_lambert_f(0.999) == pytest.approx(-math.log(lambert_f(0.999)), rel=1e-9)


def test_integrals_against_independent_oracle():
    L = lambert_integrals(1e-9)
    assert L.passed
    assert L.int_g == pytest.approx(INT_G_REF, abs=1e-9)
    assert L.int_f == pytest.approx(INT_F_REF, abs=1e-9)
    assert L.int_neg_log_g == pytest.approx(math.pi**2 / 6, abs=1e-9)
    assert L.int_neg_log_f == pytest.approx(math.pi**2 / 3, abs=1e-9)
    d = L.to_dict()
    assert d["published_figures"] == PUBLISHED_FIGURES
    # the published figures are reported, and none of them is reproduced
    for v in PUBLISHED_FIGURES.values():
        assert abs(v - L.int_g) > 1e-4 and abs(v - L.int_f) > 1e-4


def test_transfer_identity_limit_case():
    x = FunctionHandle(lambda t: t, "x")
    one = FunctionHandle(lambda t: 1.0, "1")
    assert transfer_identity_check(LambertCase(), x, one, 1e-7).passed
    h = FunctionHandle(lambda t: 0.0 if t == 0 else -t * math.log(t), "-x log x")
    dh = FunctionHandle(lambda t: -math.log(t) - 1.0, "-log x - 1")
    assert transfer_identity_check(LambertCase(), h, dh, 1e-7).passed
