import math

import pytest

from involut.analysis import (
    FunctionHandle,
    andrews_integral_check,
    cot_form_check,
    double_integral_area_check,
    gamma_ratio_sum,
    gamma_ratio_sum_check,
    gamma_ratio_sum_closed,
    int_f_0x0_closed,
    int_f_closed,
    int_fab_closed,
    int_fab_transfer,
    int_g_closed,
    int_gab_closed,
    integral_table,
    integrate,
    quad_int_f,
    quad_int_g,
    quad_weighted,
    report_row,
    sinh_ratio_integral_check,
    transfer_identity_check,
)
from involut.errors import AccuracyError, ParameterError
from involut.involution import PhiParams

PI = math.pi

# mpmath, 30 digits: quadrature of ((1-t^a)/(1-t^(a+1)))^2 and of the
# weighted integrand with f from findroot; nsum for the gamma-ratio sum
INT_F = {0.5: 0.26360014128128492209, 1.0: 0.5, 2.0: 0.73639985871871507791, 3.0: 0.83904862254808623221}
WEIGHTED_F = {(1, 3): 0.13180007064063902496, (2, 5): 0.11833877354464424899}
GAMMA_SUM = {0.5: 0.73639985871871507791, 1.0: 0.25, 2.0: 0.065900035320321230523}


def test_integrate_basic():
    r = integrate(FunctionHandle(lambda x: x * x), 0.0, 1.0, 1e-12)
    assert r.value == pytest.approx(1 / 3, abs=1e-14) and r.evaluations > 0
    r = integrate(FunctionHandle(lambda x: -math.log(x) if x > 0 else 0.0), 0.0, 1.0, 1e-12)
    assert r.value == pytest.approx(1.0, abs=1e-12)


def test_integrate_errors():
    with pytest.raises(ParameterError):
        integrate(FunctionHandle(lambda x: x), 1.0, 0.0, 1e-9)
    with pytest.raises(AccuracyError) as exc:
        integrate(FunctionHandle(lambda x: math.sin(1 / x) / x if x else 0.0), 0.0, 1.0, 1e-14, limit=5)
    assert exc.value.error_estimate > 1e-14


def test_int_f_closed_examples():
    assert int_f_closed(1) == 0.5
    assert int_f_closed(3) == pytest.approx(0.25 * (1 + 3 * PI / 4), abs=1e-15)
    assert int_f_closed(2) == pytest.approx((1 + 2 * PI / (3 * math.sqrt(3))) / 3, abs=1e-15)
    for a, v in INT_F.items():
        assert int_f_closed(a) == pytest.approx(v, abs=2e-15)
    with pytest.raises(ParameterError):
        int_f_closed(0)


def test_int_f_0x0_closed_examples():
    assert int_f_0x0_closed(2) == pytest.approx((7 + 2 * PI / math.sqrt(3)) / 18, abs=1e-15)
    assert int_f_0x0_closed(3) == pytest.approx((13 + 3 * PI) / 32, abs=1e-15)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 3.0])
def test_closed_forms_against_quadrature(a):
    p = PhiParams(a, a + 1)
    assert quad_int_f(p, 1e-10).value == pytest.approx(int_f_closed(a), abs=1e-9)
    assert quad_int_f(p, 1e-10, 0.0, p.x0).value == pytest.approx(int_f_0x0_closed(a), abs=1e-9)
    assert quad_int_g(p, 1e-10).value == pytest.approx(int_g_closed(a), abs=1e-9)
    assert 2 * int_g_closed(a) - 1 == pytest.approx(int_f_closed(a), abs=1e-14)
    assert cot_form_check(a).passed


def test_weighted_closed_forms():
    assert int_gab_closed(1, 2) == pytest.approx(0.75, abs=1e-15)
    assert int_fab_closed(1, 2) == pytest.approx(0.5, abs=1e-15)
    assert int_fab_transfer(1, 2) == pytest.approx(0.5, abs=1e-15)
    for (a, b), v in WEIGHTED_F.items():
        assert int_fab_transfer(a, b) == pytest.approx(v, abs=1e-14)
        assert quad_weighted(PhiParams(a, b), "f", 1e-10).value == pytest.approx(v, abs=1e-9)
        assert quad_weighted(PhiParams(a, b), "g", 1e-10).value == pytest.approx(int_gab_closed(a, b), abs=1e-9)


def test_unit_gap_formula_is_off_by_a_constant():
    # (2 - b + a - a/b)/(b-a) - ... equals 2 int_gab - 1 rather than 2 int_gab - 1/(b-a)
    for a, b in ((1, 3), (2, 5), (1, 4)):
        assert int_fab_closed(a, b) - int_fab_transfer(a, b) == pytest.approx(1 / (b - a) - 1, abs=1e-14)


def test_gamma_ratio_sum():
    for c, v in GAMMA_SUM.items():
        est, err = gamma_ratio_sum(c)
        assert est == pytest.approx(v, abs=1e-13) and err < 1e-12
        assert gamma_ratio_sum_closed(c) == pytest.approx(v, abs=1e-15)
        assert gamma_ratio_sum_check(c, 1e-8).passed


@pytest.mark.parametrize("ab", [(1, 2), (2, 3), (1, 3)])
def test_andrews_three_routes(ab):
    r = andrews_integral_check(*ab, 1e-8)
    assert r.passed
    assert r.notes["closed"] == pytest.approx(PI**2 / (3 * ab[0] * ab[1]), rel=1e-15)


@pytest.mark.parametrize("a", [0.5, 2.0, 3.0])
def test_sinh_ratio_and_double_integral(a):
    assert sinh_ratio_integral_check(a, 1e-8).passed
    assert double_integral_area_check(a, 1e-8).passed


def test_transfer_identity_general_h():
    p = PhiParams(2, 3)
    sq = FunctionHandle(lambda x: x * x, "x^2")
    dsq = FunctionHandle(lambda x: 2 * x, "2x")
    assert transfer_identity_check(p, sq, dsq, 1e-8).passed
    ident = FunctionHandle(lambda x: x, "x")
    one = FunctionHandle(lambda x: 1.0, "1")
    r = transfer_identity_check(PhiParams(1, 3), ident, one, 1e-8)
    assert r.passed and r.notes["int_hf"] == pytest.approx(2 * r.notes["int_hg"] - 1, abs=1e-8)


def test_integral_table_rows():
    rows = [report_row(r) for r in integral_table(PhiParams(1, 3), 1e-9)]
    names = [r["integral"] for r in rows]
    assert "int_f" not in names and "int_fab_weighted" in names
    assert all(r["passed"] for r in rows)
    fab = rows[names.index("int_fab_weighted")]
    assert "unit-gap formula" in fab["annotation"]
    adjacent = [report_row(r)["integral"] for r in integral_table(PhiParams(1, 2), 1e-9)]
    assert adjacent[:3] == ["int_f", "int_f_0_x0", "int_g"]
