"""The involution ``f_{a,b}`` and auxiliary ``g_{a,b}`` built from ``phi = x^a - x^b``.

``f`` maps each point of ``[0, 1]`` to the other point with the same value
of ``phi``.  ``g`` agrees with ``f`` left of the peak ``x0`` and with the
identity to its right; it is evaluated from its Lagrange-inversion series

    g^{b-a}(x) = 1 - sum_n (a'n)_{n-1} w^n / n!,   w = phi(x), a' = a/(b-a)

with a bisection solve of ``phi(y) = phi(x)`` as the independent oracle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from . import _series
from .errors import ConvergenceError, DomainError, ParameterError
from .report import IdentityReport

NEAR_X0 = 1e-4


class Method(enum.Enum):
    SERIES = "SERIES"
    BISECTION = "BISECTION"
    LINEAR_REGIME = "LINEAR_REGIME"


@dataclass(frozen=True)
class EvalResult:
    value: float
    terms_used: int
    bound_on_tail: float
    method: Method


@dataclass(frozen=True)
class PhiParams:
    """Exponents ``0 < a < b`` of ``phi(x) = x^a - x^b``.

    ``a`` and ``b`` may be ints, Fractions or floats; exact checks need
    rationals.  ``x0`` is the peak of ``phi`` and ``rho = phi(x0)`` its
    maximum, which is also the radius of convergence of the series in ``w``.
    """

    a: float | Fraction
    b: float | Fraction
    x0: float = field(init=False)
    rho: float = field(init=False)

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (a > 0 and b > a) or not math.isfinite(b):
            raise ParameterError(f"need 0 < a < b, got a={self.a}, b={self.b}")
        c = b - a
        # x0 = (a/b)^(1/(b-a)); log form only when b is close to a
        x0 = (a / b) ** (1.0 / c) if c >= 1e-2 else math.exp(-math.log1p(c / a) / c)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "rho", _phi(a, b, x0))

    @property
    def af(self) -> float:
        return float(self.a)

    @property
    def bf(self) -> float:
        return float(self.b)

    @property
    def c(self) -> float:
        return float(self.b) - float(self.a)

    @property
    def aprime(self):
        """``a/(b-a)``, exact when both exponents are rational."""
        if isinstance(self.a, (int, Fraction)) and isinstance(self.b, (int, Fraction)):
            return Fraction(self.a) / (Fraction(self.b) - Fraction(self.a))
        return self.af / self.c

    @property
    def is_rational(self) -> bool:
        return isinstance(self.a, (int, Fraction)) and isinstance(self.b, (int, Fraction))

    def scaled(self, gamma) -> "PhiParams":
        return PhiParams(self.a * gamma, self.b * gamma)

    def label(self) -> str:
        return f"a={self.a}, b={self.b}"


def _phi(a: float, b: float, x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    # x^a (1 - x^{b-a}) avoids cancellation near x = 1
    return x**a * -math.expm1((b - a) * math.log(x))


def _check_unit(x):
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x={x} outside [0, 1]")


def phi(params: PhiParams, x: float) -> float:
    _check_unit(x)
    return _phi(params.af, params.bf, float(x))


def _bisect(fn, lo: float, hi: float, tol: float) -> float:
    """Root of ``fn`` on ``[lo, hi]`` given ``fn(lo) <= 0 <= fn(hi)`` or the reverse."""
    flo = fn(lo)
    if flo == 0.0:
        return lo
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def f_bisect(params: PhiParams, x: float, tol: float = 1e-15) -> float:
    """``f(x)`` by bisection for ``phi(y) = phi(x)`` on the far side of ``x0``."""
    _check_unit(x)
    if tol <= 0:
        raise ParameterError("tol must be > 0")
    x = float(x)
    x0 = params.x0
    if x == 0.0:
        return 1.0
    if x == 1.0:
        return 0.0
    if x == x0:
        return x0
    a, b = params.af, params.bf
    target = _phi(a, b, x)
    fn = lambda y: _phi(a, b, y) - target
    if x < x0:
        return _bisect(fn, x0, 1.0, tol)
    return _bisect(fn, 0.0, x0, tol)


def _near_path(params: PhiParams, x: float, terms: int = 0) -> EvalResult:
    if x >= params.x0:
        return EvalResult(x, terms, 0.0, Method.LINEAR_REGIME)
    return EvalResult(f_bisect(params, x), terms, 2.0**-52, Method.BISECTION)


def g_power_series(params: PhiParams, x: float, tol: float, max_terms: int | None = None):
    """Sum ``S = g^{b-a}(x) = 1 - sum G_COEFF w^n`` with absolute error ``<= tol``."""
    w = _phi(params.af, params.bf, x)
    q = w / params.rho
    s = _series.coeff_sum("g", float(params.aprime), w, q, tol, max_terms)
    return 1.0 - s.value, s


def g_eval(params: PhiParams, x: float, tol: float, *, max_terms: int | None = None,
           fallback: bool = True) -> EvalResult:
    """Evaluate ``g_{a,b}(x)`` from its series.

    Within ``NEAR_X0`` of the peak, or when the series cannot certify
    ``tol`` within ``max_terms`` terms, the value is taken from the linear
    regime (``x >= x0``) or from bisection (``x < x0``).  With
    ``fallback=False`` the latter case raises :class:`ConvergenceError`.
    """
    _check_unit(x)
    if tol <= 0:
        raise ParameterError("tol must be > 0")
    x = float(x)
    if x == 0.0 or x == 1.0:
        return EvalResult(1.0, 0, 0.0, Method.SERIES)
    if abs(x - params.x0) < NEAR_X0:
        return _near_path(params, x)
    c = params.c
    # |d(S^{1/c})/dS| on [x0^c, 1]
    p = 1.0 / c - 1.0
    slope = (1.0 / c) * (params.x0 ** (c * p) if p < 0 else 1.0)
    S, s = g_power_series(params, x, tol / slope, max_terms)
    if not s.converged:
        partial = EvalResult(max(S, 0.0) ** (1.0 / c), s.terms_used, slope * s.tail_bound, Method.SERIES)
        if fallback:
            return _near_path(params, x, s.terms_used)
        raise ConvergenceError(f"g series at x={x} did not reach tol={tol}", partial=partial)
    return EvalResult(S ** (1.0 / c), s.terms_used, slope * s.tail_bound, Method.SERIES)


def f_eval(params: PhiParams, x: float, tol: float, **kw) -> EvalResult:
    """``f(x)``: the series branch left of ``x0``, bisection to its right."""
    _check_unit(x)
    x = float(x)
    if x <= params.x0:
        return g_eval(params, x, tol, **kw)
    return EvalResult(f_bisect(params, x, min(tol * 1e-3, 1e-15)), 0, 2.0**-52, Method.BISECTION)


def neg_log_g_result(params: PhiParams, x: float, tol: float, *, max_terms: int | None = None,
                     fallback: bool = True) -> EvalResult:
    _check_unit(x)
    if tol <= 0:
        raise ParameterError("tol must be > 0")
    x = float(x)
    if x == 0.0 or x == 1.0:
        return EvalResult(0.0, 0, 0.0, Method.SERIES)
    if abs(x - params.x0) < NEAR_X0:
        near = _near_path(params, x)
        return EvalResult(-math.log(near.value), 0, near.bound_on_tail, near.method)
    c = params.c
    w = _phi(params.af, params.bf, x)
    s = _series.coeff_sum("logg", float(params.aprime), w, w / params.rho, tol * c, max_terms)
    if not s.converged:
        if fallback:
            near = _near_path(params, x, s.terms_used)
            return EvalResult(-math.log(near.value), s.terms_used, near.bound_on_tail, near.method)
        partial = EvalResult(s.value / c, s.terms_used, s.tail_bound / c, Method.SERIES)
        raise ConvergenceError(f"-log g series at x={x} did not reach tol={tol}", partial=partial)
    return EvalResult(s.value / c, s.terms_used, s.tail_bound / c, Method.SERIES)


def neg_log_g_eval(params: PhiParams, x: float, tol: float, **kw) -> float:
    """``-log g_{a,b}(x)`` from the ``(a'n+1)_{n-1}`` series."""
    return neg_log_g_result(params, x, tol, **kw).value


def neg_log_f(params: PhiParams, x: float, tol: float) -> float:
    """``-log f(x)``; accurate near ``x = 0`` where ``f`` is close to 1."""
    if x <= params.x0:
        return neg_log_g_eval(params, x, tol)
    y = f_bisect(params, x)
    return math.inf if y <= 0.0 else -math.log(y)


def hypergeom_g(a: int, x: float, tol: float, *, max_terms: int | None = None,
                fallback: bool = True) -> float:
    """``g_a`` for integer ``a >= 2`` as ``1/(a+1) + a/(a+1) aF_{a-1}(...; z)``.

    Upper parameters ``-1/(a+1), 1/(a+1), ..., (a-1)/(a+1)``; lower
    ``1/a, ..., (a-1)/a``; argument ``z = (a+1)^{a+1}/a^a x^a (1-x)``.
    Every term after the first has the sign of ``(-1/(a+1))_n``, i.e. is
    negative, so the positive-series machinery applies to ``-sum``.
    """
    if int(a) != a or a < 2:
        raise ParameterError("hypergeometric form needs integer a >= 2")
    a = int(a)
    if tol <= 0:
        raise ParameterError("tol must be > 0")
    x = float(x)
    z = math.exp((a + 1) * math.log(a + 1) - a * math.log(a)) * x**a * (1.0 - x) if x != 0 else 0.0
    if abs(z) > 1.0:
        raise ConvergenceError(f"hypergeometric argument z={z} outside the unit disk")
    if z < 0:
        raise DomainError("hypergeometric form is implemented for x in [0, 1]")
    params = PhiParams(a, a + 1)
    if z == 0.0:
        return 1.0
    if abs(x - params.x0) < NEAR_X0:
        return _near_path(params, x).value
    upper = np.array([k / (a + 1) for k in range(1, a)])
    lower = np.array([k / a for k in range(1, a)])
    tail_scale = a / (a + 1)

    def chunk(i):
        n = np.arange(1 + i * _series.CHUNK, 1 + (i + 1) * _series.CHUNK, dtype=float)
        # |(-1/(a+1))_n| = (1/(a+1)) (a/(a+1))_{n-1}
        out = -math.log(a + 1) + _series.log_poch(a / (a + 1), n - 1)
        for u in upper:
            out = out + _series.log_poch(u, n)
        for l in lower:
            out = out - _series.log_poch(l, n)
        return out - gammaln(n + 1)

    if max_terms is None:
        max_terms = _series.max_terms_default()
    s = _series.sum_series(chunk, math.log(z), z, tol / tail_scale, max_terms)
    if not s.converged:
        if fallback:
            return _near_path(params, x).value
        raise ConvergenceError(f"hypergeometric series at x={x} did not reach tol={tol}",
                               partial=1.0 / (a + 1) + tail_scale * (1.0 - s.value))
    return 1.0 / (a + 1) + tail_scale * (1.0 - s.value)


def _g_power(params: PhiParams, x: float, tol: float) -> float:
    """``g^{b-a}(x)``, from the series directly when it converges."""
    if x == 0.0 or x == 1.0:
        return 1.0
    if abs(x - params.x0) >= NEAR_X0:
        S, s = g_power_series(params, x, tol)
        if s.converged:
            return S
    return _near_path(params, x).value ** params.c


def scaling_check(params: PhiParams, gamma, x: float, tol: float) -> IdentityReport:
    """Check invariance of ``g^{b-a}`` and ``f`` under ``(a, b) -> (a gamma, b gamma)``.

    With ``y = x^a``:  ``g_{a,b}^{b-a}(y^{1/a}) = g_{ag,bg}^{g(b-a)}(y^{1/(ag)})``
    and ``f_{ag,bg}(x) = f_{a,b}(x^g)^{1/g}``.
    """
    if float(gamma) <= 0:
        raise ParameterError("gamma must be > 0")
    _check_unit(x)
    scaled = params.scaled(gamma)
    gf = float(gamma)
    y = x**params.af
    lhs_g = _g_power(params, y ** (1.0 / params.af), tol)
    rhs_g = _g_power(scaled, y ** (1.0 / scaled.af), tol)
    lhs_f = f_eval(scaled, x, tol).value
    rhs_f = f_eval(params, x**gf, tol).value ** (1.0 / gf)
    return IdentityReport.numeric(
        "scaling",
        [("g_power", lhs_g - rhs_g), ("f", lhs_f - rhs_f)],
        tol,
        notes={"params": params.label(), "gamma": gamma, "x": x},
    )


def prudnikov_linear_check(nu: float, x: float, tol: float) -> IdentityReport:
    """The linear regime ``g_a(x) = x`` on ``[x0, 1]`` with ``a = nu - 1``.

    This is the ``nu = a+1, mu = -1, z = 1/x`` case of the Prudnikov sum,
    checked through the series itself (no fallback).
    """
    if nu <= 1:
        raise ParameterError("nu must be > 1")
    params = PhiParams(nu - 1, nu)
    if x < params.x0:
        raise DomainError(f"x={x} is left of x0={params.x0}")
    g = g_eval(params, x, tol, fallback=False)
    return IdentityReport.numeric(
        "prudnikov_linear_regime", [(x, g.value - x)], tol,
        notes={"nu": nu, "x0": params.x0, "method": g.method.value, "terms": g.terms_used},
    )


def unit_grid(points: int = 99) -> list[float]:
    """Interior grid ``k/(points+1)``, ``k = 1..points``."""
    return [k / (points + 1) for k in range(1, points + 1)]


def involution_law_check(params: PhiParams, tol: float = 1e-9, grid=None) -> IdentityReport:
    grid = unit_grid() if grid is None else grid
    res = []
    # f is steep near the endpoints, so the inner solves run much tighter
    inner = tol * 1e-5
    for x in grid:
        y = f_eval(params, x, inner).value
        res.append((x, f_eval(params, y, inner).value - x))
    return IdentityReport.numeric("involution_law", res, tol, notes={"params": params.label()})


def defining_equation_check(params: PhiParams, tol: float = 1e-10, grid=None) -> IdentityReport:
    grid = unit_grid() if grid is None else grid
    res = [(x, phi(params, f_eval(params, x, tol * 1e-2).value) - phi(params, x)) for x in grid]
    return IdentityReport.numeric("defining_equation", res, tol, notes={"params": params.label()})


def piecewise_check(params: PhiParams, tol: float = 1e-9, grid=None, margin: float = 0.01) -> IdentityReport:
    """``g = f`` on ``[0, x0 - margin]`` and ``g = id`` on ``[x0 + margin, 1]``."""
    grid = unit_grid() if grid is None else grid
    res = []
    for x in grid:
        if x <= params.x0 - margin:
            g = g_eval(params, x, tol * 1e-2)
            res.append((x, g.value - f_bisect(params, x)))
        elif x >= params.x0 + margin:
            g = g_eval(params, x, tol * 1e-2)
            res.append((x, g.value - x))
    return IdentityReport.numeric("piecewise_structure", res, tol, notes={"params": params.label()})


def monotonicity_check(params: PhiParams, grid=None) -> IdentityReport:
    grid = unit_grid() if grid is None else grid
    vals = [f_eval(params, x, 1e-12).value for x in grid]
    steps = [(grid[i], vals[i + 1] - vals[i]) for i in range(len(vals) - 1)]
    return IdentityReport(
        identity_name="f_strictly_decreasing",
        orders_checked=None,
        max_residual=max(d for _, d in steps),
        passed=all(d < 0 for _, d in steps),
        details=steps,
        tolerance=0.0,
        notes={"params": params.label()},
    )


def log_consistency_check(params: PhiParams, tol: float = 1e-9, grid=None) -> IdentityReport:
    grid = unit_grid() if grid is None else grid
    res = []
    for x in grid:
        if x > 0.99:
            continue
        res.append((x, neg_log_g_eval(params, x, tol * 1e-2) + math.log(g_eval(params, x, tol * 1e-2).value)))
    return IdentityReport.numeric("log_series_consistency", res, tol, notes={"params": params.label()})


def hypergeom_agreement_check(a: int, tol: float = 1e-9, points: int = 19) -> IdentityReport:
    params = PhiParams(a, a + 1)
    res = []
    for x in unit_grid(points):
        res.append((x, hypergeom_g(a, x, tol * 1e-2) - g_eval(params, x, tol * 1e-2).value))
    return IdentityReport.numeric("hypergeometric_agreement", res, tol, notes={"a": a})
