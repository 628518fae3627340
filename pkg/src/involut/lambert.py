"""The limit case ``phi(x) = -x log x`` and the principal Lambert W branch.

The involution pairs points on either side of ``1/e`` with equal
``-x log x``; its auxiliary function satisfies ``log g(w) = W0(w log w)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import polygamma

from . import _series
from .errors import DomainError, ParameterError
from .involution import EvalResult, Method, PhiParams, _bisect, g_eval
from .report import IdentityReport

INV_E = math.exp(-1.0)
NEAR_X0 = 1e-4

# Published figures for these integrals; they disagree with each other and
# with direct computation, so they are reported and never asserted.
PUBLISHED_FIGURES = {
    "int_g_first": 0.659495,
    "int_g_second": 0.728466,
    "int_f": 1.31899,
}


@dataclass(frozen=True)
class LambertEval:
    value: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class LambertCase:
    """Stand-in for :class:`PhiParams` in the limit case."""

    x0: float = INV_E
    rho: float = INV_E

    def label(self) -> str:
        return "lambert"


def w0(t: float) -> LambertEval:
    """Principal branch ``W0(t)``, ``t >= -1/e``, by Halley iteration."""
    t = float(t)
    # float(-1/e) sits a hair below the true branch point
    if t < -INV_E - 4e-17:
        raise DomainError(f"W0 is real only for t >= -1/e, got {t}")
    if t == 0.0:
        return LambertEval(0.0, 0, 0.0)
    p2 = 2.0 * (1.0 + math.e * t)
    if p2 <= 0.0:
        return LambertEval(-1.0, 0, abs(-INV_E - t))
    if t < -0.25:
        p = math.sqrt(p2)
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3
    elif t < 3.0:
        w = math.log1p(t)
        if t > 0:
            w *= 1.0 - math.log1p(w) / (2.0 + w)
    else:
        lt = math.log(t)
        w = lt - math.log(lt)
    it = 0
    for it in range(1, 100):
        ew = math.exp(w)
        f = w * ew - t
        wp1 = w + 1.0
        if wp1 <= 0.0:
            w = -1.0 + 1e-12
            continue
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        step = f / denom
        w_new = w - step
        # damping keeps the iterate on the principal branch
        if w_new < -1.0:
            w_new = 0.5 * (w - 1.0)
        converged = abs(w_new - w) <= 4e-16 * (1.0 + abs(w_new))
        w = w_new
        if converged:
            break
    return LambertEval(w, it, abs(w * math.exp(w) - t))


def lambert_phi(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x={x} outside [0, 1]")
    return 0.0 if x == 0.0 or x == 1.0 else -x * math.log(x)


def lambert_f(x: float, tol: float = 1e-15) -> float:
    """The involution: bisection for ``-y log y = -x log x`` across ``1/e``."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x={x} outside [0, 1]")
    if x == 0.0:
        return 1.0
    if x == 1.0:
        return 0.0
    if x == INV_E:
        return INV_E
    target = lambert_phi(x)
    fn = lambda y: lambert_phi(y) - target
    if x < INV_E:
        return _bisect(fn, INV_E, 1.0, tol)
    return _bisect(fn, 0.0, INV_E, tol)


def _series_arg(w: float) -> float:
    return 0.0 if w == 0.0 else -w * math.log(w)


def g_lambert_result(w: float, tol: float, max_terms: int | None = None) -> EvalResult:
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"w={w} outside [0, 1]")
    if tol <= 0:
        raise ParameterError("tol must be > 0")
    z = _series_arg(w)
    if z == 0.0:
        return EvalResult(1.0, 0, 0.0, Method.SERIES)
    if abs(w - INV_E) >= NEAR_X0:
        s = _series.coeff_sum("lambert_g", 0.0, z, math.e * z, tol, max_terms)
        if s.converged:
            return EvalResult(1.0 - s.value, s.terms_used, s.tail_bound, Method.SERIES)
    # W0 is ill-conditioned at its branch point, so near 1/e use g = id or bisection
    if w >= INV_E:
        return EvalResult(w, 0, 0.0, Method.LINEAR_REGIME)
    return EvalResult(lambert_f(w), 0, 2.0**-52, Method.BISECTION)


def g_lambert(w: float, tol: float) -> float:
    """``g(w) = 1 - sum (n-1)^{n-1}/n! (-w log w)^n``."""
    return g_lambert_result(w, tol).value


def log_g_lambert(w: float, tol: float = 1e-15) -> float:
    """``log g(w) = W0(w log w)``.

    Within ``NEAR_X0`` of ``1/e`` the branch point makes W0 lose half its
    digits; there ``log w`` (right of ``1/e``) or the log of the bisection
    partner is returned instead.
    """
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"w={w} outside [0, 1]")
    if w == 0.0:
        return 0.0
    if abs(w - INV_E) < NEAR_X0:
        return math.log(w) if w >= INV_E else math.log(lambert_f(w))
    return w0(w * math.log(w)).value


def log_g_lambert_series(w: float, tol: float, max_terms: int | None = None) -> EvalResult:
    """``log g(w) = -sum n^{n-1}/n! (-w log w)^n`` (the Cayley tree series)."""
    z = _series_arg(w)
    s = _series.coeff_sum("lambert_logg", 0.0, z, math.e * z, tol, max_terms)
    return EvalResult(-s.value, s.terms_used, s.tail_bound, Method.SERIES if s.converged else Method.BISECTION)


def limit_from_ab(epsilon: float, w: float, tol: float) -> IdentityReport:
    """Deviation of ``g_{1,1+eps}(w)`` from the Lambert ``g(w)``.

    ``phi_{1,1+eps} = x (1 - x^eps) = eps (-x log x) + O(eps^2)`` has the
    same level sets as ``-x log x`` in the limit, so ``g`` itself converges
    and no rescaling of ``w`` is needed.  Passes when the deviation is at
    most ``5 eps``.
    """
    if epsilon <= 0:
        raise ParameterError("epsilon must be > 0")
    ab = g_eval(PhiParams(1.0, 1.0 + epsilon), w, tol).value
    lam = g_lambert(w, tol)
    dev = ab - lam
    return IdentityReport.numeric(
        "lambert_limit", [(epsilon, dev)], 5.0 * epsilon,
        notes={"w": w, "g_ab": ab, "g_lambert": lam},
    )


def limit_order_check(w_values=(0.1, 0.2, 0.5), eps_values=(1e-2, 5e-3, 2.5e-3),
                      tol: float = 1e-13, floor: float = 1e-9) -> IdentityReport:
    """Linear decay of the limit deviation as epsilon halves.

    For each ``w`` the ratio of successive deviations must lie in
    ``[1.6, 2.4]``.  Deviations below ``floor`` count as exact agreement
    (both functions are the identity right of ``x0``) and pass.
    """
    res = []
    ratios = {}
    for w in w_values:
        devs = [abs(limit_from_ab(e, w, tol).details[0][1]) for e in eps_values]
        for e, d in zip(eps_values, devs):
            res.append(((w, e), d))
        rs = [devs[i] / devs[i + 1] if devs[i + 1] > floor else None for i in range(len(devs) - 1)]
        ratios[str(w)] = rs
    ok = True
    for (w, e), d in res:
        if d > 5.0 * e:
            ok = False
    for rs in ratios.values():
        for r in rs:
            if r is not None and not 1.6 <= r <= 2.4:
                ok = False
    worst = max(d for _, d in res)
    return IdentityReport(
        identity_name="lambert_limit_order",
        orders_checked=None,
        max_residual=worst,
        passed=ok,
        details=res,
        tolerance=floor,
        notes={"ratios": ratios},
    )


def lambert_series_sum(n_direct: int = 10_000) -> tuple[float, float]:
    """``S = sum_{n>=1} (n-1)^{n-1} / (n+1)^{n+1}`` and an error bound.

    Terms behave like ``e^{-2} n^{-2} (1 + eps_n)`` with ``0 < eps_n`` and
    ``eps_n`` decreasing (roughly ``1/(3n^2)``), so the tail past ``N`` lies
    between ``e^{-2} psi'(N+1)`` and ``e^{-2} psi'(N+1) (1 + eps_{N+1})``.
    """
    def log_term(n):
        return ((n - 1) * math.log(n - 1) if n > 1 else 0.0) - (n + 1) * math.log(n + 1)

    head = math.fsum(math.exp(log_term(n)) for n in range(1, n_direct + 1))
    m = n_direct + 1
    eps_m = math.expm1(log_term(m) + 2.0 + 2.0 * math.log(m))
    base = math.exp(-2.0) * float(polygamma(1, m))
    tail = base * (1.0 + 0.5 * eps_m)
    return head + tail, base * 0.5 * abs(eps_m) + 1e-16 * head


def moment_closed(n: int) -> float:
    """``int_0^1 (w log w)^n dw = (-1)^n n! / (n+1)^{n+1}``."""
    return (-1) ** n * math.exp(math.lgamma(n + 1) - (n + 1) * math.log(n + 1))


def neg_log_lambert_f(x: float, tol: float = 1e-15) -> float:
    """``-log f(x)``, accurate as ``f(x) -> 0`` near ``x = 1``.

    Right of ``1/e`` the partner ``y = e^u`` solves ``u e^u = x log x`` with
    ``u <= -1``; bisecting in ``u`` keeps relative accuracy in ``y``.
    """
    if not 0.0 < x <= 1.0:
        raise DomainError(f"x={x} outside (0, 1]")
    if x == 1.0:
        return math.inf
    if x <= INV_E:
        return -log_g_lambert(x)
    t = x * math.log(x)
    lo = -1.0
    while lo * math.exp(lo) <= t:
        lo *= 2.0
    # u e^u decreases from 0 to -1/e on (-inf, -1]
    u = _bisect(lambda u: t - u * math.exp(u), lo, -1.0, tol)
    return -u


def involution_check_lambert(tol: float = 1e-9, points: int = 99) -> IdentityReport:
    grid = [k / (points + 1) for k in range(1, points + 1)]
    res = [(x, lambert_f(lambert_f(x)) - x) for x in grid]
    return IdentityReport.numeric("lambert_involution", res, tol)


def linear_regime_check(tol: float = 1e-10, points: int = 50) -> IdentityReport:
    grid = [INV_E + (1 - INV_E) * k / points for k in range(points + 1)]
    res = [(w, g_lambert(w, tol * 1e-3) - w) for w in grid]
    return IdentityReport.numeric("lambert_linear_regime", res, tol)


def identity_chain_check(tol: float = 1e-10, points: int = 50) -> IdentityReport:
    """``exp(log g) = g`` and agreement of the tree series with the W route."""
    grid = [k / points for k in range(1, points + 1)]
    res = []
    for w in grid:
        lg = log_g_lambert(w)
        res.append((("exp", w), math.exp(lg) - g_lambert(w, tol * 1e-3)))
        if abs(w - INV_E) >= NEAR_X0:
            s = log_g_lambert_series(w, tol * 1e-3)
            res.append((("series", w), s.value - lg))
    return IdentityReport.numeric("lambert_identity_chain", res, tol)


def moment_check(n_max: int = 8, tol: float = 1e-10) -> IdentityReport:
    """Quadrature of ``int_0^1 (w log w)^n dw`` against :func:`moment_closed`."""
    from .analysis import FunctionHandle, integrate

    res = []
    for n in range(1, n_max + 1):
        fh = FunctionHandle(lambda w, n=n: 0.0 if w == 0.0 else (w * math.log(w)) ** n)
        res.append((n, integrate(fh, 0.0, 1.0, tol / 10).value - moment_closed(n)))
    return IdentityReport.numeric("lambert_moments", res, tol)


@dataclass(frozen=True)
class LambertIntegrals:
    series_sum: float
    series_sum_bound: float
    int_g: float
    int_f: float
    int_neg_log_g: float
    int_neg_log_f: float
    reports: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_dict(self) -> dict:
        return {
            "series_sum": self.series_sum,
            "series_sum_bound": self.series_sum_bound,
            "quadrature": {
                "int_g": self.int_g,
                "int_f": self.int_f,
                "int_neg_log_g_over_w": self.int_neg_log_g,
                "int_neg_log_f_over_x": self.int_neg_log_f,
            },
            "closed": {
                "int_g": 1.0 - self.series_sum,
                "int_f": 1.0 - 2.0 * self.series_sum,
                "int_neg_log_g_over_w": math.pi**2 / 6,
                "int_neg_log_f_over_x": math.pi**2 / 3,
            },
            "published_figures": dict(PUBLISHED_FIGURES),
            "reports": [r.to_dict() for r in self.reports],
        }


def lambert_integrals(tol: float = 1e-9) -> LambertIntegrals:
    """The four limit-case integrals, each by quadrature and by series or closed form.

    ``int g = 1 - S`` with ``S = sum (n-1)^{n-1}/(n+1)^{n+1}``; the transfer
    identity with ``h(x) = x`` then gives ``int f = 2 int g - 1 = 1 - 2S``.
    The logarithmic integrals are ``pi^2/6`` and ``pi^2/3``.
    """
    from .analysis import FunctionHandle, integrate

    if tol <= 0:
        raise ParameterError("tol must be > 0")
    inner = tol * 1e-3
    S, bound = lambert_series_sum()
    q = tol / 4
    ig = integrate(FunctionHandle(lambda w: g_lambert(w, inner), "g"), 0.0, 1.0, q, points=[INV_E]).value
    i_f = integrate(FunctionHandle(lambda x: lambert_f(x), "f"), 0.0, 1.0, q, points=[INV_E]).value
    ilg = integrate(
        FunctionHandle(lambda w: 0.0 if w == 0.0 else -log_g_lambert(w) / w, "-log g / w"),
        0.0, 1.0, q, points=[INV_E],
    ).value
    ilf = integrate(
        FunctionHandle(lambda x: 0.0 if x == 0.0 else neg_log_lambert_f(x) / x, "-log f / x"),
        0.0, 1.0, q, points=[INV_E],
    ).value
    z2 = math.pi**2 / 6
    notes = {"published_figures": dict(PUBLISHED_FIGURES), "series_sum": S, "series_sum_bound": bound}
    reports = (
        IdentityReport.numeric("lambert_int_g", [("quad-(1-S)", ig - (1.0 - S))], tol, notes=notes),
        IdentityReport.numeric(
            "lambert_int_f",
            [("quad-(2 int g-1)", i_f - (2.0 * ig - 1.0)), ("quad-(1-2S)", i_f - (1.0 - 2.0 * S))],
            tol,
        ),
        IdentityReport.numeric("lambert_int_neg_log_g", [("quad-zeta2", ilg - z2)], tol),
        IdentityReport.numeric(
            "lambert_int_neg_log_f",
            [("quad-2zeta2", ilf - 2 * z2), ("quad-2*int_neg_log_g", ilf - 2 * ilg)],
            tol,
        ),
    )
    return LambertIntegrals(S, bound, ig, i_f, ilg, ilf, reports)
