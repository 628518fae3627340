"""Exact checks of the coefficient families and combinatorial identities.

No floating point is used in this module.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractViolation, DomainError, ParameterError, PoleError
from .exact_series import (
    PowerSeries,
    as_rational,
    binomial,
    exp_series,
    expand_phi_at_one,
    pochhammer,
    series_log,
    series_mul,
    series_power,
    series_reciprocal,
    series_reversion,
)
from .report import IdentityReport


class Family(enum.Enum):
    G_COEFF = "G_COEFF"
    LOGG_COEFF = "LOGG_COEFF"
    LAMBERT_G = "LAMBERT_G"
    LAMBERT_LOGG = "LAMBERT_LOGG"


@dataclass(frozen=True)
class CoefficientFamily:
    """A coefficient family; ``parameter`` is ``a' = a/(b-a)`` when used."""

    kind: Family
    parameter: Fraction | None = None

    def __post_init__(self):
        if self.kind in (Family.G_COEFF, Family.LOGG_COEFF):
            if self.parameter is None:
                raise ParameterError(f"{self.kind.value} needs a parameter")
            p = as_rational(self.parameter)
            if p <= 0:
                raise ParameterError("family parameter must be > 0")
            object.__setattr__(self, "parameter", p)

    def __call__(self, n: int) -> Fraction:
        return coeff(self, n)


def coeff(family: CoefficientFamily, n: int) -> Fraction:
    """Exact coefficient of ``w^n`` in the family's series."""
    if n < 1:
        raise DomainError("coefficient index must be >= 1")
    fact = math.factorial(n)
    kind = family.kind
    if kind is Family.G_COEFF:
        return pochhammer(family.parameter * n, n - 1) / fact
    if kind is Family.LOGG_COEFF:
        return pochhammer(family.parameter * n + 1, n - 1) / fact
    if kind is Family.LAMBERT_G:
        # 0**0 == 1 in Python, matching the convention used here
        return Fraction((n - 1) ** (n - 1), fact)
    return Fraction(n ** (n - 1), fact)


def aprime_of(a, b) -> Fraction:
    """The reduced parameter ``a/(b-a)`` of the general case."""
    a, b = as_rational(a), as_rational(b)
    if not 0 < a < b:
        raise ParameterError(f"need 0 < a < b, got a={a}, b={b}")
    return a / (b - a)


def g_series(aprime, order: int) -> PowerSeries:
    """``1 - sum_n G_COEFF(a', n) w^n`` as an exact series in ``w``."""
    fam = CoefficientFamily(Family.G_COEFF, aprime)
    return PowerSeries.from_coefficients([1] + [-fam(n) for n in range(1, order + 1)], order)


def logg_series(aprime, order: int) -> PowerSeries:
    fam = CoefficientFamily(Family.LOGG_COEFF, aprime)
    return PowerSeries.from_coefficients([0] + [fam(n) for n in range(1, order + 1)], order)


def verify_log_identity_formal(aprime, N: int) -> IdentityReport:
    """Compare ``-log(1 - sum G w^n)`` with ``sum LOGG w^n`` through order N."""
    aprime = as_rational(aprime)
    if aprime <= 0:
        raise ParameterError("a' must be > 0")
    if N < 2:
        raise ContractViolation("N must be >= 2")
    lhs = -series_log(g_series(aprime, N))
    rhs = logg_series(aprime, N)
    residuals = [(k, lhs[k] - rhs[k]) for k in range(N + 1)]
    return IdentityReport.exact(
        "log_identity_formal", residuals, orders=(0, N), notes={"aprime": aprime}
    )


def verify_lagrange_oracle(a, N: int) -> IdentityReport:
    """Reversion of ``w^a (1-w)`` about ``w = 1`` against ``c_n = -(an)_{n-1}``."""
    a = as_rational(a)
    inverse = series_reversion(expand_phi_at_one(a, a + 1, N))
    residuals = [(0, inverse[0])]
    for n in range(1, N + 1):
        c_n = inverse[n] * math.factorial(n)
        residuals.append((n, c_n + pochhammer(a * n, n - 1)))
    return IdentityReport.exact("lagrange_oracle", residuals, orders=(1, N), notes={"a": a})


def rothe_hagen_sides(x, y, z, p, q, n: int) -> tuple[Fraction, Fraction]:
    """Both sides of the Rothe-Hagen identity.

    LHS = sum_k C(x+kz, k) C(y-kz, n-k) (p+kq) / ((x+kz)(y-kz))
    RHS = (p (x+y-nz) + n x q) / (x (x+y) (y-nz)) * C(x+y, n)
    """
    x, y, z, p, q = (as_rational(v) for v in (x, y, z, p, q))
    if n < 0:
        raise DomainError("n must be >= 0")
    lhs = Fraction(0)
    for k in range(n + 1):
        d1, d2 = x + k * z, y - k * z
        if d1 == 0 or d2 == 0:
            raise PoleError(f"Rothe-Hagen term k={k} has a vanishing denominator", term=k)
        lhs += binomial(d1, k) * binomial(d2, n - k) * (p + k * q) / (d1 * d2)
    den = x * (x + y) * (y - n * z)
    if den == 0:
        raise PoleError("Rothe-Hagen right-hand side has a vanishing denominator", term="rhs")
    rhs = (p * (x + y - n * z) + n * x * q) / den * binomial(x + y, n)
    return lhs, rhs


def rothe_hagen_specialization(a, n: int):
    """Parameters ``(x, y, z, p, q)`` that reduce Rothe-Hagen to the log identity."""
    a = as_rational(a)
    return a, (a + 1) * n - 1, a + 1, a, a + 1


def rothe_hagen_check(x, y, z, p, q, n: int) -> IdentityReport:
    lhs, rhs = rothe_hagen_sides(x, y, z, p, q, n)
    return IdentityReport.exact(
        "rothe_hagen",
        [(n, lhs - rhs)],
        orders=(n, n),
        notes={"lhs": lhs, "rhs": rhs},
    )


def convolution_sides(a, n: int) -> tuple[Fraction, Fraction]:
    """``sum_k (ak+a+1)_k/k! (an-ak)_{n-k-1}/(n-k)!`` and ``-(an+a)_n/n!``.

    The ``k = n`` term uses ``(0)_{-1} = -1``.
    """
    a = as_rational(a)
    if a <= 0:
        raise ParameterError("a must be > 0")
    if n < 1:
        raise DomainError("n must be >= 1")
    lhs = Fraction(0)
    for k in range(n + 1):
        left = pochhammer(a * k + a + 1, k) / math.factorial(k)
        right = pochhammer(a * n - a * k, n - k - 1) / math.factorial(n - k)
        lhs += left * right
    rhs = -pochhammer(a * n + a, n) / math.factorial(n)
    return lhs, rhs


def convolution_check(a, n: int) -> IdentityReport:
    lhs, rhs = convolution_sides(a, n)
    return IdentityReport.exact(
        "convolution", [(n, lhs - rhs)], orders=(n, n), notes={"a": as_rational(a), "lhs": lhs}
    )


def bernoulli_higher(n: int, k: int, z) -> Fraction:
    """Higher-order Bernoulli polynomial ``B_k^{(n)}(z)``.

    Read off the generating function ``(w/(e^w - 1))^n e^{zw}``.
    """
    if n < 1 or k < 0:
        raise DomainError("need n >= 1 and k >= 0")
    z = as_rational(z)
    order = max(k, 1)
    # (e^w - 1)/w = sum_j w^j/(j+1)!
    ratio = PowerSeries.from_coefficients(
        (Fraction(1, math.factorial(j + 1)) for j in range(order + 1)), order
    )
    gen = series_mul(series_power(series_reciprocal(ratio), n), exp_series(order, z))
    return gen[k] * math.factorial(k)


def norlund_product(n: int, x) -> Fraction:
    """``(x-1)(x-2)...(x-n+1)``."""
    x = as_rational(x)
    out = Fraction(1)
    for j in range(1, n):
        out *= x - j
    return out


def verify_norlund(n: int, x) -> IdentityReport:
    r = bernoulli_higher(n, n - 1, x) - norlund_product(n, x)
    return IdentityReport.exact("norlund_closed_form", [(n, r)], orders=(n, n), notes={"x": as_rational(x)})


def verify_logg_coeff_via_bernoulli(aprime, n: int) -> IdentityReport:
    """Check ``-(a'n+1)_{n-1} = (-1)^n B_{n-1}^{(n)}(-n a')``.

    The sign ``(-1)^n`` comes from ``w^n/(1-e^w)^n = (-1)^n (w/(e^w-1))^n``.
    """
    aprime = as_rational(aprime)
    if aprime <= 0:
        raise ParameterError("a' must be > 0")
    lhs = -pochhammer(aprime * n + 1, n - 1)
    rhs = (-1) ** n * bernoulli_higher(n, n - 1, -n * aprime)
    return IdentityReport.exact(
        "logg_coeff_via_bernoulli", [(n, lhs - rhs)], orders=(n, n), notes={"aprime": aprime, "value": lhs}
    )


def verify_lambert_log_identity_formal(N: int) -> IdentityReport:
    """``-log(1 - sum (n-1)^{n-1} z^n/n!) = sum n^{n-1} z^n/n!`` through order N."""
    if N < 2:
        raise ContractViolation("N must be >= 2")
    g = CoefficientFamily(Family.LAMBERT_G)
    lg = CoefficientFamily(Family.LAMBERT_LOGG)
    lhs = -series_log(PowerSeries.from_coefficients([1] + [-g(n) for n in range(1, N + 1)], N))
    residuals = [(0, lhs[0])] + [(n, lhs[n] - lg(n)) for n in range(1, N + 1)]
    return IdentityReport.exact("lambert_log_identity_formal", residuals, orders=(0, N))
