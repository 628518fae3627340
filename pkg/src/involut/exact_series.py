"""Exact rational arithmetic and truncated formal power series.

Everything here works on :class:`fractions.Fraction`, so results are exact
through the truncation order.  This module is the oracle that the closed-form
coefficient families elsewhere in the package are checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import ContractViolation, NonInvertibleError, ParameterError, PoleError, UnsupportedOrderError

__all__ = [
    "PowerSeries",
    "as_rational",
    "pochhammer",
    "binomial",
    "series_mul",
    "series_reciprocal",
    "series_exp",
    "series_log",
    "series_compose",
    "series_reversion",
    "series_power",
    "expand_phi_at_one",
]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and decimal strings to ``Fraction``.

    Floats are rejected: silently turning 0.1 into its binary expansion
    would defeat the purpose of exact checks.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def pochhammer(z, n: int) -> Fraction:
    """Rising factorial ``(z)_n = z (z+1) ... (z+n-1)``.

    Extended to ``n = -1`` by ``(z)_{-1} = 1/(z-1)``, which gives the
    convention ``(0)_{-1} = -1``.
    """
    z = as_rational(z)
    if n < -1:
        raise UnsupportedOrderError(f"Pochhammer order {n} < -1 is not supported")
    if n == -1:
        if z == 1:
            raise PoleError("(1)_{-1} has a pole", term=z)
        return 1 / (z - 1)
    out = Fraction(1)
    for j in range(n):
        out *= z + j
    return out


def binomial(r, k: int) -> Fraction:
    """Generalized binomial ``r (r-1) ... (r-k+1) / k!`` for rational ``r``."""
    if k < 0:
        raise UnsupportedOrderError("binomial lower index must be >= 0")
    r = as_rational(r)
    out = Fraction(1)
    for j in range(k):
        out *= r - j
    return out / math.factorial(k)


@dataclass(frozen=True)
class PowerSeries:
    """A power series truncated at order ``N`` with exact coefficients.

    ``coefficients[k]`` multiplies ``(x - expansion_point)**k``.  The
    expansion point is metadata: arithmetic only checks that operands agree
    on it.
    """

    coefficients: tuple[Fraction, ...]
    expansion_point: Fraction = Fraction(0)

    def __post_init__(self):
        coeffs = tuple(as_rational(c) for c in self.coefficients)
        if len(coeffs) < 2:
            raise ContractViolation("truncation order must be >= 1")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "expansion_point", as_rational(self.expansion_point))

    @classmethod
    def from_coefficients(cls, coeffs: Iterable, order: int, point=0) -> "PowerSeries":
        """Pad or cut ``coeffs`` to exactly ``order + 1`` entries."""
        coeffs = [as_rational(c) for c in coeffs][: order + 1]
        coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        return cls(tuple(coeffs), as_rational(point))

    @classmethod
    def constant(cls, value, order: int, point=0) -> "PowerSeries":
        return cls.from_coefficients([value], order, point)

    @classmethod
    def variable(cls, order: int, point=0) -> "PowerSeries":
        return cls.from_coefficients([0, 1], order, point)

    @property
    def truncation_order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def _check_compatible(self, other: "PowerSeries"):
        if self.truncation_order != other.truncation_order:
            raise ContractViolation(
                f"truncation orders differ: {self.truncation_order} vs {other.truncation_order}"
            )
        if self.expansion_point != other.expansion_point:
            raise ContractViolation("expansion points differ")

    def _new(self, coeffs) -> "PowerSeries":
        return PowerSeries(tuple(coeffs), self.expansion_point)

    def __add__(self, other):
        if isinstance(other, PowerSeries):
            self._check_compatible(other)
            return self._new(a + b for a, b in zip(self, other))
        c = list(self.coefficients)
        c[0] += as_rational(other)
        return self._new(c)

    __radd__ = __add__

    def __neg__(self):
        return self._new(-c for c in self)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return series_mul(self, other)
        other = as_rational(other)
        return self._new(c * other for c in self)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return series_mul(self, series_reciprocal(other))
        return self * (1 / as_rational(other))

    def derivative(self) -> "PowerSeries":
        """Termwise derivative; the top coefficient becomes 0."""
        c = [k * self[k] for k in range(1, len(self))] + [Fraction(0)]
        return self._new(c)

    def integral(self) -> "PowerSeries":
        """Antiderivative with zero constant term, truncated at order N."""
        c = [Fraction(0)] + [self[k] / (k + 1) for k in range(len(self) - 1)]
        return self._new(c)

    def __repr__(self):
        terms = ", ".join(str(c) for c in self.coefficients)
        return f"PowerSeries([{terms}], point={self.expansion_point})"


def series_mul(s: PowerSeries, t: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at the common order."""
    s._check_compatible(t)
    n = s.truncation_order
    sc, tc = s.coefficients, t.coefficients
    # skip zero coefficients: most series built here are sparse at the bottom
    nz = [(i, c) for i, c in enumerate(sc) if c]
    out = [Fraction(0)] * (n + 1)
    for i, a in nz:
        for j in range(n + 1 - i):
            b = tc[j]
            if b:
                out[i + j] += a * b
    return s._new(out)


def series_reciprocal(s: PowerSeries) -> PowerSeries:
    """Multiplicative inverse ``t`` with ``s * t = 1 + O(x^{N+1})``."""
    c0 = s[0]
    if c0 == 0:
        raise NonInvertibleError("series with zero constant term has no reciprocal")
    n = s.truncation_order
    inv0 = 1 / c0
    t = [inv0] + [Fraction(0)] * n
    for k in range(1, n + 1):
        acc = sum((s[j] * t[k - j] for j in range(1, k + 1) if s[j]), Fraction(0))
        t[k] = -acc * inv0
    return s._new(t)


def series_power(s: PowerSeries, m: int) -> PowerSeries:
    """Non-negative integer power by repeated squaring."""
    if m < 0:
        return series_power(series_reciprocal(s), -m)
    result = PowerSeries.constant(1, s.truncation_order, s.expansion_point)
    base = s
    while m:
        if m & 1:
            result = series_mul(result, base)
        m >>= 1
        if m:
            base = series_mul(base, base)
    return result


def series_exp(s: PowerSeries) -> PowerSeries:
    """Formal exponential; requires ``s(0) = 0``.

    Uses ``e' = s' e``, i.e. ``e_k = (1/k) sum_j j s_j e_{k-j}``.
    """
    if s[0] != 0:
        raise ContractViolation("series_exp requires a zero constant term")
    n = s.truncation_order
    e = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        e[k] = sum((j * s[j] * e[k - j] for j in range(1, k + 1) if s[j]), Fraction(0)) / k
    return s._new(e)


def series_log(s: PowerSeries) -> PowerSeries:
    """Formal logarithm; requires ``s(0) = 1``."""
    if s[0] != 1:
        raise ContractViolation("series_log requires constant term 1")
    n = s.truncation_order
    # l' = s'/s, solved coefficientwise: k l_k = k s_k - sum_{j<k} j l_j s_{k-j}
    lg = [Fraction(0)] * (n + 1)
    for k in range(1, n + 1):
        acc = k * s[k] - sum((j * lg[j] * s[k - j] for j in range(1, k) if lg[j]), Fraction(0))
        lg[k] = acc / k
    return s._new(lg)


def series_compose(outer: PowerSeries, inner: PowerSeries) -> PowerSeries:
    """``outer(inner(x))`` through order N; ``inner(0)`` must vanish."""
    if inner[0] != 0:
        raise ContractViolation("inner series must have zero constant term")
    if outer.truncation_order != inner.truncation_order:
        raise ContractViolation("truncation orders differ")
    n = inner.truncation_order
    # Horner from the top coefficient down
    acc = PowerSeries.constant(outer[n], n, inner.expansion_point)
    for k in range(n - 1, -1, -1):
        acc = series_mul(acc, inner) + outer[k]
    return acc


def series_reversion(s: PowerSeries) -> PowerSeries:
    """Compositional inverse of ``s`` with ``s(0) = 0`` and ``s'(0) != 0``.

    Coefficients come from the Lagrange-Buermann formula
    ``[z^n] t = (1/n) [u^{n-1}] (u / s(u))^n``, evaluated exactly.
    The inverse is expanded about 0, the image of the expansion point.
    """
    if s[0] != 0:
        raise ContractViolation("series_reversion requires s(0) = 0")
    if s[1] == 0:
        raise NonInvertibleError("series_reversion requires a nonzero linear coefficient")
    n = s.truncation_order
    t = [Fraction(0)] * (n + 1)
    t[1] = 1 / s[1]
    if n == 1:
        return PowerSeries(tuple(t), Fraction(0))
    # s(u)/u truncated at order n-1, then its reciprocal u/s(u)
    quotient = PowerSeries(tuple(s.coefficients[1:]), Fraction(0))
    h = series_reciprocal(quotient)
    hp = h
    for k in range(2, n + 1):
        hp = series_mul(hp, h)
        t[k] = hp[k - 1] / k
    return PowerSeries(tuple(t), Fraction(0))


def expand_phi_at_one(a, b, order: int) -> PowerSeries:
    """Expansion of ``w^a - w^b`` in powers of ``u = w - 1``.

    ``(1+u)^a`` is expanded by the binomial series, so rational exponents
    are handled exactly.
    """
    a, b = as_rational(a), as_rational(b)
    if not 0 < a < b:
        raise ParameterError(f"need 0 < a < b, got a={a}, b={b}")
    if order < 1:
        raise ContractViolation("order must be >= 1")
    coeffs = [binomial(a, k) - binomial(b, k) for k in range(order + 1)]
    return PowerSeries(tuple(coeffs), Fraction(1))


def exp_series(order: int, scale=1) -> PowerSeries:
    """``exp(scale * x)`` about 0."""
    scale = as_rational(scale)
    return PowerSeries.from_coefficients(
        (scale**k / math.factorial(k) for k in range(order + 1)), order
    )


def coefficients_equal(s: PowerSeries, t: Sequence) -> bool:
    return all(a == as_rational(b) for a, b in zip(s.coefficients, t))
