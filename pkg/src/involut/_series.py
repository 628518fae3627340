"""Floating-point summation of positive series with a certified tail bound."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import gammaln

CHUNK = 1024
DEFAULT_MAX_TERMS = 100_000

# Stirling correction coefficients B_{2k} / (2k (2k-1))
_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360, 1 / 156)


def max_terms_default() -> int:
    env = os.environ.get("INVOLUT_MAX_TERMS")
    if env:
        return max(1, int(env))
    return DEFAULT_MAX_TERMS


def _stirling_tail(x):
    inv = 1.0 / x
    inv2 = inv * inv
    acc = np.zeros_like(x)
    p = inv
    for c in _STIRLING:
        acc = acc + c * p
        p = p * inv2
    return acc


def log_poch(x, m):
    """``log((x)_m) = log Gamma(x+m) - log Gamma(x)`` for ``x > 0``, ``m >= 0``.

    For large ``x`` the plain difference of log-gammas cancels badly; there
    the Stirling expansion is differenced analytically instead.
    """
    x = np.asarray(x, dtype=float)
    m = np.asarray(m, dtype=float)
    x, m = np.broadcast_arrays(x, m)
    out = np.empty(x.shape)
    big = x >= 10.0
    small = ~big
    if np.any(small):
        out[small] = gammaln(x[small] + m[small]) - gammaln(x[small])
    if np.any(big):
        xb, mb = x[big], m[big]
        y = xb + mb
        out[big] = (
            (xb - 0.5) * np.log1p(mb / xb)
            + mb * np.log(y)
            - mb
            + _stirling_tail(y)
            - _stirling_tail(xb)
        )
    return out


def _log_g_coeff(aprime: float, n):
    # (a'n)_{n-1} / n!
    return log_poch(aprime * n, n - 1) - gammaln(n + 1)


def _log_logg_coeff(aprime: float, n):
    # (a'n+1)_{n-1} / n!
    return log_poch(aprime * n + 1, n - 1) - gammaln(n + 1)


def _log_lambert_g(_, n):
    # (n-1)^(n-1) / n!, with 0^0 = 1
    nm1 = n - 1
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(nm1 > 0, nm1 * np.log(np.where(nm1 > 0, nm1, 1)), 0.0)
    return t - gammaln(n + 1)


def _log_lambert_logg(_, n):
    return (n - 1) * np.log(n) - gammaln(n + 1)


_KINDS: dict[str, Callable] = {
    "g": _log_g_coeff,
    "logg": _log_logg_coeff,
    "lambert_g": _log_lambert_g,
    "lambert_logg": _log_lambert_logg,
}


@lru_cache(maxsize=2048)
def log_coeff_chunk(kind: str, param: float, index: int) -> np.ndarray:
    """Log-coefficients for ``n`` in ``[1 + index*CHUNK, (index+1)*CHUNK]``."""
    n = np.arange(1 + index * CHUNK, 1 + (index + 1) * CHUNK, dtype=float)
    arr = _KINDS[kind](param, n)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SeriesSum:
    value: float
    terms_used: int
    tail_bound: float
    converged: bool


def sum_series(log_coeffs: Callable[[int], np.ndarray], log_w: float, limit_ratio: float,
               tol: float, max_terms: int) -> SeriesSum:
    """Sum ``sum_{n>=1} exp(log_coeffs[n] + n log_w)`` until the tail is below ``tol``.

    ``log_coeffs(i)`` returns chunk ``i`` of log-coefficients.  After ``N``
    terms the remainder is bounded by ``t_N r / (1 - r)`` where ``r`` is the
    larger of the last observed term ratio and the limiting ratio; this is a
    valid bound once the ratio sequence is monotone and the terms decrease.
    """
    if log_w == -math.inf:
        return SeriesSum(0.0, 0, 0.0, True)
    total = 0.0
    prev_log = None
    index = 0
    used = 0
    bound = math.inf
    while used < max_terms:
        lc = log_coeffs(index)
        take = min(len(lc), max_terms - used)
        n = np.arange(used + 1, used + 1 + take, dtype=float)
        logt = lc[:take] + n * log_w
        terms = np.exp(logt)
        before = np.concatenate(([prev_log if prev_log is not None else np.nan], logt[:-1]))
        with np.errstate(over="ignore", invalid="ignore"):
            ratio = np.exp(logt - before)
        r = np.maximum(ratio, limit_ratio)
        decreasing = ratio < 1.0
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            bounds = np.where((r < 1.0) & decreasing, terms * r / (1.0 - r), np.inf)
        ok = np.nonzero(bounds <= tol)[0]
        if ok.size:
            k = int(ok[0])
            total += math.fsum(terms[: k + 1])
            return SeriesSum(total, used + k + 1, float(bounds[k]), True)
        total += math.fsum(terms)
        used += take
        prev_log = float(logt[-1])
        bound = float(bounds[-1])
        index += 1
    return SeriesSum(total, used, bound, False)


def coeff_sum(kind: str, param: float, w: float, limit_ratio: float, tol: float,
              max_terms: int | None = None) -> SeriesSum:
    """Sum one of the named coefficient families at ``w >= 0``."""
    if max_terms is None:
        max_terms = max_terms_default()
    if w <= 0.0:
        return SeriesSum(0.0, 0, 0.0, True)
    return sum_series(lambda i: log_coeff_chunk(kind, float(param), i), math.log(w),
                      limit_ratio, tol, max_terms)
