"""Structured outcome of a single identity check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


@dataclass(frozen=True)
class IdentityReport:
    """Result of verifying one identity.

    In exact mode (``tolerance is None``) residuals are ``Fraction`` values
    and the check passes only if every one of them is zero.  In float mode
    the check passes if every residual is at most ``tolerance`` in absolute
    value.
    """

    identity_name: str
    orders_checked: tuple[int, int] | None
    max_residual: Fraction | float
    passed: bool
    details: list[tuple[Any, Fraction | float]] = field(default_factory=list)
    tolerance: float | None = None
    notes: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def exact(cls, name, residuals, orders=None, notes=None):
        """Build an exact-mode report from ``(label, Fraction)`` pairs."""
        residuals = [(k, Fraction(r)) for k, r in residuals]
        worst = max((abs(r) for _, r in residuals), default=Fraction(0))
        return cls(
            identity_name=name,
            orders_checked=orders,
            max_residual=worst,
            passed=all(r == 0 for _, r in residuals),
            details=residuals,
            tolerance=None,
            notes=dict(notes or {}),
        )

    @classmethod
    def numeric(cls, name, residuals, tol, orders=None, notes=None):
        """Build a float-mode report; residuals are compared with ``tol``."""
        residuals = [(k, float(r)) for k, r in residuals]
        worst = max((abs(r) for _, r in residuals), default=0.0)
        ok = all(abs(r) <= tol for _, r in residuals)
        return cls(
            identity_name=name,
            orders_checked=orders,
            max_residual=worst,
            passed=ok,
            details=residuals,
            tolerance=float(tol),
            notes=dict(notes or {}),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "identity_name": self.identity_name,
            "orders_checked": list(self.orders_checked) if self.orders_checked else None,
            "mode": "exact" if self.tolerance is None else "float",
            "tolerance": self.tolerance,
            "max_residual": jsonable(self.max_residual),
            "passed": self.passed,
            "details": [[jsonable(k), jsonable(r)] for k, r in self.details],
            "notes": {k: jsonable(v) for k, v in sorted(self.notes.items())},
        }


def jsonable(value):
    """Map exact and numpy scalars to JSON-friendly values.

    Rationals become ``"p/q"`` strings so that they survive a round trip;
    non-finite floats become ``"inf"``, ``"-inf"`` or ``"nan"``.
    """
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        # JSON has no inf or nan literals
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "item"):
        return jsonable(value.item())
    return str(value)
