"""Resolvent-growth rate functions and the decay envelopes they induce.

A rate ``M`` bounds ``max_{|s|<=eta} ||R(is, A)||``.  From it we form
``M_log(eta) = M(eta) * (log(1 + M(eta)) + log(1 + eta))`` and the decay
envelope ``C / M_log^{-1}(t / C)``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAX_BISECT = 120


class RateDomainError(ValueError):
    """Argument outside the domain of a rate-function operation."""


class BelowRangeError(RateDomainError):
    """Target value lies below M_log(0), where the inverse is undefined."""


@dataclass(frozen=True)
class PolynomialRate:
    """``M(eta) = C * (1 + eta)**alpha``."""

    C: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        if not (self.C > 0 and self.alpha > 0):
            raise RateDomainError("PolynomialRate needs C > 0 and alpha > 0")

    def __call__(self, eta: float) -> float:
        return self.C * (1.0 + eta) ** self.alpha

    def extrapolated(self, eta: float) -> bool:
        return False


@dataclass(frozen=True)
class TabulatedRate:
    """Monotone piecewise-linear rate through ``(eta_i, M_i)`` samples.

    Past the last sample the final secant slope is continued and the
    evaluation is flagged through :meth:`extrapolated`.
    """

    eta: tuple[float, ...]
    values: tuple[float, ...]
    _eta: np.ndarray = field(init=False, repr=False, compare=False)
    _val: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        eta = np.asarray(self.eta, dtype=float)
        val = np.asarray(self.values, dtype=float)
        if eta.ndim != 1 or eta.shape != val.shape or eta.size < 2:
            raise RateDomainError("tabulated rate needs two equal-length columns, >= 2 rows")
        if eta[0] != 0.0:
            raise RateDomainError("tabulated rate must start at eta = 0")
        if np.any(np.diff(eta) <= 0):
            raise RateDomainError("eta column must be strictly increasing")
        if np.any(np.diff(val) < 0):
            raise RateDomainError("M must be non-decreasing")
        if np.any(val <= 0):
            raise RateDomainError("M must be positive")
        object.__setattr__(self, "_eta", eta)
        object.__setattr__(self, "_val", val)

    @classmethod
    def from_function(cls, fn, eta) -> TabulatedRate:
        eta = [float(e) for e in eta]
        return cls(tuple(eta), tuple(float(fn(e)) for e in eta))

    @classmethod
    def from_csv(cls, path) -> TabulatedRate:
        """Read a two-column ``eta, M`` CSV; a non-numeric header row is skipped."""
        rows = []
        with Path(path).open(newline="") as fh:
            for i, row in enumerate(csv.reader(fh)):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except (ValueError, IndexError):
                    if i == 0:
                        continue
                    raise RateDomainError(f"{path}: bad row {i + 1}: {row!r}") from None
        if not rows:
            raise RateDomainError(f"{path}: no data rows")
        eta, val = zip(*rows)
        return cls(tuple(eta), tuple(val))

    def __call__(self, eta: float) -> float:
        e, v = self._eta, self._val
        if eta <= e[-1]:
            return float(np.interp(eta, e, v))
        slope = (v[-1] - v[-2]) / (e[-1] - e[-2])
        return float(v[-1] + slope * (eta - e[-1]))

    def extrapolated(self, eta: float) -> bool:
        return eta > self._eta[-1]


RateFunction = PolynomialRate | TabulatedRate


def m_log(M: RateFunction, eta: float) -> float:
    if eta < 0 or math.isnan(eta):
        raise RateDomainError(f"m_log needs eta >= 0, got {eta}")
    m = M(eta)
    return m * (math.log1p(m) + math.log1p(eta))


def invert_m_log(M: RateFunction, y: float) -> float:
    """Solve ``m_log(M, eta) = y`` by geometric bracketing and bisection."""
    y0 = m_log(M, 0.0)
    if not y >= y0:
        raise BelowRangeError(f"y = {y} lies below M_log(0) = {y0}")
    if y == y0:
        return 0.0
    tol = 1e-9 * max(1.0, y)
    lo, hi = 0.0, 1.0
    while m_log(M, hi) < y:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise RateDomainError(f"cannot bracket M_log^-1({y})")
    for _ in range(MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if m_log(M, mid) < y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi and abs(m_log(M, hi) - y) <= tol:
            break
    # both ends bracket y; pick the closer value
    return lo if abs(m_log(M, lo) - y) < abs(m_log(M, hi) - y) else hi


def bd_bound(M: RateFunction, C: float, t: float) -> float:
    """Decay envelope ``C / M_log^{-1}(t / C)``."""
    if C <= 0:
        raise RateDomainError("C must be positive")
    y = t / C
    if y < m_log(M, 0.0):
        raise BelowRangeError(f"t/C = {y} lies below M_log(0)")
    eta = invert_m_log(M, y)
    if eta == 0.0:
        return math.inf
    return C / eta


def poly_decay_bound(alpha: float, t: float) -> float:
    """``(log t / t)**(1/alpha)``, the envelope for ``M(eta) ~ eta**alpha``."""
    if alpha <= 0:
        raise RateDomainError("alpha must be positive")
    if t < 2:
        raise RateDomainError(f"poly_decay_bound needs t >= 2, got {t}")
    return (math.log(t) / t) ** (1.0 / alpha)
