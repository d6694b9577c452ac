"""Multiplication semigroup ``(T(t)f)(z) = exp(tz) f(z)`` on ``L^2(S)``.

``S = {Re z < -(1 + |Im z|)**(-alpha)}``.  The generator is normal, so every
operator norm reduces to a one-dimensional extremum over the boundary
curve of ``S``; this module computes those extrema and uses them as an
exact oracle for the resolvent/decay equivalences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import kernels
from .omega import OmegaRegion, coarse_grid, contains, nearest_boundary

GOLDEN_TOL = 1e-12
GOLDEN_MAXITER = 300


class SpectrumError(ValueError):
    """Point lies in the closed spectral set."""


@dataclass(frozen=True)
class MultModel:
    alpha: float
    region: OmegaRegion = field(init=False)

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        object.__setattr__(self, "region", OmegaRegion(self.alpha, 1.0))


def resolvent_norm(m: MultModel, lam: complex) -> float:
    """``||R(lam, A)|| = 1 / dist(lam, S)``."""
    if not contains(m.region, lam):
        raise SpectrumError(f"{lam} lies in the closure of S")
    return 1.0 / nearest_boundary(m.region, lam)[0]


def orbit_sup(m: MultModel, t: float, power: float | None = None):
    """``sup_{zeta in S} exp(t Re zeta) / |zeta|**power`` and its maximiser height.

    The sup sits on the boundary curve; ``power`` defaults to ``alpha``
    (the ``||T(t)(-A)^{-alpha}||`` case).  Principal branch throughout:
    ``Re(-zeta) > 0`` on the closure of S.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    a = m.alpha
    p = a if power is None else float(power)
    y_max = 10.0 * (1.0 + t) ** (1.0 / a) * max(1.0, (a / p) ** (1.0 / a))
    y = coarse_grid(y_max)
    u = (1.0 + y) ** (-a)
    logv = -t * u - 0.5 * p * np.log(u * u + y * y)
    n = y.size
    is_max = np.ones(n, dtype=bool)
    is_max[1:] &= logv[1:] >= logv[:-1]
    is_max[:-1] &= logv[:-1] >= logv[1:]
    cand = np.flatnonzero(is_max)
    cand = cand[np.argsort(-logv[cand], kind="stable")][:3]
    best = int(np.argmax(logv))
    best_y, best_v = float(y[best]), float(logv[best])
    for i in cand:
        lo, hi = y[max(i - 1, 0)], y[min(i + 1, n - 1)]
        yr, vr = kernels.golden_orbit(t, a, p, lo, hi, GOLDEN_TOL, GOLDEN_MAXITER)
        if vr > best_v:
            best_y, best_v = yr, vr
    return math.exp(best_v), best_y


def orbit_norm(m: MultModel, t: float) -> float:
    """``||T(t)(-A)^{-alpha}||``."""
    return orbit_sup(m, t)[0]


def orbit_inv_norm(m: MultModel, t: float) -> float:
    """``||T(t)A^{-1}||``."""
    return orbit_sup(m, t, power=1.0)[0]


@dataclass
class EquivalenceReport:
    alpha: float
    curves: dict[str, list[tuple[float, float, float, float]]]
    tail_stats: dict[str, dict[str, float] | None]

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "curves": {k: [list(r) for r in v] for k, v in self.curves.items()},
            "tail_stats": self.tail_stats,
        }


def _tail(rows):
    if len(rows) < 2:
        return None
    ratios = [r[3] for r in rows[len(rows) // 2:] if math.isfinite(r[3])]
    if not ratios:
        return None
    return {"sup": max(ratios), "inf": min(ratios)}


def semigroup_equivalence_report(m: MultModel, t_grid, s_grid) -> EquivalenceReport:
    """Paired curves for conditions (i), (ii) and (iv) of the equivalence.

    Rows are ``(x, value, reference, value/reference)``.
    """
    t_grid = [float(t) for t in t_grid]
    s_grid = [float(s) for s in s_grid]
    for name, g in (("t_grid", t_grid), ("s_grid", s_grid)):
        if not g:
            raise ValueError(f"{name} is empty")
        if any(b <= a for a, b in zip(g, g[1:])):
            raise ValueError(f"{name} must be increasing")
    a = m.alpha
    res = []
    for s in s_grid:
        v = resolvent_norm(m, 1j * s)
        ref = (1.0 + abs(s)) ** a
        res.append((s, v, ref, v / ref))
    frac, inv = [], []
    for t in t_grid:
        v = orbit_norm(m, t)
        ref = 1.0 / t if t > 0 else math.inf
        frac.append((t, v, ref, v / ref if t > 0 else math.nan))
        v = orbit_inv_norm(m, t)
        ref = t ** (-1.0 / a) if t > 0 else math.inf
        inv.append((t, v, ref, v / ref if t > 0 else math.nan))
    curves = {"resolvent": res, "orbit_frac_power": frac, "orbit_inverse": inv}
    return EquivalenceReport(a, curves, {k: _tail(v) for k, v in curves.items()})


def _check_diag(eigs, x, xi):
    eigs = np.asarray(eigs, dtype=complex)
    x = np.asarray(x, dtype=complex)
    if eigs.shape != x.shape:
        raise ValueError("eigs and x must have the same length")
    if np.any(eigs.real >= 0):
        raise ValueError("all eigenvalues need negative real part")
    if not xi > 0:
        raise ValueError("xi must be positive")
    return eigs, x


def plancherel_criterion_value(eigs, x, xi: float) -> float:
    """``xi * int ||R(xi + i eta, A) x||^2 d eta`` for ``A = diag(eigs)``."""
    eigs, x = _check_diag(eigs, x, xi)
    return float(xi * np.sum(np.abs(x) ** 2 * math.pi / (xi - eigs.real)))


def plancherel_quadrature(eigs, x, xi: float) -> float:
    """Adaptive-quadrature evaluation of the same integral over the real line."""
    eigs, x = _check_diag(eigs, x, xi)
    w = np.abs(x) ** 2
    a = xi - eigs.real
    b = eigs.imag

    def f(eta):
        return float(np.sum(w / (a * a + (eta - b) ** 2)))

    lo, hi = float(b.min()) - 1.0, float(b.max()) + 1.0
    pts = sorted(set(float(v) for v in b))
    mid, _ = integrate.quad(f, lo, hi, points=pts or None, limit=500,
                            epsabs=0.0, epsrel=1e-10)
    left, _ = integrate.quad(f, -np.inf, lo, epsabs=0.0, epsrel=1e-10, limit=200)
    right, _ = integrate.quad(f, hi, np.inf, epsabs=0.0, epsrel=1e-10, limit=200)
    return xi * (left + mid + right)
