"""The regions ``Omega = {Re z > -c (1 + |Im z|)**(-alpha)}``.

The complement side ``S`` is bounded by the curve
``zeta(y) = -c (1 + |y|)**(-alpha) + i y``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

COARSE_POINTS = 512
GOLDEN_TOL = 1e-12
GOLDEN_MAXITER = 300


class OutsideRegionError(ValueError):
    """Point does not lie in the open region Omega."""


@dataclass(frozen=True)
class OmegaRegion:
    alpha: float
    c: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.c > 0):
            raise ValueError("OmegaRegion needs alpha > 0 and c > 0")

    def edge(self, y):
        """Real part of the boundary curve at height ``y`` (vectorised)."""
        return -self.c * (1.0 + np.abs(y)) ** (-self.alpha)


def contains(region: OmegaRegion, z: complex) -> bool:
    z = complex(z)
    return z.real > -region.c * (1.0 + abs(z.imag)) ** (-region.alpha)


def contains_many(region: OmegaRegion, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return z.real > region.edge(z.imag)


def boundary_point(region: OmegaRegion, y: float) -> complex:
    return complex(-region.c * (1.0 + abs(y)) ** (-region.alpha), y)


def coarse_grid(y_max: float, n: int = COARSE_POINTS) -> np.ndarray:
    """``n`` heights in [0, y_max], geometrically spaced in ``1 + y``."""
    return np.expm1(np.linspace(0.0, math.log1p(y_max), n))


def nearest_boundary(region: OmegaRegion, z: complex, n_coarse: int = COARSE_POINTS):
    """Return ``(dist, y)`` for the closest boundary point to ``z``.

    Coarse scan, then golden-section refinement of the three best local
    minima; near the origin the distance has two basins and the scan
    keeps the refinement out of the wrong one.
    """
    z = complex(z)
    b = abs(z.imag)
    x = z.real
    alpha, c = region.alpha, region.c
    y_max = max(10.0, 10.0 * b)
    y = np.union1d(coarse_grid(y_max, n_coarse), [b])
    d2 = (x + c * (1.0 + y) ** (-alpha)) ** 2 + (y - b) ** 2
    n = y.size
    is_min = np.ones(n, dtype=bool)
    is_min[1:] &= d2[1:] <= d2[:-1]
    is_min[:-1] &= d2[:-1] <= d2[1:]
    cand = np.flatnonzero(is_min)
    cand = cand[np.argsort(d2[cand], kind="stable")][:3]
    best_d, best_y = math.sqrt(d2.min()), float(y[np.argmin(d2)])
    for i in cand:
        lo = y[max(i - 1, 0)]
        hi = y[min(i + 1, n - 1)]
        yr, dr = kernels.golden_curve_dist(b, x, alpha, c, lo, hi, GOLDEN_TOL, GOLDEN_MAXITER)
        if dr < best_d:
            best_d, best_y = dr, yr
    sign = -1.0 if z.imag < 0 else 1.0
    return best_d, sign * best_y


def dist_to_S(region: OmegaRegion, z: complex, n_coarse: int = COARSE_POINTS) -> float:
    if not contains(region, z):
        raise OutsideRegionError(f"{z} is not in the open region {region}")
    return nearest_boundary(region, z, n_coarse)[0]
