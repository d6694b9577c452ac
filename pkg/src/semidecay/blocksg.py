"""Upper-triangular block semigroup over a finite diagonal model.

For ``A = diag(lam_j)`` the block generator ``[[A, (-A)^{-alpha}], [0, A]]``
splits into 2x2 blocks ``exp(t lam_j) [[1, t (-lam_j)^{-alpha}], [0, 1]]``.
Boundedness of the block semigroup is the same statement as
``sup_t t ||T(t)(-A)^{-alpha}|| < inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels


def sigma_max_unipotent(b):
    """Largest singular value of ``[[1, b], [0, 1]]`` (depends on ``|b|`` only)."""
    b = np.abs(b)
    return 0.5 * (b + np.sqrt(b * b + 4.0))


@dataclass(frozen=True)
class DiagonalModel:
    alpha: float
    eigenvalues: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=complex).ravel()
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if lam.size == 0:
            raise ValueError("model needs at least one eigenvalue")
        if np.any(lam == 0):
            raise ValueError("eigenvalues must be non-zero")
        on_curve = -(1.0 + np.abs(lam.imag)) ** (-self.alpha)
        if np.max(np.abs(lam.real - on_curve)) > 1e-12:
            raise ValueError("eigenvalues must lie on the boundary curve of S")
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)

    @classmethod
    def on_curve(cls, alpha: float, heights) -> DiagonalModel:
        y = np.asarray(heights, dtype=float)
        return cls(alpha, -(1.0 + np.abs(y)) ** (-alpha) + 1j * y)

    @classmethod
    def log_spaced(cls, alpha: float, n: int, y_max: float = 1e6, extra=()) -> DiagonalModel:
        """``n`` heights geometrically spaced in ``1 + y`` over [0, y_max]."""
        y = np.expm1(np.linspace(0.0, math.log1p(y_max), n))
        if len(extra):
            y = np.union1d(y, np.asarray(extra, dtype=float))
        return cls.on_curve(alpha, y)

    @property
    def inv_pow(self) -> np.ndarray:
        return np.abs(self.eigenvalues) ** (-self.alpha)


def block_sweep(m: DiagonalModel, t):
    """``(block_exp_norm(t), corner_decay(t))`` evaluated on an array of times."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    return kernels.block_sweep(m.eigenvalues.real, m.inv_pow, t)


def block_exp_norm(m: DiagonalModel, t: float) -> float:
    return float(block_sweep(m, np.array([t]))[0][0])


def corner_decay(m: DiagonalModel, t: float) -> float:
    """``max_j exp(t Re lam_j) |lam_j|**(-alpha)``."""
    return float(block_sweep(m, np.array([t]))[1][0])


def block_resolvent_norm(m: DiagonalModel, lam: complex):
    """Return ``(||R(lam, block)||, max_j |r_j| |lam_j|**(-alpha))``."""
    lam = complex(lam)
    diff = lam - m.eigenvalues
    if np.any(diff == 0):
        raise ValueError(f"{lam} is an eigenvalue of the model")
    r = 1.0 / np.abs(diff)
    smooth = r * m.inv_pow
    norm = r * sigma_max_unipotent(smooth)
    return float(norm.max()), float(smooth.max())
