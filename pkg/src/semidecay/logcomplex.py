"""Complex numbers stored as (log-modulus, phase).

Quantities such as ``A**(k-1) / sqrt(k)`` or ``1/k!`` leave the float
range long before the products they appear in do, so every transform in
the package is evaluated in this representation and converted back only
at the end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels

PI = math.pi
TWO_PI = 2.0 * math.pi
NEG_INF = float("-inf")

# exp() overflows above this and underflows (to 0) below the second bound
_LOG_MAX = math.log(np.finfo(float).max)
_LOG_MIN = math.log(5e-324)


class RangeError(ArithmeticError):
    """Modulus not representable as a float."""


class LogOverflowError(RangeError, OverflowError):
    pass


class LogUnderflowError(RangeError):
    pass


def wrap(phase: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    r = math.remainder(phase, TWO_PI)
    if r <= -PI:
        r += TWO_PI
    return r


def wrap_array(phase):
    r = np.fmod(np.asarray(phase, dtype=float), TWO_PI)
    r = np.where(r > PI, r - TWO_PI, r)
    return np.where(r <= -PI, r + TWO_PI, r)


@dataclass(frozen=True)
class LogComplex:
    """``exp(log_mag) * exp(i*phase)``; zero is ``log_mag = -inf``."""

    log_mag: float
    phase: float = 0.0

    def __post_init__(self):
        lm = float(self.log_mag)
        if math.isnan(lm):
            raise ValueError("log_mag is NaN")
        if lm == NEG_INF:
            ph = 0.0
        elif lm == math.inf:
            raise LogOverflowError("infinite modulus")
        else:
            ph = wrap(float(self.phase))
        object.__setattr__(self, "log_mag", lm)
        object.__setattr__(self, "phase", ph)

    @property
    def is_zero(self) -> bool:
        return self.log_mag == NEG_INF

    def __mul__(self, other: LogComplex) -> LogComplex:
        return mul(self, other)

    def __truediv__(self, other: LogComplex) -> LogComplex:
        return div(self, other)

    def __neg__(self) -> LogComplex:
        return LogComplex(self.log_mag, self.phase + PI)

    def __abs__(self) -> float:
        return math.exp(self.log_mag) if self.log_mag < _LOG_MAX else math.inf

    def conjugate(self) -> LogComplex:
        return LogComplex(self.log_mag, -self.phase)

    def log10_abs(self) -> float:
        return self.log_mag / math.log(10.0)

    def __complex__(self) -> complex:
        return to_cartesian(self)


ZERO = LogComplex(NEG_INF, 0.0)
ONE = LogComplex(0.0, 0.0)


def from_cartesian(z: complex) -> LogComplex:
    z = complex(z)
    if z == 0:
        return ZERO
    return LogComplex(math.log(abs(z)), math.atan2(z.imag, z.real))


def to_cartesian(a: LogComplex) -> complex:
    if a.log_mag == NEG_INF:
        return 0j
    if a.log_mag > _LOG_MAX:
        raise LogOverflowError(f"modulus exp({a.log_mag:.6g}) overflows")
    if a.log_mag < _LOG_MIN:
        raise LogUnderflowError(f"modulus exp({a.log_mag:.6g}) underflows")
    r = math.exp(a.log_mag)
    return complex(r * math.cos(a.phase), r * math.sin(a.phase))


def exp_c(z: complex) -> LogComplex:
    z = complex(z)
    return LogComplex(z.real, z.imag)


def real(x: float) -> LogComplex:
    """Encode a real number (sign goes into the phase)."""
    if x == 0:
        return ZERO
    return LogComplex(math.log(abs(x)), 0.0 if x > 0 else PI)


def mul(a: LogComplex, b: LogComplex) -> LogComplex:
    if a.log_mag == NEG_INF or b.log_mag == NEG_INF:
        return ZERO
    return LogComplex(a.log_mag + b.log_mag, a.phase + b.phase)


def div(a: LogComplex, b: LogComplex) -> LogComplex:
    if b.log_mag == NEG_INF:
        raise ZeroDivisionError("division by log-domain zero")
    if a.log_mag == NEG_INF:
        return ZERO
    return LogComplex(a.log_mag - b.log_mag, a.phase - b.phase)


def pow_int(a: LogComplex, n: int) -> LogComplex:
    n = int(n)
    if a.log_mag == NEG_INF:
        if n < 0:
            raise ZeroDivisionError("negative power of zero")
        return ONE if n == 0 else ZERO
    # phase * n is reduced exactly by wrap(); no unwrapped accumulation needed
    return LogComplex(n * a.log_mag, math.remainder(n * a.phase, TWO_PI))


def lsum(terms: Iterable[LogComplex]) -> LogComplex:
    """Compensated sum of log-domain terms.

    The largest modulus is factored out, the rescaled Cartesian parts are
    summed with an error-free-transform accumulator, and the result is
    re-encoded.
    """
    terms = [t for t in terms if t.log_mag != NEG_INF]
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    lm = np.array([t.log_mag for t in terms])
    ph = np.array([t.phase for t in terms])
    return sum_arrays(lm, ph)


def sum_arrays(log_mag, phase) -> LogComplex:
    """:func:`lsum` over parallel arrays of log-moduli and phases."""
    log_mag = np.asarray(log_mag, dtype=float)
    phase = np.asarray(phase, dtype=float)
    finite = log_mag > NEG_INF
    if not finite.any():
        return ZERO
    log_mag = log_mag[finite]
    phase = phase[finite]
    if log_mag.size == 1:
        return LogComplex(log_mag[0], phase[0])
    top = log_mag.max()
    scale = np.exp(log_mag - top)
    s_re, s_im = kernels.compensated_sum(scale * np.cos(phase), scale * np.sin(phase))
    if s_re == 0.0 and s_im == 0.0:
        return ZERO
    return LogComplex(top + math.log(math.hypot(s_re, s_im)), math.atan2(s_im, s_re))


def sum_rows(log_mag, phase):
    """Row-wise compensated sums; returns (log_mag, phase) arrays."""
    log_mag = np.atleast_2d(np.asarray(log_mag, dtype=float))
    phase = np.atleast_2d(np.asarray(phase, dtype=float))
    top = log_mag.max(axis=1)
    safe_top = np.where(np.isfinite(top), top, 0.0)
    scale = np.exp(log_mag - safe_top[:, None])
    s_re, s_im = kernels.compensated_rows(scale * np.cos(phase), scale * np.sin(phase))
    mod = np.hypot(s_re, s_im)
    with np.errstate(divide="ignore"):
        out_lm = np.where(mod > 0, safe_top + np.log(mod), NEG_INF)
    out_ph = np.where(mod > 0, np.arctan2(s_im, s_re), 0.0)
    out_lm = np.where(np.isfinite(top), out_lm, NEG_INF)
    return out_lm, out_ph


def lgamma_log(n: int) -> float:
    """log(n!)."""
    if n < 0 or int(n) != n:
        raise ValueError(f"lgamma_log needs a non-negative integer, got {n!r}")
    return math.lgamma(int(n) + 1)


def _stirling_remainder(n):
    """lgamma(n+1) - (n log n - n + 0.5 log(2 pi n)) for n >= 1."""
    n = np.asarray(n, dtype=float)
    big = n >= 16
    nb = np.where(big, n, 16.0)
    inv = 1.0 / nb
    inv2 = inv * inv
    series = inv * (1 / 12 - inv2 * (1 / 360 - inv2 * (1 / 1260 - inv2 / 1680)))
    ns = np.where(big, 1.0, n)
    lg = np.vectorize(math.lgamma, otypes=[float])(ns + 1.0)
    direct = lg - (ns * np.log(ns) - ns + 0.5 * np.log(TWO_PI * ns))
    return np.where(big, series, direct)


def log_poisson(n, t):
    """log(t**n * exp(-t) / n!) without cancellation for large n.

    Written as ``-n*(r - 1 - log r) - 0.5*log(2 pi n) - remainder(n)`` with
    ``r = t/n``; the naive form loses all digits once ``n*log(t)`` ~ 1e16.
    """
    n = np.asarray(n, dtype=float)
    t = np.asarray(t, dtype=float)
    n_b, t_b = np.broadcast_arrays(n, t)
    out = np.empty(n_b.shape)
    zero_n = n_b == 0
    out[zero_n] = -t_b[zero_n]
    pos = ~zero_n
    tz = pos & (t_b == 0)
    out[tz] = NEG_INF
    m = pos & (t_b > 0)
    if m.any():
        nn = n_b[m]
        r = t_b[m] / nn
        d = r - 1.0
        # log1p(d) is ill-conditioned as d -> -1; log(r) is exact there
        with np.errstate(divide="ignore"):
            h = np.where(np.abs(d) < 0.5, d - np.log1p(d), d - np.log(r))
        out[m] = -nn * h - 0.5 * np.log(TWO_PI * nn) - _stirling_remainder(nn)
    return out if out.ndim else float(out)


def log_expm1(z):
    """(log|e^z - 1|, arg(e^z - 1)) for complex arrays, overflow-safe."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    out_lm = np.empty(z.shape)
    out_ph = np.empty(z.shape)
    large = x > 1.0
    # e^z - 1 = e^z (1 - e^{-z})
    if large.any():
        zl = z[large]
        w = 1.0 - np.exp(-zl)
        out_lm[large] = zl.real + np.log(np.abs(w))
        out_ph[large] = zl.imag + np.angle(w)
    small = ~large
    if small.any():
        xs, ys = x[small], y[small]
        re = np.expm1(xs) * np.cos(ys) - 2.0 * np.sin(0.5 * ys) ** 2
        im = np.exp(xs) * np.sin(ys)
        with np.errstate(divide="ignore"):
            out_lm[small] = np.log(np.hypot(re, im))
        out_ph[small] = np.arctan2(im, re)
    return out_lm, wrap_array(out_ph)


def as_arrays(values: Sequence[LogComplex]):
    return (np.array([v.log_mag for v in values]), np.array([v.phase for v in values]))


def from_arrays(log_mag, phase) -> list[LogComplex]:
    return [LogComplex(a, b) for a, b in zip(np.ravel(log_mag), np.ravel(phase))]
