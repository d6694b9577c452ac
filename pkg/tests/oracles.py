"""Arbitrary-precision reference values built directly from the atom definition."""
import math

import mpmath


def _dps_for(k, A, scale):
    # digits cancelled by the atom sum plus a comfortable margin
    return int(30 + k * max(1.0, math.log10(max(A * scale, 1.0)) + 1))


def atoms(H, k):
    """Return mp-precision (locations, weights) for ``k`` atoms at height ``H``."""
    A = 2 * k * mpmath.log(k)
    tau = A ** (k - 1) / mpmath.sqrt(k)
    w = mpmath.mpc(-1, H)
    locs, wts = [], []
    for s in range(1, k + 1):
        q = mpmath.expjpi(mpmath.mpf(2 * s) / k)
        locs.append(w + q / A)
        wts.append(tau * q * (1 + q / (A * w)))
    return locs, wts


def cauchy(k, H, z):
    A = float(2 * k * math.log(k))
    with mpmath.workdps(_dps_for(k, A, abs(complex(z) - complex(-1, H)) + 1)):
        locs, wts = atoms(H, k)
        zz = mpmath.mpc(z.real, z.imag)
        return _log_pair(mpmath.fsum(wt / (zz - lo) for lo, wt in zip(locs, wts)))


def laplace(k, H, t, weighted=False):
    A = float(2 * k * math.log(k))
    # small t cancels roughly k*log10(A/t) further digits
    extra = int(k * max(0.0, math.log10(A / t))) if t > 0 else 0
    with mpmath.workdps(_dps_for(k, A, 1.0) + extra + int(t / 2.3)):
        locs, wts = atoms(H, k)
        tt = mpmath.mpf(t)
        if weighted:
            return _log_pair(mpmath.fsum(wt * mpmath.exp(tt * lo) / lo for lo, wt in zip(locs, wts)))
        return _log_pair(mpmath.fsum(wt * mpmath.exp(tt * lo) for lo, wt in zip(locs, wts)))


def _log_pair(v):
    """(log|v|, arg v) as floats; never underflows."""
    if v == 0:
        return float("-inf"), 0.0
    return float(mpmath.log(abs(v))), float(mpmath.arg(v))


def rel_err(log_mag, phase, ref):
    """Relative distance between a log-domain value and a ``_log_pair`` reference."""
    ref_lm, ref_ph = ref
    if ref_lm == float("-inf"):
        return 0.0 if log_mag == float("-inf") else math.inf
    return abs(math.exp(log_mag - ref_lm) * complex(math.cos(phase - ref_ph),
                                                    math.sin(phase - ref_ph)) - 1)
