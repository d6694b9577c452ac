"""Pure-Python reference kernels.

Same signatures as the compiled ``_ckernels`` module; selected by
:mod:`semidecay.kernels` when the extension is unavailable.
"""
import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
EPS = np.finfo(float).eps


def compensated_sum(re, im):
    return math.fsum(re), math.fsum(im)


def compensated_rows(re, im):
    re = np.asarray(re, dtype=float)
    im = np.asarray(im, dtype=float)
    out_re = np.array([math.fsum(row) for row in re])
    out_im = np.array([math.fsum(row) for row in im])
    return out_re, out_im


def _curve_dist2(y, b, x, alpha, c):
    dx = x + c * (1.0 + y) ** (-alpha)
    dy = y - b
    return dx * dx + dy * dy


def _orbit_logval(y, t, alpha, p):
    u = (1.0 + y) ** (-alpha)
    return -t * u - 0.5 * p * math.log(u * u + y * y)


def _golden(f, lo, hi, tol, maxiter):
    """Minimise ``f`` on [lo, hi]; returns the best point seen."""
    best_y = lo
    best_f = f(lo)
    fh = f(hi)
    if fh < best_f:
        best_y, best_f = hi, fh
    y1 = hi - INV_PHI * (hi - lo)
    y2 = lo + INV_PHI * (hi - lo)
    f1 = f(y1)
    f2 = f(y2)
    for _ in range(maxiter):
        width = hi - lo
        if width <= max(tol, 4.0 * EPS * max(abs(lo), abs(hi))):
            break
        if f1 < f2:
            hi, y2, f2 = y2, y1, f1
            y1 = hi - INV_PHI * (hi - lo)
            f1 = f(y1)
        else:
            lo, y1, f1 = y1, y2, f2
            y2 = lo + INV_PHI * (hi - lo)
            f2 = f(y2)
    for y, fy in ((y1, f1), (y2, f2)):
        if fy < best_f:
            best_y, best_f = y, fy
    return best_y, best_f


def golden_curve_dist(b, x, alpha, c, lo, hi, tol, maxiter):
    y, d2 = _golden(lambda y: _curve_dist2(y, b, x, alpha, c), lo, hi, tol, maxiter)
    return y, math.sqrt(d2)


def golden_orbit(t, alpha, p, lo, hi, tol, maxiter):
    y, neg = _golden(lambda y: -_orbit_logval(y, t, alpha, p), lo, hi, tol, maxiter)
    return y, -neg


def block_sweep(re_lam, inv_pow, t):
    re_lam = np.asarray(re_lam, dtype=float)
    inv_pow = np.asarray(inv_pow, dtype=float)
    t = np.asarray(t, dtype=float)
    block = np.empty(t.shape)
    corner = np.empty(t.shape)
    for i, ti in enumerate(t):
        damp = np.exp(ti * re_lam)
        b = ti * inv_pow
        sigma = 0.5 * (b + np.sqrt(b * b + 4.0))
        block[i] = np.max(damp * sigma)
        corner[i] = np.max(damp * inv_pow)
    return block, corner
