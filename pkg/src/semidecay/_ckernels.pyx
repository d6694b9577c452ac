# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Mirrors ``_kernels_py`` function for function."""
from libc.math cimport exp, log, pow, sqrt, fabs, fmax

import numpy as np

cdef double INV_PHI = 0.6180339887498949
cdef double EPS = 2.220446049250313e-16


cdef inline double _sum2(const double[:] a) noexcept nogil:
    # cascaded TwoSum (Ogita-Rump-Oishi Sum2)
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double s = 0.0, err = 0.0, x, t, bp
    for i in range(n):
        x = a[i]
        t = s + x
        bp = t - s
        err += (s - (t - bp)) + (x - bp)
        s = t
    return s + err


def compensated_sum(re, im):
    cdef const double[:] r = np.ascontiguousarray(re, dtype=np.float64)
    cdef const double[:] m = np.ascontiguousarray(im, dtype=np.float64)
    return _sum2(r), _sum2(m)


def compensated_rows(re, im):
    cdef const double[:, :] r = np.ascontiguousarray(re, dtype=np.float64)
    cdef const double[:, :] m = np.ascontiguousarray(im, dtype=np.float64)
    cdef Py_ssize_t i, n = r.shape[0]
    out_re = np.empty(n)
    out_im = np.empty(n)
    cdef double[:] ore = out_re
    cdef double[:] oim = out_im
    with nogil:
        for i in range(n):
            ore[i] = _sum2(r[i])
            oim[i] = _sum2(m[i])
    return out_re, out_im


cdef inline double _curve_dist2(double y, double b, double x, double alpha,
                                double c) noexcept nogil:
    cdef double dx = x + c * pow(1.0 + y, -alpha)
    cdef double dy = y - b
    return dx * dx + dy * dy


cdef inline double _neg_orbit(double y, double t, double alpha,
                              double p) noexcept nogil:
    cdef double u = pow(1.0 + y, -alpha)
    return t * u + 0.5 * p * log(u * u + y * y)


cdef (double, double) _golden(int kind, double a0, double a1, double a2,
                              double a3, double lo, double hi, double tol,
                              int maxiter) noexcept nogil:
    cdef double best_y = lo, best_f, fh, y1, y2, f1, f2, width
    cdef int it
    if kind == 0:
        best_f = _curve_dist2(lo, a0, a1, a2, a3)
        fh = _curve_dist2(hi, a0, a1, a2, a3)
    else:
        best_f = _neg_orbit(lo, a0, a1, a2)
        fh = _neg_orbit(hi, a0, a1, a2)
    if fh < best_f:
        best_y = hi
        best_f = fh
    y1 = hi - INV_PHI * (hi - lo)
    y2 = lo + INV_PHI * (hi - lo)
    if kind == 0:
        f1 = _curve_dist2(y1, a0, a1, a2, a3)
        f2 = _curve_dist2(y2, a0, a1, a2, a3)
    else:
        f1 = _neg_orbit(y1, a0, a1, a2)
        f2 = _neg_orbit(y2, a0, a1, a2)
    for it in range(maxiter):
        width = hi - lo
        if width <= fmax(tol, 4.0 * EPS * fmax(fabs(lo), fabs(hi))):
            break
        if f1 < f2:
            hi = y2
            y2 = y1
            f2 = f1
            y1 = hi - INV_PHI * (hi - lo)
            if kind == 0:
                f1 = _curve_dist2(y1, a0, a1, a2, a3)
            else:
                f1 = _neg_orbit(y1, a0, a1, a2)
        else:
            lo = y1
            y1 = y2
            f1 = f2
            y2 = lo + INV_PHI * (hi - lo)
            if kind == 0:
                f2 = _curve_dist2(y2, a0, a1, a2, a3)
            else:
                f2 = _neg_orbit(y2, a0, a1, a2)
    if f1 < best_f:
        best_y = y1
        best_f = f1
    if f2 < best_f:
        best_y = y2
        best_f = f2
    return best_y, best_f


def golden_curve_dist(double b, double x, double alpha, double c, double lo,
                      double hi, double tol, int maxiter):
    cdef double y, d2
    y, d2 = _golden(0, b, x, alpha, c, lo, hi, tol, maxiter)
    return y, sqrt(d2)


def golden_orbit(double t, double alpha, double p, double lo, double hi,
                 double tol, int maxiter):
    cdef double y, neg
    y, neg = _golden(1, t, alpha, p, 0.0, lo, hi, tol, maxiter)
    return y, -neg


def block_sweep(re_lam, inv_pow, t):
    cdef const double[:] re = np.ascontiguousarray(re_lam, dtype=np.float64)
    cdef const double[:] ip = np.ascontiguousarray(inv_pow, dtype=np.float64)
    cdef const double[:] tt = np.ascontiguousarray(t, dtype=np.float64).ravel()
    cdef Py_ssize_t i, j, n = re.shape[0], m = tt.shape[0]
    block = np.empty(m)
    corner = np.empty(m)
    cdef double[:] bl = block
    cdef double[:] co = corner
    cdef double ti, damp, b, sigma, bmax, cmax
    with nogil:
        for i in range(m):
            ti = tt[i]
            bmax = 0.0
            cmax = 0.0
            for j in range(n):
                damp = exp(ti * re[j])
                b = ti * ip[j]
                sigma = 0.5 * (b + sqrt(b * b + 4.0))
                if damp * sigma > bmax:
                    bmax = damp * sigma
                if damp * ip[j] > cmax:
                    cmax = damp * ip[j]
            bl[i] = bmax
            co[i] = cmax
    return block.reshape(np.shape(t)), corner.reshape(np.shape(t))
