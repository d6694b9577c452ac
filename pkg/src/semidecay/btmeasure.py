"""Atomic measures ``mu`` whose transforms realise the sharp decay rate.

``mu = tau * sum_s q^s (1 + q^s/(A w)) delta_{w + q^s/A}`` with
``A = 2k log k``, ``tau = A^(k-1)/sqrt(k)``, ``q = exp(2 pi i/k)`` and
``w = iH - 1``.  Three transforms are evaluated:

* Cauchy   ``C(z) = int dmu(zeta) / (z - zeta)``
* Laplace  ``L(t) = int exp(t zeta) dmu(zeta)``
* weighted ``N(t) = int exp(t zeta) dmu(zeta) / zeta``

Production evaluation uses closed forms (root-of-unity identities collapse
the atom sums) and positive m-series in the log domain.  The direct atom
sums are kept as oracles: they cancel catastrophically, losing roughly
``k * log10(A |z - w|)`` digits, and are only trustworthy for small ``k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import logcomplex as lc
from .logcomplex import LogComplex
from .omega import OmegaRegion, contains_many

SERIES_RTOL = 1e-18
SERIES_MAX_TERMS = 10_000
POLE_RTOL = 1e-12
B_CAP = 1e4

BOUND_IDS = ("X1", "X3", "X4", "X5", "X6")


class ConstraintError(ValueError):
    """Parameters violate a construction constraint.

    ``constraint`` names the failed condition; ``suggested_H`` is the
    smallest admissible ``H`` found by bisection (``None`` if not
    applicable).
    """

    def __init__(self, constraint: str, message: str, suggested_H: float | None = None):
        self.constraint = constraint
        self.suggested_H = suggested_H
        hint = f" (smallest admissible H ~ {suggested_H:.6g})" if suggested_H else ""
        super().__init__(f"{constraint}: {message}{hint}")


class PoleProximityError(ArithmeticError):
    pass


class SeriesDivergenceError(ArithmeticError):
    pass


class AtomCollisionError(ValueError):
    pass


# ---------------------------------------------------------------- parameters

def choose_k(alpha: float, H: float, psi: float) -> int:
    return max(2, int(round(psi * H ** alpha * math.log(H))))


def _constraint1_ok(alpha, beta, H, k) -> bool:
    # sqrt(k) exp(k / H^alpha) <= H^beta, compared in logs
    return 0.5 * math.log(k) + k / H ** alpha <= beta * math.log(H)


def _admissible(alpha, beta, psi, Q, H) -> bool:
    if H <= max(Q, 1.0):
        return False
    k = choose_k(alpha, H, psi)
    return k > Q and _constraint1_ok(alpha, beta, H, k)


def smallest_valid_H(alpha: float, beta: float, psi: float, Q: float = 1.0,
                     start: float | None = None) -> float:
    """Smallest admissible ``H`` above ``start`` (doubling, then bisection).

    Rounding of ``k`` makes admissibility only eventually monotone, so the
    bisection result is re-checked and nudged upwards if needed.
    """
    lo = max(Q, 1.0) if start is None else float(start)
    if _admissible(alpha, beta, psi, Q, lo):
        return lo
    hi = max(2.0 * lo, lo + 1.0)
    while not _admissible(alpha, beta, psi, Q, hi):
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            raise ConstraintError("constraint (1)", "no admissible H below 1e12")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-9 * hi:
            break
        if _admissible(alpha, beta, psi, Q, mid):
            hi = mid
        else:
            lo = mid
    while not _admissible(alpha, beta, psi, Q, hi):
        hi *= 1.0 + 1e-6
    return hi


@dataclass(frozen=True)
class BTParams:
    alpha: float
    beta: float
    H: float
    psi: float
    Q: float
    eps: float
    k: int
    bracket_ok: bool

    @property
    def A(self) -> float:
        return 2.0 * self.k * math.log(self.k)

    @property
    def log_tau(self) -> float:
        return (self.k - 1) * math.log(self.A) - 0.5 * math.log(self.k)

    @property
    def tau(self) -> LogComplex:
        return LogComplex(self.log_tau, 0.0)

    @property
    def w(self) -> complex:
        return complex(-1.0, self.H)

    @property
    def q(self) -> complex:
        return complex(math.cos(2 * math.pi / self.k), math.sin(2 * math.pi / self.k))

    @property
    def region(self) -> OmegaRegion:
        return OmegaRegion(self.alpha, 1.0)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha, "beta": self.beta, "H": self.H, "psi": self.psi,
            "Q": self.Q, "eps": self.eps, "k": self.k, "A": self.A,
            "log_tau": self.log_tau, "bracket_ok": self.bracket_ok,
        }


def make_params(alpha: float, beta: float, H: float, psi: float, Q: float = 1.0,
                eps: float = 0.1, *, strict_bracket: bool = False) -> BTParams:
    if not alpha > 0:
        raise ConstraintError("alpha > 0", f"got alpha = {alpha}")
    if not beta > alpha / 2:
        raise ConstraintError("beta > alpha/2", f"got alpha = {alpha}, beta = {beta}")
    if not 0 < psi < beta - alpha / 2:
        raise ConstraintError("0 < psi < beta - alpha/2",
                              f"got psi = {psi}, beta - alpha/2 = {beta - alpha / 2}")
    if not (Q > 0 and eps > 0):
        raise ConstraintError("Q, eps > 0", f"got Q = {Q}, eps = {eps}")
    if not H > max(Q, 1.0):
        raise ConstraintError("H > max(Q, 1)", f"got H = {H}, Q = {Q}",
                              smallest_valid_H(alpha, beta, psi, Q))
    k = choose_k(alpha, H, psi)
    if not _constraint1_ok(alpha, beta, H, k):
        lhs = math.sqrt(k) * math.exp(min(k / H ** alpha, 700.0))
        raise ConstraintError(
            "constraint (1)",
            f"sqrt(k) exp(k/H^alpha) = {lhs:.6g} > H^beta = {H ** beta:.6g} (k = {k})",
            smallest_valid_H(alpha, beta, psi, Q))
    if not k > Q:
        raise ConstraintError("k > Q", f"k = {k} <= Q = {Q}",
                              smallest_valid_H(alpha, beta, psi, Q))
    bracket_ok = H ** alpha <= k <= H ** (1.5 * alpha)
    if strict_bracket and not bracket_ok:
        raise ConstraintError("H^alpha <= k <= H^(3 alpha/2)",
                              f"k = {k}, H^alpha = {H ** alpha:.6g}")
    return BTParams(float(alpha), float(beta), float(H), float(psi), float(Q),
                    float(eps), int(k), bool(bracket_ok))


# ------------------------------------------------------------------ measure

@dataclass(frozen=True)
class BTMeasure:
    params: BTParams
    locations: np.ndarray = field(repr=False)
    weight_log_mag: np.ndarray = field(repr=False)
    weight_phase: np.ndarray = field(repr=False)

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def weights(self) -> list[LogComplex]:
        return lc.from_arrays(self.weight_log_mag, self.weight_phase)

    def conjugate(self) -> BTMeasure:
        """Measure reflected through the real axis (atoms and weights conjugated)."""
        return BTMeasure(self.params, np.conj(self.locations),
                         self.weight_log_mag, -self.weight_phase)


def _root_phases(k: int) -> np.ndarray:
    # q^s by its exact phase, never by repeated multiplication
    s = np.arange(1, k + 1)
    return lc.wrap_array(2.0 * np.pi * s / k)


def build_from_params(p: BTParams) -> BTMeasure:
    theta = _root_phases(p.k)
    qs = np.exp(1j * theta)
    loc = p.w + qs / p.A
    factor = 1.0 + qs / (p.A * p.w)
    wl = p.log_tau + np.log(np.abs(factor))
    wp = lc.wrap_array(theta + np.angle(factor))
    if np.any(contains_many(p.region, loc)):
        raise ConstraintError("atoms outside Omega", "an atom lies inside Omega")
    for arr in (loc, wl, wp):
        arr.setflags(write=False)
    return BTMeasure(p, loc, wl, wp)


def build(alpha: float, beta: float, H: float, psi: float, Q: float = 1.0,
          eps: float = 0.1, *, strict_bracket: bool = False) -> BTMeasure:
    return build_from_params(make_params(alpha, beta, H, psi, Q, eps,
                                         strict_bracket=strict_bracket))


def total_mass(mu: BTMeasure) -> LogComplex:
    return lc.sum_arrays(mu.weight_log_mag, mu.weight_phase)


# ---------------------------------------------------------- identities

def roots_identity_check(k: int, x: complex, with_cond: bool = False):
    """Both sides of ``sum q^s/(x - q^s) = k/(x^k - 1)`` and
    ``sum q^{2s}/(x - q^s) = k x/(x^k - 1)``, the left by compensated summation.

    For ``|x| > 1`` the left sums are ``O(|x|^-k)`` built from ``O(1/|x|)``
    terms; ``with_cond`` appends both condition numbers
    ``sum|terms| / |sum|`` so callers can discount that regime.
    """
    from . import kernels

    if k < 1:
        raise ValueError("k must be positive")
    x = complex(x)
    theta = 2.0 * np.pi * np.arange(1, k + 1) / k
    qs = np.exp(1j * theta)
    gap = np.abs(x - qs)
    if np.any(gap <= 1e-14 * max(1.0, abs(x))):
        raise ValueError(f"x = {x} is a {k}-th root of unity")
    t1 = qs / (x - qs)
    t2 = qs * qs / (x - qs)
    l1 = complex(*kernels.compensated_sum(t1.real, t1.imag))
    l2 = complex(*kernels.compensated_sum(t2.real, t2.imag))
    den = x ** k - 1.0
    out = (l1, k / den, l2, k * x / den)
    if with_cond:
        with np.errstate(divide="ignore"):
            out += (float(np.abs(t1).sum() / abs(l1)), float(np.abs(t2).sum() / abs(l2)))
    return out


# ---------------------------------------------------------- Cauchy transform

def cauchy_closed_many(mu: BTMeasure, z):
    """Closed form ``(z/w) k A tau / (A^k (z-w)^k - 1)`` in the log domain.

    Returns ``(log_mag, phase)`` arrays.
    """
    p = mu.params
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    k, A, w = p.k, p.A, p.w
    d = z - w
    with np.errstate(divide="ignore"):
        log_z = np.log(np.abs(z))
    log_d = np.log(np.abs(d))
    arg_d = np.angle(d)
    L = k * (math.log(A) + log_d) + 1j * (k * arg_d)
    base = log_z - math.log(abs(w)) + 0.5 * math.log(k)
    base_ph = np.angle(z) - np.angle(w)
    out_lm = np.empty(z.shape)
    out_ph = np.empty(z.shape)
    big = L.real > 0
    if big.any():
        # C = (z/w) sqrt(k) (z-w)^{-k} / (1 - e^{-L})
        dl, dp = lc.log_expm1(-L[big])
        if np.any(dl < math.log(POLE_RTOL)):
            raise PoleProximityError("z is within 1e-12 (relative) of a pole")
        out_lm[big] = base[big] - k * log_d[big] - dl
        out_ph[big] = base_ph[big] - k * arg_d[big] - (dp + math.pi)
    small = ~big
    if small.any():
        dl, dp = lc.log_expm1(L[small])
        if np.any(dl < math.log(POLE_RTOL)):
            raise PoleProximityError("z is within 1e-12 (relative) of a pole")
        out_lm[small] = base[small] + k * math.log(A) - dl
        out_ph[small] = base_ph[small] - dp
    zero = z == 0
    out_lm[zero] = lc.NEG_INF
    out_ph = np.where(zero, 0.0, lc.wrap_array(out_ph))
    return out_lm, out_ph


def cauchy_closed(mu: BTMeasure, z: complex) -> LogComplex:
    lm, ph = cauchy_closed_many(mu, [z])
    return LogComplex(lm[0], ph[0])


def _brute_rows(term_lm, term_ph, return_cond):
    lm, ph = lc.sum_rows(term_lm, term_ph)
    if not return_cond:
        return lm, ph
    top = term_lm.max(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        mass = top + np.log(np.sum(np.exp(term_lm - top[:, None]), axis=1))
        cond = np.exp(mass - lm)
    return lm, ph, cond


def cauchy_brute_many(mu: BTMeasure, z, return_cond: bool = False):
    """Direct compensated atom sum ``sum_s weight_s / (z - loc_s)``.

    With ``return_cond`` also returns ``sum|terms| / |sum|``; multiply by
    machine epsilon for the expected relative error.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    diff = z[:, None] - mu.locations[None, :]
    if np.any(diff == 0):
        raise AtomCollisionError("z coincides with an atom")
    term_lm = mu.weight_log_mag[None, :] - np.log(np.abs(diff))
    term_ph = mu.weight_phase[None, :] - np.angle(diff)
    return _brute_rows(term_lm, term_ph, return_cond)


def cauchy_brute(mu: BTMeasure, z: complex) -> LogComplex:
    lm, ph = cauchy_brute_many(mu, [z])
    return LogComplex(lm[0], ph[0])


# ------------------------------------------------------ Laplace-type series

def _m_series(p: BTParams, t, max_terms: int = SERIES_MAX_TERMS):
    """``log sum_m rho_m`` and ``log sum_m (km-1) rho_m`` with
    ``rho_m = (t/A)^{k(m-1)} (k-1)!/(km-1)!`` (positive terms)."""
    t = np.asarray(t, dtype=float)
    k, A = p.k, p.A
    with np.errstate(divide="ignore"):
        log_ratio = np.log(t) - math.log(A)
    lg_k = math.lgamma(k)
    log_p = np.zeros(t.shape)
    log_pp = np.full(t.shape, math.log(k - 1)) if k > 1 else np.full(t.shape, lc.NEG_INF)
    prev = np.zeros(t.shape)
    active = t > 0
    m = 1
    while active.any():
        m += 1
        if m > max_terms:
            raise SeriesDivergenceError(
                f"m-series not converged after {max_terms} terms (t/A up to "
                f"{float(np.max(t[active])) / A:.3g})")
        with np.errstate(invalid="ignore"):
            term = k * (m - 1) * log_ratio[active] + lg_k - math.lgamma(k * m)
        log_p[active] = np.logaddexp(log_p[active], term)
        log_pp[active] = np.logaddexp(log_pp[active], term + math.log(k * m - 1))
        done = (term < log_p[active] + math.log(SERIES_RTOL)) & (term < prev[active])
        prev[active] = term
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    return log_p, log_pp


def _as_t(t):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0) or np.any(~np.isfinite(t)):
        raise ValueError("t must be finite and non-negative")
    return t


def n_transform_many(mu: BTMeasure, t):
    """``N(t) = sqrt(k) poisson_{k-1}(t) e^{iHt} / w * sum_m rho_m``."""
    p = mu.params
    t = _as_t(t)
    log_p, _ = _m_series(p, t)
    lm = 0.5 * math.log(p.k) + lc.log_poisson(p.k - 1, t) + log_p - math.log(abs(p.w))
    ph = lc.wrap_array(lc.wrap_array(p.H * t) - np.angle(p.w))
    ph = np.where(np.isfinite(lm), ph, 0.0)
    return lm, ph


def n_transform(mu: BTMeasure, t: float) -> LogComplex:
    lm, ph = n_transform_many(mu, [t])
    return LogComplex(lm[0], ph[0])


def laplace_series_many(mu: BTMeasure, t, max_terms: int = SERIES_MAX_TERMS):
    """``L(t) = sqrt(k) e^{iHt} [poisson_{k-1}(t) P + t^{k-2} e^{-t}/(k-1)! P' / w]``."""
    p = mu.params
    t = _as_t(t)
    k = p.k
    log_p, log_pp = _m_series(p, t, max_terms)
    half = 0.5 * math.log(k)
    ht = lc.wrap_array(p.H * t)
    a_lm = half + lc.log_poisson(k - 1, t) + log_p
    # t^{k-2} e^{-t} / (k-1)!  =  poisson_{k-2}(t) / (k-1)
    b_lm = half + lc.log_poisson(k - 2, t) - math.log(k - 1) + log_pp - math.log(abs(p.w))
    b_ph = ht - np.angle(p.w)
    lm, ph = lc.sum_rows(np.stack([a_lm, b_lm], axis=1), np.stack([ht, b_ph], axis=1))
    return lm, lc.wrap_array(ph)


def laplace_series(mu: BTMeasure, t: float) -> LogComplex:
    lm, ph = laplace_series_many(mu, [t])
    return LogComplex(lm[0], ph[0])


def laplace_brute_many(mu: BTMeasure, t, return_cond: bool = False):
    """``tau e^{tw} sum_s q^s (1 + q^s/(Aw)) e^{q^s t/A}`` by direct summation."""
    p = mu.params
    t = _as_t(t)
    theta = _root_phases(p.k)
    qs = np.exp(1j * theta)
    factor = 1.0 + qs / (p.A * p.w)
    s = t[:, None] / p.A
    term_lm = np.log(np.abs(factor))[None, :] + np.cos(theta)[None, :] * s
    term_ph = (theta + np.angle(factor))[None, :] + np.sin(theta)[None, :] * s
    out = _brute_rows(term_lm, lc.wrap_array(term_ph), return_cond)
    lm = out[0] + p.log_tau - t
    ph = lc.wrap_array(out[1] + lc.wrap_array(p.H * t))
    return (lm, ph) + tuple(out[2:])


def laplace_brute(mu: BTMeasure, t: float) -> LogComplex:
    lm, ph = laplace_brute_many(mu, [t])
    return LogComplex(lm[0], ph[0])


def laplace_many(mu: BTMeasure, t):
    """Series where it converges within budget, atom sum otherwise.

    The fallback only triggers for ``t >> A``, where the ``s = k`` atom
    dominates and the direct sum no longer cancels.
    """
    t = _as_t(t)
    try:
        return laplace_series_many(mu, t)
    except SeriesDivergenceError:
        pass
    lm = np.empty(t.shape)
    ph = np.empty(t.shape)
    near = t <= 50.0 * mu.params.A * max(1, mu.k)
    if near.any():
        lm[near], ph[near] = laplace_series_many(mu, t[near])
    if (~near).any():
        lm[~near], ph[~near] = laplace_brute_many(mu, t[~near])
    return lm, ph


def laplace(mu: BTMeasure, t: float) -> LogComplex:
    lm, ph = laplace_many(mu, [t])
    return LogComplex(lm[0], ph[0])


def abs_of(log_mag) -> np.ndarray:
    with np.errstate(under="ignore", over="ignore"):
        return np.exp(np.asarray(log_mag, dtype=float))


# ------------------------------------------------------------- certificates

@dataclass
class BoundCertificate:
    bound_id: str
    B_empirical: float
    worst_point: dict
    grid: dict
    passed: bool
    B_cap: float = B_CAP
    infeasible_points: int = 0

    def to_dict(self) -> dict:
        return {
            "bound_id": self.bound_id,
            "B_empirical": self.B_empirical,
            "worst_point": self.worst_point,
            "grid": self.grid,
            "pass": self.passed,
            "B_cap": self.B_cap,
            "infeasible_points": self.infeasible_points,
        }


@dataclass(frozen=True)
class CertGrids:
    z: np.ndarray
    t: np.ndarray
    z_spec: dict
    t_spec: dict


def default_grids(mu: BTMeasure, n_boundary: int = 4000, n_window: int = 2001,
                  n_rays: int = 25, n_radii: int = 400, n_t: int = 4000) -> CertGrids:
    """Boundary + interior-ray z-grid to ``|z| = 100 max(Q, H^2)``; log-spaced t-grid on [0, 10A]."""
    p = mu.params
    region = p.region
    r_max = 100.0 * max(p.Q, p.H ** 2)
    heights = np.expm1(np.linspace(0.0, math.log1p(r_max), n_boundary))
    win = min(0.5 * p.H, max(1.0, 20.0 / math.sqrt(p.k)))
    heights = np.union1d(heights, p.H + win * np.linspace(-1.0, 1.0, n_window))
    heights = np.union1d(heights, -heights)
    z_b = region.edge(heights) + 1j * heights
    theta = np.linspace(-np.pi / 2, np.pi / 2, n_rays)
    radii = np.geomspace(1e-2, r_max, n_radii)
    z_r = (radii[None, :] * np.exp(1j * theta[:, None])).ravel()
    near = p.H + win * np.linspace(-1.0, 1.0, 201)
    z_v = (np.array([0.0, 0.5, 2.0])[:, None] + 1j * near[None, :]).ravel()
    z = np.concatenate([z_b, z_r, z_v])
    z = z[contains_many(region, z) | np.isin(z, z_b)]
    t_max = 10.0 * p.A
    t = np.concatenate([[0.0, p.Q, float(p.k), 2.0 * p.k],
                        np.geomspace(1e-3, t_max, n_t),
                        np.linspace(0.25 * p.k, 3.0 * p.k, n_window)])
    t = np.unique(t[t <= t_max])
    z_spec = {"boundary_heights": int(heights.size), "window": [p.H - win, p.H + win],
              "rays": n_rays, "radii": n_radii, "r_max": r_max}
    t_spec = {"t_max": t_max, "log_points": n_t, "window": [0.25 * p.k, 3.0 * p.k]}
    return CertGrids(z, t, z_spec, t_spec)


def _requirement_x1(p, z, v):
    """Per-point minimal B for X1; +inf where no B can work."""
    big = np.abs(z) > p.Q
    req = np.where(big, (v - p.eps) / (1.0 + np.abs(z.imag)) ** p.beta, 0.0)
    return np.where(~big & (v > p.eps), np.inf, req)


def _requirement_x3(p, t, v):
    big = t > p.Q
    req = np.where(big, v - p.eps, 0.0)
    return np.where(~big & (v > p.eps), np.inf, req)


def _requirement_x5(p, t, v):
    va = v ** p.alpha
    allow = p.eps / (t + 1.0)
    inside = (t > p.Q) & (t < 2.0 * p.k)
    with np.errstate(divide="ignore", invalid="ignore"):
        env = np.log(t) / t
        req = np.where(inside, (va - allow) / env, 0.0)
    req = np.where(inside & (env <= 0) & (va > allow), np.inf, req)
    req = np.where(inside & (env <= 0) & (va <= allow), 0.0, req)
    return np.where(~inside & (va > allow), np.inf, req)


def _refine_max(fn, grid, req, lo_bound, hi_bound):
    """Bounded Brent search around the worst grid point."""
    i = int(np.argmax(req))
    if not np.isfinite(req[i]):
        return grid[i], req[i]
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    lo, hi = max(lo, lo_bound), min(hi, hi_bound)
    if not hi > lo:
        return grid[i], req[i]
    res = optimize.minimize_scalar(lambda x: -fn(x), bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-10 * max(1.0, abs(hi))})
    if -res.fun > req[i]:
        return float(res.x), float(-res.fun)
    return grid[i], req[i]


def _make_cert(bound_id, req, points, spec, key, b_cap, refined=None):
    infeasible = int(np.sum(~np.isfinite(req)))
    i = int(np.argmax(req))
    worst, b = points[i], float(req[i])
    if refined is not None and np.isfinite(b) and refined[1] > b:
        worst, b = refined
    b = max(0.0, b)
    if key == "z":
        wp = {"z": {"re": float(np.real(worst)), "im": float(np.imag(worst))}}
    else:
        wp = {"t": float(worst)}
    return BoundCertificate(bound_id, b if np.isfinite(b) else math.inf, wp, spec,
                            bool(infeasible == 0 and b <= b_cap), b_cap, infeasible)


def certify_bounds(mu: BTMeasure, grids: CertGrids | None = None,
                   b_cap: float = B_CAP) -> list[BoundCertificate]:
    """Empirical minimal ``B`` for each of X1, X3, X4, X5, X6 on the grids."""
    p = mu.params
    g = grids or default_grids(mu)
    z = g.z
    if z.size == 0 or g.t.size == 0:
        raise ValueError("certification grids must be non-empty")
    if not np.all(contains_many(p.region, z) | np.isclose(z.real, p.region.edge(z.imag),
                                                          rtol=0, atol=1e-12)):
        raise ValueError("z-grid leaves the closure of Omega")
    certs = []

    # X1: |C(z)| <= B (1+|Im z|)^beta [|z|>Q] + eps on Omega
    v = abs_of(cauchy_closed_many(mu, z)[0])
    req = _requirement_x1(p, z, v)
    bnd = np.flatnonzero(np.isclose(z.real, p.region.edge(z.imag), rtol=0, atol=1e-12)
                         & (z.imag > 0))
    refined = None
    if bnd.size:
        yb = z.imag[bnd]
        order = np.argsort(yb)
        yb = yb[order]

        def along(y):
            zz = np.array([p.region.edge(y) + 1j * y])
            return float(_requirement_x1(p, zz, abs_of(cauchy_closed_many(mu, zz)[0]))[0])

        y_star, b_star = _refine_max(along, yb, req[bnd][order], yb[0], yb[-1])
        refined = (complex(p.region.edge(y_star), y_star), b_star)
    certs.append(_make_cert("X1", req, z, g.z_spec, "z", b_cap, refined))

    t = g.t
    lap = abs_of(laplace_many(mu, t)[0])
    nt = abs_of(n_transform_many(mu, t)[0])

    # X3: |L(t)| <= B [t>Q] + eps
    req = _requirement_x3(p, t, lap)
    refined = _refine_max(
        lambda s: float(_requirement_x3(p, np.array([s]), abs_of(laplace_many(mu, [s])[0]))[0]),
        t, req, 0.0, t[-1])
    certs.append(_make_cert("X3", req, t, g.t_spec, "t", b_cap, refined))

    # X4: 1/B <= |L(k)| <= B
    vk = float(abs_of(laplace_many(mu, [float(p.k)])[0])[0])
    b4 = max(vk, 1.0 / vk) if vk > 0 else math.inf
    certs.append(BoundCertificate("X4", b4, {"t": float(p.k)}, {"t": [float(p.k)]},
                                  bool(math.isfinite(b4) and b4 <= b_cap), b_cap,
                                  0 if vk > 0 else 1))

    # X5: |N(t)|^alpha <= B log(t)/t [Q<t<2k] + eps/(t+1)
    req = _requirement_x5(p, t, nt)
    refined = _refine_max(
        lambda s: float(_requirement_x5(p, np.array([s]),
                                        abs_of(n_transform_many(mu, [s])[0]))[0]),
        t, req, 0.0, t[-1])
    certs.append(_make_cert("X5", req, t, g.t_spec, "t", b_cap, refined))

    # X6: |N(k)|^alpha >= log k / (B k)
    nk = float(abs_of(n_transform_many(mu, [float(p.k)])[0])[0])
    b6 = math.log(p.k) / (p.k * nk ** p.alpha) if nk > 0 else math.inf
    certs.append(BoundCertificate("X6", b6, {"t": float(p.k)}, {"t": [float(p.k)]},
                                  bool(math.isfinite(b6) and b6 <= b_cap), b_cap,
                                  0 if nk > 0 else 1))
    return certs


# --------------------------------------------------------- X_alpha quantities

def omega0_grid(mu: BTMeasure, n_heights: int = 4000, n_window: int = 2001,
                n_cols: int = 9):
    """Points of ``Omega_0 = Omega & {|Re| < 1}`` out to ``|Im| = 1000 H``."""
    p = mu.params
    region = p.region
    y_max = 1e3 * p.H
    ys = np.expm1(np.linspace(math.log1p(1e-6), math.log1p(y_max), n_heights))
    win = min(0.5 * p.H, max(1.0, 20.0 / math.sqrt(p.k)))
    ys = np.union1d(ys, p.H + win * np.linspace(-1.0, 1.0, n_window))
    ys = np.union1d(ys, -ys)
    edge = region.edge(ys)
    frac = np.linspace(0.0, 1.0, n_cols, endpoint=False)
    # columns from the boundary curve towards Re = 1 (excluded)
    x = edge[None, :] + frac[:, None] * (1.0 - edge[None, :])
    return (x + 1j * ys[None, :]).ravel()


def xalpha_norm(mu: BTMeasure, z_grid=None, t_grid=None) -> float:
    """``max_t |L(t)| + sup_{Omega_0} |C(z)| (1 + |Im z|)^(-alpha)``."""
    p = mu.params
    z = omega0_grid(mu) if z_grid is None else np.asarray(z_grid, dtype=complex)
    t = default_grids(mu).t if t_grid is None else np.asarray(t_grid, dtype=float)
    weight = (1.0 + np.abs(z.imag)) ** (-p.alpha)
    vals = abs_of(cauchy_closed_many(mu, z)[0]) * weight
    i = int(np.argmax(vals))
    sup_c = float(vals[i])
    # refine along the boundary curve near the worst height
    y0 = float(z.imag[i])
    if np.isclose(z.real[i], p.region.edge(y0), rtol=0, atol=1e-12):
        def neg(y):
            zz = np.array([p.region.edge(y) + 1j * y])
            return -float(abs_of(cauchy_closed_many(mu, zz)[0])[0]
                          * (1.0 + abs(y)) ** (-p.alpha))
        ys = np.unique(z.imag)
        j = int(np.searchsorted(ys, y0))
        lo, hi = ys[max(j - 1, 0)], ys[min(j + 1, ys.size - 1)]
        if hi > lo:
            res = optimize.minimize_scalar(neg, bounds=(lo, hi), method="bounded",
                                           options={"xatol": 1e-12 * max(1.0, abs(hi))})
            sup_c = max(sup_c, -float(res.fun))
    lap = abs_of(laplace_many(mu, t)[0])
    j = int(np.argmax(lap))
    sup_l = float(lap[j])
    lo, hi = t[max(j - 1, 0)], t[min(j + 1, t.size - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(lambda s: -float(abs_of(laplace_many(mu, [s])[0])[0]),
                                       bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-10 * max(1.0, hi)})
        sup_l = max(sup_l, -float(res.fun))
    return sup_l + sup_c


def orbit_lower_bound(mu: BTMeasure) -> float:
    """``|N(k)|``: lower bound for ``||T(k) A^{-1} f||`` with ``f = L mu``."""
    return float(abs_of(n_transform_many(mu, [float(mu.k)])[0])[0])
