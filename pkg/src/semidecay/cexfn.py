"""Multi-stage function ``f = sum_n phi_n gamma(k_n)^(1/alpha) L mu_n``.

Each stage is an atomic measure from :mod:`btmeasure`; thresholds ``Q_n``
are found by a doubling probe search, and unit phases ``phi_n`` line up
the stage contributions to the tail at ``t = k_n`` so their moduli add.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np

from . import btmeasure as bt
from . import logcomplex as lc
from .btmeasure import BTMeasure
from .omega import contains_many

MAX_DOUBLINGS = 60
PROBES_PER_ANNULUS = 512
MIN_H = 10.0
MAX_K = 10_000_000


def gamma_log(t):
    """Default weight ``1/log(e + t)``."""
    return 1.0 / np.log(math.e + np.asarray(t, dtype=float))


def gamma_one(t):
    return np.ones_like(np.asarray(t, dtype=float))


GAMMAS: dict[str, Callable] = {"log": gamma_log, "one": gamma_one}


class ThresholdSearchError(RuntimeError):
    """Q-search did not find a passing threshold within the doubling budget."""


class StageBudgetError(RuntimeError):
    """Next stage would need more atoms than the desk-scale budget allows."""


@dataclass(frozen=True)
class CexStage:
    index: int
    Q: float
    eps: float
    measure: BTMeasure
    phi: complex = 1.0 + 0.0j

    @property
    def k(self) -> int:
        return self.measure.k

    @property
    def H(self) -> float:
        return self.measure.params.H


@dataclass(frozen=True)
class CexFunction:
    alpha: float
    beta: float
    psi: float
    gamma_name: str = "log"
    stages: tuple[CexStage, ...] = ()

    def __post_init__(self):
        if self.gamma_name not in GAMMAS:
            raise ValueError(f"unknown gamma {self.gamma_name!r}; choose from {sorted(GAMMAS)}")

    @property
    def gamma(self) -> Callable:
        return GAMMAS[self.gamma_name]

    def coeff(self, n: int) -> float:
        """``gamma(k_n)^(1/alpha)`` for stage ``n`` (1-based)."""
        k = self.stages[n - 1].k
        return float(self.gamma(k)) ** (1.0 / self.alpha)


def start(alpha: float, beta: float, psi: float, gamma: str = "log") -> CexFunction:
    if not beta > alpha / 2:
        raise bt.ConstraintError("beta > alpha/2", f"got alpha = {alpha}, beta = {beta}")
    if not 0 < psi < beta - alpha / 2:
        raise bt.ConstraintError("0 < psi < beta - alpha/2", f"got psi = {psi}")
    return CexFunction(float(alpha), float(beta), float(psi), gamma)


# ---------------------------------------------------------- threshold search

def _probe_z(mu: BTMeasure, Q: float) -> np.ndarray:
    p = mu.params
    region = p.region
    r_max = 100.0 * max(Q, p.H ** 2)
    n_ann = max(1, math.ceil(math.log2(r_max / Q)))
    pts = []
    for j in range(n_ann):
        lo, hi = Q * 2.0 ** j, Q * 2.0 ** (j + 1)
        y = np.linspace(lo, hi, PROBES_PER_ANNULUS)
        pts.append(region.edge(y) + 1j * y)
    y = np.concatenate(pts)
    zb = np.concatenate([y, np.conj(y)])
    theta = np.linspace(-np.pi / 2, np.pi / 2, 25)
    radii = np.geomspace(Q * (1 + 1e-9), r_max, 256)
    zr = (radii[None, :] * np.exp(1j * theta[:, None])).ravel()
    zr = zr[contains_many(region, zr)]
    z = np.concatenate([zb, zr])
    return z[np.abs(z) > Q]


def _probe_t(mu: BTMeasure, Q: float) -> np.ndarray:
    t_max = max(10.0 * mu.params.A, 4.0 * Q)
    return np.geomspace(Q * (1 + 1e-9), t_max, 2048)


def probes_pass(mu: BTMeasure, Q: float, eps: float) -> bool:
    """``|C mu| <= eps`` and ``|L mu| <= eps`` on probes beyond ``Q``."""
    c = bt.abs_of(bt.cauchy_closed_many(mu, _probe_z(mu, Q))[0])
    if np.any(c > eps):
        return False
    lap = bt.abs_of(bt.laplace_many(mu, _probe_t(mu, Q))[0])
    return not np.any(lap > eps)


def next_threshold(stage: CexStage) -> float:
    Q = 2.0 * stage.k
    for _ in range(MAX_DOUBLINGS):
        if probes_pass(stage.measure, Q, stage.eps):
            return Q
        Q *= 2.0
    raise ThresholdSearchError(
        f"stage {stage.index}: probes still fail at Q = {Q:.6g} after "
        f"{MAX_DOUBLINGS} doublings (k = {stage.k}, eps = {stage.eps})")


# ------------------------------------------------------------------- stages

def _term_at(stage: CexStage, coeff: float, t: float) -> lc.LogComplex:
    v = bt.n_transform(stage.measure, t)
    return lc.mul(v, lc.from_cartesian(stage.phi * coeff))


def choose_phase(fn: CexFunction, m: int) -> complex:
    """Unit phase aligning stage ``m``'s tail term at ``k_m`` with the earlier stages."""
    if m == 1:
        return 1.0 + 0.0j
    st = fn.stages[m - 1]
    t = float(st.k)
    prev = lc.lsum(_term_at(s, fn.coeff(i + 1), t) for i, s in enumerate(fn.stages[:m - 1]))
    if prev.is_zero:
        return 1.0 + 0.0j
    own = bt.n_transform(st.measure, t)
    if own.is_zero:
        return 1.0 + 0.0j
    ang = lc.wrap(prev.phase - own.phase)
    return complex(math.cos(ang), math.sin(ang))


def extend(fn: CexFunction) -> CexFunction:
    n = len(fn.stages) + 1
    if n == 1:
        Q = 1.0
    else:
        Q = next_threshold(fn.stages[-1])
        if not Q > fn.stages[-1].k:
            raise AssertionError("threshold must exceed previous k")
    eps = 2.0 ** (-n)
    H = bt.smallest_valid_H(fn.alpha, fn.beta, fn.psi, Q, start=max(MIN_H, 2.0 * Q))
    k = bt.choose_k(fn.alpha, H, fn.psi)
    if k > MAX_K:
        raise StageBudgetError(f"stage {n} needs k = {k} > {MAX_K} atoms (H = {H:.6g})")
    mu = bt.build(fn.alpha, fn.beta, H, fn.psi, Q, eps)
    grown = replace(fn, stages=fn.stages + (CexStage(n, Q, eps, mu),))
    phi = choose_phase(grown, n)
    stages = grown.stages[:-1] + (replace(grown.stages[-1], phi=phi),)
    return replace(fn, stages=stages)


def construct(alpha: float, beta: float, psi: float, n_stages: int = 4,
              gamma: str = "log") -> CexFunction:
    fn = start(alpha, beta, psi, gamma)
    for _ in range(n_stages):
        fn = extend(fn)
    return fn


# --------------------------------------------------------------- evaluation

def _combine(fn: CexFunction, per_stage) -> np.ndarray:
    """Sum ``phi_n c_n v_n`` over stages given per-stage ``(log_mag, phase)`` arrays."""
    lms, phs = [], []
    for i, (st, (lm, ph)) in enumerate(zip(fn.stages, per_stage)):
        c = fn.coeff(i + 1)
        lms.append(lm + math.log(c))
        phs.append(ph + math.atan2(st.phi.imag, st.phi.real))
    lm, ph = lc.sum_rows(np.stack(lms, axis=1), np.stack(phs, axis=1))
    with np.errstate(under="ignore"):
        return np.exp(lm) * np.exp(1j * ph)


def _need_stages(fn):
    if not fn.stages:
        raise ValueError("function has no stages")


def eval_f_many(fn: CexFunction, t) -> np.ndarray:
    _need_stages(fn)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return _combine(fn, [bt.laplace_many(s.measure, t) for s in fn.stages])


def eval_f(fn: CexFunction, t: float) -> complex:
    return complex(eval_f_many(fn, [t])[0])


def eval_fhat_many(fn: CexFunction, z) -> np.ndarray:
    _need_stages(fn)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    region = fn.stages[0].measure.params.region
    if not np.all(contains_many(region, z)):
        raise bt.ConstraintError("z in Omega", "eval_fhat needs points inside Omega")
    return _combine(fn, [bt.cauchy_closed_many(s.measure, z) for s in fn.stages])


def eval_fhat(fn: CexFunction, z: complex) -> complex:
    return complex(eval_fhat_many(fn, [z])[0])


def tail_many(fn: CexFunction, t) -> np.ndarray:
    """``fhat(0) - int_0^t f = -sum_n phi_n c_n N mu_n(t)``."""
    _need_stages(fn)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return -_combine(fn, [bt.n_transform_many(s.measure, t) for s in fn.stages])


def tail(fn: CexFunction, t: float) -> complex:
    return complex(tail_many(fn, [t])[0])


@dataclass(frozen=True)
class SharpnessTerms:
    m: int
    k: int
    ratio: float
    main: float
    correction: float

    def to_dict(self) -> dict:
        return {"m": self.m, "k": self.k, "ratio": self.ratio, "main": self.main,
                "correction": self.correction}


def sharpness_terms(fn: CexFunction, m: int) -> SharpnessTerms:
    """Raw ratio ``k/(gamma(k) log k) |tail(k)|^alpha`` at ``k = k_m``.

    ``main`` keeps only stage ``m``'s own contribution; ``correction`` is
    the remainder contributed by the other stages.
    """
    st = fn.stages[m - 1]
    k = st.k
    scale = k / (float(fn.gamma(k)) * math.log(k))
    raw = scale * abs(tail(fn, float(k))) ** fn.alpha
    own = fn.coeff(m) * bt.abs_of(bt.n_transform(st.measure, float(k)).log_mag)
    main = scale * float(own) ** fn.alpha
    return SharpnessTerms(m, k, raw, main, raw - main)


def sharpness_ratio(fn: CexFunction, m: int) -> float:
    return sharpness_terms(fn, m).ratio


def stage_window(st: CexStage, n: int = 400) -> np.ndarray:
    return np.linspace(max(2.0, 0.5 * st.k), 2.0 * st.k, n)


def envelope(alpha: float, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return (np.log(t) / t) ** (1.0 / alpha)


@dataclass
class EnvelopeCheck:
    C_env: float
    window_max: list[float]
    passed: bool

    def to_dict(self) -> dict:
        return {"C_env": self.C_env, "window_max": self.window_max, "pass": self.passed}


def envelope_check(fn: CexFunction, n: int = 400) -> EnvelopeCheck:
    """Scale the envelope on stage 1's window; every later window must sit below it."""
    ratios = []
    for st in fn.stages:
        t = stage_window(st, n)
        ratios.append(float(np.max(np.abs(tail_many(fn, t)) / envelope(fn.alpha, t))))
    c_env = ratios[0]
    return EnvelopeCheck(c_env, ratios, all(r <= c_env * (1 + 1e-12) for r in ratios))


def midpoint_values(fn: CexFunction) -> list[dict]:
    """``(t/log t)|tail(t)|^alpha`` at ``t = sqrt(k_m k_{m+1})``."""
    out = []
    for a, b in zip(fn.stages, fn.stages[1:]):
        t = math.sqrt(a.k * b.k)
        out.append({"t": t, "value": t / math.log(t) * abs(tail(fn, t)) ** fn.alpha})
    return out


# ------------------------------------------------------------------ records

def run_record(fn: CexFunction, certify: bool = True) -> dict:
    ratios = [sharpness_terms(fn, m).to_dict() for m in range(1, len(fn.stages) + 1)]
    stages = []
    for st in fn.stages:
        d = {"n": st.index, "Q": st.Q, "eps": st.eps, "H": st.H, "k": st.k,
             "phi": {"re": st.phi.real, "im": st.phi.imag},
             "params": st.measure.params.to_dict()}
        if certify:
            d["certificates"] = [c.to_dict() for c in bt.certify_bounds(st.measure)]
        stages.append(d)
    c3 = min(r["ratio"] for r in ratios) if ratios else None
    return {
        "alpha": fn.alpha, "beta": fn.beta, "psi": fn.psi, "gamma": fn.gamma_name,
        "stages": stages, "ratios": ratios, "c3": c3,
        "envelope": envelope_check(fn).to_dict(),
        "midpoints": midpoint_values(fn),
    }


def write_curves(fn: CexFunction, path, n: int = 400) -> Path:
    """CSV ``t, |f|, |tail|, envelope`` over all stage windows."""
    chk = envelope_check(fn, n)
    t = np.unique(np.concatenate([stage_window(st, n) for st in fn.stages]))
    f = np.abs(eval_f_many(fn, t))
    tl = np.abs(tail_many(fn, t))
    env = chk.C_env * envelope(fn.alpha, t)
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "abs_f", "abs_tail", "envelope"])
        for row in zip(t, f, tl, env):
            w.writerow([repr(float(v)) for v in row])
    return path


def dumps(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=True, allow_nan=True)
