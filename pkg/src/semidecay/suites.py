"""Property suites aggregated by ``semidecay verify``.

Every check returns a plain dict ``{"name", "pass", "detail"}`` built from
deterministic inputs (fixed grids, seeded generators) so that repeated
runs serialise to identical JSON.
"""
from __future__ import annotations

import math

import numpy as np

from . import blocksg as bs
from . import btmeasure as bt
from . import cexfn as cx
from . import logcomplex as lc
from . import multsg as ms
from . import omega as om
from . import rates as rt

# largest brute-sum condition number at which an identity is compared
COND_MAX = 1e4


def check(name: str, passed: bool, **detail) -> dict:
    return {"name": name, "pass": bool(passed), "detail": _clean(detail)}


def _clean(obj):
    """Make values JSON-friendly (numpy scalars, complex, non-finite floats)."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    return obj


# ---------------------------------------------------------------- logcomplex

def logcomplex_suite(seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed)
    out = []
    prod = lc.to_cartesian(lc.mul(lc.from_cartesian(3 + 4j), lc.from_cartesian(1 - 2j)))
    out.append(check("logcomplex.mul_example", abs(prod - (11 - 2j)) <= 1e-13 * abs(11 - 2j),
                     value=prod))
    k = 7
    roots = [lc.exp_c(2j * math.pi * s / k) for s in range(1, k + 1)]
    r = lc.lsum(roots)
    out.append(check("logcomplex.roots_sum_zero", r.is_zero or abs(r) <= 1e-14, abs_value=abs(r)))
    z = (rng.standard_normal(1000) + 1j * rng.standard_normal(1000)) * 10.0 ** rng.uniform(-200, 200, 1000)
    err = max(abs(lc.to_cartesian(lc.from_cartesian(v)) - v) / abs(v) for v in z)
    out.append(check("logcomplex.round_trip", err <= 1e-13, max_rel_err=err))
    lm = rng.uniform(-600, 600, (200, 2))
    ph = rng.uniform(-math.pi, math.pi, (200, 2))
    worst = 0.0
    for i in range(200):
        a, b = lc.LogComplex(lm[i, 0] / 2, ph[i, 0]), lc.LogComplex(lm[i, 1] / 2, ph[i, 1])
        exact = lc.LogComplex(a.log_mag + b.log_mag, a.phase + b.phase)
        got = lc.mul(a, b)
        worst = max(worst, abs(got.log_mag - exact.log_mag), abs(lc.wrap(got.phase - exact.phase)))
    out.append(check("logcomplex.mul_consistency", worst <= 1e-12, max_err=worst))
    return out


# --------------------------------------------------------------------- rates

def rates_suite(seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed)
    out = []
    M = rt.PolynomialRate(1.0, 1.0)
    eta = np.concatenate([[0.0], np.geomspace(1e-6, 1e6, 200)])
    err = max(abs(rt.invert_m_log(M, rt.m_log(M, e)) - e) / max(1.0, e) for e in eta)
    out.append(check("rates.round_trip", err <= 1e-8, max_rel_err=err))
    pairs = np.sort(rng.uniform(0, 1e3, (1000, 2)), axis=1)
    mono = all(rt.m_log(M, a) < rt.m_log(M, b) for a, b in pairs if a < b)
    out.append(check("rates.m_log_increasing", mono))
    for alpha in (1.0, 2.0):
        Ma = rt.PolynomialRate(1.0, alpha)
        ts = np.geomspace(1e2, 1e8, 25)
        vals = [rt.bd_bound(Ma, 1.0, t) * (t / math.log(t)) ** (1.0 / alpha) for t in ts]
        spread = max(vals) / min(vals)
        out.append(check(f"rates.envelope_shape_alpha{alpha:g}", spread <= 10.0, spread=spread))
    return out


# --------------------------------------------------------------------- omega

def omega_suite(seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed)
    reg = om.OmegaRegion(1.0, 1.0)
    out = []
    y = np.linspace(-5, 5, 2_000_001)
    oracle = float(np.min(np.hypot((1 + np.abs(y)) ** -1.0, y)))
    d0 = om.dist_to_S(reg, 0j)
    out.append(check("omega.dist_origin", abs(d0 - oracle) <= 1e-6 and 0 < d0 <= 1,
                     value=d0, oracle=oracle))
    zs = rng.uniform(0, 5, 50) + 1j * rng.uniform(-50, 50, 50)
    sym = max(abs(om.dist_to_S(reg, z) - om.dist_to_S(reg, z.conjugate())) for z in zs)
    out.append(check("omega.conjugate_symmetry", sym <= 1e-12, max_diff=sym))
    far = om.dist_to_S(reg, 1e3 + 0j)
    out.append(check("omega.far_field", abs(far - 1e3) <= 1e-3 * 1e3 + 1.0, value=far))
    return out


# ---------------------------------------------------------------- mult model

def mult_suite(seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed)
    out = []
    m = ms.MultModel(1.0)
    vals = [t * ms.orbit_norm(m, t) for t in (1e3, 1e4, 1e5, 1e6)]
    steps = [abs(b - a) / b for a, b in zip(vals, vals[1:])]
    out.append(check("mult.orbit_constant", max(steps) <= 0.02 and 0 < vals[-1] <= 1,
                     values=vals, constant=vals[-1], claimed=1.0))
    for alpha in (1.0, 2.0):
        ma = ms.MultModel(alpha)
        r = ms.resolvent_norm(ma, 1e4j) / (1 + 1e4) ** alpha
        out.append(check(f"mult.resolvent_growth_alpha{alpha:g}", abs(r - 1) <= 0.05, ratio=r))
    worst, over = 0.0, 0
    for _ in range(100):
        n = int(rng.integers(1, 6))
        eigs = -rng.uniform(0.01, 2, n) + 1j * rng.uniform(-20, 20, n)
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        xi = float(rng.uniform(0.1, 3))
        c = ms.plancherel_criterion_value(eigs, x, xi)
        q = ms.plancherel_quadrature(eigs, x, xi)
        worst = max(worst, abs(c - q) / abs(q))
        over += c > math.pi * float(np.sum(np.abs(x) ** 2)) * (1 + 1e-12)
    out.append(check("mult.plancherel", worst <= 1e-4 and over == 0, max_rel_err=worst,
                     exceed_count=over))
    return out


# --------------------------------------------------------------- block model

def block_suite(alpha: float = 1.0, n: int = 2000) -> list[dict]:
    out = []
    t = np.concatenate([[0.0], np.geomspace(1e-3, 1e6, 3000)])
    s = np.geomspace(1.0, 1e4, 60)
    sups = []
    for count in (n, 2 * n):
        mdl = bs.DiagonalModel.log_spaced(alpha, count, 1e6, extra=s)
        blk, cor = bs.block_sweep(mdl, t)
        sups.append(float(blk.max()))
        if count == n:
            dom = bool(np.all(t * cor - 1.0 <= blk * (1 + 1e-12)))
            ratios = [bs.block_resolvent_norm(mdl, 1j * x)[0] / (1 + x) ** alpha for x in s]
    delta = abs(sups[1] - sups[0]) / sups[0]
    out.append(check("block.bounded", math.isfinite(sups[0]) and delta <= 0.05,
                     sup=sups[0], sup_doubled=sups[1], rel_change=delta))
    out.append(check("block.corner_domination", dom))
    out.append(check("block.resolvent_ratio", 0.1 <= min(ratios) and max(ratios) <= 10,
                     min=min(ratios), max=max(ratios)))
    return out


# ------------------------------------------------------------------- measure

def measure_suite(alpha, beta, psi, H_list, Q=1.0, eps=0.1, b_cap=bt.B_CAP,
                  mapper=map) -> tuple[list[dict], dict]:
    """Certificates per ladder point plus identity and wiring checks.

    ``mapper`` distributes the per-H certification (``map`` or an
    executor's ``map``); it must preserve order.
    """
    jobs = [(alpha, beta, psi, H, Q, eps, b_cap) for H in H_list]
    per_H = list(mapper(certify_one, jobs))
    out = []
    for H, res in zip(H_list, per_H):
        for c in res["certificates"]:
            out.append(check(f"measure.H{H:g}.{c['bound_id']}", c["pass"],
                             B_empirical=c["B_empirical"], worst_point=c["worst_point"]))
    for bid in bt.BOUND_IDS:
        bs_ = [c["B_empirical"] for r in per_H for c in r["certificates"] if c["bound_id"] == bid]
        pos = [b for b in bs_ if b > 0]
        spread = max(pos) / min(pos) if pos else 1.0
        out.append(check(f"measure.{bid}.ladder_spread", spread <= 4.0, spread=spread))
    worst, compared, total = 0.0, 0, 0
    rng = np.random.default_rng(0)
    for k in range(3, 41):
        r = np.exp(rng.uniform(math.log(0.1), math.log(10.0), 25))
        for x in r * np.exp(1j * rng.uniform(-math.pi, math.pi, 25)):
            l1, r1, l2, r2, c1, c2 = bt.roots_identity_check(k, x, with_cond=True)
            total += 1
            if max(c1, c2) <= COND_MAX:
                compared += 1
                worst = max(worst, abs(l1 - r1) / abs(r1), abs(l2 - r2) / abs(r2))
    out.append(check("measure.roots_identity", worst <= 1e-10 and compared >= total // 2,
                     max_rel_err=worst, compared=compared, total=total))
    mu = bt.build(alpha, beta, H_list[0], psi, Q, eps)
    wiring = bt.n_transform(mu, 0.0).is_zero and bt.cauchy_closed(mu, 0j).is_zero
    out.append(check("measure.zero_at_origin", wiring))
    return out, {f"{H:g}": r for H, r in zip(H_list, per_H)}


def certify_one(job):
    alpha, beta, psi, H, Q, eps, b_cap = job
    mu = bt.build(alpha, beta, H, psi, Q, eps)
    certs = bt.certify_bounds(mu, b_cap=b_cap)
    return {"params": mu.params.to_dict(), "certificates": [c.to_dict() for c in certs]}


# ------------------------------------------------------------------ function

def fn_suite(alpha, beta, psi, n_stages=4, gamma="log") -> tuple[list[dict], dict | None]:
    try:
        fn = cx.construct(alpha, beta, psi, n_stages, gamma)
    except (cx.StageBudgetError, cx.ThresholdSearchError) as exc:
        return [check("fn.construct", False, error=str(exc))], None
    rec = cx.run_record(fn, certify=False)
    ks = [s["k"] for s in rec["stages"]]
    out = [check("fn.construct", True, k=ks)]
    out.append(check("fn.k_increasing", all(a < b for a, b in zip(ks, ks[1:]))))
    out.append(check("fn.thresholds", all(s.Q > p.k for p, s in zip(fn.stages, fn.stages[1:]))))
    out.append(check("fn.sharpness", rec["c3"] > 0, c3=rec["c3"]))
    out.append(check("fn.envelope", rec["envelope"]["pass"], **rec["envelope"]))
    return out, rec
