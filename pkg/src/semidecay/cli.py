"""Command-line front end: ``semidecay {rates,mult,block,measure,fn,verify}``.

Exit status: 0 when every check passes, 1 when a check fails, 2 for an
invalid configuration.  Each run writes ``<command>_report.json`` (and
CSV curves where relevant) to ``--out``, which defaults to
``$SEMIDECAY_OUT`` or the current directory.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import blocksg as bs
from . import btmeasure as bt
from . import cexfn as cx
from . import multsg as ms
from . import rates as rt
from . import suites

SCHEMA = "semidecay.report/1"
OUT_ENV = "SEMIDECAY_OUT"
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    out: str = "."
    jobs: int = 1

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> RunConfig:
        return cls(**json.loads(text))

    def report_view(self) -> dict:
        # output path and parallelism do not affect results, so they stay
        # out of the report to keep it identical across machines
        return {"command": self.command, "params": self.params}


# ------------------------------------------------------------------ parsing

def _floats(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _positive(text: str) -> float:
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _count(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _measure_args(p: argparse.ArgumentParser, H_default: str):
    p.add_argument("--alpha", type=_positive, default=1.0)
    p.add_argument("--beta", type=_positive, default=1.0)
    p.add_argument("--psi", type=_positive, default=0.4)
    p.add_argument("--H", type=_floats, default=_floats(H_default), help="comma-separated H ladder")
    p.add_argument("--Q", type=_positive, default=1.0)
    p.add_argument("--eps", type=_positive, default=0.1)
    p.add_argument("--B-cap", dest="b_cap", type=_positive, default=bt.B_CAP)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semidecay", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or .)")
    common.add_argument("--jobs", type=_count, default=os.cpu_count() or 1)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rates", parents=[common], help="decay envelope C / M_log^-1(t/C)")
    p.add_argument("--C", type=_positive, default=1.0)
    p.add_argument("--alpha", type=_positive, default=1.0)
    p.add_argument("--t", type=_floats, default=_floats("1000"))
    p.add_argument("--table", default=None, help="two-column CSV (eta, M) instead of (1+eta)^alpha")

    p = sub.add_parser("mult", parents=[common], help="multiplication-semigroup oracle curves")
    p.add_argument("--alpha", type=_positive, default=1.0)
    p.add_argument("--t", type=_floats, default=_floats("1,10,100,1000,10000,100000,1000000"))
    p.add_argument("--s", type=_floats, default=_floats("1,10,100,1000,10000"))

    p = sub.add_parser("block", parents=[common], help="block semigroup sweep")
    p.add_argument("--alpha", type=_positive, default=1.0)
    p.add_argument("--n", type=_count, default=2000, help="number of on-curve eigenvalues")
    p.add_argument("--y-max", dest="y_max", type=_positive, default=1e6)
    p.add_argument("--t-max", dest="t_max", type=_positive, default=1e6)
    p.add_argument("--t-points", dest="t_points", type=_count, default=3000)

    p = sub.add_parser("measure", parents=[common], help="certify bounds X1-X6 over an H ladder")
    _measure_args(p, "10,20,40,80")

    p = sub.add_parser("fn", parents=[common], help="multi-stage sharpness construction")
    p.add_argument("--alpha", type=_positive, default=1.0)
    p.add_argument("--beta", type=_positive, default=1.0)
    p.add_argument("--psi", type=_positive, default=0.4)
    p.add_argument("--stages", type=_count, default=4)
    p.add_argument("--gamma", choices=sorted(cx.GAMMAS), default="log")
    p.add_argument("--certify", action="store_true", help="attach X-certificates per stage")

    p = sub.add_parser("verify", parents=[common], help="run every property suite")
    _measure_args(p, "10,20,40,80")
    p.add_argument("--fn-stages", dest="fn_stages", type=int, default=4,
                   help="stages for the construction suite (0 skips it)")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(ns).items() if k not in ("command", "out", "jobs")}
    out = ns.out or os.environ.get(OUT_ENV) or "."
    return RunConfig(ns.command, params, out, ns.jobs)


# ------------------------------------------------------------------ helpers

@contextmanager
def _mapper(jobs: int):
    if jobs <= 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        yield ex.map


def _write_csv(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def _finish(cfg: RunConfig, results: dict, checks: list[dict]) -> int:
    ok = all(c["pass"] for c in checks)
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "config": cfg.report_view(),
        "results": suites._clean(results),
        "checks": checks,
        "pass": ok,
    }
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{cfg.command}_report.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    failed = [c["name"] for c in checks if not c["pass"]]
    print(f"{cfg.command}: {len(checks) - len(failed)}/{len(checks)} checks passed -> {path}")
    for name in failed:
        print(f"  FAIL {name}")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- commands

def cmd_rates(cfg: RunConfig) -> int:
    p = cfg.params
    if p["table"]:
        M = rt.TabulatedRate.from_csv(p["table"])
    else:
        M = rt.PolynomialRate(1.0, p["alpha"])
    rows, checks = [], []
    for t in p["t"]:
        b = rt.bd_bound(M, p["C"], t)
        eta = p["C"] / b if math.isfinite(b) and b > 0 else 0.0
        ref = rt.poly_decay_bound(p["alpha"], t) if t >= 2 else math.nan
        rows.append({"t": t, "bd_bound": b, "poly_decay_bound": ref,
                     "extrapolated": M.extrapolated(eta)})
        print(f"t = {t:.6g}  bd_bound = {b:.12g}")
        back = rt.m_log(M, eta)
        checks.append(suites.check(f"rates.t{t:g}.inverse", abs(back - t / p["C"]) <= 1e-9 * max(1.0, t / p["C"]),
                                   residual=back - t / p["C"]))
    return _finish(cfg, {"rows": rows}, checks)


def cmd_mult(cfg: RunConfig) -> int:
    p = cfg.params
    rep = ms.semigroup_equivalence_report(ms.MultModel(p["alpha"]), p["t"], p["s"])
    d = rep.to_dict()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, rows in rep.curves.items():
        _write_csv(out / f"mult_{name}.csv", ["x", "value", "reference", "ratio"], rows)
    checks = []
    for name, stats in rep.tail_stats.items():
        finite = stats is not None and 0 < stats["inf"] <= stats["sup"] < math.inf
        checks.append(suites.check(f"mult.{name}.bounded_ratio", finite, **(stats or {})))
    return _finish(cfg, d, checks)


def cmd_block(cfg: RunConfig) -> int:
    p = cfg.params
    t = np.concatenate([[0.0], np.geomspace(1e-3, p["t_max"], p["t_points"])])
    sups = []
    for n in (p["n"], 2 * p["n"]):
        mdl = bs.DiagonalModel.log_spaced(p["alpha"], n, p["y_max"])
        blk, cor = bs.block_sweep(mdl, t)
        sups.append(float(blk.max()))
        if n == p["n"]:
            base = (blk, cor)
    blk, cor = base
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "block_curves.csv", ["t", "block_norm", "t_corner", "reference"],
               zip(t, blk, t * cor, np.full(t.shape, sups[0])))
    delta = abs(sups[1] - sups[0]) / sups[0]
    checks = [
        suites.check("block.bounded", math.isfinite(sups[0]) and delta <= 0.05,
                     sup=sups[0], sup_doubled=sups[1], rel_change=delta),
        suites.check("block.corner_domination", bool(np.all(t * cor - 1.0 <= blk * (1 + 1e-12)))),
    ]
    return _finish(cfg, {"sup": sups[0], "sup_doubled": sups[1]}, checks)


def _transform_csv(mu: bt.BTMeasure, path: Path):
    t = bt.default_grids(mu).t
    t = t[t > 0]
    lap = bt.laplace_many(mu, t)[0] / math.log(10)
    nt = bt.n_transform_many(mu, t)[0] / math.log(10)
    env = np.where(t >= 2, np.log10(np.maximum(np.log(t), 1e-300) / t) / mu.params.alpha, np.nan)
    _write_csv(path, ["t", "log10_abs_L", "log10_abs_N", "log10_envelope"], zip(t, lap, nt, env))


def cmd_measure(cfg: RunConfig) -> int:
    p = cfg.params
    for H in p["H"]:
        bt.make_params(p["alpha"], p["beta"], H, p["psi"], p["Q"], p["eps"])
    with _mapper(cfg.jobs) as mapper:
        checks, per_H = suites.measure_suite(p["alpha"], p["beta"], p["psi"], p["H"], p["Q"],
                                             p["eps"], p["b_cap"], mapper=mapper)
    checks = [c for c in checks if not c["name"].startswith("measure.roots")]
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for H in p["H"]:
        mu = bt.build(p["alpha"], p["beta"], H, p["psi"], p["Q"], p["eps"])
        _transform_csv(mu, out / f"measure_H{H:g}_transforms.csv")
    return _finish(cfg, {"ladder": per_H}, checks)


def cmd_fn(cfg: RunConfig) -> int:
    p = cfg.params
    fn = cx.construct(p["alpha"], p["beta"], p["psi"], p["stages"], p["gamma"])
    rec = cx.run_record(fn, certify=p["certify"])
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    cx.write_curves(fn, out / "fn_curves.csv")
    ks = [s.k for s in fn.stages]
    checks = [
        suites.check("fn.k_increasing", all(a < b for a, b in zip(ks, ks[1:])), k=ks),
        suites.check("fn.thresholds", all(s.Q > q.k for q, s in zip(fn.stages, fn.stages[1:]))),
        suites.check("fn.sharpness", rec["c3"] > 0, c3=rec["c3"]),
        suites.check("fn.envelope", rec["envelope"]["pass"], **rec["envelope"]),
    ]
    if p["certify"]:
        for st in rec["stages"]:
            for c in st["certificates"]:
                checks.append(suites.check(f"fn.stage{st['n']}.{c['bound_id']}", c["pass"],
                                           B_empirical=c["B_empirical"]))
    return _finish(cfg, rec, checks)


def cmd_verify(cfg: RunConfig) -> int:
    p = cfg.params
    for H in p["H"]:
        bt.make_params(p["alpha"], p["beta"], H, p["psi"], p["Q"], p["eps"])
    seed = p["seed"]
    checks = []
    checks += suites.logcomplex_suite(seed)
    checks += suites.rates_suite(seed)
    checks += suites.omega_suite(seed)
    checks += suites.mult_suite(seed)
    checks += suites.block_suite(p["alpha"])
    with _mapper(cfg.jobs) as mapper:
        mchecks, per_H = suites.measure_suite(p["alpha"], p["beta"], p["psi"], p["H"], p["Q"],
                                              p["eps"], p["b_cap"], mapper=mapper)
    checks += mchecks
    results = {"ladder": per_H}
    if p["fn_stages"] > 0:
        fchecks, rec = suites.fn_suite(p["alpha"], p["beta"], p["psi"], p["fn_stages"])
        checks += fchecks
        results["fn"] = rec
    return _finish(cfg, results, checks)


COMMANDS = {"rates": cmd_rates, "mult": cmd_mult, "block": cmd_block,
            "measure": cmd_measure, "fn": cmd_fn, "verify": cmd_verify}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = _config(ns)
    try:
        return COMMANDS[cfg.command](cfg)
    except (bt.ConstraintError, rt.RateDomainError, ConfigError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"semidecay {cfg.command}: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (cx.StageBudgetError, cx.ThresholdSearchError) as exc:
        print(f"semidecay {cfg.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
