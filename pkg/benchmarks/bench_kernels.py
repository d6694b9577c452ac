"""Time the compiled kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from semidecay import _kernels_py

try:
    from semidecay import _ckernels
except ImportError:
    _ckernels = None


def _cases():
    rng = np.random.default_rng(0)
    re, im = rng.standard_normal(100_000), rng.standard_normal(100_000)
    rows_re, rows_im = rng.standard_normal((2000, 64)), rng.standard_normal((2000, 64))
    lam = -np.geomspace(1e-6, 1.0, 2000)
    inv_pow = np.geomspace(1.0, 1e-6, 2000)
    t = np.geomspace(1e-3, 1e6, 500)
    return {
        "compensated_sum (1e5)": lambda m: m.compensated_sum(re, im),
        "compensated_rows (2000x64)": lambda m: m.compensated_rows(rows_re, rows_im),
        "golden_curve_dist (x200)": lambda m: [m.golden_curve_dist(b, 0.1, 1.0, 1.0, 0.0, 50.0, 1e-12, 200)
                                               for b in np.linspace(0, 40, 200)],
        "golden_orbit (x200)": lambda m: [m.golden_orbit(t_, 1.0, 1.0, 0.0, 1e7, 1e-9, 200)
                                          for t_ in np.geomspace(1, 1e6, 200)],
        "block_sweep (2000 eig x 500 t)": lambda m: m.block_sweep(lam, inv_pow, t),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first")
    print(f"{'kernel':32s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, fn in _cases().items():
        py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat)) * 1e3
        if _ckernels is None:
            print(f"{name:32s} {py:12.2f} {'-':>12s} {'-':>8s}")
            continue
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:32s} {py:12.2f} {cy:12.2f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
