"""Backend selection for the hot loops.

The compiled extension is used when it imports; set
``SEMIDECAY_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
import os

from . import _kernels_py

if os.environ.get("SEMIDECAY_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

compensated_sum = _impl.compensated_sum
compensated_rows = _impl.compensated_rows
golden_curve_dist = _impl.golden_curve_dist
golden_orbit = _impl.golden_orbit
block_sweep = _impl.block_sweep

__all__ = [
    "BACKEND",
    "compensated_sum",
    "compensated_rows",
    "golden_curve_dist",
    "golden_orbit",
    "block_sweep",
]
