import importlib

import pytest

from semidecay import _kernels_py, kernels

KERNEL_NAMES = ("compensated_sum", "compensated_rows", "golden_curve_dist",
                "golden_orbit", "block_sweep")


def _available():
    out = ["python"]
    try:
        importlib.import_module("semidecay._ckernels")
        out.append("cython")
    except ImportError:
        pass
    return out


BACKENDS = _available()


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per kernel backend by swapping the dispatch table."""
    if request.param == "python":
        for name in KERNEL_NAMES:
            monkeypatch.setattr(kernels, name, getattr(_kernels_py, name))
    return request.param
