"""Numerical companion for sharp resolvent-based decay rates of semigroups."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
