"""Optional numba acceleration.

Set ``TOPOGRAPH_DISABLE_NUMBA=1`` before import to run every kernel as plain
Python/numpy. Results are identical on both paths; only speed differs.
"""

from __future__ import annotations

import os

_DISABLED = os.environ.get("TOPOGRAPH_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator.

    The undecorated function stays reachable as ``.py_func`` on both paths so
    tests and benchmarks can call the fallback explicitly.
    """
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)

    def wrap(func):
        func.py_func = func
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return wrap(args[0])
    return wrap


def backend() -> str:
    return "numba" if HAVE_NUMBA else "python"
