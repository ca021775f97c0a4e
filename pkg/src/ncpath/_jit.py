"""Numba switch.

Set ``NCPATH_DISABLE_NUMBA=1`` to run every kernel as plain Python over numpy
arrays. Compiled kernels keep the interpreted body reachable as ``.py_func``,
which the backend benchmark uses to time both paths side by side.
"""

import os

DISABLED = os.environ.get("NCPATH_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

ENABLED = numba is not None and not DISABLED


def _identity(func):
    func.py_func = func
    return func


def njit(*args, **kwargs):
    if not ENABLED:
        if args and callable(args[0]):
            return _identity(args[0])
        return _identity
    kwargs.setdefault("cache", True)
    if args and callable(args[0]):
        return numba.njit(**kwargs)(args[0])
    return numba.njit(*args, **kwargs)


def backend():
    return "numba" if ENABLED else "python"
