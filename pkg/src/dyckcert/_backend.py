"""Kernel backend selection.

``DYCKCERT_BACKEND=numpy`` forces the pure numpy/Python kernels; the default
is ``numba`` whenever numba imports.  The choice is made once, at import.
"""
import os
import warnings

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn


def _select() -> str:
    wanted = os.environ.get("DYCKCERT_BACKEND", "").strip().lower()
    if wanted in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if wanted not in ("numba", "numpy"):
        raise ValueError(f"DYCKCERT_BACKEND must be 'numba' or 'numpy', not {wanted!r}")
    if wanted == "numba" and not HAVE_NUMBA:  # pragma: no cover
        warnings.warn("numba is not importable; using the numpy kernels")
        return "numpy"
    return wanted


BACKEND = _select()
USE_NUMBA = BACKEND == "numba"

__all__ = ["BACKEND", "HAVE_NUMBA", "USE_NUMBA", "njit"]
