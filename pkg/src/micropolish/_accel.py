"""Backend selection for the hot kernels.

Kernels are written once as plain Python loops and compiled with
``numba.njit`` when numba is importable and ``MICROPOLISH_NO_NUMBA`` is
unset.  Every compiled kernel has a vectorised numpy twin used when the
numba backend is disabled, so both paths stay testable side by side.
"""
from __future__ import annotations

import os

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

_DISABLED = os.environ.get("MICROPOLISH_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

HAVE_NUMBA = _numba is not None
DEFAULT_BACKEND = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"
BACKENDS = ("numba", "numpy")


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity otherwise."""
    if _numba is None:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    return _numba.njit(*args, **kwargs)


def resolve_backend(backend: str | None) -> str:
    if backend is None:
        return DEFAULT_BACKEND
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend
