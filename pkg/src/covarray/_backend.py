"""Kernel backend selection.

Hot loops (coverage scans, rank scans, circle-triple intersection) exist in
two implementations: numba-jitted kernels and pure-numpy fallbacks.  The
active backend is chosen per call from the environment:

    COVARRAY_BACKEND=auto    use numba when importable (default)
    COVARRAY_BACKEND=numba   require numba, fail if missing
    COVARRAY_BACKEND=numpy   force the pure-numpy path

Both implementations expose the same functions with identical semantics;
``benchmarks/bench_backends.py`` times one against the other.
"""
from __future__ import annotations

import os
import warnings

try:
    import numba  # noqa: F401
    # the threading-layer probe warns about stale TBB at first parallel
    # launch; workqueue/omp are used instead, so silence just that advisory
    warnings.filterwarnings(
        "ignore", message=".*TBB_INTERFACE_VERSION.*",
        category=numba.NumbaWarning)
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

_ENV_VAR = "COVARRAY_BACKEND"
_THREADS_VAR = "COVARRAY_THREADS"


def backend_name() -> str:
    """Resolve the active backend name ("numba" or "numpy")."""
    raw = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if raw in ("", "auto"):
        return "numba" if _HAVE_NUMBA else "numpy"
    if raw == "numba":
        if not _HAVE_NUMBA:
            raise RuntimeError("COVARRAY_BACKEND=numba but numba is not installed")
        return "numba"
    if raw == "numpy":
        return "numpy"
    raise RuntimeError(f"unknown COVARRAY_BACKEND value: {raw!r}")


def get_kernels():
    """Return the kernel module for the active backend."""
    if backend_name() == "numba":
        from . import _kernels_numba
        return _kernels_numba
    from . import _kernels_numpy
    return _kernels_numpy


def default_threads() -> int:
    env = os.environ.get(_THREADS_VAR, "").strip()
    if env:
        try:
            n = int(env)
            if n >= 1:
                return n
        except ValueError:
            pass
    return os.cpu_count() or 1


def set_threads(n: int | None) -> int:
    """Apply a thread count to the numba layer; returns the effective value."""
    n = n if n and n >= 1 else default_threads()
    if _HAVE_NUMBA:
        try:
            import numba
            n = min(n, numba.config.NUMBA_NUM_THREADS)
            numba.set_num_threads(n)
        except Exception:  # pragma: no cover
            pass
    return n
