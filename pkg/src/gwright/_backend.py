"""Select the compiled kernels when available, else the numpy fallback.

Set ``GWRIGHT_PURE_PYTHON=1`` to force the fallback (used by the benchmark and
by the backend-equivalence tests).
"""
import os

from . import _kernels_py

BACKEND = "python"
loggamma = _kernels_py.loggamma
mb_sum = _kernels_py.mb_sum

if os.environ.get("GWRIGHT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        loggamma = _compiled.loggamma
        mb_sum = _compiled.mb_sum


def thread_cap():
    """Worker cap from ``GWRIGHT_THREADS`` (default: CPU count, at least 1)."""
    raw = os.environ.get("GWRIGHT_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)
