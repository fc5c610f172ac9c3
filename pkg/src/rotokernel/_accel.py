"""Backend switch for the numeric kernels.

Set ``ROTOKERNEL_NUMBA=0`` before import to force the pure-numpy path.
"""
import os

_flag = os.environ.get("ROTOKERNEL_NUMBA", "1").strip().lower()
_wanted = _flag not in ("0", "false", "no", "off")

try:
    if not _wanted:
        raise ImportError
    from numba import njit as _njit

    USE_NUMBA = True
except ImportError:
    USE_NUMBA = False


def maybe_njit(fn):
    """Compile ``fn`` with numba when the backend is enabled, else return it unchanged."""
    if USE_NUMBA:
        return _njit(cache=True, fastmath=False)(fn)
    return fn


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
