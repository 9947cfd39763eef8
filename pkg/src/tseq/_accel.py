"""Optional numba acceleration.

Set ``TSEQ_DISABLE_NUMBA=1`` to force the pure-numpy kernels.
"""
import os

_disabled = os.environ.get("TSEQ_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _disabled:
        raise ImportError("numba disabled by TSEQ_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorator(func):
            return func

        return decorator

# int64 kernels are only used when every operand stays below this bound.
INT64_SAFE = 2**62
