"""Optional numba acceleration.

Set FROBREL_NO_NUMBA=1 to force the pure-numpy kernels even when numba
is installed. The flag is read once, at import time.
"""

import os


def _noop_jit(*args, **kwargs):
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def _flag(name):
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


DISABLED = _flag("FROBREL_NO_NUMBA")

try:
    if DISABLED:
        raise ImportError("numba disabled by FROBREL_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    njit = _noop_jit
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED
