"""Optional numba acceleration.

Kernels in :mod:`virial_ansatz._kernels` are written twice: a vectorized
numpy version and a loop version compiled with ``numba.njit``.  The loop
version is used when numba imports cleanly and the environment variable
``VIRIAL_ANSATZ_NUMBA`` is not set to ``0``/``false``/``off``.
"""
import os

_DISABLED = os.environ.get("VIRIAL_ANSATZ_NUMBA", "1").strip().lower() in {
    "0",
    "false",
    "off",
    "no",
}

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is optional
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED


def njit(*args, **kwargs):
    """``numba.njit(cache=True)`` when numba is available, else identity."""
    if not HAVE_NUMBA:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return numba.njit(*args, **kwargs)
