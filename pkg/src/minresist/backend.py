"""Backend selection for the hot quadrature kernels.

Two implementations of the same kernels exist: a numba @njit version and a
vectorized pure-numpy version.  The environment variable MINRESIST_BACKEND
picks one:

    auto    use numba if it imports, else numpy (default)
    numba   require numba, raise ConfigError if unavailable
    numpy   force the pure-numpy path

Selection is re-read on every call so tests and benchmarks can flip the
flag at runtime.  The numba modules are imported lazily; the first call on
that path pays the JIT cost (cached on disk afterwards).
"""

import os

from .errors import ConfigError

_NUMBA_OK = None  # tri-state: None = not probed yet


def numba_available():
    global _NUMBA_OK
    if _NUMBA_OK is None:
        try:
            import numba  # noqa: F401
            _NUMBA_OK = True
        except ImportError:
            _NUMBA_OK = False
    return _NUMBA_OK


def requested_backend():
    name = os.environ.get("MINRESIST_BACKEND", "auto").strip().lower()
    if name not in ("auto", "numba", "numpy"):
        raise ConfigError(
            "MINRESIST_BACKEND must be one of auto|numba|numpy, got %r" % name)
    return name


def active_backend():
    """Resolve the requested backend to a concrete one ('numba' or 'numpy')."""
    name = requested_backend()
    if name == "numpy":
        return "numpy"
    if name == "numba":
        if not numba_available():
            raise ConfigError("MINRESIST_BACKEND=numba but numba is not importable")
        return "numba"
    return "numba" if numba_available() else "numpy"
