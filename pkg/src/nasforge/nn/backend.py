"""Kernel backend selection.

The hot kernels run numba-jitted by default.  Set ``NASFORGE_BACKEND=numpy``
to force the pure-numpy fallback (useful when numba is unavailable or to
skip JIT warm-up on tiny workloads); ``NASFORGE_BACKEND=numba`` fails loudly
if numba cannot be imported instead of silently falling back.
"""

import logging
import os
from types import SimpleNamespace

from . import _kernel_impl

logger = logging.getLogger(__name__)

ENV_VAR = "NASFORGE_BACKEND"

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via NASFORGE_BACKEND=numpy
    njit = None
    HAS_NUMBA = False

_jitted_cache = None


def _jit_kernels():
    global _jitted_cache
    if _jitted_cache is None:
        ns = SimpleNamespace()
        for name in _kernel_impl.KERNEL_NAMES:
            fn = getattr(_kernel_impl, name)
            setattr(ns, name, njit(cache=True)(fn))
        _jitted_cache = ns
    return _jitted_cache


def load_kernels(backend=None):
    """Return a namespace holding the kernel set for ``backend``.

    backend: "numba", "numpy", or None to follow the environment variable
    (default "numba" when importable).
    """
    if backend is None:
        backend = os.environ.get(ENV_VAR, "").strip().lower() or None
    if backend is None:
        backend = "numba" if HAS_NUMBA else "numpy"
    if backend == "numba":
        if not HAS_NUMBA:
            raise RuntimeError(
                f"{ENV_VAR}=numba requested but numba is not importable"
            )
        return _jit_kernels()
    if backend == "numpy":
        ns = SimpleNamespace()
        for name in _kernel_impl.KERNEL_NAMES:
            setattr(ns, name, getattr(_kernel_impl, name))
        return ns
    raise ValueError(f"unknown kernel backend {backend!r} (expected numba or numpy)")


def active_backend_name():
    env = os.environ.get(ENV_VAR, "").strip().lower()
    if env in ("numba", "numpy"):
        return env
    return "numba" if HAS_NUMBA else "numpy"
