"""Kernel backend selection.

The compiled kernels are used when importable; set ``TWOSTEP_PURE_PYTHON=1``
to force the pure-Python fallback.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

if os.environ.get("TWOSTEP_PURE_PYTHON", "").strip() not in ("", "0"):
    name = "python"
else:
    name = "cython" if _ckernels is not None else "python"
kernels = _BACKENDS[name]


def available():
    return sorted(_BACKENDS)


def set_backend(backend):
    """Switch the active kernel backend ("python" or "cython")."""
    global kernels, name
    if backend not in _BACKENDS:
        raise ValueError(f"backend {backend!r} unavailable; have {available()}")
    kernels = _BACKENDS[backend]
    name = backend
