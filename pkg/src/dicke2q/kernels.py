"""Backend selection for the mean-field kernels.

The compiled extension (dicke2q._kernels) is preferred when importable; the
pure-Python module (dicke2q._kernels_py) is the fallback.  Both expose the
same five functions with identical semantics and, by construction, identical
floating-point behaviour.  Set DICKE2Q_PURE_PYTHON=1 before import to force
the fallback, e.g. for benchmarking one backend against the other.
"""

import os

from . import _kernels_py

if os.environ.get("DICKE2Q_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND

energy_scaled = _impl.energy_scaled
gradient_scaled = _impl.gradient_scaled
hessian_scaled = _impl.hessian_scaled
descend = _impl.descend
multistart = _impl.multistart
landscape_fill = _impl.landscape_fill


def available_backends():
    """Importable kernel backends, keyed by name."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels

        found["compiled"] = _kernels
    except ImportError:
        pass
    return found
