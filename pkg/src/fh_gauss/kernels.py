"""Backend selection for the multiprecision hot loops.

The compiled MPFR extension is used when it imports cleanly; otherwise the
pure-mpmath versions are used.  ``FH_GAUSS_PURE=1`` forces the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("FH_GAUSS_PURE"):
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "mpfr"
    except ImportError:
        _impl = _pykernels

jacobi_newton = _impl.jacobi_newton
weight_values = _impl.weight_values
power_sums = _impl.power_sums
stieltjes = _impl.stieltjes
poly_sums = _impl.poly_sums


def backend_module(name):
    """Return the kernel module for ``name`` ("mpfr" or "python")."""
    if name == "python":
        return _pykernels
    from . import _ckernels

    return _ckernels
