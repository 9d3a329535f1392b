"""Kernel backend selection.

The dense inner loops (Hessenberg reduction, QR eigenvalue iteration,
column-pivoted QR) exist twice: a compiled Cython extension
(``_fastkernels``) and a pure NumPy fallback (``pure``).  The compiled
module is preferred when importable; set ``LINFLOW_BACKEND=pure`` or
``LINFLOW_BACKEND=compiled`` to force a choice.  ``benchmarks/`` compares
the two.
"""

import os

from . import pure as _pure

_requested = os.environ.get("LINFLOW_BACKEND", "auto").lower()

_impl = None
if _requested in ("auto", "compiled"):
    try:
        from . import _fastkernels as _impl  # noqa: F401
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = None
if _impl is None:
    _impl = _pure

BACKEND_NAME = _impl.BACKEND_NAME
hessenberg_inplace = _impl.hessenberg_inplace
real_hess_eigvals = _impl.real_hess_eigvals
complex_hess_eigvals = _impl.complex_hess_eigvals
cpqr_factor = _impl.cpqr_factor


def available_backends():
    names = ["pure"]
    try:
        from . import _fastkernels  # noqa: F401

        names.append("compiled")
    except ImportError:
        pass
    return names


def get_backend(name):
    """Return the named backend module ('pure' or 'compiled')."""
    if name == "pure":
        return _pure
    if name == "compiled":
        from . import _fastkernels

        return _fastkernels
    raise ValueError(f"unknown backend {name!r}")
