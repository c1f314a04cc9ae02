"""Kernel backend selection: compiled extension when importable, else pure Python."""

try:
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:  # pragma: no cover - exercised only without a build
    from . import _pykernels as _impl

    BACKEND = "python"

CONCURRENCE = _impl.CONCURRENCE
NEGATIVITY = _impl.NEGATIVITY

jacobi_eigh = _impl.jacobi_eigh
member_values = _impl.member_values
roof_descent = _impl.roof_descent

__all__ = [
    "BACKEND",
    "CONCURRENCE",
    "NEGATIVITY",
    "jacobi_eigh",
    "member_values",
    "roof_descent",
]
