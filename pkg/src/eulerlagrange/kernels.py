"""Kernel backend selected at import: compiled extension if it was built,
numpy fallback otherwise. ``BACKEND`` names the one in use."""
try:
    from . import _kernels as _impl

    BACKEND = "compiled"
except ImportError:  # extension not built
    from . import _kernels_py as _impl

    BACKEND = "python"

rotating_residuals = _impl.rotating_residuals
rk4_nbody = _impl.rk4_nbody

__all__ = ["BACKEND", "rotating_residuals", "rk4_nbody"]
