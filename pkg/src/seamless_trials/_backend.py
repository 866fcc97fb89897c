"""Kernel backend selection.

The compiled extension is used when it imports; set
``SEAMLESS_TRIALS_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
import os
import warnings

if os.environ.get("SEAMLESS_TRIALS_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        warnings.warn(
            "compiled kernels unavailable, using the pure-Python fallback",
            RuntimeWarning,
            stacklevel=2,
        )
        from . import _kernels_py as kernels

BACKEND = kernels.BACKEND

__all__ = ["kernels", "BACKEND"]
