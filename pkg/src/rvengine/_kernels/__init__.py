"""Kernel backend selection.

Prefers the compiled extension; falls back to the NumPy implementations when
the extension was not built or RVENGINE_PURE_PYTHON is set. `BACKEND` reports
which one is active. The autocovariance helper is NumPy-only: BLAS dot
products already saturate it, so it has no compiled twin.
"""

import os

from rvengine._kernels import _fallback

_impl = _fallback
if not os.environ.get("RVENGINE_PURE_PYTHON"):
    try:
        from rvengine._kernels import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        pass

BACKEND = _impl.BACKEND
bg_outlier_mask = _impl.bg_outlier_mask
previous_tick_fill = _impl.previous_tick_fill
mem_recursion = _impl.mem_recursion
mem_recursion_grad = _impl.mem_recursion_grad
autocov = _fallback.autocov

__all__ = [
    "BACKEND",
    "bg_outlier_mask",
    "previous_tick_fill",
    "autocov",
    "mem_recursion",
    "mem_recursion_grad",
]
