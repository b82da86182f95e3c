"""Kernel dispatch: compiled extension when available, NumPy fallback otherwise.

Set the environment variable ``CURVEINV_DISABLE_EXT=1`` before import to
force the fallback lane (used by the benchmark and by tests that exercise
both implementations).
"""
import os

if os.environ.get("CURVEINV_DISABLE_EXT") == "1":
    from . import _kernels_py as _impl
    COMPILED = False
else:
    try:
        from . import _kernels as _impl
        COMPILED = True
    except ImportError:
        from . import _kernels_py as _impl
        COMPILED = False

writhe_sum = _impl.writhe_sum
linking_sum = _impl.linking_sum
gauss_area_sum = _impl.gauss_area_sum
min_distance_offdiag = _impl.min_distance_offdiag
doubly_critical_distance = _impl.doubly_critical_distance


def backend():
    """Name of the active kernel implementation."""
    return "compiled" if COMPILED else "numpy"
