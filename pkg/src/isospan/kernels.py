"""Kernel dispatch: compiled extension when importable, numpy otherwise.

Set ``ISOSPAN_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("ISOSPAN_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

directed_hausdorff = _impl.directed_hausdorff
min_dist_to_segments = _impl.min_dist_to_segments
flow_velocity = _impl.flow_velocity
flow_rk4 = _impl.flow_rk4
