"""Kernel backend selection.

Imports the compiled extension when present, otherwise the numpy/scipy
fallback. Set CAMSA_PURE=1 to force the fallback (used by the benchmark
and for backend cross-checks).
"""

import os

from . import _pure

if os.environ.get("CAMSA_PURE"):
    _impl = _pure
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND: str = _impl.BACKEND

point_in_polygon = _impl.point_in_polygon
points_in_polygon = _impl.points_in_polygon
segments_intersect = _impl.segments_intersect
rolling_median = _impl.rolling_median
diff_centroid = _impl.diff_centroid

__all__ = [
    "BACKEND",
    "point_in_polygon",
    "points_in_polygon",
    "segments_intersect",
    "rolling_median",
    "diff_centroid",
]
