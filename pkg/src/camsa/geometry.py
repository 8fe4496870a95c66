"""Geometric and signal kernels shared by every criterion evaluator.

Point containment, segment intersection, and vertical jump-event detection
on ankle height series. Containment results use the Region enum; boundary
means within `tol` (default 1e-9 px) of the shape outline.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .errors import DegeneratePolygon, NonPositiveRadius, SeriesTooShort


class Region(Enum):
    INSIDE = 1
    ON_BOUNDARY = 0
    OUTSIDE = -1


def _as_poly(poly) -> np.ndarray:
    arr = np.asarray(poly, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 3:
        raise DegeneratePolygon(f"polygon needs >= 3 vertices, got shape {arr.shape}")
    if abs(polygon_area(arr)) <= 0.0:
        raise DegeneratePolygon("polygon has zero area")
    return arr


def polygon_area(poly) -> float:
    """Signed shoelace area (positive = counterclockwise vertex order)."""
    arr = np.asarray(poly, dtype=np.float64)
    x = arr[:, 0]
    y = arr[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def point_in_polygon(p, poly, tol: float = 1e-9) -> Region:
    """Even-odd classification of p against a simple polygon."""
    arr = _as_poly(poly)
    return Region(_kernels.point_in_polygon(float(p[0]), float(p[1]), arr, tol))


def points_in_polygon(pts, poly, tol: float = 1e-9) -> np.ndarray:
    """Batch point_in_polygon: returns int8 array of Region values."""
    arr = _as_poly(poly)
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    return _kernels.points_in_polygon(pts, arr, tol)


def point_in_circle(p, center, radius: float, tol: float = 1e-9) -> Region:
    """Classification by signed distance |p - center| - radius."""
    if radius <= 0:
        raise NonPositiveRadius(f"radius must be > 0, got {radius}")
    d = float(np.hypot(p[0] - center[0], p[1] - center[1])) - float(radius)
    if abs(d) <= tol:
        return Region.ON_BOUNDARY
    return Region.INSIDE if d < 0 else Region.OUTSIDE


def segments_intersect(a1, a2, b1, b2) -> bool:
    """True iff closed segments a1-a2 and b1-b2 share at least one point."""
    return bool(
        _kernels.segments_intersect(
            float(a1[0]), float(a1[1]), float(a2[0]), float(a2[1]),
            float(b1[0]), float(b1[1]), float(b2[0]), float(b2[1]),
        )
    )


@dataclass(frozen=True)
class JumpEvent:
    """One detected airborne interval of an ankle series.

    Frames are the caller's frame numbers. peak_rise is the maximum upward
    displacement (pixels) relative to the rolling ground baseline;
    landing_point is the tracked point's position at the landing frame
    (nan, nan when no positions were supplied).
    """

    takeoff_frame: int
    landing_frame: int
    peak_rise: float
    landing_point: tuple[float, float]


def rolling_baseline(y: np.ndarray, window: int = 15) -> np.ndarray:
    """Ground-line estimate: centered rolling median of the height series."""
    return _kernels.rolling_median(np.asarray(y, dtype=np.float64), window)


def detect_jump_events(
    y,
    frames=None,
    threshold: float = 10.0,
    min_frames: int = 3,
    baseline_window: int = 15,
    positions=None,
) -> list[JumpEvent]:
    """Detect airborne intervals in an image-space height series (y grows down).

    An event is a maximal interval where rise = baseline - y stays >= threshold
    for at least min_frames samples; the baseline is a centered rolling median
    over baseline_window samples. Interval edges are extended outward to where
    the rise falls back under 0.2 * threshold, clipped so events never overlap,
    which puts takeoff/landing at the true lift-off and touch-down samples.

    frames: optional frame numbers per sample (defaults to 0..n-1).
    positions: optional (n, 2) xy positions used to fill landing_point.
    """
    y = np.asarray(y, dtype=np.float64)
    n = len(y)
    if n < 3:
        raise SeriesTooShort(f"need >= 3 samples, got {n}")
    if threshold <= 0:
        raise ValueError("threshold must be > 0")
    if min_frames < 1:
        raise ValueError("min_frames must be >= 1")
    if frames is None:
        frames = np.arange(n)
    else:
        frames = np.asarray(frames)
    if positions is not None:
        positions = np.asarray(positions, dtype=np.float64)

    rise = rolling_baseline(y, baseline_window) - y
    above = rise >= threshold
    low = rise >= 0.2 * threshold

    events: list[JumpEvent] = []
    prev_end = -1
    i = 0
    while i < n:
        if not above[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and above[j + 1]:
            j += 1
        if j - i + 1 >= min_frames:
            take = i
            while take - 1 > prev_end and low[take - 1]:
                take -= 1
            take = max(take - 1, prev_end + 1, 0)
            land = j
            while land + 1 < n and low[land + 1]:
                land += 1
            land = min(land + 1, n - 1)
            if positions is not None:
                lp = (float(positions[land, 0]), float(positions[land, 1]))
            else:
                lp = (float("nan"), float(y[land]))
            events.append(
                JumpEvent(
                    takeoff_frame=int(frames[take]),
                    landing_frame=int(frames[land]),
                    peak_rise=float(rise[i:j + 1].max()),
                    landing_point=lp,
                )
            )
            prev_end = land
            i = land + 1
        else:
            i = j + 1
    return events


def point_segment_distance(p, a, b) -> float:
    """Euclidean distance from point p to the closed segment a-b."""
    px, py = float(p[0]), float(p[1])
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    ex, ey = bx - ax, by - ay
    L2 = ex * ex + ey * ey
    if L2 == 0.0:
        return float(np.hypot(px - ax, py - ay))
    t = max(0.0, min(1.0, ((px - ax) * ex + (py - ay) * ey) / L2))
    return float(np.hypot(px - (ax + t * ex), py - (ay + t * ey)))


def point_hull_distance(p, hull_pts) -> float:
    """Distance from p to a convex hull given by its vertices (0 if inside)."""
    hull = np.asarray(hull_pts, dtype=np.float64)
    if _kernels.point_in_polygon(float(p[0]), float(p[1]), np.ascontiguousarray(hull), 1e-9) >= 0:
        return 0.0
    n = len(hull)
    return min(point_segment_distance(p, hull[i], hull[(i + 1) % n]) for i in range(n))
