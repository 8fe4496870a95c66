"""Pure numpy/scipy implementations of the hot kernels.

These are the fallback when the compiled extension is unavailable (and the
reference the extension is tested against). Semantics here are the contract:
the Cython twin in _core.pyx must match bit-for-bit on integer outputs and
to float64 round-off on coordinates.
"""

import numpy as np
from scipy import ndimage

BACKEND = "pure"


def point_in_polygon(px: float, py: float, poly: np.ndarray, tol: float = 1e-9) -> int:
    """Classify a point against a simple polygon.

    Returns 1 (inside), 0 (on boundary within tol), -1 (outside).
    Even-odd rule with half-open edge intervals so vertices on the ray
    are counted once.
    """
    xs = poly[:, 0]
    ys = poly[:, 1]
    n = len(poly)

    # boundary: distance to any edge within tol
    x2 = np.roll(xs, -1)
    y2 = np.roll(ys, -1)
    ex = x2 - xs
    ey = y2 - ys
    L2 = ex * ex + ey * ey
    t = np.zeros(n)
    nz = L2 > 0
    t[nz] = ((px - xs[nz]) * ex[nz] + (py - ys[nz]) * ey[nz]) / L2[nz]
    t = np.clip(t, 0.0, 1.0)
    dx = px - (xs + t * ex)
    dy = py - (ys + t * ey)
    if np.min(dx * dx + dy * dy) <= tol * tol:
        return 0

    cond = (ys <= py) != (y2 <= py)
    # x coordinate where each candidate edge crosses the horizontal ray
    with np.errstate(divide="ignore", invalid="ignore"):
        xi = xs + (py - ys) * ex / ey
    crossings = int(np.count_nonzero(cond & (px < xi)))
    return 1 if crossings % 2 == 1 else -1


def points_in_polygon(pts: np.ndarray, poly: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Vectorized point_in_polygon over an (m, 2) array. Returns int8 (m,)."""
    px = pts[:, 0][:, None]
    py = pts[:, 1][:, None]
    xs = poly[:, 0][None, :]
    ys = poly[:, 1][None, :]
    x2 = np.roll(poly[:, 0], -1)[None, :]
    y2 = np.roll(poly[:, 1], -1)[None, :]

    ex = x2 - xs
    ey = y2 - ys
    L2 = ex * ex + ey * ey
    L2safe = np.where(L2 > 0, L2, 1.0)
    t = np.clip(((px - xs) * ex + (py - ys) * ey) / L2safe, 0.0, 1.0)
    dx = px - (xs + t * ex)
    dy = py - (ys + t * ey)
    on_boundary = np.min(dx * dx + dy * dy, axis=1) <= tol * tol

    cond = (ys <= py) != (y2 <= py)
    eysafe = np.where(ey != 0, ey, 1.0)
    xi = xs + (py - ys) * ex / eysafe
    inside = np.count_nonzero(cond & (px < xi), axis=1) % 2 == 1

    out = np.where(inside, 1, -1).astype(np.int8)
    out[on_boundary] = 0
    return out


def _orient(ax, ay, bx, by, cx, cy) -> int:
    v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if v > 0.0:
        return 1
    if v < 0.0:
        return -1
    return 0


def _on_segment(ax, ay, bx, by, px, py) -> bool:
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def segments_intersect(ax, ay, bx, by, cx, cy, dx, dy) -> bool:
    """True iff the closed segments AB and CD share at least one point."""
    o1 = _orient(ax, ay, bx, by, cx, cy)
    o2 = _orient(ax, ay, bx, by, dx, dy)
    o3 = _orient(cx, cy, dx, dy, ax, ay)
    o4 = _orient(cx, cy, dx, dy, bx, by)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_segment(ax, ay, bx, by, cx, cy):
        return True
    if o2 == 0 and _on_segment(ax, ay, bx, by, dx, dy):
        return True
    if o3 == 0 and _on_segment(cx, cy, dx, dy, ax, ay):
        return True
    if o4 == 0 and _on_segment(cx, cy, dx, dy, bx, by):
        return True
    return False


def rolling_median(a: np.ndarray, window: int) -> np.ndarray:
    """Centered rolling median; windows shrink symmetrically at the edges."""
    n = len(a)
    half = window // 2
    out = np.empty(n, dtype=np.float64)
    if n >= window:
        from numpy.lib.stride_tricks import sliding_window_view

        out[half:n - half] = np.median(sliding_window_view(a, window), axis=1)
        edge = half
    else:
        edge = n
    for i in range(min(edge, n)):
        lo = max(0, i - half)
        out[i] = np.median(a[lo:i + half + 1])
    for i in range(max(n - edge, 0), n):
        hi = min(n, i + half + 1)
        out[i] = np.median(a[max(0, i - half):hi])
    return out


def diff_centroid(prev: np.ndarray, cur: np.ndarray, nxt: np.ndarray,
                  threshold: int, min_area: int):
    """Three-frame difference detection on one frame triple.

    Thresholds |cur-prev| and |nxt-cur|, intersects the two masks, and
    returns (cx, cy, area) of the largest 4-connected component with
    area >= min_area, or None. Ties break to the component whose bounding
    box has the smaller (row, col) top-left corner. Centroid uses exact
    integer accumulation so backends agree bitwise.
    """
    d1 = np.abs(cur.astype(np.int16) - prev.astype(np.int16)) >= threshold
    d2 = np.abs(nxt.astype(np.int16) - cur.astype(np.int16)) >= threshold
    mask = d1 & d2
    if not mask.any():
        return None
    labels, count = ndimage.label(mask, structure=[[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    best = None
    for lab in range(1, count + 1):
        rows, cols = np.nonzero(labels == lab)
        area = len(rows)
        if area < min_area:
            continue
        key = (-area, int(rows.min()), int(cols.min()))
        if best is None or key < best[0]:
            cx = float(cols.sum(dtype=np.int64)) / area
            cy = float(rows.sum(dtype=np.int64)) / area
            best = (key, (cx, cy, area))
    return best[1] if best else None
