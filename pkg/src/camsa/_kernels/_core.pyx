# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the pure kernels in _pure.py.

Contract: identical results — bitwise on integer outputs, float64 round-off
on coordinates. tests/test_kernels.py cross-checks both backends.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt
from libc.stdlib cimport free, malloc

cnp.import_array()

BACKEND = "c"


cdef int _classify(double px, double py, const double[:, ::1] poly, double tol) nogil:
    cdef Py_ssize_t n = poly.shape[0]
    cdef Py_ssize_t i, j
    cdef double x1, y1, x2, y2, ex, ey, L2, t, dx, dy, xi
    cdef double tol2 = tol * tol
    cdef int crossings = 0

    j = n - 1
    for i in range(n):
        x1 = poly[i, 0]; y1 = poly[i, 1]
        x2 = poly[(i + 1) % n, 0]; y2 = poly[(i + 1) % n, 1]
        ex = x2 - x1; ey = y2 - y1
        L2 = ex * ex + ey * ey
        if L2 > 0.0:
            t = ((px - x1) * ex + (py - y1) * ey) / L2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
        else:
            t = 0.0
        dx = px - (x1 + t * ex)
        dy = py - (y1 + t * ey)
        if dx * dx + dy * dy <= tol2:
            return 0
    for i in range(n):
        x1 = poly[i, 0]; y1 = poly[i, 1]
        x2 = poly[(i + 1) % n, 0]; y2 = poly[(i + 1) % n, 1]
        if (y1 <= py) != (y2 <= py):
            xi = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if px < xi:
                crossings += 1
    if crossings % 2 == 1:
        return 1
    return -1


def point_in_polygon(double px, double py, cnp.ndarray poly, double tol=1e-9):
    cdef double[:, ::1] p = np.ascontiguousarray(poly, dtype=np.float64)
    return _classify(px, py, p, tol)


def points_in_polygon(cnp.ndarray pts, cnp.ndarray poly, double tol=1e-9):
    cdef double[:, ::1] q = np.ascontiguousarray(pts, dtype=np.float64)
    cdef double[:, ::1] p = np.ascontiguousarray(poly, dtype=np.float64)
    cdef Py_ssize_t m = q.shape[0]
    out = np.empty(m, dtype=np.int8)
    cdef signed char[::1] o = out
    cdef Py_ssize_t i
    for i in range(m):
        o[i] = <signed char>_classify(q[i, 0], q[i, 1], p, tol)
    return out


cdef inline int _orient(double ax, double ay, double bx, double by,
                        double cx, double cy) nogil:
    cdef double v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if v > 0.0:
        return 1
    if v < 0.0:
        return -1
    return 0


cdef inline bint _on_seg(double ax, double ay, double bx, double by,
                         double px, double py) nogil:
    return (min(ax, bx) <= px <= max(ax, bx)
            and min(ay, by) <= py <= max(ay, by))


def segments_intersect(double ax, double ay, double bx, double by,
                       double cx, double cy, double dx, double dy):
    cdef int o1 = _orient(ax, ay, bx, by, cx, cy)
    cdef int o2 = _orient(ax, ay, bx, by, dx, dy)
    cdef int o3 = _orient(cx, cy, dx, dy, ax, ay)
    cdef int o4 = _orient(cx, cy, dx, dy, bx, by)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_seg(ax, ay, bx, by, cx, cy):
        return True
    if o2 == 0 and _on_seg(ax, ay, bx, by, dx, dy):
        return True
    if o3 == 0 and _on_seg(cx, cy, dx, dy, ax, ay):
        return True
    if o4 == 0 and _on_seg(cx, cy, dx, dy, bx, by):
        return True
    return False


cdef void _insort(double* buf, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double key
    for i in range(1, n):
        key = buf[i]
        j = i - 1
        while j >= 0 and buf[j] > key:
            buf[j + 1] = buf[j]
            j -= 1
        buf[j + 1] = key


def rolling_median(cnp.ndarray a, int window):
    cdef double[::1] x = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef int half = window // 2
    cdef Py_ssize_t i, lo, hi, w, k
    cdef double* buf = <double*>malloc(window * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                lo = i - half
                if lo < 0:
                    lo = 0
                hi = i + half + 1
                if hi > n:
                    hi = n
                w = hi - lo
                for k in range(w):
                    buf[k] = x[lo + k]
                _insort(buf, w)
                if w % 2 == 1:
                    o[i] = buf[w // 2]
                else:
                    o[i] = 0.5 * (buf[w // 2 - 1] + buf[w // 2])
    finally:
        free(buf)
    return out


def diff_centroid(cnp.ndarray prev, cnp.ndarray cur, cnp.ndarray nxt,
                  int threshold, int min_area):
    cdef unsigned char[:, ::1] p = np.ascontiguousarray(prev, dtype=np.uint8)
    cdef unsigned char[:, ::1] c = np.ascontiguousarray(cur, dtype=np.uint8)
    cdef unsigned char[:, ::1] f = np.ascontiguousarray(nxt, dtype=np.uint8)
    cdef Py_ssize_t h = c.shape[0]
    cdef Py_ssize_t w = c.shape[1]
    cdef Py_ssize_t i, j, idx, head, tail, r, q, area
    cdef int d1, d2
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] mask = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] m = mask
    cdef bint any_set = False

    for i in range(h):
        for j in range(w):
            d1 = c[i, j] - p[i, j]
            if d1 < 0:
                d1 = -d1
            d2 = f[i, j] - c[i, j]
            if d2 < 0:
                d2 = -d2
            if d1 >= threshold and d2 >= threshold:
                m[i, j] = 1
                any_set = True
    if not any_set:
        return None

    # BFS 4-connected labelling; track best component by
    # (-area, min_row, min_col) to mirror the pure backend's tie-break.
    cdef long long best_area = -1
    cdef Py_ssize_t best_r0 = 0, best_c0 = 0
    cdef long long best_sr = 0, best_sc = 0
    cdef long long sr, sc
    cdef Py_ssize_t r0, c0
    cdef Py_ssize_t* queue = <Py_ssize_t*>malloc(h * w * sizeof(Py_ssize_t))
    if queue == NULL:
        raise MemoryError()
    try:
        for i in range(h):
            for j in range(w):
                if m[i, j] != 1:
                    continue
                head = 0
                tail = 0
                queue[tail] = i * w + j
                tail += 1
                m[i, j] = 2
                area = 0
                sr = 0
                sc = 0
                r0 = i
                c0 = j
                while head < tail:
                    idx = queue[head]
                    head += 1
                    r = idx // w
                    q = idx - r * w
                    area += 1
                    sr += r
                    sc += q
                    if r < r0:
                        r0 = r
                    if q < c0:
                        c0 = q
                    if r > 0 and m[r - 1, q] == 1:
                        m[r - 1, q] = 2
                        queue[tail] = idx - w
                        tail += 1
                    if r + 1 < h and m[r + 1, q] == 1:
                        m[r + 1, q] = 2
                        queue[tail] = idx + w
                        tail += 1
                    if q > 0 and m[r, q - 1] == 1:
                        m[r, q - 1] = 2
                        queue[tail] = idx - 1
                        tail += 1
                    if q + 1 < w and m[r, q + 1] == 1:
                        m[r, q + 1] = 2
                        queue[tail] = idx + 1
                        tail += 1
                if area < min_area:
                    continue
                if (area > best_area
                        or (area == best_area and (r0 < best_r0
                            or (r0 == best_r0 and c0 < best_c0)))):
                    best_area = area
                    best_r0 = r0
                    best_c0 = c0
                    best_sr = sr
                    best_sc = sc
    finally:
        free(queue)
    if best_area < 0:
        return None
    return (float(best_sc) / best_area, float(best_sr) / best_area, int(best_area))
