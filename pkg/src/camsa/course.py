"""CAMSA course geometry per camera view.

The course is one group of six floor hoops, six numbered cones, one
rectangular throw target, a start region, and one convex gate polygon
("zone") per action visible in the view. The front view hosts actions
1, 2, 3, 5, 6; the rear view hosts actions 4 and 7. Layouts come from a
calibration file and are validated before scoring.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MalformedFile
from .geometry import Region, point_in_polygon, points_in_polygon, polygon_area
from .trajectory import FRONT, REAR

FRONT_ACTIONS = (1, 2, 3, 5, 6)
REAR_ACTIONS = (4, 7)

FRONT_CONES = (1, 2, 3, 4)
REAR_CONES = (2, 5, 6)

# cone pairs that flank a corridor of the course
CONE_PAIRS = ((1, 2), (3, 4), (5, 6))


@dataclass(frozen=True)
class Hoop:
    id: int
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if not (1 <= self.id <= 6):
            raise MalformedFile(f"hoop id must be 1..6, got {self.id}")
        if not (self.radius > 0):
            raise MalformedFile(f"hoop {self.id}: radius must be > 0")


@dataclass(frozen=True)
class Cone:
    id: int
    apex: tuple[float, float]
    base_polygon: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not (1 <= self.id <= 6):
            raise MalformedFile(f"cone id must be 1..6, got {self.id}")
        if len(self.base_polygon) != 3:
            raise MalformedFile(f"cone {self.id}: base polygon must have 3 vertices")
        if abs(polygon_area(self.base_polygon)) <= 0.0:
            raise MalformedFile(f"cone {self.id}: degenerate base polygon")

    @property
    def circumradius(self) -> float:
        (ax, ay), (bx, by), (cx, cy) = self.base_polygon
        a = math.hypot(bx - cx, by - cy)
        b = math.hypot(ax - cx, ay - cy)
        c = math.hypot(ax - bx, ay - by)
        area = abs(polygon_area(self.base_polygon))
        return a * b * c / (4.0 * area)

    def touch_radius(self, scale: float) -> float:
        """Touch target disk radius around the apex."""
        return scale * self.circumradius


@dataclass(frozen=True)
class RectTarget:
    corners: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.corners) != 4:
            raise MalformedFile("rect target must have exactly 4 corners")
        if not _is_convex_ccw(self.corners):
            raise MalformedFile("rect target corners must be convex and counterclockwise")

    @property
    def center(self) -> tuple[float, float]:
        arr = np.asarray(self.corners)
        return (float(arr[:, 0].mean()), float(arr[:, 1].mean()))


def _is_convex_ccw(pts) -> bool:
    arr = np.asarray(pts, dtype=np.float64)
    n = len(arr)
    if n < 3 or abs(polygon_area(arr)) <= 0.0:
        return False
    for i in range(n):
        a, b, c = arr[i], arr[(i + 1) % n], arr[(i + 2) % n]
        cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if cross < 0:
            return False
    return True


@dataclass(frozen=True)
class CourseLayout:
    view: str
    hoops: tuple[Hoop, ...]
    cones: tuple[Cone, ...]
    rect: RectTarget | None
    start_region: tuple[tuple[float, float], ...]
    zones: dict[int, tuple[tuple[float, float], ...]]

    def hoop(self, hoop_id: int) -> Hoop:
        for h in self.hoops:
            if h.id == hoop_id:
                return h
        raise KeyError(f"no hoop {hoop_id}")

    def cone(self, cone_id: int) -> Cone:
        for c in self.cones:
            if c.id == cone_id:
                return c
        raise KeyError(f"no cone {cone_id}")

    def actions(self) -> tuple[int, ...]:
        return FRONT_ACTIONS if self.view == FRONT else REAR_ACTIONS


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        self.violations.append(message)


def _validate_one(layout: CourseLayout, report: ValidationReport) -> None:
    tag = layout.view
    hoops = sorted(layout.hoops, key=lambda h: h.id)
    hoop_ids = [h.id for h in hoops]
    if len(set(hoop_ids)) != len(hoop_ids):
        report.add(f"{tag}: duplicate hoop ids")
    cone_ids = sorted(c.id for c in layout.cones)
    if len(set(cone_ids)) != len(cone_ids):
        report.add(f"{tag}: duplicate cone ids")

    if layout.view == FRONT:
        if len(hoops) != 6:
            report.add(f"{tag}: hoop count {len(hoops)} != 6")
        elif set(hoop_ids) != {1, 2, 3, 4, 5, 6}:
            report.add(f"{tag}: hoop ids {sorted(set(hoop_ids))} != 1..6")
        missing = sorted(set(FRONT_CONES) - set(cone_ids))
        if missing:
            report.add(f"{tag}: cones {missing} absent")
        expected_zones = set(FRONT_ACTIONS)
    else:
        missing = sorted(set(REAR_CONES) - set(cone_ids))
        if missing:
            report.add(f"{tag}: cones {missing} absent")
        if layout.rect is None:
            report.add(f"{tag}: rect target absent")
        expected_zones = set(REAR_ACTIONS)

    zone_ids = set(layout.zones)
    for action in sorted(expected_zones - zone_ids):
        report.add(f"{tag}: zone for action {action} absent")
    for action in sorted(zone_ids - expected_zones):
        report.add(f"{tag}: unexpected zone for action {action}")
    for action in sorted(zone_ids & expected_zones):
        poly = layout.zones[action]
        if len(poly) < 3 or abs(polygon_area(poly)) <= 0.0:
            report.add(f"{tag}: zone {action} polygon degenerate")

    if len(layout.start_region) < 3 or abs(polygon_area(layout.start_region)) <= 0.0:
        report.add(f"{tag}: start region degenerate")

    # hoops 1..3 must advance monotonically along the course axis (hoop 1 -> 3)
    if layout.view == FRONT and {1, 2, 3} <= set(hoop_ids):
        h1 = np.asarray(layout.hoop(1).center)
        h2 = np.asarray(layout.hoop(2).center)
        h3 = np.asarray(layout.hoop(3).center)
        axis = h3 - h1
        span = float(axis @ axis)
        if span <= 0.0:
            report.add(f"{tag}: hoops 1 and 3 coincide")
        else:
            t = float((h2 - h1) @ axis)
            if not (0.0 < t < span):
                report.add(f"{tag}: hoop centers 1..3 not monotone along the course axis")

    # each cone pair must leave an open corridor between its touch disks
    present = {c.id: c for c in layout.cones}
    for a, b in CONE_PAIRS:
        if a in present and b in present:
            ca, cb = present[a], present[b]
            gap = math.hypot(
                ca.apex[0] - cb.apex[0], ca.apex[1] - cb.apex[1]
            ) - ca.touch_radius(1.5) - cb.touch_radius(1.5)
            if gap <= 0:
                report.add(f"{tag}: cone pair ({a},{b}) touch disks overlap; no corridor between them")


def validate_layout(front: CourseLayout, rear: CourseLayout) -> ValidationReport:
    """Check landmark counts, ids, and placement rules for both views.

    Every violated rule is reported; an empty report means the pair is
    usable for scoring. Deterministic and independent of landmark list order.
    """
    report = ValidationReport()
    if front.view != FRONT:
        report.add(f"front layout tagged {front.view!r}")
    if rear.view != REAR:
        report.add(f"rear layout tagged {rear.view!r}")
    _validate_one(front, report)
    _validate_one(rear, report)
    report.violations.sort()
    return report


def zone_of_point(layout: CourseLayout, p) -> int | None:
    """Action id whose zone contains p, lowest id winning on overlap."""
    for action in sorted(layout.zones):
        if point_in_polygon(p, layout.zones[action]) != Region.OUTSIDE:
            return action
    return None


def zones_of_points(layout: CourseLayout, pts: np.ndarray) -> np.ndarray:
    """Vectorized zone_of_point over (n, 2) points; 0 means no zone."""
    out = np.zeros(len(pts), dtype=np.int64)
    for action in sorted(layout.zones, reverse=True):
        hit = points_in_polygon(pts, np.asarray(layout.zones[action], dtype=np.float64)) >= 0
        out[hit] = action
    return out


# --- layout file format ---

def parse_layout(data: bytes | str) -> CourseLayout:
    """Parse a layout JSON file.

    {"view": ..., "hoops": [{"id", "cx", "cy", "r"}],
     "cones": [{"id", "apex": [x,y], "base": [[x,y] x3]}],
     "rect": [[x,y] x4]?, "start": [[x,y]...], "zones": {"1": [[x,y]...]}}
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"invalid JSON: {exc}") from exc
    try:
        view = obj["view"]
        hoops = tuple(
            Hoop(id=int(h["id"]), center=(float(h["cx"]), float(h["cy"])), radius=float(h["r"]))
            for h in obj.get("hoops", [])
        )
        cones = tuple(
            Cone(
                id=int(c["id"]),
                apex=(float(c["apex"][0]), float(c["apex"][1])),
                base_polygon=tuple((float(x), float(y)) for x, y in c["base"]),
            )
            for c in obj.get("cones", [])
        )
        rect = None
        if obj.get("rect") is not None:
            rect = RectTarget(corners=tuple((float(x), float(y)) for x, y in obj["rect"]))
        start = tuple((float(x), float(y)) for x, y in obj["start"])
        zones = {
            int(k): tuple((float(x), float(y)) for x, y in poly)
            for k, poly in obj.get("zones", {}).items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedFile(f"bad layout file: {exc}") from exc
    return CourseLayout(view=view, hoops=hoops, cones=cones, rect=rect, start_region=start, zones=zones)


def write_layout(layout: CourseLayout) -> bytes:
    obj = {
        "view": layout.view,
        "hoops": [
            {"id": h.id, "cx": h.center[0], "cy": h.center[1], "r": h.radius}
            for h in sorted(layout.hoops, key=lambda h: h.id)
        ],
        "cones": [
            {"id": c.id, "apex": list(c.apex), "base": [list(v) for v in c.base_polygon]}
            for c in sorted(layout.cones, key=lambda c: c.id)
        ],
        "rect": [list(v) for v in layout.rect.corners] if layout.rect else None,
        "start": [list(v) for v in layout.start_region],
        "zones": {str(k): [list(v) for v in layout.zones[k]] for k in sorted(layout.zones)},
    }
    return json.dumps(obj, indent=2, sort_keys=False).encode("utf-8")
