import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from camsa.errors import DegeneratePolygon, NonPositiveRadius, SeriesTooShort
from camsa.geometry import (
    Region,
    detect_jump_events,
    point_in_circle,
    point_in_polygon,
    points_in_polygon,
    segments_intersect,
)

from .oracles import (
    RasterOracle,
    point_edge_distance,
    sampled_intersects,
    segment_min_distance,
    star_polygon,
)

UNIT_SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


class TestPointInPolygon:
    def test_center_of_unit_square(self):
        assert point_in_polygon((0.5, 0.5), UNIT_SQUARE) == Region.INSIDE

    def test_vertex_is_boundary(self):
        assert point_in_polygon((0.0, 0.0), UNIT_SQUARE) == Region.ON_BOUNDARY

    def test_edge_midpoint_is_boundary(self):
        assert point_in_polygon((0.5, 0.0), UNIT_SQUARE) == Region.ON_BOUNDARY

    def test_outside(self):
        assert point_in_polygon((2.0, 0.5), UNIT_SQUARE) == Region.OUTSIDE

    def test_concave_notch(self):
        poly = [(0, 0), (4, 0), (4, 4), (2, 4), (2, 1.8), (1.2, 4), (0, 4)]
        assert point_in_polygon((1.8, 3.5), poly) == Region.OUTSIDE
        assert point_in_polygon((3, 3), poly) == Region.INSIDE

    def test_degenerate_rejected(self):
        with pytest.raises(DegeneratePolygon):
            point_in_polygon((0, 0), [(0, 0), (1, 1)])
        with pytest.raises(DegeneratePolygon):
            point_in_polygon((0, 0), [(0, 0), (1, 1), (2, 2)])

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 11))
    def test_vertex_rotation_invariance(self, seed, shift):
        rng = np.random.default_rng(seed)
        poly = star_polygon(rng)
        p = rng.uniform(-1.5, 1.5, 2)
        rotated = np.roll(poly, shift % len(poly), axis=0)
        assert point_in_polygon(p, poly) == point_in_polygon(p, rotated)

    def test_matches_rasterization_oracle(self):
        """1000 random (polygon, point) cases, boundary band excluded."""
        rng = np.random.default_rng(42)
        checked = 0
        while checked < 1000:
            poly = star_polygon(rng)
            oracle = RasterOracle(poly, n=1200)
            pts = rng.uniform(poly.min() - 0.2, poly.max() + 0.2, size=(40, 2))
            for p in pts:
                if point_edge_distance(p, poly) < 2.5 * oracle.cell_diagonal:
                    continue
                got = point_in_polygon(p, poly)
                assert got != Region.ON_BOUNDARY
                assert (got == Region.INSIDE) == oracle.inside(p), (poly, p)
                checked += 1
                if checked == 1000:
                    break
        assert checked == 1000

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(7)
        poly = star_polygon(rng)
        pts = rng.uniform(-1.5, 1.5, size=(200, 2))
        batch = points_in_polygon(pts, poly)
        for p, b in zip(pts, batch):
            assert point_in_polygon(p, poly).value == b


class TestPointInCircle:
    def test_center(self):
        assert point_in_circle((3, 4), (3, 4), 1.0) == Region.INSIDE

    def test_on_radius(self):
        assert point_in_circle((4, 4), (3, 4), 1.0) == Region.ON_BOUNDARY

    def test_outside(self):
        assert point_in_circle((5, 4), (3, 4), 1.0) == Region.OUTSIDE

    def test_non_positive_radius(self):
        with pytest.raises(NonPositiveRadius):
            point_in_circle((0, 0), (0, 0), 0.0)

    def test_random_against_distance(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            p = rng.uniform(-2, 2, 2)
            c = rng.uniform(-2, 2, 2)
            r = rng.uniform(0.1, 2.0)
            d = float(np.hypot(*(p - c)))
            want = Region.INSIDE if d < r - 1e-9 else (Region.OUTSIDE if d > r + 1e-9 else Region.ON_BOUNDARY)
            assert point_in_circle(p, c, r) == want


class TestSegmentsIntersect:
    def test_crossing_x(self):
        assert segments_intersect((0, 0), (1, 1), (0, 1), (1, 0)) is True

    def test_parallel_disjoint(self):
        assert segments_intersect((0, 0), (1, 0), (0, 1), (1, 1)) is False

    def test_shared_endpoint(self):
        assert segments_intersect((0, 0), (1, 0), (1, 0), (2, 3)) is True

    def test_collinear_overlap(self):
        assert segments_intersect((0, 0), (2, 0), (1, 0), (3, 0)) is True

    def test_collinear_disjoint(self):
        assert segments_intersect((0, 0), (1, 0), (2, 0), (3, 0)) is False

    def test_t_touch(self):
        assert segments_intersect((0, 0), (2, 0), (1, -1), (1, 0)) is True

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 10_000))
    def test_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        a1, a2, b1, b2 = rng.uniform(0, 1, (4, 2))
        r = segments_intersect(a1, a2, b1, b2)
        assert segments_intersect(b1, b2, a1, a2) is r
        assert segments_intersect(a2, a1, b1, b2) is r
        assert segments_intersect(a1, a2, b2, b1) is r

    def test_matches_sampling_oracle(self):
        """10000 random pairs; near-touching band below sampling resolution excluded."""
        rng = np.random.default_rng(1234)
        compared = excluded = 0
        while compared < 10_000:
            a1, a2, b1, b2 = rng.uniform(0, 1, (4, 2))
            d = segment_min_distance(a1, a2, b1, b2)
            if 0.0 < d < 1e-3:
                excluded += 1
                continue
            assert segments_intersect(a1, a2, b1, b2) == sampled_intersects(a1, a2, b1, b2)
            compared += 1
        assert compared == 10_000
        # the exclusion band should stay a sliver of the sample space
        assert excluded < 200


def triangle_bump(n_before: int, width: int, height: float, n_after: int) -> np.ndarray:
    up = np.linspace(0, height, width // 2 + 1)[1:]
    down = np.linspace(height, 0, width - width // 2 + 1)[1:]
    return np.concatenate([np.zeros(n_before), up, down, np.zeros(n_after)])


class TestDetectJumpEvents:
    def test_constant_series(self):
        assert detect_jump_events(np.full(60, 400.0), threshold=10) == []

    def test_too_short(self):
        with pytest.raises(SeriesTooShort):
            detect_jump_events([1.0, 2.0], threshold=1.0)

    def test_single_bump(self):
        # y grows downward: a jump is a dip in y
        theta = 20.0
        rise = triangle_bump(30, 8, 2 * theta, 30)
        y = 500.0 - rise
        events = detect_jump_events(y, threshold=theta)
        assert len(events) == 1
        ev = events[0]
        assert abs(ev.takeoff_frame - 30) <= 1
        assert abs(ev.landing_frame - 38) <= 1
        assert ev.peak_rise == pytest.approx(2 * theta, abs=1.0)

    def test_three_bumps_in_order(self):
        theta = 15.0
        rise = np.concatenate([
            triangle_bump(20, 8, 2.5 * theta, 12),
            triangle_bump(0, 8, 2.2 * theta, 12),
            triangle_bump(0, 8, 3.0 * theta, 20),
        ])
        events = detect_jump_events(500.0 - rise, threshold=theta)
        assert len(events) == 3
        takeoffs = [e.takeoff_frame for e in events]
        assert takeoffs == sorted(takeoffs)
        for a, b in zip(events, events[1:]):
            assert a.landing_frame <= b.takeoff_frame

    def test_translation_invariance(self):
        theta = 15.0
        rise = triangle_bump(25, 9, 2 * theta, 25)
        e1 = detect_jump_events(500.0 - rise, threshold=theta)
        e2 = detect_jump_events(900.0 - rise, threshold=theta)
        assert [(e.takeoff_frame, e.landing_frame) for e in e1] == [
            (e.takeoff_frame, e.landing_frame) for e in e2
        ]

    def test_frame_numbers_shift(self):
        theta = 15.0
        rise = triangle_bump(25, 9, 2 * theta, 25)
        y = 500.0 - rise
        base = detect_jump_events(y, threshold=theta)
        shifted = detect_jump_events(y, frames=np.arange(len(y)) + 100, threshold=theta)
        assert [e.takeoff_frame + 100 for e in base] == [e.takeoff_frame for e in shifted]

    def test_count_monotone_in_threshold(self):
        # separated unimodal bumps: raising the threshold can only drop events
        heights = [15.0, 30.0, 60.0, 90.0]
        rise = np.concatenate(
            [triangle_bump(20 if i == 0 else 0, 10, h, 18) for i, h in enumerate(heights)]
        )
        y = 500.0 - rise
        thresholds = [5.0, 8.0, 12.0, 20.0, 35.0, 50.0, 80.0, 100.0]
        counts = [len(detect_jump_events(y, threshold=t)) for t in thresholds]
        assert counts == sorted(counts, reverse=True)
        assert counts[0] == 4 and counts[-1] == 0

    def test_landing_point_from_positions(self):
        theta = 15.0
        rise = triangle_bump(20, 9, 2 * theta, 20)
        y = 500.0 - rise
        xs = np.linspace(0, 49, len(y))
        events = detect_jump_events(y, threshold=theta, positions=np.stack([xs, y], axis=1))
        assert len(events) == 1
        lp = events[0].landing_point
        assert lp[0] == pytest.approx(xs[events[0].landing_frame])
