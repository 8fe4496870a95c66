import numpy as np
import pytest

from camsa.balltrack import (
    BallTrack,
    FrameGrid,
    GridSource,
    Precomputed,
    extract_ball_track,
    parse_grids,
    parse_track,
    three_frame_diff,
    write_grids,
    write_track,
)
from camsa.errors import DimensionMismatch, PathOutOfBounds
from camsa.synth import generate_ball_grids


def linear_path(n: int, start=(8.0, 10.0), vel=(2.0, 1.0)) -> np.ndarray:
    t = np.arange(n)[:, None]
    return np.asarray(start) + t * np.asarray(vel)


class TestThreeFrameDiff:
    def test_static_scene_none(self):
        grids = generate_ball_grids(np.tile([[32.0, 32.0]], (3, 1)), seed=1)
        assert three_frame_diff(*grids) is None

    def test_moving_blob_recovered(self):
        path = linear_path(3, start=(20, 30), vel=(2, 0))
        grids = generate_ball_grids(path, seed=2)
        hit = three_frame_diff(*grids)
        assert hit is not None
        assert np.hypot(hit[0] - path[1, 0], hit[1] - path[1, 1]) <= 2.0

    def test_larger_blob_wins(self):
        base = np.full((64, 64), 20, dtype=np.uint8)
        def frame(small_c, big_c):
            v = base.copy()
            v[small_c[1]:small_c[1] + 3, small_c[0]:small_c[0] + 3] = 200
            v[big_c[1]:big_c[1] + 5, big_c[0]:big_c[0] + 5] = 200
            return FrameGrid(64, 64, v)
        prev = frame((5, 5), (40, 40))
        cur = frame((10, 5), (46, 40))
        nxt = frame((15, 5), (52, 40))
        hit = three_frame_diff(prev, cur, nxt)
        assert hit is not None
        assert abs(hit[0] - 48) <= 3 and abs(hit[1] - 42) <= 3

    def test_dimension_mismatch(self):
        a = FrameGrid(8, 8, np.zeros((8, 8), dtype=np.uint8))
        b = FrameGrid(4, 4, np.zeros((4, 4), dtype=np.uint8))
        with pytest.raises(DimensionMismatch):
            three_frame_diff(a, a, b)

    def test_brightness_invariance(self):
        path = linear_path(3, start=(20, 30), vel=(2, 1))
        grids = generate_ball_grids(path, seed=3, noise_max=1)
        brighter = [
            FrameGrid(g.width, g.height, np.clip(g.values.astype(int) + 40, 0, 255).astype(np.uint8))
            for g in grids
        ]
        assert three_frame_diff(*grids) == three_frame_diff(*brighter)

    def test_detection_monotone_in_threshold_and_area(self):
        path = linear_path(30, start=(5, 5), vel=(1.6, 1.4))
        grids = generate_ball_grids(path, seed=4)
        src = GridSource(grids=grids)
        counts = [
            len(extract_ball_track(src, threshold=t, min_area=2).frames())
            for t in (10, 25, 60, 120, 200)
        ]
        assert counts == sorted(counts, reverse=True)
        counts_area = [
            len(extract_ball_track(src, threshold=25, min_area=a).frames())
            for a in (1, 4, 9, 25, 60)
        ]
        assert counts_area == sorted(counts_area, reverse=True)


class TestExtractBallTrack:
    def test_precomputed_passthrough(self):
        track = BallTrack(samples={3: (1.0, 2.0), 4: None, 7: (5.0, 6.0)})
        out = extract_ball_track(Precomputed(track))
        assert out.samples == track.samples
        assert out.samples is not track.samples

    def test_fly_ball_sequence(self):
        path = linear_path(30, start=(4.0, 50.0), vel=(1.8, -1.2))
        grids = generate_ball_grids(path, seed=5)
        track = extract_ball_track(GridSource(grids=grids))
        frames = track.frames()
        assert len(frames) >= 26
        for f in frames:
            p = track.samples[f]
            assert np.hypot(p[0] - path[f, 0], p[1] - path[f, 1]) <= 2.0

    def test_static_grids_empty_track(self):
        grids = generate_ball_grids(np.tile([[30.0, 30.0]], (20, 1)), seed=6)
        assert extract_ball_track(GridSource(grids=grids)).frames() == []

    def test_grid_to_view_transform(self):
        path = linear_path(10, start=(10, 10), vel=(2, 0))
        grids = generate_ball_grids(path, seed=7)
        track = extract_ball_track(GridSource(grids=grids, origin=(100.0, 200.0), cell_size=4.0))
        f = track.frames()[0]
        p = track.samples[f]
        assert p[0] == pytest.approx(100.0 + 4.0 * (10 + 2 * f), abs=4.0)
        assert p[1] == pytest.approx(200.0 + 4.0 * 10, abs=4.0)


class TestFiles:
    def test_grid_file_round_trip(self):
        path = linear_path(5)
        grids = generate_ball_grids(path, seed=8)
        parsed = parse_grids(write_grids(grids))
        assert len(parsed) == len(grids)
        for a, b in zip(parsed, grids):
            np.testing.assert_array_equal(a.values, b.values)

    def test_track_file_round_trip(self):
        track = BallTrack(samples={0: (1.5, 2.5), 3: None, 9: (10.0, 20.0)})
        parsed = parse_track(write_track(track))
        assert parsed.samples == track.samples


def test_path_out_of_bounds():
    with pytest.raises(PathOutOfBounds):
        generate_ball_grids(linear_path(40, start=(50, 50), vel=(1, 1)))
