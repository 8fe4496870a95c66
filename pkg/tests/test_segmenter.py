import numpy as np
import pytest

from camsa.errors import MissingPhase
from camsa.segmenter import completed_frames, phases_to_json, segment, segment_partial
from camsa.synth import LANE, generate_run, script_for_completion
from camsa.trajectory import KP, Trajectory


class TestSegmentCleanRun:
    def test_phases_match_script(self, clean_run):
        bundle, truth = clean_run
        seg = segment(bundle)
        assert len(seg.phases) == 7
        assert [p.action for p in seg.phases] == list(range(1, 8))
        for phase in seg.phases:
            want_start, want_end = truth.phases[phase.action]
            assert phase.view == truth.phase_views[phase.action]
            assert abs(phase.start_frame - want_start) <= 3, phase
            assert abs(phase.end_frame - want_end) <= 3, phase

    def test_phases_ordered_and_disjoint(self, clean_run):
        bundle, _ = clean_run
        seg = segment(bundle)
        by_view = {}
        for p in seg.phases:
            by_view.setdefault(p.view, []).append(p)
        for phases in by_view.values():
            for a, b in zip(phases, phases[1:]):
                assert a.end_frame < b.start_frame

    def test_run_bounds(self, clean_run):
        bundle, truth = clean_run
        seg = segment(bundle)
        assert seg.run_start_frame == truth.run_start_frame
        assert abs(seg.run_end_frame - (truth.kick_frame + bundle.rear_frame_offset)) <= 1

    def test_phase_union_within_run_span(self, clean_run):
        bundle, _ = clean_run
        seg = segment(bundle)
        for p in seg.phases:
            start = p.start_frame + (bundle.rear_frame_offset if p.view == "rear" else 0)
            end = p.end_frame + (bundle.rear_frame_offset if p.view == "rear" else 0)
            assert seg.run_start_frame <= start
            assert end <= seg.run_end_frame

    def test_completed_frames(self, clean_run):
        bundle, truth = clean_run
        seg = segment(bundle)
        frames = completed_frames(seg)
        assert frames == seg.run_end_frame - seg.run_start_frame
        assert abs(frames - truth.completion_seconds * bundle.front.fps) <= 2

    def test_frame_shift_moves_boundaries(self, clean_run):
        bundle, _ = clean_run
        base = segment(bundle)
        shifted_front = Trajectory(
            view=bundle.front.view, fps=bundle.front.fps,
            index=bundle.front.index + 50, xy=bundle.front.xy, vis=bundle.front.vis,
        )
        shifted_rear = Trajectory(
            view=bundle.rear.view, fps=bundle.rear.fps,
            index=bundle.rear.index + 50, xy=bundle.rear.xy, vis=bundle.rear.vis,
        )
        from dataclasses import replace

        from camsa.balltrack import BallTrack, Precomputed
        shift_ball = Precomputed(BallTrack(samples={
            f + 50: p for f, p in bundle.ball_rear.track.samples.items()
        }))
        shift_ball_f = Precomputed(BallTrack(samples={
            f + 50: p for f, p in bundle.ball_front.track.samples.items()
        }))
        moved = segment(replace(bundle, front=shifted_front, rear=shifted_rear,
                                ball_front=shift_ball_f, ball_rear=shift_ball))
        assert moved.run_start_frame == base.run_start_frame + 50
        assert moved.run_end_frame == base.run_end_frame + 50
        for a, b in zip(base.phases, moved.phases):
            assert b.start_frame == a.start_frame + 50
            assert b.end_frame == a.end_frame + 50


class TestTargetedTiming:
    def test_scripted_15_5_seconds(self):
        script = script_for_completion(15.5)
        bundle, _ = generate_run(script)
        seg = segment(bundle)
        assert completed_frames(seg) == pytest.approx(465, abs=5)

    def test_completed_frames_subtraction(self):
        from camsa.segmenter import SegmentationResult
        assert completed_frames(SegmentationResult(phases=(), run_start_frame=10, run_end_frame=430)) == 420
        assert completed_frames(SegmentationResult(phases=(), run_start_frame=7, run_end_frame=7)) == 0


class TestRearOffset:
    def test_offset_conversion(self, clean_run):
        """Renumbering the rear stream with a matching offset is a no-op."""
        from dataclasses import replace

        from camsa.balltrack import BallTrack, Precomputed
        bundle, _ = clean_run
        base = segment(bundle)
        shift = 5
        rear = Trajectory(
            view=bundle.rear.view, fps=bundle.rear.fps,
            index=bundle.rear.index + shift, xy=bundle.rear.xy, vis=bundle.rear.vis,
        )
        ball = Precomputed(BallTrack(samples={
            f + shift: p for f, p in bundle.ball_rear.track.samples.items()
        }))
        moved = segment(replace(bundle, rear=rear, ball_rear=ball, rear_frame_offset=-shift))
        assert moved.run_start_frame == base.run_start_frame
        assert moved.run_end_frame == base.run_end_frame
        for a, b in zip(base.phases, moved.phases):
            if a.view == "rear":
                assert b.start_frame == a.start_frame + shift
                assert b.end_frame == a.end_frame + shift
            else:
                assert (b.start_frame, b.end_frame) == (a.start_frame, a.end_frame)


class TestFaultPaths:
    def test_skipped_corridor_missing_phase5(self, clean_run):
        bundle, truth = clean_run
        xy = bundle.front.xy.copy()
        # lift the reference point onto the walking lane for the whole
        # step-hop window, so the corridor gate never fires
        p5 = truth.phases[5]
        span = slice(p5[0] - 8, p5[1] + 2)
        for ankle in (KP.LEFT_ANKLE, KP.RIGHT_ANKLE):
            xy[span, ankle, 1] = LANE - 12.0
        from dataclasses import replace
        hollow = replace(bundle, front=Trajectory(
            view=bundle.front.view, fps=bundle.front.fps,
            index=bundle.front.index, xy=xy, vis=bundle.front.vis,
        ))
        with pytest.raises(MissingPhase) as err:
            segment(hollow)
        assert err.value.action == 5
        partial = segment_partial(hollow)
        assert 5 not in partial.phases
        assert {p for p in partial.phases} == {1, 2, 3, 4, 6, 7}

    def test_static_bundle_missing_phase1(self, clean_run):
        bundle, _ = clean_run
        from dataclasses import replace
        n = 30
        idle = replace(
            bundle,
            front=Trajectory(view="front", fps=30, index=bundle.front.index[:n],
                             xy=np.repeat(bundle.front.xy[:1], n, axis=0),
                             vis=bundle.front.vis[:n]),
            rear=Trajectory(view="rear", fps=30, index=bundle.rear.index[:n],
                            xy=np.repeat(bundle.rear.xy[:1], n, axis=0),
                            vis=bundle.rear.vis[:n]),
        )
        with pytest.raises(MissingPhase) as err:
            segment(idle)
        assert err.value.action == 1


def test_phases_dump_shape(clean_run):
    bundle, _ = clean_run
    dump = phases_to_json(segment(bundle))
    assert len(dump) == 7
    assert all({"action", "view", "start_frame", "end_frame"} <= d.keys() for d in dump)
