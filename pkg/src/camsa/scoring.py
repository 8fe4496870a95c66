"""Criterion evaluation and report assembly.

Each of the seven course actions carries one to three binary criteria,
fourteen in all, each worth one point. The completion time maps to a
1..14 time score through fixed bands, for a 28-point total. All spatial
tolerances are derived from the performer's median shank length, the
landmark sizes, or the ball radius, so uniformly rescaled recordings
score identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import _kernels
from .balltrack import BallTrack, extract_ball_track
from .config import ScoringConfig
from .course import CourseLayout, validate_layout
from .errors import (
    EmptyCohort,
    LayoutInvalid,
    MissingRect,
    NegativeTime,
    NoBallObservations,
    PhaseMismatch,
)
from .geometry import (
    JumpEvent,
    Region,
    detect_jump_events,
    point_hull_distance,
    point_in_circle,
    point_in_polygon,
    segments_intersect,
)
from .segmenter import ActionPhase, segment_partial
from .trajectory import KP, RunBundle, Trajectory, clean_trajectory, median_shank

ACTION_CRITERIA: dict[int, tuple[int, ...]] = {
    1: (1, 2),
    2: (3, 4, 5),
    3: (6,),
    4: (7, 8),
    5: (9, 10),
    6: (11, 12),
    7: (13, 14),
}

MOVEMENT_ACTIONS = (1, 2, 5, 6)
OBJECT_CONTROL_ACTIONS = (3, 4, 7)


@dataclass(frozen=True)
class CriterionResult:
    criterion_id: int
    passed: bool
    evidence: str


@dataclass(frozen=True)
class ScoreReport:
    criteria: tuple[CriterionResult, ...]
    skill_score: int
    completion_frames: int
    fps: float
    time_score: int
    total: int
    errors: tuple[str, ...] = ()

    def action_scores(self) -> list[int]:
        """Points earned per action (passed criteria count), actions 1..7."""
        by_id = {c.criterion_id: c for c in self.criteria}
        return [
            sum(1 for cid in ACTION_CRITERIA[a] if by_id[cid].passed)
            for a in range(1, 8)
        ]


# --- time score ---

_TIME_BANDS = (
    (14.0, 14), (15.0, 13), (16.0, 12), (17.0, 11), (18.0, 10),
    (19.0, 9), (20.0, 8), (21.0, 7), (22.0, 6), (24.0, 5),
    (26.0, 4), (28.0, 3), (30.0, 2),
)


def time_score_from_seconds(t: float) -> int:
    """Map a completion time to the 1..14 banded time score."""
    if t < 0:
        raise NegativeTime(f"completion time {t} < 0")
    for upper, score in _TIME_BANDS:
        if t < upper:
            return score
    return 1


def time_score_from_frames(frames: int, fps: float) -> int:
    return time_score_from_seconds(frames / fps)


# --- shared helpers ---

def _phase_positions(traj: Trajectory, phase: ActionPhase) -> np.ndarray:
    """Array positions of the trajectory frames inside the phase."""
    lo = int(np.searchsorted(traj.index, phase.start_frame, side="left"))
    hi = int(np.searchsorted(traj.index, phase.end_frame, side="right"))
    return np.arange(lo, hi)


def _require_action(phase: ActionPhase, action: int) -> None:
    if phase.action != action:
        raise PhaseMismatch(f"expected action {action} phase, got {phase.action}")


def _smooth(x: np.ndarray, window: int = 5) -> np.ndarray:
    return _kernels.rolling_median(np.asarray(x, dtype=np.float64), window)


def _merged_events(per_series: list[list[JumpEvent]]) -> list[JumpEvent]:
    """Merge events from several series, coalescing overlapping intervals."""
    events = sorted((e for series in per_series for e in series), key=lambda e: e.takeoff_frame)
    merged: list[JumpEvent] = []
    for e in events:
        if merged and e.takeoff_frame <= merged[-1].landing_frame:
            continue
        merged.append(e)
    return merged


def _ankle_events(
    traj: Trajectory,
    pos: np.ndarray,
    ankle: int,
    threshold: float,
    cfg: ScoringConfig,
) -> list[JumpEvent]:
    y = traj.xy[pos, ankle, 1]
    return detect_jump_events(
        y,
        frames=traj.index[pos],
        threshold=threshold,
        min_frames=cfg.min_jump_frames,
        baseline_window=cfg.baseline_window,
        positions=traj.xy[pos, ankle, :],
    )


def _sign_crossings(values: np.ndarray, floor: float) -> int:
    """Sign changes of a series, counting only excursions beyond the floor."""
    signs = np.where(values > floor, 1, np.where(values < -floor, -1, 0))
    filled = []
    for s in signs:
        if s != 0:
            filled.append(int(s))
    return sum(1 for a, b in zip(filled, filled[1:]) if a != b)


def _rim_touch(p, hoop, band_frac: float) -> bool:
    d = float(np.hypot(p[0] - hoop.center[0], p[1] - hoop.center[1]))
    return abs(d - hoop.radius) <= band_frac * hoop.radius


# --- action scorers ---

def score_action1(
    phase: ActionPhase,
    traj: Trajectory,
    layout: CourseLayout,
    cfg: ScoringConfig = ScoringConfig(),
    shank: float | None = None,
) -> list[CriterionResult]:
    """Two-foot jumps through hoops 1..3.

    Criterion 1: each of the three landings puts all four foot keypoints
    inside its hoop, in hoop order. Criterion 2: exactly three airborne
    events and no foot touching any hoop rim at a landing.
    """
    _require_action(phase, 1)
    shank = shank if shank is not None else median_shank(traj)
    theta = cfg.jump_scale * shank
    pos = _phase_positions(traj, phase)

    mid_y = (traj.xy[pos, KP.LEFT_ANKLE, 1] + traj.xy[pos, KP.RIGHT_ANKLE, 1]) / 2.0
    mid_xy = (traj.xy[pos, KP.LEFT_ANKLE, :] + traj.xy[pos, KP.RIGHT_ANKLE, :]) / 2.0
    events = detect_jump_events(
        mid_y,
        frames=traj.index[pos],
        threshold=theta,
        min_frames=cfg.min_jump_frames,
        baseline_window=cfg.baseline_window,
        positions=mid_xy,
    )

    hoops = [layout.hoop(i) for i in (1, 2, 3)]
    c1_fail = None
    if len(events) < 3:
        c1_fail = f"only {len(events)} landings detected"
    else:
        for i, (event, hoop) in enumerate(zip(events[:3], hoops), start=1):
            fpos = traj.pos_of(event.landing_frame)
            for k in KP.FEET:
                if point_in_circle(traj.xy[fpos, k], hoop.center, hoop.radius) != Region.INSIDE:
                    c1_fail = f"landing {i} (frame {event.landing_frame}): keypoint {k} outside hoop {hoop.id}"
                    break
            if c1_fail:
                break

    c2_fail = None
    if len(events) != 3:
        c2_fail = f"{len(events)} airborne events, expected 3"
    else:
        for event in events:
            fpos = traj.pos_of(event.landing_frame)
            for k in KP.FEET:
                for hoop in layout.hoops:
                    if _rim_touch(traj.xy[fpos, k], hoop, cfg.boundary_band_frac):
                        c2_fail = f"keypoint {k} touched hoop {hoop.id} rim at frame {event.landing_frame}"
                        break
                if c2_fail:
                    break
            if c2_fail:
                break

    landings = ", ".join(str(e.landing_frame) for e in events)
    return [
        CriterionResult(1, c1_fail is None, c1_fail or f"landings inside hoops 1-3 at frames {landings}"),
        CriterionResult(2, c2_fail is None, c2_fail or f"3 clean jumps (frames {landings})"),
    ]


def score_action2(
    phase: ActionPhase,
    traj: Trajectory,
    layout: CourseLayout,
    cfg: ScoringConfig = ScoringConfig(),
    shank: float | None = None,
) -> list[CriterionResult]:
    """Side slide out and back between cones 1 and 2.

    Criteria 3/4: the knee-ankle segments of the two legs never cross in
    the outbound / return half. Criterion 5: an index fingertip enters the
    touch disk of the cone reached at each end of the slide.
    """
    _require_action(phase, 2)
    shank = shank if shank is not None else median_shank(traj)
    pos = _phase_positions(traj, phase)
    n = len(pos)

    mid_x = _smooth((traj.xy[pos, KP.LEFT_ANKLE, 0] + traj.xy[pos, KP.RIGHT_ANKLE, 0]) / 2.0)
    disp = mid_x - mid_x[0]
    direction = 1.0 if disp[np.argmax(np.abs(disp))] >= 0 else -1.0
    rev = int(np.argmax(direction * disp))
    no_reversal = rev < 3 or rev > n - 4 or float(np.max(direction * disp)) < shank

    def crossing_in(lo: int, hi: int) -> int | None:
        for i in range(lo, hi + 1):
            p = pos[i]
            if segments_intersect(
                traj.xy[p, KP.RIGHT_KNEE], traj.xy[p, KP.RIGHT_ANKLE],
                traj.xy[p, KP.LEFT_KNEE], traj.xy[p, KP.LEFT_ANKLE],
            ):
                return int(traj.index[p])
        return None

    if no_reversal:
        c3 = CriterionResult(3, False, "no direction reversal found in the slide")
        c4 = CriterionResult(4, False, "no direction reversal found in the slide")
        ends = [n - 1]
    else:
        out_cross = crossing_in(0, rev)
        back_cross = crossing_in(rev, n - 1)
        c3 = CriterionResult(3, out_cross is None,
                             f"legs crossed at frame {out_cross}" if out_cross else "legs stayed apart outbound")
        c4 = CriterionResult(4, back_cross is None,
                             f"legs crossed at frame {back_cross}" if back_cross else "legs stayed apart on the return")
        ends = [rev, n - 1]

    cones = [layout.cone(i) for i in (1, 2) if any(c.id == i for c in layout.cones)]
    c5_fail = None
    if len(cones) < 2:
        c5_fail = "cones 1 and 2 not both present"
    else:
        mid = (traj.xy[pos][:, KP.LEFT_ANKLE, :] + traj.xy[pos][:, KP.RIGHT_ANKLE, :]) / 2.0
        touched_ends = []
        for e in ends:
            target = min(cones, key=lambda c: float(np.hypot(*(mid[e] - np.asarray(c.apex)))))
            r_touch = target.touch_radius(cfg.touch_scale)
            lo = max(0, e - cfg.touch_window)
            hi = min(n - 1, e + cfg.touch_window)
            hit = False
            for i in range(lo, hi + 1):
                p = pos[i]
                for k in (KP.LEFT_INDEX, KP.RIGHT_INDEX):
                    if point_in_circle(traj.xy[p, k], target.apex, r_touch) != Region.OUTSIDE:
                        hit = True
                        break
                if hit:
                    break
            touched_ends.append((target.id, hit))
        missed = [cid for cid, hit in touched_ends if not hit]
        if missed:
            c5_fail = f"no fingertip touch at cone {missed[0]}"
    c5 = CriterionResult(5, c5_fail is None, c5_fail or "both cones touched at the slide ends")
    return [c3, c4, c5]


def score_action3(
    phase: ActionPhase,
    traj: Trajectory,
    layout: CourseLayout,
    ball: BallTrack,
    cfg: ScoringConfig = ScoringConfig(),
    ball_radius: float | None = None,
) -> list[CriterionResult]:
    """Catch: hands meet the ball, keep it, and the ball never hits the torso first."""
    _require_action(phase, 3)
    if ball_radius is None:
        ball_radius = cfg.ball_radius_px or cfg.ball_radius_frac * median_shank(traj)
    r_contact = cfg.contact_scale * ball_radius
    r_hold = cfg.hold_scale * ball_radius

    samples = [
        (f, p) for f, p in ball.in_range(phase.start_frame, phase.end_frame)
        if f in traj._pos_of_frame
    ]
    if not samples:
        raise NoBallObservations(f"no ball samples in frames {phase.start_frame}..{phase.end_frame}")

    def hand_distance(frame: int, point) -> float:
        fp = traj.pos_of(frame)
        d19 = float(np.hypot(*(np.asarray(point) - traj.xy[fp, KP.LEFT_INDEX])))
        d20 = float(np.hypot(*(np.asarray(point) - traj.xy[fp, KP.RIGHT_INDEX])))
        return min(d19, d20)

    contact_i = None
    for i, (f, p) in enumerate(samples):
        if hand_distance(f, p) <= r_contact:
            contact_i = i
            break

    if contact_i is None:
        return [CriterionResult(6, False, "ball never reached the hands")]

    contact_frame = samples[contact_i][0]
    for f, p in samples[:contact_i]:
        fp = traj.pos_of(f)
        hull = traj.xy[fp, list(KP.TORSO), :]
        if point_hull_distance(p, hull) <= r_contact:
            return [CriterionResult(6, False, f"ball trapped against the body at frame {f}")]

    window = [(f, p) for f, p in samples[contact_i + 1:] if f <= contact_frame + cfg.hold_frames + 2]
    held = [f for f, p in window if hand_distance(f, p) <= r_hold]
    if len(held) < cfg.hold_frames:
        return [CriterionResult(6, False, f"ball not held after contact at frame {contact_frame}")]
    return [CriterionResult(6, True, f"caught at frame {contact_frame}, held {len(held)} frames")]


def score_action4(
    phase: ActionPhase,
    traj: Trajectory,
    layout: CourseLayout,
    ball: BallTrack,
    cfg: ScoringConfig = ScoringConfig(),
) -> list[CriterionResult]:
    """Throw at the rectangular target with a wind-up.

    Criterion 7: a ball sample lies inside the target. Criterion 8: the
    throwing wrist moves from behind the nose to in front of it along the
    axis toward the target.
    """
    _require_action(phase, 4)
    if layout.rect is None:
        raise MissingRect("rear layout has no rectangular target")
    samples = ball.in_range(phase.start_frame, phase.end_frame)
    if not samples:
        raise NoBallObservations(f"no ball samples in frames {phase.start_frame}..{phase.end_frame}")

    hit_frame = None
    for f, p in samples:
        if point_in_polygon(p, layout.rect.corners) == Region.INSIDE:
            hit_frame = f
            break
    c7 = CriterionResult(7, hit_frame is not None,
                         f"ball inside target at frame {hit_frame}" if hit_frame is not None
                         else "ball never entered the target")

    pos = _phase_positions(traj, phase)
    nose_x = traj.xy[pos, KP.NOSE, 0]
    axis = 1.0 if layout.rect.center[0] - float(np.median(nose_x)) >= 0 else -1.0
    s15 = _smooth((traj.xy[pos, KP.LEFT_WRIST, 0] - nose_x) * axis)
    s16 = _smooth((traj.xy[pos, KP.RIGHT_WRIST, 0] - nose_x) * axis)
    thrower = s16 if (s16.max() - s16.min()) >= (s15.max() - s15.min()) else s15
    wrist_id = KP.RIGHT_WRIST if thrower is s16 else KP.LEFT_WRIST

    behind = np.nonzero(thrower < 0)[0]
    c8_pass = False
    detail = "wrist never moved behind the nose"
    if len(behind):
        after = np.nonzero(thrower[behind[0]:] > 0)[0]
        if len(after):
            c8_pass = True
            detail = (
                f"wrist {wrist_id} behind the nose at frame {int(traj.index[pos[behind[0]]])}, "
                f"in front at frame {int(traj.index[pos[behind[0] + after[0]]])}"
            )
    return [c7, CriterionResult(8, c8_pass, detail)]


def score_action5(
    phase: ActionPhase,
    traj: Trajectory,
    layout: CourseLayout,
    cfg: ScoringConfig = ScoringConfig(),
    shank: float | None = None,
) -> list[CriterionResult]:
    """Step-hop travel: airborne hops plus alternating arm swing.

    Criterion 9: at least two airborne events across the two ankles.
    Criterion 10: each wrist crosses the nose line at least twice along the
    travel axis, in opposite phase.
    """
    _require_action(phase, 5)
    shank = shank if shank is not None else median_shank(traj)
    theta = cfg.jump_scale * shank
    pos = _phase_positions(traj, phase)

    events = _merged_events([
        _ankle_events(traj, pos, KP.LEFT_ANKLE, theta, cfg),
        _ankle_events(traj, pos, KP.RIGHT_ANKLE, theta, cfg),
    ])
    c9 = CriterionResult(9, len(events) >= 2,
                         f"{len(events)} airborne events" + ("" if len(events) >= 2 else ", expected >= 2"))

    mid_x = (traj.xy[pos, KP.LEFT_ANKLE, 0] + traj.xy[pos, KP.RIGHT_ANKLE, 0]) / 2.0
    axis = 1.0 if mid_x[-1] - mid_x[0] >= 0 else -1.0
    nose_x = traj.xy[pos, KP.NOSE, 0]
    d15 = _smooth((traj.xy[pos, KP.LEFT_WRIST, 0] - nose_x) * axis)
    d16 = _smooth((traj.xy[pos, KP.RIGHT_WRIST, 0] - nose_x) * axis)
    floor = 0.15 * shank
    x15 = _sign_crossings(d15, floor)
    x16 = _sign_crossings(d16, floor)
    anti_phase = bool(np.std(d15) > 0 and np.std(d16) > 0 and float(np.corrcoef(d15, d16)[0, 1]) < 0)
    c10_pass = x15 >= 2 and x16 >= 2 and anti_phase
    c10 = CriterionResult(
        10, c10_pass,
        f"wrist crossings {x15}/{x16}, " + ("alternating" if anti_phase else "not alternating"),
    )
    return [c9, c10]


def score_action6(
    phase: ActionPhase,
    traj: Trajectory,
    layout: CourseLayout,
    cfg: ScoringConfig = ScoringConfig(),
    shank: float | None = None,
) -> list[CriterionResult]:
    """One-foot hops through hoops 1..6.

    Criterion 11: every hoop's landing is one-footed (ankles split, only
    the hopping foot inside). Criterion 12: exactly one landing per hoop
    and no foot on a hoop rim.
    """
    _require_action(phase, 6)
    shank = shank if shank is not None else median_shank(traj)
    theta = cfg.jump_scale * shank
    theta_split = cfg.split_scale * shank
    pos = _phase_positions(traj, phase)

    events_l = _ankle_events(traj, pos, KP.LEFT_ANKLE, theta, cfg)
    events_r = _ankle_events(traj, pos, KP.RIGHT_ANKLE, theta, cfg)

    # landings of the two ankles within 2 frames are one (two-footed) landing
    landings: list[dict] = []
    used_r: set[int] = set()
    for el in events_l:
        match = None
        for j, er in enumerate(events_r):
            if j not in used_r and abs(er.landing_frame - el.landing_frame) <= 2:
                match = j
                break
        if match is not None:
            used_r.add(match)
            landings.append({"frame": el.landing_frame, "sides": ("left", "right")})
        else:
            landings.append({"frame": el.landing_frame, "sides": ("left",)})
    for j, er in enumerate(events_r):
        if j not in used_r:
            landings.append({"frame": er.landing_frame, "sides": ("right",)})
    landings.sort(key=lambda d: d["frame"])

    hoops = sorted(layout.hoops, key=lambda h: h.id)
    per_hoop: dict[int, list[dict]] = {h.id: [] for h in hoops}
    for rec in landings:
        fpos = traj.pos_of(rec["frame"])
        rec["split"] = float(
            np.hypot(*(traj.xy[fpos, KP.LEFT_ANKLE] - traj.xy[fpos, KP.RIGHT_ANKLE]))
        )
        for h in hoops:
            feet_in = {
                side: all(
                    point_in_circle(traj.xy[fpos, k], h.center, h.radius) == Region.INSIDE
                    for k in (KP.LEFT_FOOT if side == "left" else KP.RIGHT_FOOT)
                )
                for side in ("left", "right")
            }
            if feet_in["left"] or feet_in["right"]:
                rec["hoop"] = h.id
                rec["feet_in"] = feet_in
                per_hoop[h.id].append(rec)
                break

    c11_fail = None
    for h in hoops:
        if not per_hoop[h.id]:
            c11_fail = f"no landing in hoop {h.id}"
            break
        for rec in per_hoop[h.id]:
            one_footed = rec["feet_in"]["left"] != rec["feet_in"]["right"]
            if not one_footed or rec["split"] < theta_split:
                c11_fail = f"two-footed landing in hoop {h.id} at frame {rec['frame']}"
                break
        if c11_fail:
            break

    c12_fail = None
    for h in hoops:
        if len(per_hoop[h.id]) > 1:
            c12_fail = f"{len(per_hoop[h.id])} landings in hoop {h.id}"
            break
    if c12_fail is None:
        for rec in landings:
            fpos = traj.pos_of(rec["frame"])
            for k in KP.FEET:
                for h in hoops:
                    if _rim_touch(traj.xy[fpos, k], h, cfg.boundary_band_frac):
                        c12_fail = f"keypoint {k} touched hoop {h.id} rim at frame {rec['frame']}"
                        break
                if c12_fail:
                    break
            if c12_fail:
                break

    return [
        CriterionResult(11, c11_fail is None, c11_fail or "one-footed landing in every hoop"),
        CriterionResult(12, c12_fail is None, c12_fail or "single clean hop per hoop"),
    ]


def score_action7(
    phase: ActionPhase,
    traj: Trajectory,
    layout: CourseLayout,
    ball: BallTrack,
    kick_frame: int,
    cfg: ScoringConfig = ScoringConfig(),
    shank: float | None = None,
) -> list[CriterionResult]:
    """Kick through the cone 5-6 corridor with a leg swing.

    Criterion 13: at contact the ball sits where its launch line passes the
    gap between the cones' touch disks. Criterion 14: the kicking leg's
    knee-ankle pair crosses the support leg's line from behind to in front
    around contact.
    """
    _require_action(phase, 7)
    shank = shank if shank is not None else median_shank(traj)

    track_frames = ball.frames()
    rest_frames = [f for f in track_frames if f < kick_frame]
    if not rest_frames or kick_frame not in ball.samples:
        raise NoBallObservations("no ball samples around the kick")
    contact_point = np.asarray(ball.samples[rest_frames[-1]], dtype=np.float64)
    launch_point = np.asarray(ball.samples[kick_frame], dtype=np.float64)
    d = launch_point - contact_point
    norm = float(np.hypot(*d))
    c13_fail = None
    if norm == 0:
        c13_fail = "ball did not move at the detected kick"
    else:
        d = d / norm

    if c13_fail is None:
        try:
            c5, c6 = layout.cone(5), layout.cone(6)
        except KeyError:
            c13_fail = "cones 5 and 6 not both present"
    if c13_fail is None:
        a5 = np.asarray(c5.apex)
        a6 = np.asarray(c6.apex)
        u = a6 - a5
        sep = float(np.hypot(*u))
        r5 = c5.touch_radius(cfg.touch_scale)
        r6 = c6.touch_radius(cfg.touch_scale)
        if sep - r5 - r6 <= 0:
            c13_fail = "no corridor between cones 5 and 6"
        else:
            u = u / sep
            g1 = a5 + u * r5
            g2 = a6 - u * r6
            if abs(float(u[0] * d[1] - u[1] * d[0])) < 1e-9:
                c13_fail = "ball launched along the cone line"
            else:
                span = max(
                    float(np.hypot(*(contact_point - g1))),
                    float(np.hypot(*(contact_point - g2))),
                    1.0,
                )
                corridor = np.array([g1, g2, g2 - 3.0 * span * d, g1 - 3.0 * span * d])
                if point_in_polygon(contact_point, corridor) == Region.OUTSIDE:
                    c13_fail = "ball launch line misses the cone 5-6 gap"
    c13 = CriterionResult(13, c13_fail is None, c13_fail or f"ball through the corridor at frame {kick_frame}")

    # kicking side: the ankle nearer the ball at contact
    pos = _phase_positions(traj, phase)
    frames_in_phase = set(int(f) for f in traj.index[pos])
    c14_pass = False
    c14_detail = "no contact frame in the phase"
    if kick_frame in traj._pos_of_frame:
        cpos = traj.pos_of(kick_frame)
        d_left = float(np.hypot(*(traj.xy[cpos, KP.LEFT_ANKLE] - contact_point)))
        d_right = float(np.hypot(*(traj.xy[cpos, KP.RIGHT_ANKLE] - contact_point)))
        if d_right <= d_left:
            kick_knee, kick_ankle = KP.RIGHT_KNEE, KP.RIGHT_ANKLE
            sup_knee, sup_ankle = KP.LEFT_KNEE, KP.LEFT_ANKLE
        else:
            kick_knee, kick_ankle = KP.LEFT_KNEE, KP.LEFT_ANKLE
            sup_knee, sup_ankle = KP.RIGHT_KNEE, KP.RIGHT_ANKLE

        # orient the support-line normal toward the launch direction
        line_dir = traj.xy[cpos, sup_ankle] - traj.xy[cpos, sup_knee]
        normal = np.array([-line_dir[1], line_dir[0]])
        nn = float(np.hypot(*normal))
        if nn > 0 and norm > 0:
            normal = normal / nn
            if float(normal @ d) < 0:
                normal = -normal
            window = [
                f for f in range(kick_frame - cfg.kick_window, kick_frame + cfg.kick_window + 1)
                if f in frames_in_phase
            ]
            def side(frame: int, kp: int) -> float:
                fp = traj.pos_of(frame)
                ref = traj.xy[fp, sup_knee]
                return float(normal @ (traj.xy[fp, kp] - ref))

            neg_frame = None
            for f in window:
                if side(f, kick_knee) < 0 and side(f, kick_ankle) < 0:
                    neg_frame = f
                if neg_frame is not None and f > neg_frame:
                    if side(f, kick_knee) > 0 and side(f, kick_ankle) > 0:
                        c14_pass = True
                        c14_detail = f"leg swung through from frame {neg_frame} to {f}"
                        break
            if not c14_pass and neg_frame is None:
                c14_detail = "kicking leg never started behind the support line"
            elif not c14_pass:
                c14_detail = "kicking leg never crossed in front of the support line"
    c14 = CriterionResult(14, c14_pass, c14_detail)
    return [c13, c14]


# --- run scoring ---

def _failed_action(action: int, reason: str) -> list[CriterionResult]:
    return [CriterionResult(cid, False, reason) for cid in ACTION_CRITERIA[action]]


def score_run(bundle: RunBundle, cfg: ScoringConfig = ScoringConfig()) -> ScoreReport:
    """Full pipeline: clean, segment, evaluate, and assemble the report.

    Deterministic: identical bundle and config give a byte-identical
    report. Missing phases or ball data fail the affected criteria and are
    surfaced in the report's error list instead of aborting the run.
    """
    report = validate_layout(bundle.front_layout, bundle.rear_layout)
    if not report.ok:
        raise LayoutInvalid(report.violations)

    front = clean_trajectory(bundle.front, cfg.cleaning)
    rear = clean_trajectory(bundle.rear, cfg.cleaning)
    cleaned = replace(bundle, front=front, rear=rear)

    ball_front = extract_ball_track(bundle.ball_front, cfg.diff_threshold, cfg.min_area)
    ball_rear = extract_ball_track(bundle.ball_rear, cfg.diff_threshold, cfg.min_area)

    seg = segment_partial(cleaned, cfg, ball_rear=ball_rear)
    errors = [f"{type(e).__name__}: {e}" for e in seg.errors]

    shank_front = median_shank(front)
    shank_rear = median_shank(rear)
    radius_front = cfg.ball_radius_px or cfg.ball_radius_frac * shank_front
    radius_rear = cfg.ball_radius_px or cfg.ball_radius_frac * shank_rear

    results: list[CriterionResult] = []
    for action in range(1, 8):
        phase = seg.phases.get(action)
        if phase is None:
            results.extend(_failed_action(action, f"action {action} phase not found"))
            continue
        try:
            if action == 1:
                results.extend(score_action1(phase, front, bundle.front_layout, cfg, shank_front))
            elif action == 2:
                results.extend(score_action2(phase, front, bundle.front_layout, cfg, shank_front))
            elif action == 3:
                results.extend(score_action3(phase, front, bundle.front_layout, ball_front, cfg, radius_front))
            elif action == 4:
                results.extend(score_action4(phase, rear, bundle.rear_layout, ball_rear, cfg))
            elif action == 5:
                results.extend(score_action5(phase, front, bundle.front_layout, cfg, shank_front))
            elif action == 6:
                results.extend(score_action6(phase, front, bundle.front_layout, cfg, shank_front))
            else:
                if seg.kick_frame is None:
                    results.extend(_failed_action(7, "kick contact not detected"))
                else:
                    results.extend(
                        score_action7(phase, rear, bundle.rear_layout, ball_rear,
                                      seg.kick_frame, cfg, shank_rear)
                    )
        except (NoBallObservations, MissingRect, PhaseMismatch) as exc:
            errors.append(f"{type(exc).__name__}: {exc}")
            results.extend(_failed_action(action, str(exc)))

    results.sort(key=lambda c: c.criterion_id)

    start = seg.run_start_frame if seg.run_start_frame is not None else int(front.index[0])
    if seg.run_end_frame is not None:
        end = seg.run_end_frame
    else:
        end = int(front.index[-1])
        if not any(e.startswith("NoKickDetected") for e in errors):
            errors.append("NoKickDetected: run end undetected; timed to the last frame")
    completion = max(end - start, 0)

    skill = sum(1 for c in results if c.passed)
    t_score = time_score_from_frames(completion, front.fps)
    return ScoreReport(
        criteria=tuple(results),
        skill_score=skill,
        completion_frames=completion,
        fps=front.fps,
        time_score=t_score,
        total=skill + t_score,
        errors=tuple(errors),
    )


# --- report files ---

def report_to_json(report: ScoreReport) -> bytes:
    obj = {
        "criteria": [
            {"id": c.criterion_id, "passed": c.passed, "evidence": c.evidence}
            for c in report.criteria
        ],
        "skill_score": report.skill_score,
        "completion_frames": report.completion_frames,
        "fps": report.fps,
        "time_score": report.time_score,
        "total": report.total,
    }
    if report.errors:
        obj["errors"] = list(report.errors)
    return json.dumps(obj, indent=2).encode("utf-8")


def report_from_json(data: bytes | str) -> ScoreReport:
    obj = json.loads(data if isinstance(data, str) else data.decode("utf-8"))
    return ScoreReport(
        criteria=tuple(
            CriterionResult(int(c["id"]), bool(c["passed"]), str(c["evidence"]))
            for c in obj["criteria"]
        ),
        skill_score=int(obj["skill_score"]),
        completion_frames=int(obj["completion_frames"]),
        fps=float(obj["fps"]),
        time_score=int(obj["time_score"]),
        total=int(obj["total"]),
        errors=tuple(obj.get("errors", [])),
    )


# --- cohort aggregation ---

@dataclass(frozen=True)
class CohortEntry:
    label: str
    action_means: tuple[float, ...]  # actions 1..7
    time_mean: float

    @property
    def movement(self) -> float:
        return sum(self.action_means[a - 1] for a in MOVEMENT_ACTIONS)

    @property
    def object_control(self) -> float:
        return sum(self.action_means[a - 1] for a in OBJECT_CONTROL_ACTIONS)

    @property
    def dexterity(self) -> float:
        return self.time_mean

    @property
    def sum_score(self) -> float:
        return sum(self.action_means) + self.time_mean


@dataclass(frozen=True)
class CohortReport:
    entries: tuple[CohortEntry, ...]

    def entry(self, label: str) -> CohortEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)


def aggregate_cohort(
    rows: Sequence[tuple[str, Sequence[float], float]],
) -> CohortReport:
    """Mean per-action and time scores per label group.

    rows: (label, seven per-action scores, time score) per scored run or
    per referee sheet. Means commute with row order within a group.
    """
    if not rows:
        raise EmptyCohort("no rows to aggregate")
    order: list[str] = []
    grouped: dict[str, list[tuple[Sequence[float], float]]] = {}
    for label, actions, time_score in rows:
        actions = tuple(float(a) for a in actions)
        if len(actions) != 7:
            raise ValueError(f"row for {label!r} has {len(actions)} action scores, expected 7")
        if label not in grouped:
            grouped[label] = []
            order.append(label)
        grouped[label].append((actions, float(time_score)))

    entries = []
    for label in order:
        block = grouped[label]
        action_means = tuple(
            float(np.mean([row[0][i] for row in block])) for i in range(7)
        )
        time_mean = float(np.mean([row[1] for row in block]))
        entries.append(CohortEntry(label=label, action_means=action_means, time_mean=time_mean))
    return CohortReport(entries=tuple(entries))


def cohort_to_json(report: CohortReport) -> bytes:
    obj = {
        "cohorts": [
            {
                "label": e.label,
                "action_means": list(e.action_means),
                "time_mean": e.time_mean,
                "movement": e.movement,
                "object_control": e.object_control,
                "dexterity": e.dexterity,
                "sum_score": e.sum_score,
            }
            for e in report.entries
        ]
    }
    return json.dumps(obj, indent=2).encode("utf-8")
