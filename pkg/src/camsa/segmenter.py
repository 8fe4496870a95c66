"""Splits a run into the seven action phases and finds the timed span.

The person reference point (ankle midpoint) must dwell in each action's
layout zone, in course order 1..7, for a minimum number of consecutive
frames. Actions 1, 2, 3, 5, 6 are located in the front view; 4 and 7 in
the rear view, aligned through the bundle's rear frame offset. The timed
span runs from the frame the reference point leaves the start region to
the kick contact frame, detected as the first fast displacement of the
rear ball track after the action 7 zone opens.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .balltrack import BallTrack, extract_ball_track
from .config import ScoringConfig
from .course import zones_of_points
from .errors import MissingPhase, NoKickDetected, OutOfOrder, SegmentationError
from .geometry import points_in_polygon
from .trajectory import FRONT, REAR, RunBundle, ankle_midpoints, median_shank

FRONT_ACTION_SET = frozenset({1, 2, 3, 5, 6})

# action 6 revisits the hoops, whose area also carries the action 1 zone;
# visit order disambiguates, so the later scan accepts both gates
ZONE_ACCEPT: dict[int, frozenset[int]] = {k: frozenset({k}) for k in range(1, 8)}
ZONE_ACCEPT[6] = frozenset({1, 6})


@dataclass(frozen=True)
class ActionPhase:
    action: int
    view: str
    start_frame: int
    end_frame: int

    def __post_init__(self):
        if not (1 <= self.action <= 7):
            raise ValueError(f"action must be 1..7, got {self.action}")
        if self.start_frame > self.end_frame:
            raise ValueError(f"phase {self.action}: start {self.start_frame} > end {self.end_frame}")


@dataclass(frozen=True)
class SegmentationResult:
    phases: tuple[ActionPhase, ...]
    run_start_frame: int
    run_end_frame: int

    def phase(self, action: int) -> ActionPhase:
        return self.phases[action - 1]


@dataclass
class PartialSegmentation:
    """Tolerant segmentation: missing pieces become recorded errors."""

    phases: dict[int, ActionPhase] = field(default_factory=dict)
    errors: list[SegmentationError] = field(default_factory=list)
    run_start_frame: int | None = None
    run_end_frame: int | None = None
    kick_frame: int | None = None  # rear-view frame numbering

    def to_result(self) -> SegmentationResult:
        if self.errors:
            raise self.errors[0]
        return SegmentationResult(
            phases=tuple(self.phases[k] for k in range(1, 8)),
            run_start_frame=self.run_start_frame,
            run_end_frame=self.run_end_frame,
        )


def completed_frames(seg: SegmentationResult) -> int:
    """Frames from leaving the start region to kick contact (front units)."""
    return seg.run_end_frame - seg.run_start_frame


def _dwell_runs(mask: np.ndarray, d_min: int) -> list[tuple[int, int]]:
    """Maximal runs of True positions with length >= d_min, as (start, end)."""
    runs = []
    n = len(mask)
    i = 0
    while i < n:
        if not mask[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and mask[j + 1]:
            j += 1
        if j - i + 1 >= d_min:
            runs.append((i, j))
        i = j + 1
    return runs


def _first_dwell(zone_arr, fe_arr, accept, cursor, d_min) -> tuple[int, int] | None:
    """First (position, front_equiv_frame) opening a durable dwell after cursor."""
    mask = np.isin(zone_arr, list(accept)) & (fe_arr >= cursor)
    runs = _dwell_runs(mask, d_min)
    if not runs:
        return None
    start = runs[0][0]
    return start, int(fe_arr[start])


def detect_kick(
    track: BallTrack,
    from_frame: int,
    launch_speed: float,
) -> int | None:
    """First rear frame where the ball steps >= launch_speed px/frame."""
    pairs = [(f, track.samples[f]) for f in track.frames() if f >= from_frame]
    for (f1, p1), (f2, p2) in zip(pairs, pairs[1:]):
        gap = f2 - f1
        if gap <= 0:
            continue
        speed = float(np.hypot(p2[0] - p1[0], p2[1] - p1[1])) / gap
        if speed >= launch_speed:
            return f2
    return None


def segment_partial(
    bundle: RunBundle,
    cfg: ScoringConfig = ScoringConfig(),
    ball_rear: BallTrack | None = None,
) -> PartialSegmentation:
    """Locate all recoverable phases, recording errors instead of raising.

    ball_rear: the extracted rear ball track; when omitted the kick frame
    is only sought if the bundle's rear source is already a precomputed track.
    """
    out = PartialSegmentation()
    d_min = cfg.dwell_min_frames

    front, rear = bundle.front, bundle.rear
    ref = {FRONT: ankle_midpoints(front), REAR: ankle_midpoints(rear)}
    frames = {FRONT: front.index, REAR: rear.index}
    fe = {
        FRONT: front.index.astype(np.int64),
        REAR: rear.index.astype(np.int64) + bundle.rear_frame_offset,
    }
    zones = {
        FRONT: zones_of_points(bundle.front_layout, ref[FRONT]),
        REAR: zones_of_points(bundle.rear_layout, ref[REAR]),
    }

    # timed-run start: first frame the reference point exits the start region
    inside = points_in_polygon(ref[FRONT], np.asarray(bundle.front_layout.start_region)) >= 0
    if not inside.any():
        out.run_start_frame = int(front.index[0])
    else:
        was_inside = False
        for i in range(len(inside)):
            if inside[i]:
                was_inside = True
            elif was_inside:
                out.run_start_frame = int(front.index[i])
                break
        if out.run_start_frame is None:
            out.errors.append(MissingPhase(1, "reference point never left the start region"))

    cursor = out.run_start_frame if out.run_start_frame is not None else int(front.index[0])

    opens: dict[int, tuple[int, int, str]] = {}  # action -> (position, front_equiv, view)
    for k in range(1, 8):
        view = FRONT if k in FRONT_ACTION_SET else REAR
        hit = _first_dwell(zones[view], fe[view], ZONE_ACCEPT[k], cursor, d_min)
        if hit is None:
            out.errors.append(MissingPhase(k))
            continue
        pos, open_fe = hit
        if k < 7:
            nview = FRONT if (k + 1) in FRONT_ACTION_SET else REAR
            nxt = _first_dwell(zones[nview], fe[nview], ZONE_ACCEPT[k + 1], cursor, d_min)
            if nxt is not None and nxt[1] < open_fe:
                out.errors.append(OutOfOrder(k + 1, k))
        opens[k] = (pos, open_fe, view)
        cursor = open_fe

    # closes: last in-zone position before the next phase opens
    next_open_fe = {}
    following = None
    for k in range(7, 0, -1):
        next_open_fe[k] = following
        if k in opens:
            following = opens[k][1]

    for k, (pos, open_fe_k, view) in sorted(opens.items()):
        zone_arr = zones[view]
        fe_arr = fe[view]
        accept = ZONE_ACCEPT[k]
        limit = next_open_fe[k]
        j = pos
        last = pos
        while j < len(zone_arr):
            if limit is not None and fe_arr[j] >= limit:
                break
            if zone_arr[j] in accept:
                last = j
            j += 1
        out.phases[k] = ActionPhase(
            action=k,
            view=view,
            start_frame=int(frames[view][pos]),
            end_frame=int(frames[view][last]),
        )

    # kick contact ends the run
    track = ball_rear
    if track is None:
        track = extract_ball_track(bundle.ball_rear, cfg.diff_threshold, cfg.min_area)
    if 7 in opens:
        launch = cfg.ball_launch_scale * median_shank(rear)
        kick = detect_kick(track, int(frames[REAR][opens[7][0]]), launch)
        if kick is None:
            out.errors.append(NoKickDetected())
        else:
            out.kick_frame = kick
            out.run_end_frame = bundle.rear_to_front(kick)
            # the kick contact ends both the run and its phase; follow-through
            # frames stay outside so phases always sit within the timed span
            p7 = out.phases[7]
            out.phases[7] = ActionPhase(7, REAR, min(p7.start_frame, kick), kick)

    return out


def segment(bundle: RunBundle, cfg: ScoringConfig = ScoringConfig()) -> SegmentationResult:
    """Strict segmentation: raises the first recorded error."""
    return segment_partial(bundle, cfg).to_result()


def phases_to_json(seg: PartialSegmentation | SegmentationResult) -> list[dict]:
    """Debug dump of phase bounds (the CLI --dump-phases payload)."""
    if isinstance(seg, SegmentationResult):
        phases = list(seg.phases)
    else:
        phases = [seg.phases[k] for k in sorted(seg.phases)]
    return [
        {
            "action": p.action,
            "view": p.view,
            "start_frame": p.start_frame,
            "end_frame": p.end_frame,
        }
        for p in phases
    ]
