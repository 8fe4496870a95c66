"""Pose trajectory data model, canonical file format, and track cleaning.

A trajectory is an ordered stream of 33-keypoint pose frames in image
coordinates (y grows downward) for one camera view. Storage is array-backed
for the scoring pipeline; PoseFrame/Keypoint views cover per-frame access.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator

import numpy as np

from .config import CleaningConfig
from .errors import (
    MalformedFile,
    NonMonotonicFrames,
    NonPositiveFps,
    WrongKeypointCount,
)

if TYPE_CHECKING:
    from .balltrack import BallSource
    from .course import CourseLayout

KEYPOINT_COUNT = 33

FRONT = "front"
REAR = "rear"


class KP:
    """Keypoint indices used by the criteria (33-point pose topology)."""

    NOSE = 0
    LEFT_SHOULDER = 11
    RIGHT_SHOULDER = 12
    LEFT_WRIST = 15
    RIGHT_WRIST = 16
    LEFT_INDEX = 19
    RIGHT_INDEX = 20
    LEFT_HIP = 23
    RIGHT_HIP = 24
    LEFT_KNEE = 25
    RIGHT_KNEE = 26
    LEFT_ANKLE = 27
    RIGHT_ANKLE = 28
    LEFT_HEEL = 29
    RIGHT_HEEL = 30
    LEFT_FOOT_INDEX = 31
    RIGHT_FOOT_INDEX = 32

    FEET = (29, 30, 31, 32)
    LEFT_FOOT = (29, 31)
    RIGHT_FOOT = (30, 32)
    TORSO = (11, 12, 24, 23)  # shoulder/hip quad in polygon order


@dataclass(frozen=True)
class Keypoint:
    x: float
    y: float
    visibility: float = 1.0


@dataclass(frozen=True)
class PoseFrame:
    index: int
    keypoints: tuple[Keypoint, ...]

    def __post_init__(self):
        if len(self.keypoints) != KEYPOINT_COUNT:
            raise WrongKeypointCount(
                f"frame {self.index}: expected {KEYPOINT_COUNT} keypoints, got {len(self.keypoints)}"
            )


@dataclass
class Trajectory:
    """One camera view's pose stream.

    index: (n,) frame numbers, strictly increasing.
    xy:    (n, 33, 2) float64 pixel coordinates.
    vis:   (n, 33) float64 visibilities in [0, 1].
    """

    view: str
    fps: float
    index: np.ndarray
    xy: np.ndarray
    vis: np.ndarray
    _pos_of_frame: dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.view not in (FRONT, REAR):
            raise MalformedFile(f"view must be '{FRONT}' or '{REAR}', got {self.view!r}")
        if not (self.fps > 0):
            raise NonPositiveFps(f"fps must be > 0, got {self.fps}")
        self.index = np.asarray(self.index, dtype=np.int64)
        self.xy = np.asarray(self.xy, dtype=np.float64)
        self.vis = np.asarray(self.vis, dtype=np.float64)
        n = len(self.index)
        if n == 0:
            raise MalformedFile("trajectory has no frames")
        if self.xy.shape != (n, KEYPOINT_COUNT, 2):
            raise WrongKeypointCount(
                f"expected xy shape {(n, KEYPOINT_COUNT, 2)}, got {self.xy.shape}"
            )
        if self.vis.shape != (n, KEYPOINT_COUNT):
            raise MalformedFile(f"expected vis shape {(n, KEYPOINT_COUNT)}, got {self.vis.shape}")
        if self.index[0] < 0 or np.any(np.diff(self.index) <= 0):
            raise NonMonotonicFrames("frame indices must be non-negative and strictly increasing")
        if not np.all(np.isfinite(self.xy)):
            raise MalformedFile("keypoint coordinates must be finite")
        if np.any(self.vis < 0) or np.any(self.vis > 1):
            raise MalformedFile("visibility must lie in [0, 1]")
        self._pos_of_frame = {int(f): i for i, f in enumerate(self.index)}

    def __len__(self) -> int:
        return len(self.index)

    def __iter__(self) -> Iterator[PoseFrame]:
        for i in range(len(self.index)):
            yield self.frame_at(i)

    def frame_at(self, pos: int) -> PoseFrame:
        kps = tuple(
            Keypoint(float(self.xy[pos, k, 0]), float(self.xy[pos, k, 1]), float(self.vis[pos, k]))
            for k in range(KEYPOINT_COUNT)
        )
        return PoseFrame(index=int(self.index[pos]), keypoints=kps)

    def pos_of(self, frame: int) -> int:
        """Array position of a frame number (KeyError if absent)."""
        return self._pos_of_frame[frame]

    @classmethod
    def from_frames(cls, view: str, fps: float, frames: list[PoseFrame]) -> "Trajectory":
        index = np.array([f.index for f in frames], dtype=np.int64)
        xy = np.array(
            [[(kp.x, kp.y) for kp in f.keypoints] for f in frames], dtype=np.float64
        ).reshape(len(frames), KEYPOINT_COUNT, 2)
        vis = np.array(
            [[kp.visibility for kp in f.keypoints] for f in frames], dtype=np.float64
        ).reshape(len(frames), KEYPOINT_COUNT)
        return cls(view=view, fps=fps, index=index, xy=xy, vis=vis)


@dataclass
class RunBundle:
    """Everything needed to score one child's run.

    rear_frame_offset aligns the two cameras: rear frame i corresponds to
    front frame i + rear_frame_offset.
    """

    front: Trajectory
    rear: Trajectory
    front_layout: "CourseLayout"
    rear_layout: "CourseLayout"
    ball_front: "BallSource"
    ball_rear: "BallSource"
    rear_frame_offset: int = 0

    def __post_init__(self):
        if self.front.view != FRONT:
            raise MalformedFile(f"front trajectory tagged {self.front.view!r}")
        if self.rear.view != REAR:
            raise MalformedFile(f"rear trajectory tagged {self.rear.view!r}")
        if self.front.fps != self.rear.fps:
            raise MalformedFile(
                f"front fps {self.front.fps} != rear fps {self.rear.fps}"
            )

    def rear_to_front(self, rear_frame: int) -> int:
        return rear_frame + self.rear_frame_offset

    def front_to_rear(self, front_frame: int) -> int:
        return front_frame - self.rear_frame_offset


def parse_trajectory(data: bytes | str) -> Trajectory:
    """Parse the canonical trajectory file.

    Format: UTF-8 JSON {"view": "front"|"rear", "fps": number,
    "frames": [{"i": int, "kp": [[x, y, vis?] x 33]}]}; a missing third
    component means visibility 1.0.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedFile(f"not UTF-8: {exc}") from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise MalformedFile("top level must be an object")
    try:
        view = obj["view"]
        fps = obj["fps"]
        raw_frames = obj["frames"]
    except KeyError as exc:
        raise MalformedFile(f"missing field {exc}") from exc
    if not isinstance(fps, (int, float)) or isinstance(fps, bool):
        raise MalformedFile("fps must be a number")
    if not isinstance(raw_frames, list) or not raw_frames:
        raise MalformedFile("frames must be a non-empty list")

    frames: list[PoseFrame] = []
    for rf in raw_frames:
        try:
            idx = rf["i"]
            kp = rf["kp"]
        except (TypeError, KeyError) as exc:
            raise MalformedFile(f"bad frame entry: {rf!r}") from exc
        if not isinstance(kp, list) or len(kp) != KEYPOINT_COUNT:
            raise WrongKeypointCount(
                f"frame {idx}: expected {KEYPOINT_COUNT} keypoints, got {len(kp) if isinstance(kp, list) else 'non-list'}"
            )
        pts = []
        for entry in kp:
            if not isinstance(entry, list) or len(entry) not in (2, 3):
                raise MalformedFile(f"frame {idx}: keypoint must be [x, y] or [x, y, vis]")
            x, y = float(entry[0]), float(entry[1])
            v = float(entry[2]) if len(entry) == 3 else 1.0
            if not (math.isfinite(x) and math.isfinite(y)):
                raise MalformedFile(f"frame {idx}: non-finite coordinate")
            if not (0.0 <= v <= 1.0):
                raise MalformedFile(f"frame {idx}: visibility {v} outside [0, 1]")
            pts.append(Keypoint(x, y, v))
        frames.append(PoseFrame(index=int(idx), keypoints=tuple(pts)))
    return Trajectory.from_frames(view=view, fps=float(fps), frames=frames)


def _fmt(value: float) -> str:
    """Canonical number formatting: 6 significant digits, ints unpadded."""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return format(value, ".6g")


def write_trajectory(traj: Trajectory) -> bytes:
    """Serialize to the canonical byte form (stable across runs).

    Visibility is omitted when exactly 1.0; numbers carry 6 significant
    digits, which makes write(parse(x)) the identity on canonical files.
    """
    parts = ['{"view": %s, "fps": %s, "frames": [' % (json.dumps(traj.view), _fmt(traj.fps))]
    frame_strs = []
    for i in range(len(traj)):
        kp_strs = []
        for k in range(KEYPOINT_COUNT):
            x, y = traj.xy[i, k]
            v = traj.vis[i, k]
            if v == 1.0:
                kp_strs.append(f"[{_fmt(x)}, {_fmt(y)}]")
            else:
                kp_strs.append(f"[{_fmt(x)}, {_fmt(y)}, {_fmt(v)}]")
        frame_strs.append('{"i": %d, "kp": [%s]}' % (int(traj.index[i]), ", ".join(kp_strs)))
    parts.append(", ".join(frame_strs))
    parts.append("]}")
    return "".join(parts).encode("utf-8")


def ankle_midpoints(traj: Trajectory) -> np.ndarray:
    """(n, 2) midpoint of the two ankles per frame; the person reference point."""
    return (traj.xy[:, KP.LEFT_ANKLE, :] + traj.xy[:, KP.RIGHT_ANKLE, :]) / 2.0


def median_shank(traj: Trajectory) -> float:
    """Median knee-to-ankle distance over the run; the body scale unit."""
    left = np.hypot(
        traj.xy[:, KP.LEFT_KNEE, 0] - traj.xy[:, KP.LEFT_ANKLE, 0],
        traj.xy[:, KP.LEFT_KNEE, 1] - traj.xy[:, KP.LEFT_ANKLE, 1],
    )
    right = np.hypot(
        traj.xy[:, KP.RIGHT_KNEE, 0] - traj.xy[:, KP.RIGHT_ANKLE, 0],
        traj.xy[:, KP.RIGHT_KNEE, 1] - traj.xy[:, KP.RIGHT_ANKLE, 1],
    )
    return float(np.median(np.concatenate([left, right])))


def clean_trajectory(traj: Trajectory, cfg: CleaningConfig = CleaningConfig()) -> Trajectory:
    """Remove keypoint spikes and low-confidence detections.

    Per keypoint, a sample is rejected when its visibility is below the
    floor, when it jumps more than the per-frame step limit from the last
    kept sample, or when it strays from the centered window median by more
    than the deviation limit. Rejected samples are linearly interpolated
    between the nearest kept neighbours, so an already-smooth track passes
    through untouched and cleaning is idempotent.
    """
    from . import _kernels

    n = len(traj)
    xy = traj.xy.copy()
    frames = traj.index.astype(np.float64)

    for k in range(KEYPOINT_COUNT):
        pts = xy[:, k, :]
        bad = traj.vis[:, k] < cfg.min_visibility

        if n >= 2:
            last_good = None
            for i in range(n):
                if bad[i]:
                    continue
                if last_good is not None:
                    gap = frames[i] - frames[last_good]
                    step = math.hypot(*(pts[i] - pts[last_good])) / max(gap, 1.0)
                    if step > cfg.max_step:
                        bad[i] = True
                        continue
                last_good = i

        med_x = _kernels.rolling_median(pts[:, 0], cfg.window)
        med_y = _kernels.rolling_median(pts[:, 1], cfg.window)
        dev = np.hypot(pts[:, 0] - med_x, pts[:, 1] - med_y)
        bad |= dev > cfg.max_deviation

        if bad.any() and not bad.all():
            good = ~bad
            for axis in range(2):
                pts[bad, axis] = np.interp(frames[bad], frames[good], pts[good, axis])

    return Trajectory(view=traj.view, fps=traj.fps, index=traj.index.copy(), xy=xy, vis=traj.vis.copy())
