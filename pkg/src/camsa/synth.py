"""Synthetic run generator with per-criterion fault injection.

Builds full two-view keypoint streams, course layouts, and ball tracks
from a scripted kinematic model of the seven-action course. A clean
script produces a run that scores 14/14 skill points; each fault Fn
perturbs exactly the feature criterion n checks, which makes generated
bundles the ground-truth oracle for the scoring pipeline.

The scripted world: the course band sits on the ground line y=875 of a
1920x1080 front view. Transit between zones happens on a walking lane
(y=958) and a kick lane (y=1010) that no gate polygon covers, so dwell
detection only fires inside the actions. The rear view is the mirrored
front view with the throw arm and kick legs rescripted in rear
coordinates. Hop cadences keep at most seven airborne samples inside any
15-frame baseline window, which pins the rolling-median ground line to
the true ground.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .balltrack import BallTrack, FrameGrid, Precomputed
from .course import Cone, CourseLayout, Hoop, RectTarget
from .errors import InvalidScript, PathOutOfBounds
from .geometry import points_in_polygon
from .trajectory import FRONT, REAR, KEYPOINT_COUNT, KP, RunBundle, Trajectory

IMAGE_W = 1920.0
IMAGE_H = 1080.0

GROUND = 875.0
LANE = 958.0
KICK_LANE = 1010.0

# canonical child proportions in pixels at scale 1.0
ANKLE_H = 12.0
SHANK = 55.0
THIGH = 52.0
TORSO = 108.0
NOSE_RISE = 38.0
SHOULDER_W = 40.0
HIP_W = 24.0

HOP_RISE = 1.1  # jump height as a multiple of the local shank length

DEFAULT_ACTION_SECONDS = (1.33, 1.2, 0.8, 1.0, 1.47, 2.2, 0.9)

FAULT_IDS = frozenset(range(1, 15))


@dataclass(frozen=True)
class RunScript:
    """Recipe for one synthetic run."""

    seed: int = 1
    action_durations: tuple[float, ...] = DEFAULT_ACTION_SECONDS
    fault_set: frozenset[int] = frozenset()
    noise: float = 0.5
    fps: float = 30.0
    pace: float = 1.0  # stretches the transit segments between actions

    def validate(self) -> None:
        if len(self.action_durations) != 7 or any(d <= 0 for d in self.action_durations):
            raise InvalidScript("action_durations must be 7 positive values")
        if not set(self.fault_set) <= FAULT_IDS:
            raise InvalidScript(f"fault ids must be within 1..14, got {sorted(self.fault_set)}")
        if self.noise < 0:
            raise InvalidScript("noise must be >= 0")
        if self.fps <= 0:
            raise InvalidScript("fps must be > 0")
        if self.pace <= 0:
            raise InvalidScript("pace must be > 0")


@dataclass(frozen=True)
class GroundTruth:
    """What the generator scripted, for checking the pipeline against."""

    expected_failed_criteria: frozenset[int]
    phases: dict[int, tuple[int, int]]  # action -> (start, end) frames in its view
    phase_views: dict[int, str]
    run_start_frame: int
    kick_frame: int                     # rear-view frame numbers
    completion_seconds: float


def script_for_completion(target_seconds: float, base: RunScript = RunScript()) -> RunScript:
    """Rescale a script so the start-to-kick span lands on the target time."""
    script = base
    for _ in range(3):
        _, truth = generate_run(script)
        actual = truth.completion_seconds
        if abs(actual - target_seconds) * script.fps <= 1.0:
            break
        f = target_seconds / actual
        script = replace(
            script,
            action_durations=tuple(d * f for d in script.action_durations),
            pace=script.pace * f,
        )
    return script


# --- course layouts ---

def _cone(cid: int, apex: tuple[float, float]) -> Cone:
    ax, ay = apex
    return Cone(id=cid, apex=apex, base_polygon=((ax - 25, ay + 48), (ax + 25, ay + 48), (ax, ay)))


HOOP_X = tuple(290.0 + 118.0 * k for k in range(6))
HOOP_Y = 860.0
HOOP_R = 56.0

CONE1 = (990.0, 855.0)
CONE2 = (1290.0, 855.0)
CONE3 = (1455.0, 700.0)
CONE4 = (1595.0, 965.0)
# rear-view coordinates
CONE5 = (250.0, 920.0)
CONE6 = (250.0, 1110.0)
CONE2_REAR = (800.0, 700.0)

RECT_REAR = ((1120.0, 460.0), (1280.0, 460.0), (1280.0, 540.0), (1120.0, 540.0))

START_REGION = ((60.0, 800.0), (180.0, 800.0), (180.0, 950.0), (60.0, 950.0))


def _rect_zone(x0, x1, y0, y1):
    return (
        (float(x0), float(y0)),
        (float(x1), float(y0)),
        (float(x1), float(y1)),
        (float(x0), float(y1)),
    )


FRONT_ZONES = {
    1: _rect_zone(240, 600, 735, 925),
    2: _rect_zone(1010, 1270, 740, 920),
    3: _rect_zone(1310, 1385, 735, 990),
    5: _rect_zone(1430, 1620, 740, 920),
    6: _rect_zone(240, 950, 735, 925),
}
REAR_ZONES = {
    4: _rect_zone(492, 532, 930, 990),
    7: _rect_zone(405, 485, 975, 1045),
}


def front_layout() -> CourseLayout:
    return CourseLayout(
        view=FRONT,
        hoops=tuple(Hoop(id=k + 1, center=(HOOP_X[k], HOOP_Y), radius=HOOP_R) for k in range(6)),
        cones=(_cone(1, CONE1), _cone(2, CONE2), _cone(3, CONE3), _cone(4, CONE4)),
        rect=None,
        start_region=START_REGION,
        zones={k: tuple(v) for k, v in FRONT_ZONES.items()},
    )


def rear_layout() -> CourseLayout:
    return CourseLayout(
        view=REAR,
        hoops=(),
        cones=(_cone(2, CONE2_REAR), _cone(5, CONE5), _cone(6, CONE6)),
        rect=RectTarget(corners=RECT_REAR),
        start_region=((40.0, 40.0), (120.0, 40.0), (120.0, 120.0), (40.0, 120.0)),
        zones={k: tuple(v) for k, v in REAR_ZONES.items()},
    )


# --- channel builder ---

def _scale_at(x):
    return 1.0 + 0.08 * (np.asarray(x, dtype=np.float64) / IMAGE_W - 0.5)


@dataclass
class _Channels:
    """Per-frame motion parameters accumulated segment by segment."""

    mx: list[float] = field(default_factory=list)
    gy: list[float] = field(default_factory=list)
    lift_l: list[float] = field(default_factory=list)
    lift_r: list[float] = field(default_factory=list)
    dxl: list[float] = field(default_factory=list)
    dxr: list[float] = field(default_factory=list)
    swap: list[bool] = field(default_factory=list)
    front_kp: dict[int, dict[int, tuple[float, float]]] = field(default_factory=dict)
    rear_kp: dict[int, dict[int, tuple[float, float]]] = field(default_factory=dict)
    front_ball: dict[int, tuple[float, float]] = field(default_factory=dict)
    rear_ball: dict[int, tuple[float, float]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.mx)

    def put_frame(self, mx, gy, lift_l=0.0, lift_r=0.0, dxl=-14.0, dxr=14.0, swap=False):
        self.mx.append(float(mx))
        self.gy.append(float(gy))
        self.lift_l.append(float(lift_l))
        self.lift_r.append(float(lift_r))
        self.dxl.append(float(dxl))
        self.dxr.append(float(dxr))
        self.swap.append(bool(swap))

    def stand(self, n, x, gy, lift_l=0.0, lift_r=0.0, dxl=-14.0, dxr=14.0):
        for _ in range(n):
            self.put_frame(x, gy, lift_l, lift_r, dxl, dxr)

    def walk(self, n, x0, x1, gy):
        step = (x1 - x0) / n
        for i in range(1, n + 1):
            self.put_frame(x0 + step * i, gy)

    def ramp(self, n, x0, x1, gy0, gy1):
        for i in range(1, n + 1):
            t = i / n
            self.put_frame(x0 + (x1 - x0) * t, gy0 + (gy1 - gy0) * t)

    def hop(self, n_air, x0, x1, gy, feet, rise, dxl=-14.0, dxr=14.0, held_lift=0.0, swap=False):
        """One airborne arc; horizontal travel finishes before touch-down."""
        for i in range(1, n_air + 1):
            t = i / n_air
            prog = min(t / 0.75, 1.0)
            x = x0 + (x1 - x0) * (3 * prog**2 - 2 * prog**3)
            lift = rise * 4.0 * t * (1.0 - t)
            if feet == "both":
                ll, lr = lift, lift
            elif feet == "left":
                ll, lr = lift, held_lift
            else:
                ll, lr = held_lift, lift
            self.put_frame(x, gy, ll, lr, dxl, dxr, swap)

    def override(self, view, frame, kp, pos):
        target = self.front_kp if view == FRONT else self.rear_kp
        target.setdefault(frame, {})[kp] = (float(pos[0]), float(pos[1]))


def _body_pose(ch: _Channels) -> np.ndarray:
    """Assemble the (n, 33, 2) front-view keypoint array from the channels."""
    mx = np.asarray(ch.mx)
    gy = np.asarray(ch.gy)
    lift_l = np.asarray(ch.lift_l)
    lift_r = np.asarray(ch.lift_r)
    dxl = np.asarray(ch.dxl)
    dxr = np.asarray(ch.dxr)
    swap = np.asarray(ch.swap)
    s = _scale_at(mx)
    n = len(mx)

    xy = np.zeros((n, KEYPOINT_COUNT, 2))

    ankle_lx = np.where(swap, mx + dxr, mx + dxl)
    ankle_rx = np.where(swap, mx + dxl, mx + dxr)
    ankle_ly = gy - ANKLE_H * s - lift_l
    ankle_ry = gy - ANKLE_H * s - lift_r

    xy[:, KP.LEFT_ANKLE] = np.stack([ankle_lx, ankle_ly], axis=1)
    xy[:, KP.RIGHT_ANKLE] = np.stack([ankle_rx, ankle_ry], axis=1)
    xy[:, KP.LEFT_HEEL] = np.stack([ankle_lx - 10 * s, ankle_ly + 8 * s], axis=1)
    xy[:, KP.RIGHT_HEEL] = np.stack([ankle_rx - 10 * s, ankle_ry + 8 * s], axis=1)
    xy[:, KP.LEFT_FOOT_INDEX] = np.stack([ankle_lx + 20 * s, ankle_ly + 6 * s], axis=1)
    xy[:, KP.RIGHT_FOOT_INDEX] = np.stack([ankle_rx + 20 * s, ankle_ry + 6 * s], axis=1)

    xy[:, KP.LEFT_KNEE] = np.stack([mx + dxl * 0.8 + 3 * s, ankle_ly - SHANK * s], axis=1)
    xy[:, KP.RIGHT_KNEE] = np.stack([mx + dxr * 0.8 + 3 * s, ankle_ry - SHANK * s], axis=1)

    hip_y = gy - (ANKLE_H + SHANK + THIGH) * s
    xy[:, KP.LEFT_HIP] = np.stack([mx - HIP_W * s + 2 * s, hip_y], axis=1)
    xy[:, KP.RIGHT_HIP] = np.stack([mx + HIP_W * s + 2 * s, hip_y], axis=1)

    sh_y = hip_y - TORSO * s
    sh_lx = mx - SHOULDER_W * s
    sh_rx = mx + SHOULDER_W * s
    xy[:, KP.LEFT_SHOULDER] = np.stack([sh_lx, sh_y], axis=1)
    xy[:, KP.RIGHT_SHOULDER] = np.stack([sh_rx, sh_y], axis=1)

    nose = np.stack([mx + 6 * s, sh_y - NOSE_RISE * s], axis=1)
    xy[:, KP.NOSE] = nose
    face_off = [(-4, -6), (-7, -7), (-10, -6), (4, -6), (7, -7), (10, -6),
                (-14, -2), (14, -2), (-5, 5), (5, 5)]
    for idx, (ox, oy) in enumerate(face_off, start=1):
        xy[:, idx] = nose + np.stack([ox * s, oy * s], axis=1)

    wrist_l = np.stack([sh_lx - 2 * s, sh_y + 72 * s], axis=1)
    wrist_r = np.stack([sh_rx + 2 * s, sh_y + 72 * s], axis=1)
    xy[:, KP.LEFT_WRIST] = wrist_l
    xy[:, KP.RIGHT_WRIST] = wrist_r
    xy[:, 13] = (xy[:, KP.LEFT_SHOULDER] + wrist_l) / 2 + [0.0, 4.0]
    xy[:, 14] = (xy[:, KP.RIGHT_SHOULDER] + wrist_r) / 2 + [0.0, 4.0]
    xy[:, 17] = wrist_l + np.stack([-4 * s, 12 * s], axis=1)
    xy[:, 18] = wrist_r + np.stack([4 * s, 12 * s], axis=1)
    xy[:, KP.LEFT_INDEX] = wrist_l + np.stack([-6 * s, 12 * s], axis=1)
    xy[:, KP.RIGHT_INDEX] = wrist_r + np.stack([6 * s, 12 * s], axis=1)
    xy[:, 21] = wrist_l + np.stack([-7 * s, 9 * s], axis=1)
    xy[:, 22] = wrist_r + np.stack([7 * s, 9 * s], axis=1)
    return xy


# --- the run script ---

def _frames(seconds: float, fps: float) -> int:
    return max(int(round(seconds * fps)), 1)


def _hop_pattern(total: int, hops: int, canonical_air=5, canonical_ground=6):
    """Airborne/ground frame counts per hop cycle for a given budget."""
    per = max(total // hops, canonical_air + canonical_ground)
    stretch = per / (canonical_air + canonical_ground)
    air = max(canonical_air, int(round(canonical_air * stretch)))
    ground = max(canonical_ground, per - air)
    return air, ground


def generate_run(script: RunScript = RunScript()) -> tuple[RunBundle, GroundTruth]:
    """Deterministic synthetic bundle plus its scripted ground truth."""
    script.validate()
    fps = script.fps
    faults = set(script.fault_set)
    ch = _Channels()

    def tframes(seconds: float) -> int:
        return _frames(seconds * script.pace, fps)

    def local_rise(x: float) -> float:
        return HOP_RISE * SHANK * float(_scale_at(x))

    # --- stand in the start box, then set off ---
    ch.stand(_frames(0.6, fps), 120.0, GROUND)
    ch.walk(tframes(0.3), 120.0, 252.0, GROUND)

    # --- action 1: two-foot jumps into hoops 1..3 ---
    n1 = _frames(script.action_durations[0], fps)
    air1, ground1 = _hop_pattern(max(n1 - 7, 33), 3)
    ch.stand(3, 252.0, GROUND)
    x_prev = 252.0
    for idx in range(3):
        target = HOOP_X[idx] + (38.0 if 1 in faults and idx == 1 else 0.0)
        ch.hop(air1, x_prev, target, GROUND, "both", local_rise(target), dxl=-12.0, dxr=12.0)
        if 2 in faults and idx == 2:
            ch.stand(max(ground1 - 2, 2), target, GROUND, dxl=-12.0, dxr=12.0)
            ch.hop(air1, target, target, GROUND, "both", local_rise(target), dxl=-12.0, dxr=12.0)
            ch.stand(4, target, GROUND, dxl=-12.0, dxr=12.0)
        else:
            ch.stand(ground1 + (1 if idx == 2 else 0), target, GROUND, dxl=-12.0, dxr=12.0)
        x_prev = target

    # --- transit to the slide corridor ---
    ch.ramp(3, x_prev, x_prev + 15, GROUND, LANE)
    ch.walk(tframes(0.55), x_prev + 15, 996.0, LANE)
    ch.ramp(3, 996.0, 1014.0, LANE, GROUND)

    # --- action 2: slide out to cone 2, back to cone 1, touching each ---
    n2 = _frames(script.action_durations[1], fps)
    out_n = max(int(round(n2 * 14 / 36)), 8)
    pause_n = max(int(round(n2 * 4 / 36)), 3)
    back_n = out_n
    slide_l, slide_r = 1014.0, 1262.0

    def slide(n, x0, x1, swap_window):
        step = (x1 - x0) / n
        for i in range(n):
            swapped = swap_window is not None and swap_window[0] <= i < swap_window[1]
            ch.put_frame(x0 + step * (i + 1), GROUND, swap=swapped)

    slide(out_n, slide_l, slide_r, (out_n // 3, out_n // 3 + 6) if 3 in faults else None)
    pause1 = len(ch)
    ch.stand(pause_n, slide_r, GROUND)
    slide(back_n, slide_r, slide_l, (back_n // 3, back_n // 3 + 6) if 4 in faults else None)
    pause2 = len(ch)
    ch.stand(pause_n, slide_l, GROUND)

    if 5 not in faults:
        for i in range(pause_n):
            ch.override(FRONT, pause1 + i, KP.RIGHT_INDEX, (CONE2[0] + 1.0, CONE2[1] - 1.0))
            ch.override(FRONT, pause1 + i, KP.RIGHT_WRIST, (CONE2[0] - 5.0, CONE2[1] - 13.0))
            ch.override(FRONT, pause2 + i, KP.LEFT_INDEX, (CONE1[0] + 1.0, CONE1[1] - 1.0))
            ch.override(FRONT, pause2 + i, KP.LEFT_WRIST, (CONE1[0] + 7.0, CONE1[1] - 13.0))

    # --- transit to the catch spot ---
    ch.ramp(3, slide_l, 1032.0, GROUND, LANE)
    ch.walk(tframes(0.45), 1032.0, 1334.0, LANE)
    ch.ramp(3, 1334.0, 1352.0, LANE, GROUND)

    # --- action 3: catch the incoming ball ---
    n3 = _frames(script.action_durations[2], fps)
    catch_x = 1352.0
    s3 = float(_scale_at(catch_x))
    sh_y3 = GROUND - (ANKLE_H + SHANK + THIGH + TORSO) * s3
    wrist_r3 = (catch_x + 48.0, sh_y3 + 30.0)
    index_r3 = (wrist_r3[0] + 14.0, wrist_r3[1] + 6.0)
    wrist_l3 = (catch_x + 40.0, sh_y3 + 22.0)
    index_l3 = (wrist_l3[0] + 14.0, wrist_l3[1] + 6.0)
    a3_start = len(ch)
    ch.stand(n3, catch_x, GROUND)
    for i in range(2, n3):
        f = a3_start + i
        ch.override(FRONT, f, KP.RIGHT_WRIST, wrist_r3)
        ch.override(FRONT, f, KP.RIGHT_INDEX, index_r3)
        ch.override(FRONT, f, KP.LEFT_WRIST, wrist_l3)
        ch.override(FRONT, f, KP.LEFT_INDEX, index_l3)
    flight_n = min(max(6, n3 - 12), 14)
    contact_i = 4 + flight_n
    origin = np.array([1650.0, 560.0])
    target = np.array(index_r3)
    for j in range(flight_n + 1):
        t = j / flight_n
        p = origin + (target - origin) * t
        p[1] -= 40.0 * 4 * t * (1 - t)  # shallow arc
        ch.front_ball[a3_start + 4 + j] = (float(p[0]), float(p[1]))
    if 6 in faults:
        vel = (target - origin) / flight_n + np.array([0.0, 12.0])
        for j in range(1, max(min(9, n3 - contact_i), 2)):
            p = target + vel * j
            ch.front_ball[a3_start + contact_i + j] = (float(p[0]), float(p[1]))
    else:
        hold_n = min(n3 - contact_i - 1, 10)
        for j in range(1, hold_n + 1):
            ch.front_ball[a3_start + contact_i + j] = (index_r3[0] + 2.0, index_r3[1] + 1.0)

    # --- transit to the throw spot ---
    ch.ramp(3, catch_x, 1361.0, GROUND, LANE)
    a4_cover_start = len(ch)
    ch.walk(tframes(0.2), 1361.0, 1413.0, LANE)

    # --- action 4: overhand throw at the rear rectangular target ---
    n4 = _frames(script.action_durations[3], fps)
    a4_start = len(ch)
    ch.stand(n4, 1413.0, LANE)
    # cover the zone-entry walk and the walk-out too, so the throw arm pose
    # spans the whole dwell the segmenter will assign to this action
    ch.walk(tframes(0.15), 1413.0, 1441.0, LANE)
    a4_cover_end = len(ch)
    windup_end = max(n4 // 3, 5)
    swing_end = windup_end + max(n4 // 5, 4)
    s4 = float(_scale_at(1413.0))
    rear_nose_x = IMAGE_W - (1413.0 + 6 * s4)
    sh_y4 = LANE - (ANKLE_H + SHANK + THIGH + TORSO) * s4
    nose_y4 = sh_y4 - NOSE_RISE * s4
    release_pos = None
    release_frame = None
    for f in range(a4_cover_start, a4_cover_end):
        i = f - a4_start
        if i < 2:
            x_rel = 12.0
        elif i < windup_end:
            t = (i - 2) / max(windup_end - 3, 1)
            x_rel = 12.0 - 77.0 * min(t, 1.0)
        elif i < swing_end:
            t = (i - windup_end) / max(swing_end - windup_end - 1, 1)
            x_rel = -65.0 + 160.0 * min(t, 1.0)
        else:
            x_rel = 95.0
        if 8 in faults:
            x_rel = max(x_rel, 18.0)
        wy = nose_y4 + 36.0 if i < windup_end else nose_y4 - 44.0
        ch.override(REAR, f, KP.RIGHT_WRIST, (rear_nose_x + x_rel, wy))
        ch.override(REAR, f, KP.LEFT_WRIST, (rear_nose_x + 14.0, nose_y4 + 60.0))
        if i == swing_end - 1:
            release_pos = (rear_nose_x + x_rel, wy)
            release_frame = f
    rect_cx = (RECT_REAR[0][0] + RECT_REAR[1][0]) / 2.0
    aim = np.array([rect_cx, 390.0 if 7 in faults else 500.0])
    start_p = np.array(release_pos)
    flight4 = 10
    for j in range(1, flight4 + 1):
        p = start_p + (aim - start_p) * (j / flight4)
        ch.rear_ball[release_frame + j] = (float(p[0]), float(p[1]))

    # --- transit into the step-hop corridor ---
    a5_cover_start = len(ch)
    ch.ramp(3, 1441.0, 1453.0, LANE, GROUND)
    ch.stand(4, 1456.0, GROUND)

    # --- action 5: step-hops with alternating arm swing ---
    n5 = _frames(script.action_durations[4], fps)
    hops = 4
    air5, ground5 = _hop_pattern(n5, hops)
    x5 = 1456.0
    stride = (1610.0 - x5) / hops
    for h in range(hops):
        if 9 in faults:
            ch.walk(air5, x5, x5 + stride, GROUND)
        else:
            ch.hop(air5, x5, x5 + stride, GROUND, "left" if h % 2 == 0 else "right", local_rise(x5))
        ch.stand(ground5, x5 + stride, GROUND)
        x5 += stride

    # arm channel covers the zone entry ramp and the exit ramp as well
    ch.ramp(3, x5, x5 + 9, GROUND, LANE)
    a5_cover_end = len(ch)
    period = max((a5_cover_end - a5_cover_start) // 2, 8)
    for i in range(a5_cover_end - a5_cover_start):
        f = a5_cover_start + i
        mxf = ch.mx[f]
        sf = float(_scale_at(mxf))
        nose_x = mxf + 6 * sf
        sh_yf = ch.gy[f] - (ANKLE_H + SHANK + THIGH + TORSO) * sf
        if 10 in faults:
            l_x, r_x = nose_x + 25.0, nose_x - 25.0
        else:
            swing = 45.0 * math.sin(2 * math.pi * i / period)
            l_x, r_x = nose_x + swing, nose_x - swing
        ch.override(FRONT, f, KP.LEFT_WRIST, (l_x, sh_yf + 40.0))
        ch.override(FRONT, f, KP.RIGHT_WRIST, (r_x, sh_yf + 40.0))

    # --- transit back to the hoops ---
    ch.walk(tframes(1.35), x5 + 9, 232.0, LANE)
    ch.ramp(8, 232.0, 232.0, LANE, GROUND)
    ch.walk(10, 232.0, 272.0, GROUND)

    # --- action 6: one-foot hops through hoops 1..6 ---
    n6 = _frames(script.action_durations[5], fps)
    air6, ground6 = _hop_pattern(n6, 6)
    hold_dxl, hold_lift = -62.0, 80.0
    x_prev = 272.0
    for idx in range(6):
        target = HOOP_X[idx]
        two_footed = 11 in faults and idx == 3
        if two_footed:
            ch.hop(air6, x_prev, target, GROUND, "both", local_rise(target), dxl=-20.0, dxr=0.0)
            ch.stand(ground6, target, GROUND, dxl=-20.0, dxr=0.0)
        else:
            ch.hop(air6, x_prev, target, GROUND, "right", local_rise(target),
                   dxl=hold_dxl, dxr=0.0, held_lift=hold_lift)
            ch.stand(ground6, target, GROUND, lift_l=hold_lift, dxl=hold_dxl, dxr=0.0)
        if 12 in faults and idx == 2:
            ch.hop(air6, target, target, GROUND, "right", local_rise(target),
                   dxl=hold_dxl, dxr=0.0, held_lift=hold_lift)
            ch.stand(max(ground6 - 1, 3), target, GROUND, lift_l=hold_lift, dxl=hold_dxl, dxr=0.0)
        x_prev = target

    # --- transit to the kick lane ---
    ch.ramp(6, x_prev, x_prev + 24, GROUND, KICK_LANE)
    ch.walk(tframes(0.75), x_prev + 24, 1447.0, KICK_LANE)

    # --- action 7: run up and kick through the rear cone 5-6 gap ---
    n7 = _frames(script.action_durations[6], fps)
    a7_start = len(ch)
    approach_n = max(n7 // 3, 5)
    ch.walk(approach_n, 1447.0, 1483.0, KICK_LANE)
    ch.stand(n7 - approach_n, 1483.0, KICK_LANE)

    ball_rest = (410.0, 1012.0)
    s7 = float(_scale_at(1483.0))
    ankle_y7 = KICK_LANE - ANKLE_H * s7
    plant = a7_start + approach_n
    swing_n = 5
    contact_frame = plant + 2 + 3
    sup_ankle = (443.0, ankle_y7 - 2.0)
    sup_knee = (447.0, sup_ankle[1] - SHANK * s7)
    for f in range(plant, a7_start + n7):
        ch.override(REAR, f, KP.LEFT_ANKLE, sup_ankle)
        ch.override(REAR, f, KP.LEFT_KNEE, sup_knee)
        ch.override(REAR, f, KP.LEFT_HEEL, (sup_ankle[0] + 10.0, sup_ankle[1] + 8.0))
        ch.override(REAR, f, KP.LEFT_FOOT_INDEX, (sup_ankle[0] - 20.0, sup_ankle[1] + 6.0))
        j = f - (plant + 2)
        if 14 in faults:
            kx = ball_rest[0] + 7.0
        elif j < 0:
            kx = sup_ankle[0] + 38.0
        elif j < swing_n:
            kx = sup_ankle[0] + 38.0 - 81.0 * (j / (swing_n - 1))
        else:
            kx = sup_ankle[0] - 43.0
        kick_ankle = (kx, ankle_y7 - 6.0)
        ch.override(REAR, f, KP.RIGHT_ANKLE, kick_ankle)
        ch.override(REAR, f, KP.RIGHT_KNEE, (kx + 6.0, kick_ankle[1] - SHANK * s7))
        ch.override(REAR, f, KP.RIGHT_HEEL, (kx + 10.0, kick_ankle[1] + 8.0))
        ch.override(REAR, f, KP.RIGHT_FOOT_INDEX, (kx - 18.0, kick_ankle[1] + 6.0))

    for f in range(max(a7_start - 12, 0), contact_frame + 1):
        ch.rear_ball[f] = ball_rest
    vel = (-24.0, -12.0) if 13 in faults else (-24.0, 0.0)
    for j in range(1, 13):
        px = ball_rest[0] + vel[0] * j
        if px < 10:
            break
        ch.rear_ball[contact_frame + j] = (px, ball_rest[1] + vel[1] * j)

    ch.stand(max(_frames(0.3, fps), 4), 1483.0, KICK_LANE)

    # --- assemble trajectories ---
    front_xy = _body_pose(ch)
    for f, kvs in ch.front_kp.items():
        for kp, pos in kvs.items():
            front_xy[f, kp] = pos
    rear_xy = front_xy.copy()
    rear_xy[:, :, 0] = IMAGE_W - rear_xy[:, :, 0]
    for f, kvs in ch.rear_kp.items():
        for kp, pos in kvs.items():
            rear_xy[f, kp] = pos

    rng = np.random.default_rng(script.seed)
    front_xy = front_xy + rng.standard_normal(front_xy.shape) * script.noise
    rear_xy = rear_xy + rng.standard_normal(rear_xy.shape) * script.noise

    n = len(ch)
    index = np.arange(n, dtype=np.int64)
    vis = np.ones((n, KEYPOINT_COUNT))
    front = Trajectory(view=FRONT, fps=fps, index=index, xy=front_xy, vis=vis)
    rear = Trajectory(view=REAR, fps=fps, index=index.copy(), xy=rear_xy, vis=vis.copy())

    bundle = RunBundle(
        front=front,
        rear=rear,
        front_layout=front_layout(),
        rear_layout=rear_layout(),
        ball_front=Precomputed(BallTrack(samples=dict(sorted(ch.front_ball.items())))),
        ball_rear=Precomputed(BallTrack(samples=dict(sorted(ch.rear_ball.items())))),
        rear_frame_offset=0,
    )
    truth = _ground_truth(bundle, script, contact_frame + 1)
    return bundle, truth


def _ground_truth(bundle: RunBundle, script: RunScript, kick_frame: int) -> GroundTruth:
    """Scripted phase bounds and timing, read back from the emitted channels."""
    mid_f = (bundle.front.xy[:, KP.LEFT_ANKLE] + bundle.front.xy[:, KP.RIGHT_ANKLE]) / 2
    mid_r = (bundle.rear.xy[:, KP.LEFT_ANKLE] + bundle.rear.xy[:, KP.RIGHT_ANKLE]) / 2

    inside_start = points_in_polygon(mid_f, np.asarray(START_REGION)) >= 0
    run_start = 0
    seen = False
    for i, flag in enumerate(inside_start):
        if flag:
            seen = True
        elif seen:
            run_start = i
            break

    hits: dict[int, np.ndarray] = {}
    for k, poly in FRONT_ZONES.items():
        hits[k] = points_in_polygon(mid_f, np.asarray(poly, dtype=float)) >= 0
    for k, poly in REAR_ZONES.items():
        hits[k] = points_in_polygon(mid_r, np.asarray(poly, dtype=float)) >= 0
    accept = {k: hits[k] for k in range(1, 8)}
    accept[6] = hits[1] | hits[6]

    def first_run(mask: np.ndarray, start: int, d_min: int = 3) -> int | None:
        count = 0
        for i in range(start, len(mask)):
            count = count + 1 if mask[i] else 0
            if count == d_min:
                return i - d_min + 1
        return None

    opens: dict[int, int] = {}
    cursor = run_start
    for k in range(1, 8):
        start = first_run(accept[k], cursor)
        if start is None:
            continue
        opens[k] = start
        cursor = start

    phases: dict[int, tuple[int, int]] = {}
    views: dict[int, str] = {}
    n = len(mid_f)
    for k, start in opens.items():
        nxt = min((opens[j] for j in opens if j > k), default=n)
        end = start
        for i in range(start, min(nxt, n)):
            if accept[k][i]:
                end = i
        if k == 7:
            end = kick_frame  # the kick contact closes the run and its phase
        phases[k] = (start, end)
        views[k] = FRONT if k in (1, 2, 3, 5, 6) else REAR

    return GroundTruth(
        expected_failed_criteria=frozenset(script.fault_set),
        phases=phases,
        phase_views=views,
        run_start_frame=run_start,
        kick_frame=kick_frame,
        completion_seconds=(kick_frame - run_start) / script.fps,
    )


# --- ball grid fixtures ---

def generate_ball_grids(
    path,
    grid_size: tuple[int, int] = (64, 64),
    blob_radius: float = 1.4,
    seed: int = 0,
    background: int = 20,
    peak: int = 180,
    noise_max: int = 5,
) -> list[FrameGrid]:
    """Render a bright moving blob over a dark noisy background.

    path: (n, 2) blob centers in cell coordinates; every center must lie
    inside the grid.
    """
    path = np.asarray(path, dtype=np.float64)
    w, h = grid_size
    if (path[:, 0].min() < 0 or path[:, 0].max() >= w
            or path[:, 1].min() < 0 or path[:, 1].max() >= h):
        raise PathOutOfBounds("blob path leaves the grid")
    rng = np.random.default_rng(seed)
    ys, xs = np.mgrid[0:h, 0:w]
    grids = []
    for cx, cy in path:
        blob = peak * np.exp(-((xs - cx) ** 2 + (ys - cy) ** 2) / (2 * blob_radius**2))
        values = background + blob + rng.uniform(0, noise_max, (h, w))
        grids.append(FrameGrid(width=w, height=h, values=np.clip(values, 0, 255).astype(np.uint8)))
    return grids
