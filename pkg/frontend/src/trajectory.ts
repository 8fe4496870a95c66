/**
 * Canonical trajectory file contract shared with the scoring engine.
 *
 * {"view": "front"|"rear", "fps": number,
 *  "frames": [{"i": int, "kp": [[x, y, vis?] x 33]}]}
 *
 * Numbers carry six significant digits; a keypoint's visibility is omitted
 * when exactly 1. Extra top-level fields (like "meta") are allowed — the
 * engine's parser ignores unknown keys.
 */

export const KEYPOINT_COUNT = 33;

export type ViewTag = "front" | "rear";

export interface Keypoint {
  x: number;
  y: number;
  /** confidence in [0, 1]; omitted in the file when 1 */
  visibility: number;
}

export interface PoseFrame {
  index: number;
  keypoints: Keypoint[];
}

export interface Trajectory {
  view: ViewTag;
  fps: number;
  frames: PoseFrame[];
  /** provenance: pose model name/version, source video, ... */
  meta?: Record<string, string>;
}

export class TrajectoryContractError extends Error {}

/** Enforce the engine-side invariants before anything gets written. */
export function validateTrajectory(t: Trajectory): void {
  if (t.view !== "front" && t.view !== "rear") {
    throw new TrajectoryContractError(`view must be "front" or "rear", got ${JSON.stringify(t.view)}`);
  }
  if (!Number.isFinite(t.fps) || t.fps <= 0) {
    throw new TrajectoryContractError(`fps must be > 0, got ${t.fps}`);
  }
  if (t.frames.length === 0) {
    throw new TrajectoryContractError("trajectory has no frames");
  }
  let prev = -1;
  for (const frame of t.frames) {
    if (!Number.isInteger(frame.index) || frame.index < 0 || frame.index <= prev) {
      throw new TrajectoryContractError(
        `frame indices must be non-negative and strictly increasing (saw ${frame.index} after ${prev})`,
      );
    }
    prev = frame.index;
    if (frame.keypoints.length !== KEYPOINT_COUNT) {
      throw new TrajectoryContractError(
        `frame ${frame.index}: expected ${KEYPOINT_COUNT} keypoints, got ${frame.keypoints.length}`,
      );
    }
    for (const kp of frame.keypoints) {
      if (!Number.isFinite(kp.x) || !Number.isFinite(kp.y)) {
        throw new TrajectoryContractError(`frame ${frame.index}: non-finite coordinate`);
      }
      if (!(kp.visibility >= 0 && kp.visibility <= 1)) {
        throw new TrajectoryContractError(
          `frame ${frame.index}: visibility ${kp.visibility} outside [0, 1]`,
        );
      }
    }
  }
}

/** Six-significant-digit canonical number form, integers unpadded. */
export function formatNumber(value: number): string {
  if (Number.isInteger(value) && Math.abs(value) < 1e15) {
    return String(value);
  }
  const six = value.toPrecision(6);
  // strip trailing zeros while keeping exponent notation intact
  if (six.includes("e") || six.includes("E")) {
    return String(Number(six));
  }
  return String(Number(six));
}

export function encodeTrajectory(t: Trajectory): string {
  validateTrajectory(t);
  const frames = t.frames.map((frame) => {
    const kps = frame.keypoints.map((kp) => {
      const head = `[${formatNumber(kp.x)}, ${formatNumber(kp.y)}`;
      return kp.visibility === 1 ? `${head}]` : `${head}, ${formatNumber(kp.visibility)}]`;
    });
    return `{"i": ${frame.index}, "kp": [${kps.join(", ")}]}`;
  });
  const metaPart = t.meta ? `, "meta": ${JSON.stringify(t.meta)}` : "";
  return `{"view": ${JSON.stringify(t.view)}, "fps": ${formatNumber(t.fps)}, "frames": [${frames.join(", ")}]${metaPart}}`;
}

/** Parse + re-validate a trajectory file (round-trip checking in tests). */
export function decodeTrajectory(text: string): Trajectory {
  const raw = JSON.parse(text) as {
    view: ViewTag;
    fps: number;
    frames: { i: number; kp: [number, number, number?][] }[];
    meta?: Record<string, string>;
  };
  const t: Trajectory = {
    view: raw.view,
    fps: raw.fps,
    frames: raw.frames.map((f) => ({
      index: f.i,
      keypoints: f.kp.map(([x, y, vis]) => ({ x, y, visibility: vis ?? 1 })),
    })),
    ...(raw.meta ? { meta: raw.meta } : {}),
  };
  validateTrajectory(t);
  return t;
}
