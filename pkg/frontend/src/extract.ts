/**
 * Frame-by-frame pose extraction into the canonical trajectory format.
 *
 * The video decoder and the pose model are injected behind small
 * interfaces so the pipeline is testable without a camera file or model
 * weights: see video.ts (ffmpeg source) and mediapipe.ts (real engine).
 */

import { writeFile } from "node:fs/promises";

import {
  KEYPOINT_COUNT,
  Keypoint,
  PoseFrame,
  Trajectory,
  ViewTag,
  encodeTrajectory,
} from "./trajectory.js";

export interface RawImage {
  width: number;
  height: number;
  /** RGBA bytes, row-major */
  data: Uint8ClampedArray;
}

export interface SourceFrame {
  index: number;
  timestampMs: number;
  image: RawImage;
}

export interface FrameSource {
  fps: number;
  frames(): AsyncIterable<SourceFrame>;
  close?(): Promise<void> | void;
}

export interface PoseEngine {
  name: string;
  version?: string;
  /**
   * Keypoints in pixel coordinates for the most prominent person, or null
   * when nobody is detected in the frame.
   */
  estimate(image: RawImage, timestampMs: number): Promise<Keypoint[] | null>;
  close?(): Promise<void> | void;
}

export interface ExtractionJob {
  video: string;
  view: ViewTag;
  out: string;
  stride?: number;
}

export class UndecodableVideoError extends Error {}
export class ModelUnavailableError extends Error {}

const ABSENT: Keypoint = { x: 0, y: 0, visibility: 0 };

/** A frame with nobody in it still occupies its slot: 33 points, visibility 0. */
export function emptyPoseKeypoints(): Keypoint[] {
  return Array.from({ length: KEYPOINT_COUNT }, () => ({ ...ABSENT }));
}

/**
 * Run the model over every stride-th frame and build a valid trajectory.
 *
 * Emitted frame indices are the processed-frame sequence 0..n-1 and the
 * recorded fps is the container rate divided by the stride, so downstream
 * timing stays consistent with the thinned stream.
 */
export async function extractTrajectory(
  source: FrameSource,
  engine: PoseEngine,
  view: ViewTag,
  stride = 1,
): Promise<Trajectory> {
  if (!Number.isInteger(stride) || stride < 1) {
    throw new RangeError(`stride must be a positive integer, got ${stride}`);
  }
  const frames: PoseFrame[] = [];
  let emitted = 0;
  for await (const frame of source.frames()) {
    if (frame.index % stride !== 0) {
      continue;
    }
    const detected = await engine.estimate(frame.image, frame.timestampMs);
    let keypoints: Keypoint[];
    if (detected === null) {
      keypoints = emptyPoseKeypoints();
    } else {
      if (detected.length !== KEYPOINT_COUNT) {
        throw new ModelUnavailableError(
          `pose model returned ${detected.length} keypoints, expected ${KEYPOINT_COUNT}`,
        );
      }
      keypoints = detected.map((kp) => ({
        x: kp.x,
        y: kp.y,
        visibility: Math.min(Math.max(kp.visibility, 0), 1),
      }));
    }
    frames.push({ index: emitted, keypoints });
    emitted += 1;
  }
  if (frames.length === 0) {
    throw new UndecodableVideoError("the source produced no frames");
  }
  const meta: Record<string, string> = { model: engine.name };
  if (engine.version) {
    meta.model_version = engine.version;
  }
  return { view, fps: source.fps / stride, frames, meta };
}

/** Full job: decode, extract, and write the trajectory file. */
export async function runExtraction(
  job: ExtractionJob,
  source: FrameSource,
  engine: PoseEngine,
): Promise<Trajectory> {
  const trajectory = await extractTrajectory(source, engine, job.view, job.stride ?? 1);
  trajectory.meta = { ...trajectory.meta, video: job.video };
  await writeFile(job.out, encodeTrajectory(trajectory), "utf-8");
  return trajectory;
}
