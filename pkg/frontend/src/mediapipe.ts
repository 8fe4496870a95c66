/**
 * Real pose engine: a pretrained 33-landmark pose model run in VIDEO mode.
 *
 * Model weights and the wasm runtime are fetched on first use; when that
 * fails (offline host) the factory throws ModelUnavailableError and the
 * caller can fall back or abort. Landmarks arrive normalized to [0, 1]
 * and are mapped here into pixel coordinates.
 */

import { Keypoint } from "./trajectory.js";
import { ModelUnavailableError, PoseEngine, RawImage } from "./extract.js";

const WASM_ROOT = "https://cdn.jsdelivr.net/npm/@mediapipe/tasks-vision@0.10.14/wasm";
const MODEL_ASSET =
  "https://storage.googleapis.com/mediapipe-models/pose_landmarker/pose_landmarker_lite/float16/1/pose_landmarker_lite.task";

export interface MediapipeOptions {
  wasmRoot?: string;
  modelAssetPath?: string;
  minPoseDetectionConfidence?: number;
}

export async function createMediapipeEngine(options: MediapipeOptions = {}): Promise<PoseEngine> {
  let landmarker: {
    detectForVideo(image: unknown, ts: number): { landmarks: { x: number; y: number; visibility?: number }[][] };
    close(): void;
  };
  try {
    const vision = await import("@mediapipe/tasks-vision");
    const fileset = await vision.FilesetResolver.forVisionTasks(options.wasmRoot ?? WASM_ROOT);
    landmarker = await vision.PoseLandmarker.createFromOptions(fileset, {
      baseOptions: { modelAssetPath: options.modelAssetPath ?? MODEL_ASSET },
      runningMode: "VIDEO",
      numPoses: 1,
      minPoseDetectionConfidence: options.minPoseDetectionConfidence ?? 0.5,
    });
  } catch (err) {
    throw new ModelUnavailableError(`pose model could not be initialised: ${String(err)}`);
  }

  return {
    name: "pose_landmarker_lite",
    version: "0.10",
    async estimate(image: RawImage, timestampMs: number): Promise<Keypoint[] | null> {
      const frame = { data: image.data, width: image.width, height: image.height };
      const result = landmarker.detectForVideo(frame, timestampMs);
      const person = result.landmarks[0];
      if (!person || person.length === 0) {
        return null;
      }
      return person.map((lm) => ({
        x: lm.x * image.width,
        y: lm.y * image.height,
        visibility: lm.visibility ?? 1,
      }));
    },
    close() {
      landmarker.close();
    },
  };
}
