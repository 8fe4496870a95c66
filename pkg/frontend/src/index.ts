export {
  KEYPOINT_COUNT,
  TrajectoryContractError,
  decodeTrajectory,
  encodeTrajectory,
  validateTrajectory,
} from "./trajectory.js";
export type { Keypoint, PoseFrame, Trajectory, ViewTag } from "./trajectory.js";
export {
  ModelUnavailableError,
  UndecodableVideoError,
  emptyPoseKeypoints,
  extractTrajectory,
  runExtraction,
} from "./extract.js";
export type { ExtractionJob, FrameSource, PoseEngine, RawImage, SourceFrame } from "./extract.js";
export { createMediapipeEngine } from "./mediapipe.js";
export { openVideo, probeVideo } from "./video.js";
