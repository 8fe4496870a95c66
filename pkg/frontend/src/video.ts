/**
 * ffmpeg-backed frame source: decodes any container ffmpeg understands
 * into raw RGBA frames streamed over a pipe. Container fps and dimensions
 * come from ffprobe.
 */

import { spawn, spawnSync } from "node:child_process";

import { FrameSource, RawImage, SourceFrame, UndecodableVideoError } from "./extract.js";

interface ProbeResult {
  width: number;
  height: number;
  fps: number;
}

export function probeVideo(path: string): ProbeResult {
  const probe = spawnSync(
    "ffprobe",
    [
      "-v", "error",
      "-select_streams", "v:0",
      "-show_entries", "stream=width,height,r_frame_rate",
      "-of", "json",
      path,
    ],
    { encoding: "utf-8" },
  );
  if (probe.error || probe.status !== 0) {
    throw new UndecodableVideoError(
      `ffprobe failed for ${path}: ${probe.error?.message ?? probe.stderr}`,
    );
  }
  const info = JSON.parse(probe.stdout) as {
    streams?: { width: number; height: number; r_frame_rate: string }[];
  };
  const stream = info.streams?.[0];
  if (!stream) {
    throw new UndecodableVideoError(`no video stream in ${path}`);
  }
  const [num, den] = stream.r_frame_rate.split("/").map(Number);
  const fps = den ? num / den : num;
  if (!Number.isFinite(fps) || fps <= 0) {
    throw new UndecodableVideoError(`bad frame rate ${stream.r_frame_rate} in ${path}`);
  }
  return { width: stream.width, height: stream.height, fps };
}

export function openVideo(path: string): FrameSource {
  const { width, height, fps } = probeVideo(path);
  const frameBytes = width * height * 4;

  async function* frames(): AsyncIterable<SourceFrame> {
    const proc = spawn(
      "ffmpeg",
      ["-v", "error", "-i", path, "-f", "rawvideo", "-pix_fmt", "rgba", "pipe:1"],
      { stdio: ["ignore", "pipe", "pipe"] },
    );
    let pending: Buffer = Buffer.alloc(0);
    let index = 0;
    try {
      for await (const chunk of proc.stdout) {
        pending = Buffer.concat([pending, chunk as Buffer]);
        while (pending.length >= frameBytes) {
          const raw = pending.subarray(0, frameBytes);
          pending = pending.subarray(frameBytes);
          const image: RawImage = {
            width,
            height,
            data: new Uint8ClampedArray(raw),
          };
          yield { index, timestampMs: (index * 1000) / fps, image };
          index += 1;
        }
      }
    } finally {
      proc.kill();
    }
    if (index === 0) {
      throw new UndecodableVideoError(`ffmpeg produced no frames for ${path}`);
    }
  }

  return { fps, frames };
}
