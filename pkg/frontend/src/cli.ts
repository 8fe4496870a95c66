#!/usr/bin/env node
/**
 * extract --video <path> --view front|rear --out <path> [--stride N]
 *
 * Decodes the video with ffmpeg, runs the pretrained pose model on every
 * stride-th frame, and writes the canonical trajectory JSON.
 */

import { ModelUnavailableError, UndecodableVideoError, runExtraction } from "./extract.js";
import { createMediapipeEngine } from "./mediapipe.js";
import { openVideo } from "./video.js";
import { ViewTag } from "./trajectory.js";

interface CliArgs {
  video: string;
  view: ViewTag;
  out: string;
  stride: number;
}

function parseArgs(argv: string[]): CliArgs {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key?.startsWith("--") || value === undefined) {
      throw new Error(`unexpected argument: ${key ?? "(none)"}`);
    }
    args.set(key.slice(2), value);
  }
  const video = args.get("video");
  const view = args.get("view");
  const out = args.get("out");
  const stride = Number(args.get("stride") ?? "1");
  if (!video || !out || (view !== "front" && view !== "rear")) {
    throw new Error("usage: extract --video <path> --view front|rear --out <path> [--stride N]");
  }
  if (!Number.isInteger(stride) || stride < 1) {
    throw new Error(`stride must be a positive integer, got ${args.get("stride")}`);
  }
  return { video, view, out, stride };
}

async function main(): Promise<number> {
  let args: CliArgs;
  try {
    args = parseArgs(process.argv.slice(2));
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  try {
    const source = openVideo(args.video);
    const engine = await createMediapipeEngine();
    const trajectory = await runExtraction(
      { video: args.video, view: args.view, out: args.out, stride: args.stride },
      source,
      engine,
    );
    await engine.close?.();
    console.error(`wrote ${trajectory.frames.length} frames at ${trajectory.fps} fps to ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof UndecodableVideoError || err instanceof ModelUnavailableError) {
      console.error(err.message);
      return 1;
    }
    throw err;
  }
}

main().then((code) => {
  process.exitCode = code;
});
