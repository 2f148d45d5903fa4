// Main loop: image source -> detector -> frame message -> planner -> action.
// Received actions go to stdout (NDJSON), diagnostics to stderr. The current
// fixation tracks the planner's last command, which is what a compliant
// pan/tilt actuator would report.

import * as fs from "fs";
import * as path from "path";
import { spawnSync } from "child_process";
import { Detector } from "./detect";
import { IMAGE_EXTENSIONS, loadImage } from "./image";
import { PlannerClient } from "./client";
import { Detection, encodeFrame } from "./protocol";

export interface AdapterOptions {
  detector: Detector;
  client: PlannerClient;
  targetClasses: string[] | null; // null = pass everything through
  confidenceFloor: number;
  onAction?: (line: string) => void;
}

function filterDetections(dets: Detection[], opts: AdapterOptions): Detection[] {
  return dets.filter(
    (d) =>
      d.confidence >= opts.confidenceFloor &&
      (opts.targetClasses === null || opts.targetClasses.includes(d.class))
  );
}

export async function processImage(
  imagePath: string,
  t: number,
  fixation: [number, number],
  opts: AdapterOptions
): Promise<[number, number]> {
  const img = loadImage(imagePath);
  const detections = filterDetections(opts.detector.detect(img), opts);
  const line = encodeFrame(t, fixation, detections);
  const action = await opts.client.exchange(line);
  const actionLine = JSON.stringify(action) + "\n";
  (opts.onAction ?? ((l: string) => process.stdout.write(l)))(actionLine);
  process.stderr.write(
    `t=${t} ${path.basename(imagePath)}: ${detections.length} detection(s) -> fixation [${action.fixation}]\n`
  );
  return action.fixation;
}

export function listImages(dir: string): string[] {
  return fs
    .readdirSync(dir)
    .filter((f) => IMAGE_EXTENSIONS.includes(path.extname(f).toLowerCase()))
    .sort()
    .map((f) => path.join(dir, f));
}

/** Process every image in the directory in sorted order, then return. */
export async function runImageDir(dir: string, opts: AdapterOptions): Promise<number> {
  const images = listImages(dir);
  if (images.length === 0) throw new Error(`no images (${IMAGE_EXTENSIONS.join(", ")}) in ${dir}`);
  let fixation: [number, number] = [0, 0];
  let t = 0;
  for (const image of images) {
    fixation = await processImage(image, t, fixation, opts);
    t++;
  }
  return images.length;
}

/** Poll a directory forever, processing files as they appear (drop-dir feed). */
export async function runWatchDir(
  dir: string,
  opts: AdapterOptions,
  pollMs = 200,
  shouldStop: () => boolean = () => false
): Promise<void> {
  const done = new Set<string>();
  let fixation: [number, number] = [0, 0];
  let t = 0;
  while (!shouldStop()) {
    for (const image of listImages(dir)) {
      if (done.has(image)) continue;
      fixation = await processImage(image, t, fixation, opts);
      done.add(image);
      t++;
    }
    await new Promise((r) => setTimeout(r, pollMs));
  }
}

/** Grab frames from a V4L2 camera via ffmpeg; needs ffmpeg on PATH. */
export async function runCamera(
  device: string,
  opts: AdapterOptions,
  shouldStop: () => boolean = () => false
): Promise<void> {
  const probe = spawnSync("ffmpeg", ["-version"], { stdio: "ignore" });
  if (probe.error) {
    throw new Error("camera capture requires ffmpeg on PATH");
  }
  const tmp = fs.mkdtempSync("/tmp/saccade-cam-");
  let fixation: [number, number] = [0, 0];
  let t = 0;
  while (!shouldStop()) {
    const shot = path.join(tmp, "shot.png");
    const grab = spawnSync(
      "ffmpeg",
      ["-y", "-f", "v4l2", "-i", device, "-frames:v", "1", shot],
      { stdio: "ignore" }
    );
    if (grab.status !== 0) throw new Error(`ffmpeg capture from ${device} failed`);
    fixation = await processImage(shot, t, fixation, opts);
    t++;
  }
}
