// Pluggable detector behind a tiny interface: a model file describes which
// detector to instantiate. The built-in luminance-blob detector thresholds
// brightness and reports connected components as boxes; it is deterministic,
// dependency-free and good enough to exercise the full planner loop.

import * as fs from "fs";
import { z } from "zod";
import { RgbImage, luminance } from "./image";
import { Detection } from "./protocol";

export interface Detector {
  detect(img: RgbImage): Detection[];
}

const blobModelSchema = z.object({
  type: z.literal("luminance-blob"),
  threshold: z.number().min(0).max(1).default(0.55),
  min_area_frac: z.number().min(0).max(1).default(0.0005),
  class: z.string().default("person"),
  max_detections: z.number().int().positive().default(16),
});

export type BlobModelConfig = z.infer<typeof blobModelSchema>;

export class LuminanceBlobDetector implements Detector {
  constructor(private readonly cfg: BlobModelConfig) {}

  detect(img: RgbImage): Detection[] {
    const { width, height } = img;
    const mask = new Uint8Array(width * height);
    for (let y = 0; y < height; y++) {
      for (let x = 0; x < width; x++) {
        if (luminance(img, x, y) >= this.cfg.threshold) mask[y * width + x] = 1;
      }
    }
    const minArea = Math.max(1, Math.floor(this.cfg.min_area_frac * width * height));
    const seen = new Uint8Array(width * height);
    const out: Detection[] = [];
    const stack: number[] = [];
    for (let start = 0; start < mask.length; start++) {
      if (!mask[start] || seen[start]) continue;
      // flood fill one 4-connected component
      let minX = width, maxX = -1, minY = height, maxY = -1;
      let area = 0;
      let lumaSum = 0;
      stack.push(start);
      seen[start] = 1;
      while (stack.length) {
        const idx = stack.pop()!;
        const x = idx % width;
        const y = (idx - x) / width;
        area++;
        lumaSum += luminance(img, x, y);
        if (x < minX) minX = x;
        if (x > maxX) maxX = x;
        if (y < minY) minY = y;
        if (y > maxY) maxY = y;
        const neighbours = [idx - 1, idx + 1, idx - width, idx + width];
        const xs = [x - 1, x + 1, x, x];
        for (let n = 0; n < 4; n++) {
          const nIdx = neighbours[n];
          if (nIdx < 0 || nIdx >= mask.length) continue;
          if (xs[n] < 0 || xs[n] >= width) continue; // no row wrap
          if (mask[nIdx] && !seen[nIdx]) {
            seen[nIdx] = 1;
            stack.push(nIdx);
          }
        }
      }
      if (area < minArea) continue;
      out.push({
        bbox: [
          minX / width,
          minY / height,
          (maxX - minX + 1) / width,
          (maxY - minY + 1) / height,
        ],
        confidence: Math.min(1, lumaSum / area),
        class: this.cfg.class,
      });
    }
    // largest first, bounded count
    out.sort((a, b) => b.bbox[2] * b.bbox[3] - a.bbox[2] * a.bbox[3]);
    return out.slice(0, this.cfg.max_detections);
  }
}

export function loadDetector(modelPath: string): Detector {
  let raw: string;
  try {
    raw = fs.readFileSync(modelPath, "utf-8");
  } catch (err) {
    throw new Error(`cannot read model file ${modelPath}: ${(err as Error).message}`);
  }
  let parsed: unknown;
  try {
    parsed = JSON.parse(raw);
  } catch {
    throw new Error(`model file ${modelPath} is not valid JSON`);
  }
  const type = (parsed as { type?: string }).type;
  if (type === "luminance-blob") {
    return new LuminanceBlobDetector(blobModelSchema.parse(parsed));
  }
  throw new Error(`unknown model type ${JSON.stringify(type)} in ${modelPath}`);
}
