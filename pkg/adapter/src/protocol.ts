// NDJSON wire protocol between detector adapter and planner.
// Frame (adapter -> planner):
//   {"type":"frame","t":0,"fixation":[k,l],"detections":[{"bbox":[x,y,w,h],"confidence":c,"class":"person"}]}
// Action (planner -> adapter):
//   {"type":"action","t":0,"fixation":[k,l]}

import { z } from "zod";

export interface Detection {
  bbox: [number, number, number, number]; // x, y, width, height in [0,1]
  confidence: number;
  class: string;
}

const detectionSchema = z.object({
  bbox: z.tuple([z.number(), z.number(), z.number(), z.number()]),
  confidence: z.number().min(0).max(1),
  class: z.string(),
});

const frameSchema = z.object({
  type: z.literal("frame"),
  t: z.number().int().nonnegative(),
  fixation: z.tuple([z.number().int(), z.number().int()]),
  detections: z.array(detectionSchema),
});

const actionSchema = z.object({
  type: z.literal("action"),
  t: z.number().int().nonnegative(),
  fixation: z.tuple([z.number().int(), z.number().int()]),
});

export type FrameMessage = z.infer<typeof frameSchema>;
export type ActionMessage = z.infer<typeof actionSchema>;

export function encodeFrame(
  t: number,
  fixation: [number, number],
  detections: Detection[]
): string {
  const payload: FrameMessage = { type: "frame", t, fixation, detections };
  frameSchema.parse(payload); // refuse to emit anything protocol-invalid
  return JSON.stringify(payload) + "\n";
}

export function parseAction(line: string): ActionMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch (err) {
    throw new Error(`bad action line (not JSON): ${line.trim()}`);
  }
  const result = actionSchema.safeParse(raw);
  if (!result.success) {
    throw new Error(`bad action message: ${result.error.message}`);
  }
  return result.data;
}

export function parseFrame(line: string): FrameMessage {
  const result = frameSchema.safeParse(JSON.parse(line));
  if (!result.success) {
    throw new Error(`bad frame message: ${result.error.message}`);
  }
  return result.data;
}
