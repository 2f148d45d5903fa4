import * as fs from "fs";
import * as net from "net";
import * as os from "os";
import * as path from "path";
import * as readline from "readline";
import { afterEach, beforeEach, describe, expect, it } from "vitest";
import { AdapterOptions, listImages, runImageDir } from "../src/adapter";
import { PlannerClient } from "../src/client";
import { loadDetector } from "../src/detect";
import { parseFrame } from "../src/protocol";
import { BLOB_MODEL, writePpmBlob } from "./helpers";

let dir: string;

beforeEach(() => {
  dir = fs.mkdtempSync(path.join(os.tmpdir(), "adapter-e2e-"));
});

afterEach(() => {
  fs.rmSync(dir, { recursive: true, force: true });
});

interface MockPlanner {
  server: net.Server;
  port: number;
  framesSeen: string[];
  close(): void;
}

// Planner stand-in: validates each frame line and replies with a rotating
// fixation so the adapter's "current fixation" visibly follows commands.
function startMockPlanner(): Promise<MockPlanner> {
  const framesSeen: string[] = [];
  const server = net.createServer((sock) => {
    const rl = readline.createInterface({ input: sock });
    rl.on("line", (line) => {
      framesSeen.push(line);
      const frame = parseFrame(line);
      const reply = {
        type: "action",
        t: frame.t,
        fixation: [frame.t % 9, (frame.t * 2) % 9],
      };
      sock.write(JSON.stringify(reply) + "\n");
    });
  });
  return new Promise((resolve) => {
    server.listen(0, "127.0.0.1", () => {
      const port = (server.address() as net.AddressInfo).port;
      resolve({ server, port, framesSeen, close: () => server.close() });
    });
  });
}

function makeOptions(planner: MockPlanner, actions: string[]): AdapterOptions {
  const modelPath = path.join(dir, "model.json");
  fs.writeFileSync(modelPath, JSON.stringify(BLOB_MODEL));
  return {
    detector: loadDetector(modelPath),
    client: new PlannerClient({ host: "127.0.0.1", port: planner.port }),
    targetClasses: ["person"],
    confidenceFloor: 0.25,
    onAction: (line) => actions.push(line),
  };
}

describe("image directory mode", () => {
  it("emits one frame and receives one action per image, in sorted order", async () => {
    const images = path.join(dir, "images");
    fs.mkdirSync(images);
    for (let i = 0; i < 10; i++) {
      writePpmBlob(path.join(images, `img_${String(i).padStart(3, "0")}.ppm`), 0.5, 0.5);
    }
    const planner = await startMockPlanner();
    const actions: string[] = [];
    const opts = makeOptions(planner, actions);
    try {
      const n = await runImageDir(images, opts);
      expect(n).toBe(10);
      expect(planner.framesSeen.length).toBe(10);
      expect(actions.length).toBe(10);
      // frames carry consecutive timesteps and the planner's own commands
      planner.framesSeen.forEach((line, i) => {
        const frame = parseFrame(line);
        expect(frame.t).toBe(i);
        if (i > 0) {
          expect(frame.fixation).toEqual([(i - 1) % 9, ((i - 1) * 2) % 9]);
        }
        expect(frame.detections.length).toBe(1);
      });
    } finally {
      opts.client.close();
      planner.close();
    }
  });

  it("sends an empty detections array for target-free images", async () => {
    const images = path.join(dir, "images");
    fs.mkdirSync(images);
    writePpmBlob(path.join(images, "dark.ppm"), 0.5, 0.5, 0);
    const planner = await startMockPlanner();
    const actions: string[] = [];
    const opts = makeOptions(planner, actions);
    try {
      await runImageDir(images, opts);
      const frame = parseFrame(planner.framesSeen[0]);
      expect(frame.detections).toEqual([]);
    } finally {
      opts.client.close();
      planner.close();
    }
  });

  it("filters classes not in the target set", async () => {
    const images = path.join(dir, "images");
    fs.mkdirSync(images);
    writePpmBlob(path.join(images, "a.ppm"), 0.5, 0.5);
    const planner = await startMockPlanner();
    const actions: string[] = [];
    const opts = makeOptions(planner, actions);
    opts.targetClasses = ["car"];
    try {
      await runImageDir(images, opts);
      expect(parseFrame(planner.framesSeen[0]).detections).toEqual([]);
    } finally {
      opts.client.close();
      planner.close();
    }
  });

  it("fails with a clear error when the directory has no images", async () => {
    const images = path.join(dir, "empty");
    fs.mkdirSync(images);
    const planner = await startMockPlanner();
    const opts = makeOptions(planner, []);
    try {
      await expect(runImageDir(images, opts)).rejects.toThrow(/no images/);
    } finally {
      opts.client.close();
      planner.close();
    }
  });

  it("lists images sorted and ignores other files", () => {
    const images = path.join(dir, "mixed");
    fs.mkdirSync(images);
    fs.writeFileSync(path.join(images, "b.ppm"), "");
    fs.writeFileSync(path.join(images, "a.ppm"), "");
    fs.writeFileSync(path.join(images, "notes.txt"), "");
    expect(listImages(images).map((p) => path.basename(p))).toEqual(["a.ppm", "b.ppm"]);
  });
});

describe("client resilience", () => {
  it("retries with backoff then fails when nothing listens", async () => {
    const client = new PlannerClient({ host: "127.0.0.1", port: 1 }, 2, 10);
    await expect(client.connect()).rejects.toThrow(/cannot reach planner/);
  });
});
