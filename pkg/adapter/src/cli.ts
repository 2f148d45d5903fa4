#!/usr/bin/env node
// CLI: saccade-adapter --model model.json --source ./images --endpoint host:port

import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import * as fs from "fs";
import { loadDetector } from "./detect";
import { PlannerClient, parseEndpoint } from "./client";
import { AdapterOptions, runCamera, runImageDir, runWatchDir } from "./adapter";

async function main(): Promise<number> {
  const argv = await yargs(hideBin(process.argv))
    .option("model", { type: "string", demandOption: true, describe: "Detector model JSON" })
    .option("source", {
      type: "string",
      demandOption: true,
      describe: "Image directory, watch:<dir>, or camera[:device]",
    })
    .option("endpoint", {
      type: "string",
      default: "127.0.0.1:8731",
      describe: "Planner TCP endpoint host:port",
    })
    .option("classes", {
      type: "string",
      describe: "Comma-separated target classes (default: pass all)",
    })
    .option("confidence-floor", { type: "number", default: 0.25 })
    .strict()
    .parse();

  const detector = loadDetector(argv.model);
  const client = new PlannerClient(parseEndpoint(argv.endpoint));
  const opts: AdapterOptions = {
    detector,
    client,
    targetClasses: argv.classes ? argv.classes.split(",").map((c) => c.trim()) : null,
    confidenceFloor: argv["confidence-floor"],
  };

  try {
    if (argv.source.startsWith("watch:")) {
      await runWatchDir(argv.source.slice("watch:".length), opts);
    } else if (argv.source.startsWith("camera")) {
      const device = argv.source.includes(":") ? argv.source.split(":")[1] : "/dev/video0";
      await runCamera(device, opts);
    } else {
      if (!fs.existsSync(argv.source) || !fs.statSync(argv.source).isDirectory()) {
        throw new Error(`image directory not found: ${argv.source}`);
      }
      const n = await runImageDir(argv.source, opts);
      process.stderr.write(`processed ${n} images\n`);
    }
    return 0;
  } finally {
    client.close();
  }
}

main()
  .then((code) => process.exit(code))
  .catch((err) => {
    process.stderr.write(`${err instanceof Error ? err.message : err}\n`);
    process.exit(1);
  });
