// TCP client for the planner's NDJSON protocol: send a frame line, await the
// action line. Reconnects with bounded exponential backoff.

import * as net from "net";
import * as readline from "readline";
import { ActionMessage, parseAction } from "./protocol";

export interface PlannerEndpoint {
  host: string;
  port: number;
}

export function parseEndpoint(text: string): PlannerEndpoint {
  const idx = text.lastIndexOf(":");
  if (idx <= 0) throw new Error(`bad endpoint ${text}, expected host:port`);
  const host = text.slice(0, idx);
  const port = parseInt(text.slice(idx + 1), 10);
  if (!(port > 0 && port < 65536)) throw new Error(`bad endpoint port in ${text}`);
  return { host, port };
}

export class PlannerClient {
  private socket: net.Socket | null = null;
  private lines: AsyncIterator<string> | null = null;

  constructor(
    private readonly endpoint: PlannerEndpoint,
    private readonly maxRetries = 5,
    private readonly backoffMs = 250
  ) {}

  private connectOnce(): Promise<net.Socket> {
    return new Promise((resolve, reject) => {
      const sock = net.createConnection(this.endpoint.port, this.endpoint.host);
      sock.once("connect", () => {
        sock.removeAllListeners("error");
        resolve(sock);
      });
      sock.once("error", reject);
    });
  }

  async connect(): Promise<void> {
    let lastErr: unknown = null;
    for (let attempt = 0; attempt < this.maxRetries; attempt++) {
      if (attempt > 0) {
        const wait = this.backoffMs * 2 ** (attempt - 1);
        await new Promise((r) => setTimeout(r, wait));
      }
      try {
        this.socket = await this.connectOnce();
        const rl = readline.createInterface({ input: this.socket });
        this.lines = rl[Symbol.asyncIterator]();
        return;
      } catch (err) {
        lastErr = err;
        process.stderr.write(`connect attempt ${attempt + 1} failed: ${err}\n`);
      }
    }
    throw new Error(`cannot reach planner at ${this.endpoint.host}:${this.endpoint.port}: ${lastErr}`);
  }

  /** Send one frame line and wait for the matching action reply. */
  async exchange(frameLine: string): Promise<ActionMessage> {
    for (let attempt = 0; attempt < this.maxRetries; attempt++) {
      if (this.socket === null || this.lines === null) await this.connect();
      try {
        this.socket!.write(frameLine);
        const next = await this.lines!.next();
        if (next.done) throw new Error("planner closed the connection");
        return parseAction(next.value);
      } catch (err) {
        process.stderr.write(`exchange failed (${err}), reconnecting\n`);
        this.close();
      }
    }
    throw new Error("planner unreachable after retries");
  }

  close(): void {
    this.socket?.destroy();
    this.socket = null;
    this.lines = null;
  }
}
