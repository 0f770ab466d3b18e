import { ChildProcess, spawn } from "node:child_process";
import net from "node:net";
import path from "node:path";

import { afterAll, describe, expect, it } from "vitest";

import { mulberry32 } from "../src/rng";

const ROOT = path.join(__dirname, "..");
const SERVER = path.join(ROOT, "dist", "server.js");
const MODEL = path.join(ROOT, "fixtures", "mirror-model.json");

interface Reply {
  id: unknown;
  score?: number;
  error?: string;
}

/** Collects newline-delimited JSON replies from a readable stream. */
class ReplyCollector {
  private buffer = "";
  readonly replies: Reply[] = [];
  private waiter: { target: number; resolve: () => void } | null = null;

  feed(chunk: Buffer | string): void {
    this.buffer += chunk.toString();
    let cut;
    while ((cut = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, cut);
      this.buffer = this.buffer.slice(cut + 1);
      if (line.trim() !== "") this.replies.push(JSON.parse(line));
    }
    if (this.waiter !== null && this.replies.length >= this.waiter.target) {
      this.waiter.resolve();
      this.waiter = null;
    }
  }

  waitFor(target: number, timeoutMs = 15000): Promise<void> {
    if (this.replies.length >= target) return Promise.resolve();
    return new Promise((resolve, reject) => {
      const timer = setTimeout(
        () => reject(new Error(`timed out at ${this.replies.length}/${target} replies`)),
        timeoutMs
      );
      this.waiter = {
        target,
        resolve: () => {
          clearTimeout(timer);
          resolve();
        },
      };
    });
  }
}

const children: ChildProcess[] = [];
afterAll(() => {
  for (const child of children) child.kill();
});

function spawnServer(args: string[]): ChildProcess {
  const child = spawn(process.execPath, [SERVER, ...args], {
    stdio: ["pipe", "pipe", "pipe"],
  });
  children.push(child);
  return child;
}

function exitCode(child: ChildProcess): Promise<number | null> {
  return new Promise((resolve) => child.on("exit", (code) => resolve(code)));
}

const PREFIXES = [
  "Widget w = new Widget(); w.poke();",
  "Box b = new Box(); int int0 = b.get(-1);",
  "Widget w = new Widget(); w.accept(null);",
  "KeyedValues kv = new KeyedValues(); int int0 = kv.itemCount();",
];
const SIGNATURES = ["public int get(int index)", "public void poke()", "public int itemCount()"];
const DOCSTRINGS = [
  "",
  "@throws IllegalArgumentException when the index is negative",
  "Returns the current size.",
  "May throw when the input is malformed.",
];
const CANDIDATES = [
  "assertEquals(0, int0)",
  "assertEquals(1, int0)",
  "assertEquals(2, int0)",
  "assertTrue(bool0)",
  "assertNotNull(obj0)",
  'assertEquals("alpha", string0)',
];

interface Batch {
  lines: string[];
  validIds: Set<number>;
  errorIds: Set<number>;
  nullErrors: number;
}

/** 1000 frames, every twentieth one malformed in a rotating way. */
function buildBatch(): Batch {
  const rng = mulberry32(42);
  const pick = <T>(pool: T[]): T => pool[Math.floor(rng() * pool.length)];
  const batch: Batch = { lines: [], validIds: new Set(), errorIds: new Set(), nullErrors: 0 };

  for (let i = 0; i < 1000; i++) {
    if (i % 20 === 13) {
      const kind = Math.floor(i / 20) % 5;
      if (kind === 0) {
        batch.lines.push("this is not a frame {");
        batch.nullErrors++;
      } else if (kind === 1) {
        batch.lines.push(JSON.stringify({ v: 1, task: "exception", prefix: "" }));
        batch.nullErrors++;
      } else if (kind === 2) {
        batch.lines.push(JSON.stringify({ id: i, v: 1, task: "mystery" }));
        batch.errorIds.add(i);
      } else if (kind === 3) {
        batch.lines.push(JSON.stringify({ id: i, v: 2, task: "exception" }));
        batch.errorIds.add(i);
      } else {
        batch.lines.push(JSON.stringify({ id: i, v: 1, task: "assertion", prefix: "" }));
        batch.errorIds.add(i);
      }
      continue;
    }
    const frame: Record<string, unknown> = {
      id: i,
      v: 1,
      task: i % 2 === 0 ? "exception" : "assertion",
      prefix: pick(PREFIXES),
      signature: pick(SIGNATURES),
      docstring: pick(DOCSTRINGS),
    };
    if (frame.task === "assertion") frame.candidate = pick(CANDIDATES);
    batch.lines.push(JSON.stringify(frame));
    batch.validIds.add(i);
  }
  return batch;
}

describe("stdio transport", () => {
  it("answers 1000 pipelined frames bijectively and survives the malformed ones", async () => {
    const child = spawnServer(["--stdio", "--model", MODEL]);
    const collector = new ReplyCollector();
    child.stdout!.on("data", (chunk) => collector.feed(chunk));

    const batch = buildBatch();
    expect(batch.validIds.size).toBe(950);
    expect(batch.errorIds.size + batch.nullErrors).toBe(50);

    child.stdin!.write(batch.lines.join("\n") + "\n");
    await collector.waitFor(1000);

    const scored = collector.replies.filter((r) => r.score !== undefined);
    const failed = collector.replies.filter((r) => r.error !== undefined);
    expect(collector.replies).toHaveLength(1000);
    expect(scored).toHaveLength(950);

    const answeredIds = new Set<number>();
    for (const reply of scored) {
      expect(typeof reply.id).toBe("number");
      expect(batch.validIds.has(reply.id as number)).toBe(true);
      expect(answeredIds.has(reply.id as number)).toBe(false);
      answeredIds.add(reply.id as number);
      expect(typeof reply.score).toBe("number");
      expect(reply.score).toBeGreaterThanOrEqual(0);
      expect(reply.score).toBeLessThanOrEqual(1);
    }
    expect(answeredIds.size).toBe(batch.validIds.size);

    const failedWithId = failed.filter((r) => r.id !== null);
    expect(new Set(failedWithId.map((r) => r.id))).toEqual(batch.errorIds);
    expect(failed.filter((r) => r.id === null)).toHaveLength(batch.nullErrors);

    // still alive after the abuse
    child.stdin!.write(JSON.stringify({ id: 5000, v: 1, task: "exception", docstring: "@throws X" }) + "\n");
    await collector.waitFor(1001);
    const probe = collector.replies[collector.replies.length - 1];
    expect(probe).toEqual({ id: 5000, score: 0.7 });

    child.stdin!.end();
    expect(await exitCode(child)).toBe(0);
  });

  it("exits with a usage error when the model cannot be loaded", async () => {
    const child = spawnServer(["--stdio", "--model", path.join(ROOT, "fixtures", "absent.json")]);
    let stderr = "";
    child.stderr!.on("data", (chunk) => (stderr += chunk.toString()));
    expect(await exitCode(child)).toBe(2);
    expect(stderr).toMatch(/model/);
  });
});

describe("tcp transport", () => {
  it("scores frames and outlives an aborted client", async () => {
    const child = spawnServer(["--tcp", "0", "--model", MODEL]);
    const port = await new Promise<number>((resolve, reject) => {
      let buffer = "";
      const timer = setTimeout(() => reject(new Error("no listening line")), 5000);
      child.stderr!.on("data", (chunk) => {
        buffer += chunk.toString();
        const m = buffer.match(/listening (\d+)/);
        if (m !== null) {
          clearTimeout(timer);
          resolve(Number(m[1]));
        }
      });
    });

    const ask = (lines: string[], expected: number): Promise<Reply[]> =>
      new Promise((resolve, reject) => {
        const socket = net.connect(port, "127.0.0.1");
        const collector = new ReplyCollector();
        socket.on("data", (chunk) => collector.feed(chunk));
        socket.on("error", reject);
        socket.on("connect", () => socket.write(lines.join("\n") + "\n"));
        collector
          .waitFor(expected, 5000)
          .then(() => {
            socket.destroy();
            resolve(collector.replies);
          })
          .catch(reject);
      });

    const first = await ask(
      [
        JSON.stringify({ id: 1, v: 1, task: "exception", docstring: "@throws Error" }),
        "garbage",
        JSON.stringify({ id: 2, v: 1, task: "assertion", prefix: "int int0 = w.run(7);", candidate: "assertEquals(7, int0)" }),
      ],
      3
    );
    expect(first.find((r) => r.id === 1)).toEqual({ id: 1, score: 0.7 });
    expect(first.find((r) => r.id === null)?.error).toMatch(/JSON/);
    expect(first.find((r) => r.id === 2)).toEqual({ id: 2, score: 0.5 });

    // the destroy above was abrupt; a fresh client must still be served
    const second = await ask([JSON.stringify({ id: 9, v: 1, task: "exception" })], 1);
    expect(second[0]).toEqual({ id: 9, score: 0.2 });

    child.kill();
  });
});
