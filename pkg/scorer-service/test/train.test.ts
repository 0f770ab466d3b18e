import { execFileSync } from "node:child_process";
import fs from "node:fs";
import os from "node:os";
import path from "node:path";

import { afterAll, describe, expect, it } from "vitest";

import {
  DEFAULT_OPTIONS,
  EmptyDatasetError,
  SingleClassDatasetError,
  trainTask,
} from "../src/logistic";
import { modelToJson, MODEL_VERSION, LogisticModel } from "../src/model";
import { readSamples } from "../src/train";

const ROOT = path.join(__dirname, "..");
const FIXTURE = path.join(ROOT, "fixtures", "exception_samples.jsonl");
const COIN_ACCURACY = 0.68; // expected accuracy of a label-matched weighted coin

const tmp = fs.mkdtempSync(path.join(os.tmpdir(), "scorer-train-"));
afterAll(() => fs.rmSync(tmp, { recursive: true, force: true }));

function fixtureSamples() {
  return readSamples(fs.readFileSync(FIXTURE, "utf8"), "exception_samples.jsonl");
}

describe("reading dataset rows", () => {
  it("loads the bundled fixture", () => {
    const samples = fixtureSamples();
    expect(samples).toHaveLength(200);
    expect(samples.filter((s) => s.label === 1)).toHaveLength(40);
    expect(samples[0].features.size).toBeGreaterThan(0);
  });

  it("reports the line of broken JSON", () => {
    expect(() => readSamples('{"label": 0}\nnope\n', "rows.jsonl")).toThrow(/rows\.jsonl:2/);
  });

  it("rejects labels outside {0, 1}", () => {
    expect(() => readSamples('{"label": "yes"}\n', "rows.jsonl")).toThrow(/label/);
  });
});

describe("training", () => {
  it("beats the weighted-coin accuracy by at least five points held out", () => {
    const { metrics } = trainTask(fixtureSamples(), DEFAULT_OPTIONS);
    expect(metrics.held_out).toBe(40);
    expect(metrics.trained).toBe(160);
    expect(metrics.accuracy).toBeGreaterThanOrEqual(COIN_ACCURACY + 0.05);
  });

  it("is deterministic: same seed, same model bytes", () => {
    const a = trainTask(fixtureSamples(), { ...DEFAULT_OPTIONS, seed: 11 });
    const b = trainTask(fixtureSamples(), { ...DEFAULT_OPTIONS, seed: 11 });
    const wrap = (task: typeof a.task): LogisticModel => ({
      version: MODEL_VERSION,
      kind: "logistic",
      seed: 11,
      tasks: { exception: task },
    });
    expect(modelToJson(wrap(a.task))).toBe(modelToJson(wrap(b.task)));
    expect(a.metrics).toEqual(b.metrics);
  });

  it("holds up across several seeds", () => {
    for (const seed of [2, 3, 5]) {
      const { metrics } = trainTask(fixtureSamples(), { ...DEFAULT_OPTIONS, seed });
      expect(metrics.accuracy).toBeGreaterThanOrEqual(COIN_ACCURACY + 0.05);
    }
  });

  it("rejects an empty dataset", () => {
    expect(() => trainTask([], DEFAULT_OPTIONS)).toThrow(EmptyDatasetError);
  });

  it("rejects a single-class dataset", () => {
    const ones = fixtureSamples().filter((s) => s.label === 1);
    expect(() => trainTask(ones, DEFAULT_OPTIONS)).toThrow(SingleClassDatasetError);
  });
});

describe("train command", () => {
  it("writes a model and prints held-out metrics", () => {
    const out = path.join(tmp, "model.json");
    const stdout = execFileSync(
      process.execPath,
      [path.join(ROOT, "dist", "train.js"), "--data", FIXTURE, "--out", out, "--seed", "1"],
      { encoding: "utf8" }
    );
    const metrics = JSON.parse(stdout);
    expect(metrics.accuracy).toBeGreaterThanOrEqual(COIN_ACCURACY + 0.05);
    const model = JSON.parse(fs.readFileSync(out, "utf8"));
    expect(model.version).toBe(MODEL_VERSION);
    expect(model.kind).toBe("logistic");
    expect(Object.keys(model.tasks)).toEqual(["exception"]);
  });

  it("fails cleanly on a single-class dataset", () => {
    const rows = fs
      .readFileSync(FIXTURE, "utf8")
      .split("\n")
      .filter((line) => line.includes('"label": 0'))
      .slice(0, 10)
      .join("\n");
    const data = path.join(tmp, "single.jsonl");
    fs.writeFileSync(data, rows + "\n");
    let failure: { status: number | null; stderr: string } | null = null;
    try {
      execFileSync(
        process.execPath,
        [path.join(ROOT, "dist", "train.js"), "--data", data, "--out", path.join(tmp, "m.json")],
        { encoding: "utf8", stdio: ["ignore", "pipe", "pipe"] }
      );
    } catch (err) {
      const failed = err as { status: number | null; stderr: string };
      failure = { status: failed.status, stderr: String(failed.stderr) };
    }
    expect(failure?.status).toBe(1);
    expect(failure?.stderr).toMatch(/single class/);
  });
});
