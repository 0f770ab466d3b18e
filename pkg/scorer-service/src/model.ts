import fs from "node:fs";

import { featurize, RequestText } from "./tokens";
import { mirrorScore } from "./mirror";

export const MODEL_VERSION = "scorer-model-v1";

export type Task = "exception" | "assertion";

export interface TaskWeights {
  bias: number;
  /** sparse weight vector keyed by feature token */
  weights: Record<string, number>;
}

/**
 * Logistic model trained by train.ts. Self-describing: the feature
 * vocabulary is the key set of each task's weight map.
 */
export interface LogisticModel {
  version: string;
  kind: "logistic";
  seed: number;
  tasks: Partial<Record<Task, TaskWeights>>;
}

/**
 * Fixture model that reproduces the toolchain's built-in rule scorer
 * from request text alone. Used by conformance tests that need scores
 * to match the toolchain byte for byte; not produced by training.
 * vocab maps an erased type to its constants in rank order.
 */
export interface MirrorModel {
  version: string;
  kind: "heuristic-mirror";
  vocab: Record<string, string[]>;
}

export type ScorerModel = LogisticModel | MirrorModel;

export class ModelFormatError extends Error {}

export function loadModel(path: string): ScorerModel {
  let raw: unknown;
  try {
    raw = JSON.parse(fs.readFileSync(path, "utf8"));
  } catch (err) {
    throw new ModelFormatError(`cannot read model ${path}: ${String(err)}`);
  }
  if (typeof raw !== "object" || raw === null) {
    throw new ModelFormatError("model file is not a JSON object");
  }
  const model = raw as Record<string, unknown>;
  if (model.version !== MODEL_VERSION) {
    throw new ModelFormatError(
      `unsupported model version ${JSON.stringify(model.version)}, want ${MODEL_VERSION}`
    );
  }
  if (model.kind !== "logistic" && model.kind !== "heuristic-mirror") {
    throw new ModelFormatError(`unknown model kind ${JSON.stringify(model.kind)}`);
  }
  return raw as ScorerModel;
}

/** Serialize with sorted keys so identical models are identical bytes. */
export function modelToJson(model: ScorerModel): string {
  return stableStringify(model) + "\n";
}

export function saveModel(path: string, model: ScorerModel): void {
  fs.writeFileSync(path, modelToJson(model));
}

function stableStringify(value: unknown): string {
  if (Array.isArray(value)) {
    return "[" + value.map(stableStringify).join(",") + "]";
  }
  if (typeof value === "object" && value !== null) {
    const obj = value as Record<string, unknown>;
    const parts = Object.keys(obj)
      .sort()
      .map((k) => JSON.stringify(k) + ":" + stableStringify(obj[k]));
    return "{" + parts.join(",") + "}";
  }
  return JSON.stringify(value);
}

export function sigmoid(x: number): number {
  if (x >= 0) {
    return 1 / (1 + Math.exp(-x));
  }
  const e = Math.exp(x);
  return e / (1 + e);
}

export function scoreLogistic(task: TaskWeights, features: Map<string, number>): number {
  let total = task.bias;
  for (const [token, count] of features) {
    const w = task.weights[token];
    if (w !== undefined) total += w * count;
  }
  return sigmoid(total);
}

export interface ScoreRequest extends RequestText {
  task: Task;
}

export function scoreWithModel(model: ScorerModel, req: ScoreRequest): number {
  if (model.kind === "heuristic-mirror") {
    return mirrorScore(model.vocab, req);
  }
  const task = model.tasks[req.task];
  if (task === undefined) {
    throw new Error(`model has no weights for task "${req.task}"`);
  }
  return scoreLogistic(task, featurize(req));
}
