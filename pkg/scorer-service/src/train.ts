import fs from "node:fs";

import {
  DEFAULT_OPTIONS,
  EmptyDatasetError,
  LabeledSample,
  SingleClassDatasetError,
  trainTask,
  TrainOptions,
} from "./logistic";
import { LogisticModel, MODEL_VERSION, saveModel, Task } from "./model";
import { featurize } from "./tokens";

const USAGE =
  "usage: train --data SAMPLES.jsonl --out MODEL.json [options]\n" +
  "  --task exception|assertion   which weight head to train (default exception)\n" +
  "  --seed N                     shuffle seed (default 1)\n" +
  "  --holdout F                  held-out fraction (default 0.2)\n" +
  "  --epochs N                   passes over the training split (default 30)\n" +
  "  --lr F                       learning rate (default 0.5)\n" +
  "  --l2 F                       weight decay (default 0.0001)\n";

interface TrainArgs {
  dataPath: string;
  outPath: string;
  task: Task;
  options: TrainOptions;
}

function parseArgs(argv: string[]): TrainArgs {
  const args: TrainArgs = {
    dataPath: "",
    outPath: "",
    task: "exception",
    options: { ...DEFAULT_OPTIONS },
  };
  const takeNumber = (name: string, value: string | undefined): number => {
    const parsed = Number(value);
    if (value === undefined || Number.isNaN(parsed)) {
      throw new Error(`bad value for ${name}: ${value}`);
    }
    return parsed;
  };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--data") args.dataPath = argv[++i] ?? "";
    else if (arg === "--out") args.outPath = argv[++i] ?? "";
    else if (arg === "--task") {
      const value = argv[++i];
      if (value !== "exception" && value !== "assertion") {
        throw new Error(`bad task: ${value}`);
      }
      args.task = value;
    } else if (arg === "--seed") args.options.seed = takeNumber(arg, argv[++i]);
    else if (arg === "--holdout") args.options.holdout = takeNumber(arg, argv[++i]);
    else if (arg === "--epochs") args.options.epochs = takeNumber(arg, argv[++i]);
    else if (arg === "--lr") args.options.learningRate = takeNumber(arg, argv[++i]);
    else if (arg === "--l2") args.options.l2 = takeNumber(arg, argv[++i]);
    else throw new Error(`unknown argument: ${arg}`);
  }
  if (args.dataPath === "" || args.outPath === "") {
    throw new Error("--data and --out are required");
  }
  if (args.options.holdout <= 0 || args.options.holdout >= 1) {
    throw new Error("--holdout must be in (0, 1)");
  }
  return args;
}

interface SampleRow {
  label: unknown;
  prefix?: string;
  candidate?: string;
  context?: { signature?: string; docstring?: string };
}

/** Read dataset rows as written by the toolchain's dataset command. */
export function readSamples(text: string, sourceName: string): LabeledSample[] {
  const samples: LabeledSample[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    if (lines[i].trim() === "") continue;
    let row: SampleRow;
    try {
      row = JSON.parse(lines[i]);
    } catch {
      throw new Error(`${sourceName}:${i + 1}: not valid JSON`);
    }
    if (row.label !== 0 && row.label !== 1) {
      throw new Error(`${sourceName}:${i + 1}: label must be 0 or 1`);
    }
    samples.push({
      label: row.label,
      features: featurize({
        prefix: row.prefix,
        signature: row.context?.signature,
        docstring: row.context?.docstring,
        candidate: row.candidate,
      }),
    });
  }
  return samples;
}

function main(): void {
  let args: TrainArgs;
  try {
    args = parseArgs(process.argv.slice(2));
  } catch (err) {
    process.stderr.write(`${err instanceof Error ? err.message : err}\n${USAGE}`);
    process.exit(2);
  }

  try {
    const text = fs.readFileSync(args.dataPath, "utf8");
    const samples = readSamples(text, args.dataPath);
    const { task, metrics } = trainTask(samples, args.options);
    const model: LogisticModel = {
      version: MODEL_VERSION,
      kind: "logistic",
      seed: args.options.seed,
      tasks: { [args.task]: task },
    };
    saveModel(args.outPath, model);
    process.stdout.write(JSON.stringify(metrics) + "\n");
  } catch (err) {
    if (err instanceof EmptyDatasetError || err instanceof SingleClassDatasetError) {
      process.stderr.write(`${err.message}\n`);
    } else {
      process.stderr.write(`${err instanceof Error ? err.message : err}\n`);
    }
    process.exit(1);
  }
}

if (require.main === module) {
  main();
}
