import { TaskWeights, scoreLogistic, sigmoid } from "./model";
import { mulberry32, shuffle } from "./rng";

export class EmptyDatasetError extends Error {
  constructor() {
    super("dataset is empty");
  }
}

export class SingleClassDatasetError extends Error {
  constructor(label: number) {
    super(`dataset has a single class (all labels are ${label})`);
  }
}

export interface LabeledSample {
  label: 0 | 1;
  features: Map<string, number>;
}

export interface TrainOptions {
  seed: number;
  /** fraction of samples held out for evaluation */
  holdout: number;
  epochs: number;
  learningRate: number;
  l2: number;
}

export const DEFAULT_OPTIONS: TrainOptions = {
  seed: 1,
  holdout: 0.2,
  epochs: 30,
  learningRate: 0.5,
  l2: 1e-4,
};

export interface HeldOutMetrics {
  accuracy: number;
  precision: number;
  recall: number;
  f1: number;
  trained: number;
  held_out: number;
}

export interface TrainResult {
  task: TaskWeights;
  metrics: HeldOutMetrics;
}

/**
 * Stochastic gradient descent on logistic loss with L2 decay applied to
 * touched weights. The shuffle order, and therefore the model, is fully
 * determined by opts.seed.
 */
export function trainTask(samples: LabeledSample[], opts: TrainOptions): TrainResult {
  if (samples.length === 0) throw new EmptyDatasetError();
  const firstLabel = samples[0].label;
  if (samples.every((s) => s.label === firstLabel)) {
    throw new SingleClassDatasetError(firstLabel);
  }

  const rng = mulberry32(opts.seed);
  const order = shuffle(samples.map((_, i) => i), rng);
  const heldCount = Math.max(1, Math.round(samples.length * opts.holdout));
  const held = order.slice(0, heldCount).map((i) => samples[i]);
  const train = order.slice(heldCount).map((i) => samples[i]);

  const weights: Record<string, number> = {};
  let bias = 0;
  const lr = opts.learningRate;
  const decay = 1 - lr * opts.l2;

  for (let epoch = 0; epoch < opts.epochs; epoch++) {
    const epochOrder = shuffle(train.map((_, i) => i), rng);
    for (const i of epochOrder) {
      const sample = train[i];
      let z = bias;
      for (const [token, count] of sample.features) {
        const w = weights[token];
        if (w !== undefined) z += w * count;
      }
      const error = sigmoid(z) - sample.label;
      bias -= lr * error;
      for (const [token, count] of sample.features) {
        weights[token] = (weights[token] ?? 0) * decay - lr * error * count;
      }
    }
  }

  const task: TaskWeights = { bias, weights };
  return { task, metrics: evaluate(task, held, train.length) };
}

function evaluate(task: TaskWeights, held: LabeledSample[], trained: number): HeldOutMetrics {
  let tp = 0;
  let fp = 0;
  let tn = 0;
  let fn = 0;
  for (const sample of held) {
    const predicted = scoreLogistic(task, sample.features) >= 0.5 ? 1 : 0;
    if (predicted === 1 && sample.label === 1) tp++;
    else if (predicted === 1) fp++;
    else if (sample.label === 0) tn++;
    else fn++;
  }
  const total = held.length;
  const accuracy = total === 0 ? 0 : (tp + tn) / total;
  const precision = tp + fp === 0 ? 0 : tp / (tp + fp);
  const recall = tp + fn === 0 ? 0 : tp / (tp + fn);
  const f1 =
    precision + recall === 0 ? 0 : (2 * precision * recall) / (precision + recall);
  return { accuracy, precision, recall, f1, trained, held_out: total };
}
