/**
 * Fine-tunes the name generator on (retrieval prompt, method name) pairs
 * with the trust-weighted loss. Plain full-gradient SGD over a softmax
 * classifier; batches are visited in corpus order so runs are reproducible.
 * Every step logs the batch's (p, q, loss) so an outside implementation of
 * the loss can audit the trajectory.
 */
import { inTrustGradP, inTrustLoss } from "./loss.js";
import {
  buildVocab,
  featurize,
  forward,
  newModel,
  saveCheckpoint,
  type NameModel,
} from "./model.js";

export interface TrainPair {
  prompt: string;
  name: string;
}

export interface TrainParams {
  alpha: number;
  beta: number;
  delta: number;
  batchSize: number;
  learningRate: number;
  maxEpochs: number;
  earlyStop: number;
}

export const TRAIN_DEFAULTS: TrainParams = {
  alpha: 1.0,
  beta: 1.0,
  delta: 0.5,
  batchSize: 64,
  learningRate: 4e-5,
  maxEpochs: 50,
  earlyStop: 3,
};

export interface StepLog {
  step: number;
  loss: number;
  alpha: number;
  beta: number;
  delta: number;
  p: number[][];
  q: number[][];
}

export interface TrainResult {
  model: NameModel;
  steps: StepLog[];
  epochLosses: number[];
}

export class TrainingDivergenceError extends Error {}

export function trainNameGenerator(
  pairs: readonly TrainPair[],
  overrides: Partial<TrainParams> = {},
  resume?: NameModel,
): TrainResult {
  if (pairs.length === 0) throw new RangeError("training corpus is empty");
  const params = { ...TRAIN_DEFAULTS, ...overrides };
  for (const key of ["batchSize", "maxEpochs", "earlyStop"] as const) {
    if (!Number.isInteger(params[key]) || params[key] <= 0) {
      throw new RangeError(`${key} must be a positive integer`);
    }
  }
  if (!(params.learningRate > 0)) throw new RangeError("learningRate must be positive");

  // resuming keeps the checkpoint's vocabulary; a fresh run derives its own
  const model = resume
    ? structuredClone(resume)
    : (() => {
        const { features, names } = buildVocab(
          pairs.map((p) => p.prompt),
          pairs.map((p) => p.name),
        );
        return newModel(features, names);
      })();
  const { features, names } = model;
  const nameIndex = new Map(names.map((n, i) => [n, i]));
  for (const pair of pairs) {
    if (!nameIndex.has(pair.name)) {
      throw new RangeError(`name "${pair.name}" is not in the checkpoint vocabulary`);
    }
  }
  const xs = pairs.map((pair) => featurize(model, pair.prompt));
  const ys = pairs.map((pair) => nameIndex.get(pair.name)!);

  const steps: StepLog[] = [];
  const epochLosses: number[] = [];
  let step = 0;
  let best = Infinity;
  let sinceImprovement = 0;

  for (let epoch = 0; epoch < params.maxEpochs; epoch++) {
    let epochTotal = 0;
    let batches = 0;
    for (let start = 0; start < pairs.length; start += params.batchSize) {
      const end = Math.min(start + params.batchSize, pairs.length);
      const size = end - start;
      step += 1;

      const gradW = model.names.map(() => new Array<number>(features.length).fill(0));
      const gradB = new Array<number>(model.names.length).fill(0);
      let batchLoss = 0;
      const batchP: number[][] = [];
      const batchQ: number[][] = [];

      for (let i = start; i < end; i++) {
        const x = xs[i]!;
        const p = forward(model, x);
        if (p.some((v) => !Number.isFinite(v))) {
          throw new TrainingDivergenceError(
            `non-finite model output at step ${step} (epoch ${epoch + 1}, ` +
              `lr ${params.learningRate}); lower the learning rate`,
          );
        }
        const q = model.names.map((_, k) => (k === ys[i] ? 1 : 0));
        batchLoss += inTrustLoss(p, q, params.alpha, params.beta, params.delta);
        batchP.push(p);
        batchQ.push(q);

        // chain dL/dp through the softmax: dz_k = p_k (g_k - sum_j g_j p_j)
        const g = inTrustGradP(p, q, params.alpha, params.beta, params.delta);
        let inner = 0;
        for (let j = 0; j < g.length; j++) inner += g[j]! * p[j]!;
        for (let k = 0; k < model.names.length; k++) {
          const dz = (p[k]! * (g[k]! - inner)) / size;
          gradB[k]! += dz;
          const row = gradW[k]!;
          for (let f = 0; f < x.length; f++) row[f]! += dz * x[f]!;
        }
      }

      batchLoss /= size;
      if (!Number.isFinite(batchLoss)) {
        throw new TrainingDivergenceError(
          `loss diverged to ${batchLoss} at step ${step} (epoch ${epoch + 1}, ` +
            `lr ${params.learningRate})`,
        );
      }
      steps.push({
        step,
        loss: batchLoss,
        alpha: params.alpha,
        beta: params.beta,
        delta: params.delta,
        p: batchP,
        q: batchQ,
      });
      epochTotal += batchLoss;
      batches += 1;

      for (let k = 0; k < model.names.length; k++) {
        model.bias[k]! -= params.learningRate * gradB[k]!;
        const wRow = model.weights[k]!;
        const gRow = gradW[k]!;
        for (let f = 0; f < features.length; f++) {
          wRow[f]! -= params.learningRate * gRow[f]!;
        }
      }
    }

    const epochLoss = epochTotal / batches;
    epochLosses.push(epochLoss);
    if (epochLoss < best) {
      best = epochLoss;
      sinceImprovement = 0;
    } else {
      sinceImprovement += 1;
      if (sinceImprovement >= params.earlyStop) break;
    }
  }

  return { model, steps, epochLosses };
}

/** Train and persist a checkpoint; returns the result for inspection. */
export function runFinetune(
  pairs: readonly TrainPair[],
  outDir: string,
  overrides: Partial<TrainParams> = {},
  resume?: NameModel,
): TrainResult {
  const params = { ...TRAIN_DEFAULTS, ...overrides };
  const result = trainNameGenerator(pairs, params, resume);
  saveCheckpoint(
    outDir,
    result.model,
    {
      ...params,
      pairs: pairs.length,
      steps: result.steps.length,
      finalLoss: result.epochLosses[result.epochLosses.length - 1],
    },
    result.steps.map((s) => JSON.stringify(s)),
  );
  return result;
}
