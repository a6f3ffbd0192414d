/**
 * The hosted name-generation model: a softmax classifier over a closed
 * name vocabulary with bag-of-words prompt features. Small enough to train
 * inside the test suite, real enough to exercise the full serve/finetune
 * path. Checkpoints are plain JSON; layout is documented in the README.
 */
import * as fs from "node:fs";
import * as path from "node:path";
import { z } from "zod";

import { tokenize } from "./text.js";

export interface NameModel {
  version: 1;
  features: string[];
  names: string[];
  /** names x features */
  weights: number[][];
  bias: number[];
}

const modelFileSchema = z
  .object({
    version: z.literal(1),
    features: z.array(z.string()),
    names: z.array(z.string()).min(1),
    weights: z.array(z.array(z.number())),
    bias: z.array(z.number()),
  })
  .strict();

export function buildVocab(prompts: readonly string[], targets: readonly string[]): {
  features: string[];
  names: string[];
} {
  const features = new Set<string>();
  for (const prompt of prompts) {
    for (const tok of tokenize(prompt)) features.add(tok);
  }
  // sorted vocabularies make checkpoints and argmax ties reproducible
  return {
    features: [...features].sort(),
    names: [...new Set(targets)].sort(),
  };
}

/** Zero-initialised model; the first forward pass is exactly uniform. */
export function newModel(features: string[], names: string[]): NameModel {
  return {
    version: 1,
    features,
    names,
    weights: names.map(() => features.map(() => 0)),
    bias: names.map(() => 0),
  };
}

/** Term-frequency feature vector of a prompt under the model vocabulary. */
export function featurize(model: NameModel, prompt: string): number[] {
  const x = new Array<number>(model.features.length).fill(0);
  const index = featureIndex(model);
  const tokens = tokenize(prompt);
  for (const tok of tokens) {
    const i = index.get(tok);
    if (i !== undefined) x[i]! += 1;
  }
  if (tokens.length > 0) {
    for (let i = 0; i < x.length; i++) x[i]! /= tokens.length;
  }
  return x;
}

const featureIndexCache = new WeakMap<NameModel, Map<string, number>>();

function featureIndex(model: NameModel): Map<string, number> {
  let index = featureIndexCache.get(model);
  if (index === undefined) {
    index = new Map(model.features.map((f, i) => [f, i]));
    featureIndexCache.set(model, index);
  }
  return index;
}

export function forward(model: NameModel, x: readonly number[]): number[] {
  const logits = model.names.map((_, k) => {
    const row = model.weights[k]!;
    let z = model.bias[k]!;
    for (let f = 0; f < x.length; f++) z += row[f]! * x[f]!;
    return z;
  });
  return softmax(logits);
}

export function softmax(logits: readonly number[]): number[] {
  const top = Math.max(...logits);
  const exps = logits.map((z) => Math.exp(z - top));
  const total = exps.reduce((a, b) => a + b, 0);
  return exps.map((e) => e / total);
}

/** Greedy decode: highest probability, first index on ties. */
export function predictName(model: NameModel, prompt: string): string {
  const probs = forward(model, featurize(model, prompt));
  let best = 0;
  for (let k = 1; k < probs.length; k++) {
    if (probs[k]! > probs[best]!) best = k;
  }
  return model.names[best]!;
}

export const MODEL_FILE = "model.json";
export const RUN_FILE = "config.json";
export const LOG_FILE = "train_log.jsonl";

export function saveCheckpoint(
  dir: string,
  model: NameModel,
  runConfig: Record<string, unknown>,
  logLines: readonly string[],
): void {
  fs.mkdirSync(dir, { recursive: true });
  fs.writeFileSync(path.join(dir, MODEL_FILE), JSON.stringify(model, null, 1) + "\n");
  fs.writeFileSync(path.join(dir, RUN_FILE), JSON.stringify(runConfig, null, 1) + "\n");
  fs.writeFileSync(path.join(dir, LOG_FILE), logLines.join("\n") + (logLines.length ? "\n" : ""));
}

export class CheckpointError extends Error {}

export function loadCheckpoint(dir: string): NameModel {
  const file = path.join(dir, MODEL_FILE);
  let raw: string;
  try {
    raw = fs.readFileSync(file, "utf8");
  } catch (err) {
    throw new CheckpointError(`cannot read model checkpoint ${file}: ${String(err)}`);
  }
  let parsed: unknown;
  try {
    parsed = JSON.parse(raw);
  } catch (err) {
    throw new CheckpointError(`model checkpoint ${file} is not valid JSON: ${String(err)}`);
  }
  const result = modelFileSchema.safeParse(parsed);
  if (!result.success) {
    throw new CheckpointError(`model checkpoint ${file} is malformed: ${result.error.message}`);
  }
  const model = result.data;
  const rows = model.weights.length;
  if (rows !== model.names.length || model.bias.length !== model.names.length) {
    throw new CheckpointError(`model checkpoint ${file}: weight shape does not match vocab`);
  }
  for (const row of model.weights) {
    if (row.length !== model.features.length) {
      throw new CheckpointError(`model checkpoint ${file}: weight shape does not match vocab`);
    }
  }
  return model;
}
