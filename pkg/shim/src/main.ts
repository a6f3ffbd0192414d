/**
 * Process entry: `serve` hosts the protocol, `finetune` trains a name
 * generator checkpoint from a JSONL corpus of {"prompt", "name"} lines.
 */
import * as fs from "node:fs";
import { parseArgs } from "node:util";

import { ConfigError, resolveConfig, type ShimConfig } from "./config.js";
import { runFinetune, TrainingDivergenceError, type TrainPair } from "./finetune.js";
import { CheckpointError, loadCheckpoint } from "./model.js";
import { startServer } from "./server.js";

function fail(message: string): never {
  console.error(message);
  process.exit(1);
}

function usage(): never {
  fail(
    "usage: main.js serve [--model PATH|template] [--port N] [--decoding greedy|sample]\n" +
      "       main.js finetune --data PAIRS.jsonl --out DIR [--resume DIR]\n" +
      "                        [--alpha A --beta B --delta D]\n" +
      "                        [--batch-size N --learning-rate R --max-epochs N --early-stop N]",
  );
}

async function serveCommand(argv: string[]): Promise<void> {
  const { values } = parseArgs({
    args: argv,
    options: {
      model: { type: "string" },
      port: { type: "string" },
      device: { type: "string" },
      decoding: { type: "string" },
      "max-source-length": { type: "string" },
      "max-target-length": { type: "string" },
    },
  });
  const overrides: Partial<ShimConfig> = {};
  if (values.model !== undefined) overrides.model = values.model;
  if (values.port !== undefined) overrides.port = Number(values.port);
  if (values.device !== undefined) overrides.device = values.device as ShimConfig["device"];
  if (values.decoding !== undefined) {
    overrides.decoding = values.decoding as ShimConfig["decoding"];
  }
  if (values["max-source-length"] !== undefined) {
    overrides.maxSourceLength = Number(values["max-source-length"]);
  }
  if (values["max-target-length"] !== undefined) {
    overrides.maxTargetLength = Number(values["max-target-length"]);
  }
  let running;
  try {
    running = await startServer(resolveConfig(overrides));
  } catch (err) {
    if (err instanceof ConfigError || err instanceof CheckpointError) fail(err.message);
    throw err;
  }
  console.log(`shim listening on 127.0.0.1:${running.port}`);
}

function readPairs(file: string): TrainPair[] {
  const pairs: TrainPair[] = [];
  const lines = fs.readFileSync(file, "utf8").split("\n");
  for (const [lineNo, line] of lines.entries()) {
    if (line.trim() === "") continue;
    const row: unknown = JSON.parse(line);
    if (
      typeof row !== "object" ||
      row === null ||
      typeof (row as TrainPair).prompt !== "string" ||
      typeof (row as TrainPair).name !== "string"
    ) {
      fail(`${file}:${lineNo + 1}: expected {"prompt": ..., "name": ...}`);
    }
    pairs.push({ prompt: (row as TrainPair).prompt, name: (row as TrainPair).name });
  }
  return pairs;
}

function finetuneCommand(argv: string[]): void {
  const { values } = parseArgs({
    args: argv,
    options: {
      data: { type: "string" },
      out: { type: "string" },
      resume: { type: "string" },
      alpha: { type: "string" },
      beta: { type: "string" },
      delta: { type: "string" },
      "batch-size": { type: "string" },
      "learning-rate": { type: "string" },
      "max-epochs": { type: "string" },
      "early-stop": { type: "string" },
    },
  });
  if (values.data === undefined || values.out === undefined) usage();
  const overrides: Record<string, number> = {};
  const numeric: Array<[string, string | undefined]> = [
    ["alpha", values.alpha],
    ["beta", values.beta],
    ["delta", values.delta],
    ["batchSize", values["batch-size"]],
    ["learningRate", values["learning-rate"]],
    ["maxEpochs", values["max-epochs"]],
    ["earlyStop", values["early-stop"]],
  ];
  for (const [key, raw] of numeric) {
    if (raw !== undefined) overrides[key] = Number(raw);
  }
  try {
    const resume = values.resume !== undefined ? loadCheckpoint(values.resume) : undefined;
    const result = runFinetune(readPairs(values.data), values.out, overrides, resume);
    const finalLoss = result.epochLosses[result.epochLosses.length - 1]!;
    console.log(
      `trained ${result.steps.length} steps over ${result.epochLosses.length} epochs, ` +
        `final loss ${finalLoss.toFixed(6)}; checkpoint at ${values.out}`,
    );
  } catch (err) {
    if (
      err instanceof TrainingDivergenceError ||
      err instanceof CheckpointError ||
      err instanceof RangeError
    ) {
      fail(err.message);
    }
    throw err;
  }
}

const [command, ...rest] = process.argv.slice(2);
if (command === "serve") {
  await serveCommand(rest);
} else if (command === "finetune") {
  finetuneCommand(rest);
} else {
  usage();
}
