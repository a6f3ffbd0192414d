/**
 * Drives the built entry point as a real process: the finetune -> serve loop,
 * and the exit-code contract around model loading.
 */
import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

const SHIM_DIR = new URL("..", import.meta.url).pathname;
const MAIN = path.join(SHIM_DIR, "dist", "main.js");

interface CliResult {
  status: number;
  stdout: string;
  stderr: string;
}

function runCli(args: string[]): CliResult {
  try {
    const stdout = execFileSync("node", [MAIN, ...args], { encoding: "utf8" });
    return { status: 0, stdout, stderr: "" };
  } catch (err) {
    const e = err as { status: number | null; stdout: string; stderr: string };
    return { status: e.status ?? -1, stdout: String(e.stdout), stderr: String(e.stderr) };
  }
}

describe("shim process", () => {
  let workDir: string;

  beforeAll(() => {
    execFileSync("npx", ["tsc", "-p", "tsconfig.json"], { cwd: SHIM_DIR, stdio: "ignore" });
    workDir = fs.mkdtempSync(path.join(os.tmpdir(), "shim-cli-"));
  });

  afterAll(() => {
    fs.rmSync(workDir, { recursive: true, force: true });
  });

  it("exits non-zero with a message when the model cannot be loaded", () => {
    const result = runCli(["serve", "--model", path.join(workDir, "missing"), "--port", "0"]);
    expect(result.status).toBe(1);
    expect(result.stderr).toMatch(/cannot read model checkpoint/);
  });

  it("exits non-zero on a config error", () => {
    const result = runCli(["serve", "--device", "cuda", "--port", "0"]);
    expect(result.status).toBe(1);
    expect(result.stderr).toMatch(/only cpu is available/);
  });

  it("exits non-zero on an unknown command", () => {
    expect(runCli(["train"]).status).toBe(1);
  });

  it("fine-tunes a checkpoint and serves it", async () => {
    const data = path.join(workDir, "pairs.jsonl");
    const ckpt = path.join(workDir, "ckpt");
    const pairs = [
      { prompt: "<e> FD: open a file, name: open_file </e> close a file handle", name: "close_file" },
      { prompt: "<e> FD: open a file, name: open_file </e> delete a directory tree", name: "delete_tree" },
      { prompt: "<e> FD: walk a tree, name: walk_tree </e> copy a file to a backup", name: "copy_backup" },
      { prompt: "<e> FD: walk a tree, name: walk_tree </e> move a file across devices", name: "move_file" },
    ];
    fs.writeFileSync(data, pairs.map((p) => JSON.stringify(p)).join("\n") + "\n");

    const trained = runCli([
      "finetune",
      "--data", data,
      "--out", ckpt,
      "--batch-size", "4",
      "--learning-rate", "0.5",
      "--max-epochs", "60",
      "--early-stop", "60",
    ]);
    expect(trained.status).toBe(0);
    expect(trained.stdout).toMatch(/checkpoint at/);
    expect(fs.existsSync(path.join(ckpt, "model.json"))).toBe(true);
    expect(fs.existsSync(path.join(ckpt, "train_log.jsonl"))).toBe(true);
    expect(fs.existsSync(path.join(ckpt, "config.json"))).toBe(true);

    let server: ChildProcess | undefined;
    try {
      server = spawn("node", [MAIN, "serve", "--model", ckpt, "--port", "0"], {
        stdio: ["ignore", "pipe", "pipe"],
      });
      const port = await new Promise<number>((resolve, reject) => {
        let seen = "";
        const timer = setTimeout(() => reject(new Error(`no listening line in: ${seen}`)), 10_000);
        server!.stdout!.on("data", (chunk: Buffer) => {
          seen += chunk.toString();
          const m = /listening on 127\.0\.0\.1:(\d+)/.exec(seen);
          if (m) {
            clearTimeout(timer);
            resolve(Number(m[1]));
          }
        });
        server!.once("exit", (code) => reject(new Error(`server exited early (${code})`)));
      });

      const health = await fetch(`http://127.0.0.1:${port}/v1/health`);
      expect(await health.json()).toEqual({ ok: true });

      const reply = await fetch(`http://127.0.0.1:${port}/v1/generate_name`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ prompt: pairs[0]!.prompt }),
      });
      expect(reply.status).toBe(200);
      expect(await reply.json()).toEqual({ name: "close_file" });
    } finally {
      server?.kill();
    }
  });
});
