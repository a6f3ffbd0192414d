/**
 * Generation backends. The template backend is fully deterministic: every
 * output is a pure function of the request. A checkpoint backend swaps the
 * name path for a trained classifier and keeps the code path.
 */
import type { GenerateRequest } from "./protocol.js";
import type { ShimConfig } from "./config.js";
import {
  conventionOf,
  contentTokens,
  fnv1a,
  joinName,
  tokenize,
  type NamingConvention,
} from "./text.js";
import { loadCheckpoint, predictName, type NameModel } from "./model.js";

export interface ModelBackend {
  generateCode(req: GenerateRequest): string | Promise<string>;
  generateName(prompt: string): string | Promise<string>;
}

/**
 * Retrieval-augmented prompt shape used by the defended name generator:
 * an exemplar (FD, name) pair ahead of the actual description. The layout
 * is owned by the attack side; parse it, never rebuild it.
 */
const EXEMPLAR_RE = /^<e> FD: (.*), name: ([A-Za-z_$][\w$]*) <\/e> (.*)$/s;

export interface ParsedPrompt {
  exemplarFd: string | null;
  exemplarName: string | null;
  description: string;
}

export function parsePrompt(prompt: string): ParsedPrompt {
  const m = EXEMPLAR_RE.exec(prompt);
  if (m === null) {
    return { exemplarFd: null, exemplarName: null, description: prompt };
  }
  return { exemplarFd: m[1]!, exemplarName: m[2]!, description: m[3]! };
}

function truncateTokens(text: string, limit: number): string {
  const words = text.split(/\s+/).filter((w) => w.length > 0);
  if (words.length <= limit) return text;
  return words.slice(0, limit).join(" ");
}

const NAME_PARTS = 4;

function deriveName(description: string, convention: NamingConvention, cap: number): string {
  const tokens = contentTokens(description).slice(0, Math.min(NAME_PARTS, cap));
  return joinName(tokens, convention);
}

interface SignatureParts {
  name: string;
  params: string;
}

// good-enough extraction for prompt building; real validation lives client-side
function parseSignature(signature: string, language: "python" | "java"): SignatureParts | null {
  if (language === "python") {
    const m = /^\s*def\s+([A-Za-z_]\w*)\s*\(([^)]*)\)/.exec(signature);
    return m ? { name: m[1]!, params: m[2]! } : null;
  }
  const m = /([A-Za-z_$][\w$]*)\s*\(([^)]*)\)\s*;?\s*$/.exec(signature);
  return m ? { name: m[1]!, params: m[2]! } : null;
}

function firstParamName(params: string, language: "python" | "java"): string {
  const head = params.split(",")[0]?.trim() ?? "";
  if (head === "") return language === "python" ? "data" : "values";
  if (language === "python") {
    const name = head.split(":")[0]?.trim() ?? "";
    return name === "" || name === "self" ? "data" : name;
  }
  const pieces = head.split(/\s+/);
  return pieces[pieces.length - 1] ?? "values";
}

function pythonCode(header: string, param: string, variant: number): string {
  if (variant === 0) {
    return [
      header,
      `    collected = []`,
      `    for item in ${param}:`,
      `        collected.append(item)`,
      `    return collected`,
      ``,
    ].join("\n");
  }
  return [
    header,
    `    total = 0`,
    `    for item in ${param}:`,
    `        total = total + 1`,
    `    return total`,
    ``,
  ].join("\n");
}

function javaCode(header: string, param: string, variant: number): string {
  if (variant === 0) {
    return [
      `${header} {`,
      `    int count = 0;`,
      `    for (int i = 0; i < ${param}.length; i++) {`,
      `        count++;`,
      `    }`,
      `    return count;`,
      `}`,
      ``,
    ].join("\n");
  }
  return [
    `${header} {`,
    `    StringBuilder out = new StringBuilder();`,
    `    out.append(${param}.length);`,
    `    return out.toString();`,
    `}`,
    ``,
  ].join("\n");
}

export class TemplateBackend implements ModelBackend {
  protected readonly maxSourceLength: number;
  protected readonly maxTargetLength: number;
  private readonly pickVariant: (seedText: string) => number;
  private sampleNonce = 0;

  constructor(config: Pick<ShimConfig, "maxSourceLength" | "maxTargetLength" | "decoding">) {
    this.maxSourceLength = config.maxSourceLength;
    this.maxTargetLength = config.maxTargetLength;
    this.pickVariant =
      config.decoding === "greedy"
        ? (seedText) => fnv1a(seedText) % 2
        : (seedText) => fnv1a(`${seedText}#${this.sampleNonce++}`) % 2;
  }

  generateCode(req: GenerateRequest): string {
    const description = truncateTokens(req.description, this.maxSourceLength);
    // prompt built exactly as requested: FD is the description alone,
    // FD^Sig appends the signature on its own line
    const prompt =
      req.mode === "fd" ? description : `${description}\n${req.signature ?? ""}`;
    const variant = this.pickVariant(prompt);
    const sig = req.mode === "fd_sig" ? parseSignature(req.signature ?? "", req.language) : null;
    if (req.language === "python") {
      const header =
        sig !== null
          ? `${req.signature!.trim().replace(/:\s*$/, "")}:`
          : `def ${deriveName(description, "snake", this.maxTargetLength)}(data):`;
      return pythonCode(header, sig ? firstParamName(sig.params, "python") : "data", variant);
    }
    const header =
      sig !== null
        ? req.signature!.trim().replace(/[;{]\s*$/, "")
        : `public static int ${deriveName(description, "camel", this.maxTargetLength)}(int[] values)`;
    return javaCode(header, sig ? firstParamName(sig.params, "java") : "values", variant);
  }

  generateName(prompt: string): string {
    const bounded = truncateTokens(prompt, this.maxSourceLength);
    const parsed = parsePrompt(bounded);
    const convention: NamingConvention =
      parsed.exemplarName !== null ? conventionOf(parsed.exemplarName) : "snake";
    if (
      parsed.exemplarName !== null &&
      parsed.exemplarFd !== null &&
      sameText(parsed.exemplarFd, parsed.description)
    ) {
      // the exemplar answers the query outright
      return parsed.exemplarName;
    }
    return deriveName(parsed.description, convention, this.maxTargetLength);
  }
}

function sameText(a: string, b: string): boolean {
  return tokenize(a).join(" ") === tokenize(b).join(" ");
}

/** Template code path plus a trained classifier for names. */
export class CheckpointBackend extends TemplateBackend {
  private readonly model: NameModel;

  constructor(
    config: Pick<ShimConfig, "maxSourceLength" | "maxTargetLength" | "decoding">,
    model: NameModel,
  ) {
    super(config);
    this.model = model;
  }

  override generateName(prompt: string): string {
    return predictName(this.model, truncateTokens(prompt, this.maxSourceLength));
  }
}

/** Resolve the configured model into a backend; throws on load failure. */
export function loadBackend(config: ShimConfig): ModelBackend {
  if (config.model === "template") return new TemplateBackend(config);
  return new CheckpointBackend(config, loadCheckpoint(config.model));
}
