/** Runtime configuration for the shim process. */

export type Decoding = "greedy" | "sample";

export interface ShimConfig {
  /** Checkpoint directory path, or "template" for the built-in backend. */
  model: string;
  /** Only cpu inference exists here; anything else is a config error. */
  device: "cpu";
  maxSourceLength: number;
  maxTargetLength: number;
  decoding: Decoding;
  port: number;
}

export const DEFAULTS: ShimConfig = {
  model: "template",
  device: "cpu",
  maxSourceLength: 128,
  maxTargetLength: 24,
  decoding: "greedy",
  port: 8970,
};

export class ConfigError extends Error {}

export function resolveConfig(overrides: Partial<ShimConfig> = {}): ShimConfig {
  const cfg = { ...DEFAULTS, ...overrides };
  if (cfg.device !== "cpu") {
    throw new ConfigError(`unsupported device "${String(cfg.device)}": only cpu is available`);
  }
  if (!Number.isInteger(cfg.maxSourceLength) || cfg.maxSourceLength <= 0) {
    throw new ConfigError("maxSourceLength must be a positive integer");
  }
  if (!Number.isInteger(cfg.maxTargetLength) || cfg.maxTargetLength <= 0) {
    throw new ConfigError("maxTargetLength must be a positive integer");
  }
  if (!Number.isInteger(cfg.port) || cfg.port < 0 || cfg.port > 65535) {
    throw new ConfigError("port must be an integer in [0, 65535]");
  }
  if (cfg.decoding !== "greedy" && cfg.decoding !== "sample") {
    throw new ConfigError(`unknown decoding strategy "${String(cfg.decoding)}"`);
  }
  if (cfg.model.length === 0) {
    throw new ConfigError("model must be a checkpoint path or \"template\"");
  }
  return cfg;
}
