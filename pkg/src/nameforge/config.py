"""Campaign configuration: one TOML file, sections mirroring the pipeline.

Sections: [corpus] [endpoint] [attack] [defense] [metrics] [executor].
Anything omitted falls back to the library defaults; CLI flags override
individual keys after the file is parsed.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import tomli

from .attack import ATTACK_KINDS, GaConfig
from .defense import RetrievalConfig
from .executor import DEFAULT_TIMEOUT, ExecutorConfig
from .modelio import EndpointConfig


class ConfigError(ValueError):
    """Unusable configuration; the CLI maps this to exit code 2."""


@dataclass(frozen=True)
class CampaignConfig:
    corpus_path: Path | None = None
    endpoint: EndpointConfig | None = None
    attack_kind: str = "ga"
    ga: GaConfig = field(default_factory=GaConfig)
    max_candidates: int | None = None
    embeddings_path: Path | None = None
    retrieval: RetrievalConfig | None = None  # None = per-language default
    index_path: Path | None = None
    neural_defense: bool = False
    codebleu_weights: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    executor: ExecutorConfig | None = None
    workers: int = 4
    out_dir: Path = Path("out")

    def hash(self) -> str:
        return hashlib.sha256(
            json.dumps(self.to_dict(), sort_keys=True).encode("utf-8")
        ).hexdigest()

    def to_dict(self) -> dict[str, Any]:
        return {
            "corpus_path": str(self.corpus_path) if self.corpus_path else None,
            "endpoint": (
                {
                    "base_url": self.endpoint.base_url,
                    "timeout": self.endpoint.timeout,
                    "max_retries": self.endpoint.max_retries,
                    "max_in_flight": self.endpoint.max_in_flight,
                    "cache_path": (
                        str(self.endpoint.cache_path) if self.endpoint.cache_path else None
                    ),
                }
                if self.endpoint
                else None
            ),
            "attack_kind": self.attack_kind,
            "ga": {
                "size_population": self.ga.size_population,
                "max_iterations": self.ga.max_iterations,
                "crossover_prob": self.ga.crossover_prob,
                "mutation_prob": self.ga.mutation_prob,
                "early_stop": self.ga.early_stop,
                "repeats": self.ga.repeats,
                "rng_seed": self.ga.rng_seed,
            },
            "max_candidates": self.max_candidates,
            "embeddings_path": str(self.embeddings_path) if self.embeddings_path else None,
            "retrieval": (
                {"top_k": self.retrieval.top_k, "fusion_lambda": self.retrieval.fusion_lambda}
                if self.retrieval
                else None
            ),
            "index_path": str(self.index_path) if self.index_path else None,
            "neural_defense": self.neural_defense,
            "codebleu_weights": list(self.codebleu_weights),
            "executor": (
                {"command": list(self.executor.command), "timeout": self.executor.timeout}
                if self.executor
                else None
            ),
            "workers": self.workers,
            "out_dir": str(self.out_dir),
        }


_SECTIONS = {"corpus", "endpoint", "attack", "defense", "metrics", "executor"}


def _take(section: dict[str, Any], known: dict[str, type | tuple[type, ...]], where: str) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in section.items():
        if key not in known:
            raise ConfigError(f"unknown key '{key}' in [{where}]")
        expected = known[key]
        if not isinstance(value, expected):
            raise ConfigError(f"[{where}] {key}: expected {expected}, got {type(value).__name__}")
        out[key] = value
    return out


def load_config(path: str | Path, overrides: dict[str, Any] | None = None) -> CampaignConfig:
    """Parse the TOML file, apply flag overrides, validate referenced paths."""
    p = Path(path)
    try:
        with open(p, "rb") as fh:
            raw = tomli.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {p}")
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {p}: {exc}")
    cfg = parse_config(raw, base_dir=p.parent)
    if overrides:
        cfg = apply_overrides(cfg, overrides)
    validate_paths(cfg)
    return cfg


def parse_config(raw: dict[str, Any], base_dir: Path = Path(".")) -> CampaignConfig:
    unknown = set(raw) - _SECTIONS
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")

    def resolve(value: str) -> Path:
        q = Path(value)
        return q if q.is_absolute() else base_dir / q

    corpus = _take(raw.get("corpus", {}), {"path": str, "out_dir": str}, "corpus")
    endpoint_raw = _take(
        raw.get("endpoint", {}),
        {
            "base_url": str,
            "timeout": (int, float),
            "max_retries": int,
            "max_in_flight": int,
            "cache_path": str,
        },
        "endpoint",
    )
    attack = _take(
        raw.get("attack", {}),
        {
            "kind": str,
            "size_population": int,
            "max_iterations": int,
            "crossover_prob": (int, float),
            "mutation_prob": (int, float),
            "early_stop": int,
            "repeats": int,
            "seed": int,
            "max_candidates": int,
            "embeddings_path": str,
            "workers": int,
        },
        "attack",
    )
    defense = _take(
        raw.get("defense", {}),
        {"top_k": int, "lambda": (int, float), "index_path": str, "neural": bool},
        "defense",
    )
    metrics = _take(raw.get("metrics", {}), {"codebleu_weights": list}, "metrics")
    executor_raw = _take(
        raw.get("executor", {}), {"command": list, "timeout": (int, float)}, "executor"
    )

    try:
        ga = GaConfig(
            size_population=attack.get("size_population", 20),
            max_iterations=attack.get("max_iterations", 50),
            crossover_prob=float(attack.get("crossover_prob", 0.9)),
            mutation_prob=float(attack.get("mutation_prob", 0.001)),
            early_stop=attack.get("early_stop", 3),
            repeats=attack.get("repeats", 30),
            rng_seed=attack.get("seed", 0),
        )
    except ValueError as exc:
        raise ConfigError(f"[attack]: {exc}")

    kind = attack.get("kind", "ga")
    if kind not in ATTACK_KINDS:
        raise ConfigError(f"[attack] kind must be one of {ATTACK_KINDS}, got '{kind}'")

    endpoint = None
    if endpoint_raw:
        if "base_url" not in endpoint_raw:
            raise ConfigError("[endpoint] needs base_url")
        try:
            endpoint = EndpointConfig(
                base_url=endpoint_raw["base_url"],
                timeout=float(endpoint_raw.get("timeout", 30.0)),
                max_retries=endpoint_raw.get("max_retries", 3),
                max_in_flight=endpoint_raw.get("max_in_flight", 8),
                cache_path=(
                    resolve(endpoint_raw["cache_path"])
                    if "cache_path" in endpoint_raw
                    else None
                ),
            )
        except ValueError as exc:
            raise ConfigError(f"[endpoint]: {exc}")

    retrieval = None
    if "top_k" in defense or "lambda" in defense:
        if not {"top_k", "lambda"} <= set(defense):
            raise ConfigError("[defense] top_k and lambda must be set together")
        try:
            retrieval = RetrievalConfig(defense["top_k"], float(defense["lambda"]))
        except ValueError as exc:
            raise ConfigError(f"[defense]: {exc}")

    weights = metrics.get("codebleu_weights", [0.25, 0.25, 0.25, 0.25])
    if len(weights) != 4 or not all(isinstance(w, (int, float)) and w >= 0 for w in weights):
        raise ConfigError("[metrics] codebleu_weights must be four non-negative numbers")

    executor = None
    if executor_raw:
        command = executor_raw.get("command", [])
        if not all(isinstance(part, str) for part in command):
            raise ConfigError("[executor] command must be a list of strings")
        try:
            executor = ExecutorConfig(
                command=tuple(command),
                timeout=float(executor_raw.get("timeout", DEFAULT_TIMEOUT)),
            )
        except ValueError as exc:
            raise ConfigError(f"[executor]: {exc}")

    max_candidates = attack.get("max_candidates")
    if max_candidates is not None and max_candidates < 1:
        raise ConfigError("[attack] max_candidates must be >= 1")
    workers = attack.get("workers", 4)
    if workers < 1:
        raise ConfigError("[attack] workers must be >= 1")

    return CampaignConfig(
        corpus_path=resolve(corpus["path"]) if "path" in corpus else None,
        endpoint=endpoint,
        attack_kind=kind,
        ga=ga,
        max_candidates=max_candidates,
        embeddings_path=(
            resolve(attack["embeddings_path"]) if "embeddings_path" in attack else None
        ),
        retrieval=retrieval,
        index_path=resolve(defense["index_path"]) if "index_path" in defense else None,
        neural_defense=defense.get("neural", False),
        codebleu_weights=tuple(float(w) for w in weights),
        executor=executor,
        workers=workers,
        out_dir=resolve(corpus.get("out_dir", "out")),
    )


def apply_overrides(cfg: CampaignConfig, overrides: dict[str, Any]) -> CampaignConfig:
    """Flag-level overrides; None values mean 'not given'."""
    out = cfg
    if overrides.get("corpus") is not None:
        out = replace(out, corpus_path=Path(overrides["corpus"]))
    if overrides.get("out_dir") is not None:
        out = replace(out, out_dir=Path(overrides["out_dir"]))
    if overrides.get("endpoint") is not None:
        base = out.endpoint or EndpointConfig(base_url=overrides["endpoint"])
        out = replace(out, endpoint=replace(base, base_url=overrides["endpoint"]))
    if overrides.get("seed") is not None:
        out = replace(out, ga=replace(out.ga, rng_seed=int(overrides["seed"])))
    if overrides.get("attack_kind") is not None:
        kind = overrides["attack_kind"]
        if kind not in ATTACK_KINDS:
            raise ConfigError(f"attack kind must be one of {ATTACK_KINDS}, got '{kind}'")
        out = replace(out, attack_kind=kind)
    if overrides.get("index_path") is not None:
        out = replace(out, index_path=Path(overrides["index_path"]))
    return out


def validate_paths(cfg: CampaignConfig) -> None:
    for label, p in (
        ("corpus", cfg.corpus_path),
        ("embeddings", cfg.embeddings_path),
    ):
        if p is not None and not Path(p).is_file():
            raise ConfigError(f"{label} path does not exist: {p}")
