"""Corpus-level campaign loops: attack, defend, evaluate.

Every loop is deterministic for a fixed seed and endpoint: per-sample work is
independently seeded, workers only change scheduling, and results are emitted
in corpus order.
"""
from __future__ import annotations

import json
import random
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .attack import CachingOracle, GaConfig, baseline_attack, derive_run_seed, ga_attack
from .core import (
    AdversarialRecord,
    GenerationMode,
    Sample,
    sample_from_dict,
    sample_to_dict,
    substitute_method_name,
)
from .defense import (
    RetrievalConfig,
    RetrievalIndex,
    default_retrieval_config,
    defend_sample,
    synthesize_name_ir,
    synthesize_name_neural,
)
from .embeddings import EmbeddingTable
from .executor import ExecutorConfig, run_tests
from .metrics import asr_finetune, asr_zeroshot, codebleu, pass_at_1
from .modelio import EndpointError, ModelClient, ProtocolError
from .morph import build_candidate_set

ATTACK_FIELDS = ("adversarial_name", "original_fitness", "best_fitness", "attack_kind")


class CampaignError(ValueError):
    """Unusable campaign input (empty corpus, missing artifacts)."""


@dataclass(frozen=True)
class SampleFailure:
    sample_id: str
    stage: str
    message: str

    def to_dict(self) -> dict[str, str]:
        return {"sample_id": self.sample_id, "stage": self.stage, "message": self.message}


@dataclass(frozen=True)
class AttackCampaignResult:
    records: tuple[tuple[Sample, AdversarialRecord], ...]
    aggregates: dict[str, Any]
    failures: tuple[SampleFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class DefenseCampaignResult:
    rows: tuple[dict[str, Any], ...]
    aggregates: dict[str, Any]
    failures: tuple[SampleFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def make_fitness_oracle(
    client: ModelClient, mode: GenerationMode, reference: Sample
) -> CachingOracle:
    """Fitness = CodeBLEU of the victim's output for a renamed prompt against
    the sample's reference code. Clamped only by construction: the metric is
    already in [0, 1]."""

    def fn(sample: Sample, name: str) -> float:
        perturbed = substitute_method_name(sample, name)
        code = client.generate_code(
            perturbed.description, perturbed.signature, mode, sample.language
        )
        return codebleu(code, reference.code, sample.language.value).combined

    return CachingOracle(fn)


def _generation_scores(
    client: ModelClient, sample: Sample, name: str, mode: GenerationMode
) -> tuple[float, float, str]:
    """(bleu, codebleu, generated code) for the sample carrying `name`."""
    probe = substitute_method_name(sample, name) if name != sample.method_name else sample
    code = client.generate_code(probe.description, probe.signature, mode, sample.language)
    report = codebleu(code, sample.code, sample.language.value)
    return report.ngram, report.combined, code


def _attack_one(
    sample: Sample,
    client: ModelClient,
    mode: GenerationMode,
    kind: str,
    ga_cfg: GaConfig,
    embeddings: EmbeddingTable | None,
    max_candidates: int | None,
) -> AdversarialRecord:
    candidates = build_candidate_set(
        sample.method_name,
        sample.language.naming_convention,
        embeddings=embeddings,
        max_per_subword=max_candidates,
    )
    oracle = make_fitness_oracle(client, mode, sample)
    if kind == "ga":
        return ga_attack(sample, candidates, oracle, ga_cfg)
    rng = random.Random(derive_run_seed(ga_cfg.rng_seed, sample.id, 0))
    name, unchanged = baseline_attack(sample, kind, candidates, rng)
    original_fitness = oracle(sample, sample.method_name)
    best_fitness = original_fitness if unchanged else oracle(sample, name)
    return AdversarialRecord(
        sample_id=sample.id,
        attack_kind=kind,
        original_name=sample.method_name,
        adversarial_name=name,
        original_fitness=original_fitness,
        best_fitness=best_fitness,
        unchanged=unchanged,
    )


def run_attack_campaign(
    corpus: Sequence[Sample],
    client: ModelClient,
    kind: str = "ga",
    ga_cfg: GaConfig | None = None,
    mode: GenerationMode = GenerationMode.FD_SIG,
    embeddings: EmbeddingTable | None = None,
    max_candidates: int | None = None,
    executor: ExecutorConfig | None = None,
    workers: int = 4,
) -> AttackCampaignResult:
    """Attack every sample, then score before/after generations.

    Per-sample failures are recorded and the campaign continues; the caller
    maps a non-empty failure list to a partial-failure exit status.
    """
    if not corpus:
        raise CampaignError("empty corpus")
    if mode is not GenerationMode.FD_SIG:
        raise CampaignError("attacks need a signature; use fd_sig mode")
    cfg = ga_cfg or GaConfig()

    def work(sample: Sample) -> AdversarialRecord | SampleFailure:
        try:
            return _attack_one(sample, client, mode, kind, cfg, embeddings, max_candidates)
        except (EndpointError, ProtocolError, ValueError) as exc:
            return SampleFailure(sample.id, "attack", str(exc))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        outcomes = list(pool.map(work, corpus))

    records: list[tuple[Sample, AdversarialRecord]] = []
    failures: list[SampleFailure] = []
    bleu_before: list[float] = []
    bleu_after: list[float] = []
    cb_before: list[float] = []
    cb_after: list[float] = []
    pass_before: list[bool] = []
    pass_after: list[bool] = []
    run_bests: list[float] = []

    for sample, outcome in zip(corpus, outcomes):
        if isinstance(outcome, SampleFailure):
            failures.append(outcome)
            continue
        record = outcome
        try:
            b_bleu, b_cb, code_before = _generation_scores(
                client, sample, record.original_name, mode
            )
            a_bleu, a_cb, code_after = _generation_scores(
                client, sample, record.adversarial_name, mode
            )
        except (EndpointError, ProtocolError, ValueError) as exc:
            failures.append(SampleFailure(sample.id, "scoring", str(exc)))
            continue
        records.append((sample, record))
        bleu_before.append(b_bleu)
        bleu_after.append(a_bleu)
        cb_before.append(b_cb)
        cb_after.append(a_cb)
        run_bests.extend(r.best_fitness for r in record.runs if r.error is None)
        if executor is not None and sample.tests:
            pass_before.append(run_tests(sample, code_before, executor).passed)
            pass_after.append(run_tests(sample, code_after, executor).passed)

    aggregates = _attack_aggregates(
        client=client,
        kind=kind,
        mode=mode,
        seed=cfg.rng_seed,
        n_samples=len(corpus),
        n_failures=len(failures),
        bleu_before=bleu_before,
        bleu_after=bleu_after,
        cb_before=cb_before,
        cb_after=cb_after,
        pass_before=pass_before,
        pass_after=pass_after,
        run_bests=run_bests,
    )
    return AttackCampaignResult(tuple(records), aggregates, tuple(failures))


def relative_drop(before: float, after: float) -> float | None:
    """(before - after) / before; None when the baseline is zero."""
    if before == 0:
        return None
    return (before - after) / before


def _mean(values: Sequence[float]) -> float | None:
    return statistics.fmean(values) if values else None


def _attack_aggregates(
    *,
    client: ModelClient,
    kind: str,
    mode: GenerationMode,
    seed: int,
    n_samples: int,
    n_failures: int,
    bleu_before: Sequence[float],
    bleu_after: Sequence[float],
    cb_before: Sequence[float],
    cb_after: Sequence[float],
    pass_before: Sequence[bool],
    pass_after: Sequence[bool],
    run_bests: Sequence[float],
) -> dict[str, Any]:
    mean_cb_before = _mean(cb_before)
    mean_cb_after = _mean(cb_after)
    mean_bleu_before = _mean(bleu_before)
    mean_bleu_after = _mean(bleu_after)
    agg: dict[str, Any] = {
        "kind": "attack",
        "attack_kind": kind,
        "endpoint": str(client.config.base_url),
        "mode": mode.value,
        "seed": seed,
        "samples": n_samples,
        "scored": len(cb_before),
        "failures": n_failures,
        "mean_bleu_before": mean_bleu_before,
        "mean_bleu_after": mean_bleu_after,
        "mean_codebleu_before": mean_cb_before,
        "mean_codebleu_after": mean_cb_after,
        "bleu_drop": (
            relative_drop(mean_bleu_before, mean_bleu_after)
            if mean_bleu_before is not None
            else None
        ),
        "codebleu_drop": (
            relative_drop(mean_cb_before, mean_cb_after)
            if mean_cb_before is not None
            else None
        ),
        "asr_finetune": asr_finetune(cb_before, cb_after) if cb_before else None,
        "asr_zeroshot": asr_zeroshot(pass_before, pass_after) if pass_before else None,
        "pass_at_1_before": pass_at_1(pass_before) if pass_before else None,
        "pass_at_1_after": pass_at_1(pass_after) if pass_after else None,
        "run_best_mean": _mean(run_bests),
        "run_best_std": statistics.pstdev(run_bests) if len(run_bests) > 1 else None,
        "network_calls": client.network_calls,
    }
    return agg


# --- adversarial JSONL ----------------------------------------------------------


def adversarial_to_dict(sample: Sample, record: AdversarialRecord) -> dict[str, Any]:
    row = sample_to_dict(sample)
    row.update(
        adversarial_name=record.adversarial_name,
        original_fitness=record.original_fitness,
        best_fitness=record.best_fitness,
        attack_kind=record.attack_kind,
        unchanged=record.unchanged,
        runs=record.to_dict()["runs"],
    )
    return row


def save_adversarial(
    pairs: Iterable[tuple[Sample, AdversarialRecord]], path: str | Path
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sample, record in pairs:
            fh.write(json.dumps(adversarial_to_dict(sample, record), ensure_ascii=False))
            fh.write("\n")


def load_adversarial(path: str | Path) -> list[tuple[Sample, AdversarialRecord]]:
    pairs: list[tuple[Sample, AdversarialRecord]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            raw = json.loads(line)
            missing = [k for k in ATTACK_FIELDS if k not in raw]
            if missing:
                raise CampaignError(
                    f"{path}:{line_no}: not an adversarial record, missing {missing}"
                )
            sample = sample_from_dict({k: raw[k] for k in raw if k not in set(ATTACK_FIELDS) | {"unchanged", "runs"}})
            record = AdversarialRecord.from_dict(
                {
                    "sample_id": sample.id,
                    "original_name": sample.method_name,
                    "adversarial_name": raw["adversarial_name"],
                    "original_fitness": raw["original_fitness"],
                    "best_fitness": raw["best_fitness"],
                    "attack_kind": raw["attack_kind"],
                    "unchanged": raw.get("unchanged", False),
                    "runs": raw.get("runs", []),
                }
            )
            pairs.append((sample, record))
    return pairs


# --- defense --------------------------------------------------------------------


def run_defense_campaign(
    pairs: Sequence[tuple[Sample, AdversarialRecord]],
    index: RetrievalIndex,
    client: ModelClient,
    retrieval: RetrievalConfig | None = None,
    mode: GenerationMode = GenerationMode.FD_SIG,
    neural: bool = False,
    workers: int = 4,
    baseline: dict[str, Any] | None = None,
) -> DefenseCampaignResult:
    """Replace attacked names with synthesized ones, then rescore generations.

    `baseline` may carry the attack campaign's aggregates; its pre-attack
    means are copied through so reports can show reinstatement deltas.
    """
    if not pairs:
        raise CampaignError("no adversarial records to defend")

    def work(item: tuple[Sample, AdversarialRecord]) -> dict[str, Any] | SampleFailure:
        sample, record = item
        cfg = retrieval or default_retrieval_config(sample.language)
        try:
            attacked = substitute_method_name(sample, record.adversarial_name)
            if neural:
                name, fell_back = synthesize_name_neural(
                    client, index, attacked.description, cfg
                )
            else:
                name, fell_back = synthesize_name_ir(index, attacked.description, cfg), False
            defended = defend_sample(attacked, name)
            bleu_score, cb_score, _ = _generation_scores(
                client, defended, defended.method_name, mode
            )
        except (EndpointError, ProtocolError, ValueError) as exc:
            return SampleFailure(sample.id, "defend", str(exc))
        return {
            "sample_id": sample.id,
            "original_name": sample.method_name,
            "adversarial_name": record.adversarial_name,
            "defended_name": defended.method_name,
            "ir_fallback": fell_back,
            "bleu": bleu_score,
            "codebleu": cb_score,
            "recovered_name": defended.method_name == sample.method_name,
        }

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        outcomes = list(pool.map(work, pairs))

    rows = [o for o in outcomes if not isinstance(o, SampleFailure)]
    failures = [o for o in outcomes if isinstance(o, SampleFailure)]
    cbs = [row["codebleu"] for row in rows]
    bleus = [row["bleu"] for row in rows]
    aggregates = {
        "kind": "defense",
        "endpoint": str(client.config.base_url),
        "mode": mode.value,
        "synthesis": "neural" if neural else "ir",
        "samples": len(pairs),
        "scored": len(rows),
        "failures": len(failures),
        "mean_bleu_defended": _mean(bleus),
        "mean_codebleu_defended": _mean(cbs),
        "name_recovery_rate": (
            sum(1 for row in rows if row["recovered_name"]) / len(rows) if rows else None
        ),
        "ir_fallbacks": sum(1 for row in rows if row["ir_fallback"]),
        "mean_bleu_baseline": (baseline or {}).get("mean_bleu_before"),
        "mean_codebleu_baseline": (baseline or {}).get("mean_codebleu_before"),
    }
    return DefenseCampaignResult(tuple(rows), aggregates, tuple(failures))


# --- plain evaluation -----------------------------------------------------------


def run_eval_campaign(
    corpus: Sequence[Sample],
    client: ModelClient,
    mode: GenerationMode = GenerationMode.FD_SIG,
    executor: ExecutorConfig | None = None,
    workers: int = 4,
) -> AttackCampaignResult:
    """Baseline metrics of the endpoint on an unmodified corpus."""
    if not corpus:
        raise CampaignError("empty corpus")

    def work(sample: Sample) -> tuple[float, float, str] | SampleFailure:
        try:
            return _generation_scores(client, sample, sample.method_name, mode)
        except (EndpointError, ProtocolError, ValueError) as exc:
            return SampleFailure(sample.id, "eval", str(exc))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        outcomes = list(pool.map(work, corpus))

    failures = [o for o in outcomes if isinstance(o, SampleFailure)]
    bleus: list[float] = []
    cbs: list[float] = []
    passes: list[bool] = []
    for sample, outcome in zip(corpus, outcomes):
        if isinstance(outcome, SampleFailure):
            continue
        bleu_score, cb_score, code = outcome
        bleus.append(bleu_score)
        cbs.append(cb_score)
        if executor is not None and sample.tests:
            passes.append(run_tests(sample, code, executor).passed)
    aggregates = {
        "kind": "baseline",
        "endpoint": str(client.config.base_url),
        "mode": mode.value,
        "samples": len(corpus),
        "scored": len(cbs),
        "failures": len(failures),
        "mean_bleu": _mean(bleus),
        "mean_codebleu": _mean(cbs),
        "pass_at_1": pass_at_1(passes) if passes else None,
    }
    return AttackCampaignResult((), aggregates, tuple(failures))
