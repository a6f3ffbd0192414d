"""Command-line front end.

Exit codes: 0 success, 1 partial per-sample failures, 2 configuration error.
Every command that writes artifacts also writes a manifest.json recording the
resolved config hash, the package version, and the seed, so a result
directory is self-describing.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

import click

from . import __version__
from .campaign import (
    CampaignError,
    load_adversarial,
    run_attack_campaign,
    run_defense_campaign,
    run_eval_campaign,
    save_adversarial,
)
from .config import CampaignConfig, ConfigError, load_config
from .core import GenerationMode, load_corpus, save_corpus
from .curation import CurationConfig, curate_corpus
from .defense import index_from_corpus, load_index, save_index
from .embeddings import load_embeddings
from .mockserver import MockBehavior, create_app
from .modelio import ModelClient
from .report import load_aggregate_files, write_report


def _fail_config(message: str) -> None:
    click.echo(f"config error: {message}", err=True)
    sys.exit(2)


def _load(config_path: str | None, **overrides: Any) -> CampaignConfig:
    if config_path is None:
        _fail_config("a --config file is required")
    try:
        return load_config(config_path, overrides)
    except ConfigError as exc:
        _fail_config(str(exc))
        raise AssertionError("unreachable")


def _write_manifest(out_dir: Path, command: str, cfg: CampaignConfig) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "command": command,
        "config_hash": cfg.hash(),
        "config": cfg.to_dict(),
        "version": __version__,
        "seed": cfg.ga.rng_seed,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _write_json(path: Path, payload: Any) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _client(cfg: CampaignConfig) -> ModelClient:
    if cfg.endpoint is None:
        _fail_config("[endpoint] base_url is required for this command")
    return ModelClient(cfg.endpoint)


def _report_failures(failures) -> None:
    for f in failures:
        click.echo(f"  {f.sample_id} [{f.stage}]: {f.message}", err=True)


config_option = click.option(
    "--config", "-c", "config_path", type=click.Path(), help="TOML campaign config."
)
out_option = click.option("--out", "out_dir", type=click.Path(), help="Output directory.")
corpus_option = click.option("--corpus", type=click.Path(), help="Corpus JSONL override.")
seed_option = click.option("--seed", type=int, help="Attack seed override.")


@click.group()
@click.version_option(version=__version__, prog_name="nameforge")
def main() -> None:
    """Method-name robustness toolkit: curate, attack, defend, report."""


@main.command()
@config_option
@corpus_option
@out_option
def curate(config_path, corpus, out_dir):
    """Filter and normalize a raw corpus (rules H1-H6)."""
    cfg = _load(config_path, corpus=corpus, out_dir=out_dir)
    if cfg.corpus_path is None:
        _fail_config("[corpus] path is required")
    samples = load_corpus(cfg.corpus_path)
    kept, report = curate_corpus(samples, CurationConfig())
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    save_corpus(kept, out / "curated.jsonl")
    _write_json(out / "curation_report.json", report.to_dict())
    _write_manifest(out, "curate", cfg)
    click.echo(
        f"curated {len(samples)} samples: kept {len(kept)}, rejected {len(samples) - len(kept)}"
    )


@main.command()
@config_option
@corpus_option
@out_option
def index(config_path, corpus, out_dir):
    """Build the retrieval index from a curated corpus."""
    cfg = _load(config_path, corpus=corpus, out_dir=out_dir)
    if cfg.corpus_path is None:
        _fail_config("[corpus] path is required")
    samples = load_corpus(cfg.corpus_path)
    if not samples:
        _fail_config("empty corpus")
    idx = index_from_corpus(samples)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    path = cfg.index_path or out / "index.json"
    save_index(idx, path)
    _write_manifest(out, "index", cfg)
    click.echo(f"indexed {len(samples)} pairs -> {path}")


@main.command()
@config_option
@corpus_option
@out_option
@seed_option
@click.option("--kind", "attack_kind", type=click.Choice(["ga", "foo", "random"]), help="Attack kind override.")
def attack(config_path, corpus, out_dir, seed, attack_kind):
    """Run the adversarial-name attack campaign."""
    cfg = _load(config_path, corpus=corpus, out_dir=out_dir, seed=seed, attack_kind=attack_kind)
    if cfg.corpus_path is None:
        _fail_config("[corpus] path is required")
    samples = load_corpus(cfg.corpus_path)
    embeddings = load_embeddings(cfg.embeddings_path) if cfg.embeddings_path else None
    with _client(cfg) as client:
        try:
            result = run_attack_campaign(
                samples,
                client,
                kind=cfg.attack_kind,
                ga_cfg=cfg.ga,
                embeddings=embeddings,
                max_candidates=cfg.max_candidates,
                executor=cfg.executor,
                workers=cfg.workers,
            )
        except CampaignError as exc:
            _fail_config(str(exc))
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    save_adversarial(result.records, out / "adversarial.jsonl")
    _write_json(out / "attack_aggregates.json", result.aggregates)
    if result.failures:
        _write_json(out / "attack_failures.json", [f.to_dict() for f in result.failures])
    _write_manifest(out, "attack", cfg)
    agg = result.aggregates
    click.echo(
        "attacked {n} samples ({kind}): codebleu {b} -> {a}".format(
            n=agg["samples"],
            kind=agg["attack_kind"],
            b=_fmt(agg["mean_codebleu_before"]),
            a=_fmt(agg["mean_codebleu_after"]),
        )
    )
    if result.failures:
        click.echo(f"{len(result.failures)} samples failed:", err=True)
        _report_failures(result.failures)
        sys.exit(1)


def _fmt(value) -> str:
    return "n/a" if value is None else f"{value:.4f}"


@main.command()
@config_option
@out_option
@click.option("--adversarial", type=click.Path(), help="Adversarial JSONL from the attack step.")
@click.option("--index", "index_path", type=click.Path(), help="Retrieval index artifact.")
@click.option("--baseline", "baseline_path", type=click.Path(), help="attack_aggregates.json for reinstatement deltas.")
def defend(config_path, out_dir, adversarial, index_path, baseline_path):
    """Re-synthesize method names for attacked samples and rescore."""
    cfg = _load(config_path, out_dir=out_dir, index_path=index_path)
    adv_path = Path(adversarial) if adversarial else cfg.out_dir / "adversarial.jsonl"
    if not adv_path.is_file():
        _fail_config(f"adversarial records not found: {adv_path}")
    if cfg.index_path is None or not Path(cfg.index_path).is_file():
        _fail_config("retrieval index not found; run the index command first")
    try:
        pairs = load_adversarial(adv_path)
        idx = load_index(cfg.index_path)
    except (CampaignError, ValueError) as exc:
        _fail_config(str(exc))
    baseline = None
    if baseline_path:
        if not Path(baseline_path).is_file():
            _fail_config(f"baseline aggregates not found: {baseline_path}")
        baseline = json.loads(Path(baseline_path).read_text(encoding="utf-8"))
    with _client(cfg) as client:
        try:
            result = run_defense_campaign(
                pairs,
                idx,
                client,
                retrieval=cfg.retrieval,
                neural=cfg.neural_defense,
                workers=cfg.workers,
                baseline=baseline,
            )
        except CampaignError as exc:
            _fail_config(str(exc))
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "defended.jsonl", "w", encoding="utf-8") as fh:
        for row in result.rows:
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")
    _write_json(out / "defense_aggregates.json", result.aggregates)
    _write_manifest(out, "defend", cfg)
    click.echo(
        "defended {n} samples: codebleu {v}".format(
            n=result.aggregates["samples"], v=_fmt(result.aggregates["mean_codebleu_defended"])
        )
    )
    if result.failures:
        click.echo(f"{len(result.failures)} samples failed:", err=True)
        _report_failures(result.failures)
        sys.exit(1)


@main.command(name="eval")
@config_option
@corpus_option
@out_option
@click.option("--mode", type=click.Choice(["fd", "fd_sig"]), default="fd_sig", show_default=True)
def eval_cmd(config_path, corpus, out_dir, mode):
    """Score the endpoint on an unmodified corpus."""
    cfg = _load(config_path, corpus=corpus, out_dir=out_dir)
    if cfg.corpus_path is None:
        _fail_config("[corpus] path is required")
    samples = load_corpus(cfg.corpus_path)
    with _client(cfg) as client:
        try:
            result = run_eval_campaign(
                samples,
                client,
                mode=GenerationMode(mode),
                executor=cfg.executor,
                workers=cfg.workers,
            )
        except CampaignError as exc:
            _fail_config(str(exc))
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "eval_aggregates.json", result.aggregates)
    _write_manifest(out, "eval", cfg)
    click.echo(
        "evaluated {n} samples: codebleu {v}".format(
            n=result.aggregates["samples"], v=_fmt(result.aggregates["mean_codebleu"])
        )
    )
    if result.failures:
        click.echo(f"{len(result.failures)} samples failed:", err=True)
        _report_failures(result.failures)
        sys.exit(1)


@main.command()
@click.argument("aggregates", nargs=-1, type=click.Path())
@click.option("--out", "out_dir", type=click.Path(), default="out", show_default=True)
def report(aggregates, out_dir):
    """Render campaign aggregates into report.csv and report.md."""
    if not aggregates:
        _fail_config("pass at least one aggregates JSON file")
    try:
        loaded = load_aggregate_files(list(aggregates))
        csv_path, md_path = write_report(loaded, out_dir)
    except CampaignError as exc:
        _fail_config(str(exc))
    click.echo(f"wrote {csv_path} and {md_path}")


@main.command(name="mock-serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8753, show_default=True, type=int)
@click.option("--robust", is_flag=True, help="Ignore requested names (defended victim).")
@click.option("--fail-first", default=0, type=int, help="Fail the first N generate calls with 503.")
def mock_serve(host, port, robust, fail_first):
    """Serve the bundled deterministic mock victim over the wire protocol."""
    import uvicorn

    app = create_app(MockBehavior(robust=robust, fail_first=fail_first))
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
