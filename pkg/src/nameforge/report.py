"""Campaign report rendering: CSV for machines, Markdown for people.

Metric cells are printed on the conventional x100 scale with two decimals,
and deltas relative to the stored baseline as "24.48 (↓ 36.33%)".
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Sequence

from .campaign import CampaignError, relative_drop

# row ordering inside one endpoint: baseline first, then attacks, then defense
_KIND_ORDER = {"baseline": 0, "attack": 1, "defense": 2}
_ATTACK_ORDER = {"ga": 0, "foo": 1, "random": 2}

CSV_COLUMNS = (
    "endpoint",
    "method",
    "samples",
    "failures",
    "bleu",
    "codebleu",
    "bleu_delta_pct",
    "codebleu_delta_pct",
    "asr_finetune",
    "asr_zeroshot",
    "pass_at_1",
)


def format_metric(value: float | None) -> str:
    return "" if value is None else f"{value * 100:.2f}"


def format_delta(before: float | None, after: float | None) -> str:
    """Signed relative change; a drop renders with a down arrow."""
    if before is None or after is None:
        return ""
    drop = relative_drop(before, after)
    if drop is None:
        return ""
    arrow = "↓" if drop >= 0 else "↑"
    return f"{arrow} {abs(drop) * 100:.2f}%"


def format_cell(value: float | None, baseline: float | None = None) -> str:
    """"24.48 (↓ 36.33%)" when a baseline exists, bare value otherwise."""
    if value is None:
        return ""
    body = format_metric(value)
    delta = format_delta(baseline, value)
    return f"{body} ({delta})" if delta else body


def _row_from_aggregates(agg: dict[str, Any]) -> dict[str, Any]:
    kind = agg.get("kind")
    if kind == "baseline":
        return {
            "endpoint": agg["endpoint"],
            "kind": kind,
            "method": f"{agg['mode']} baseline",
            "samples": agg["samples"],
            "failures": agg["failures"],
            "bleu": agg["mean_bleu"],
            "codebleu": agg["mean_codebleu"],
            "bleu_baseline": None,
            "codebleu_baseline": None,
            "asr_finetune": None,
            "asr_zeroshot": None,
            "pass_at_1": agg.get("pass_at_1"),
            "order": (_KIND_ORDER[kind], 0),
        }
    if kind == "attack":
        attack_kind = agg.get("attack_kind", "ga")
        return {
            "endpoint": agg["endpoint"],
            "kind": kind,
            "method": f"{attack_kind} attack",
            "samples": agg["samples"],
            "failures": agg["failures"],
            "bleu": agg["mean_bleu_after"],
            "codebleu": agg["mean_codebleu_after"],
            "bleu_baseline": agg["mean_bleu_before"],
            "codebleu_baseline": agg["mean_codebleu_before"],
            "asr_finetune": agg.get("asr_finetune"),
            "asr_zeroshot": agg.get("asr_zeroshot"),
            "pass_at_1": agg.get("pass_at_1_after"),
            "order": (_KIND_ORDER[kind], _ATTACK_ORDER.get(attack_kind, 9)),
        }
    if kind == "defense":
        return {
            "endpoint": agg["endpoint"],
            "kind": kind,
            "method": f"{agg.get('synthesis', 'ir')} defense",
            "samples": agg["samples"],
            "failures": agg["failures"],
            "bleu": agg["mean_bleu_defended"],
            "codebleu": agg["mean_codebleu_defended"],
            "bleu_baseline": agg.get("mean_bleu_baseline"),
            "codebleu_baseline": agg.get("mean_codebleu_baseline"),
            "asr_finetune": None,
            "asr_zeroshot": None,
            "pass_at_1": agg.get("pass_at_1"),
            "order": (_KIND_ORDER[kind], 0),
        }
    raise CampaignError(f"unknown aggregates kind: {kind!r}")


def build_rows(aggregates: Iterable[dict[str, Any]]) -> list[dict[str, Any]]:
    rows = [_row_from_aggregates(agg) for agg in aggregates]
    if not rows:
        raise CampaignError("no campaign outputs to report")
    rows.sort(key=lambda r: (r["endpoint"], r["order"], r["method"]))
    return rows


def render_csv(rows: Sequence[dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row["endpoint"],
                row["method"],
                row["samples"],
                row["failures"],
                format_metric(row["bleu"]),
                format_metric(row["codebleu"]),
                format_delta(row["bleu_baseline"], row["bleu"]),
                format_delta(row["codebleu_baseline"], row["codebleu"]),
                format_metric(row["asr_finetune"]),
                format_metric(row["asr_zeroshot"]),
                format_metric(row["pass_at_1"]),
            ]
        )
    return buf.getvalue()


def render_markdown(rows: Sequence[dict[str, Any]]) -> str:
    lines = [
        "| Endpoint | Method | BLEU | CodeBLEU | ASR (ft) | ASR (0-shot) | Pass@1 | Samples |",
        "| --- | --- | --- | --- | --- | --- | --- | --- |",
    ]
    for row in rows:
        bleu_cell = format_cell(row["bleu"], row["bleu_baseline"]) or "-"
        cb_cell = format_cell(row["codebleu"], row["codebleu_baseline"]) or "-"
        lines.append(
            "| {endpoint} | {method} | {bleu} | {cb} | {asr} | {asr0} | {p1} | {n} |".format(
                endpoint=row["endpoint"],
                method=row["method"],
                bleu=bleu_cell,
                cb=cb_cell,
                asr=format_metric(row["asr_finetune"]) or "-",
                asr0=format_metric(row["asr_zeroshot"]) or "-",
                p1=format_metric(row["pass_at_1"]) or "-",
                n=row["samples"],
            )
        )
    return "\n".join(lines) + "\n"


def load_aggregate_files(paths: Sequence[str | Path]) -> list[dict[str, Any]]:
    missing = [str(p) for p in paths if not Path(p).is_file()]
    if missing:
        raise CampaignError(f"missing campaign artifacts: {', '.join(missing)}")
    loaded = []
    for p in paths:
        with open(p, "r", encoding="utf-8") as fh:
            loaded.append(json.load(fh))
    return loaded


def write_report(
    aggregates: Iterable[dict[str, Any]], out_dir: str | Path
) -> tuple[Path, Path]:
    rows = build_rows(aggregates)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "report.csv"
    md_path = out / "report.md"
    csv_path.write_text(render_csv(rows), encoding="utf-8")
    md_path.write_text(render_markdown(rows), encoding="utf-8")
    return csv_path, md_path
