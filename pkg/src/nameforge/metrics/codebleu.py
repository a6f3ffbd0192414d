"""The combined four-component code similarity score.

combined = w1*ngram + w2*weighted_ngram + w3*ast_match + w4*dataflow_match

A candidate that fails to parse keeps its n-gram components but scores 0 on
both structural components, and the report says so instead of hiding it.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..codeparse import ParseError, parse_code
from ..lexer import code_tokens
from .astmatch import ast_match, subtree_counts
from .dataflow import dataflow_edges, dataflow_match
from .lexical import bleu, weighted_bleu

DEFAULT_WEIGHTS = (0.25, 0.25, 0.25, 0.25)

_KEYWORDS: dict[str, frozenset[str]] = {}


def load_keywords(language: str) -> frozenset[str]:
    name = f"{language}_keywords.txt"
    text = resources.files("nameforge.metrics").joinpath("data", name).read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def _keywords(language: str) -> frozenset[str]:
    if language not in _KEYWORDS:
        _KEYWORDS[language] = load_keywords(language)
    return _KEYWORDS[language]


@dataclass(frozen=True)
class CodeBleuReport:
    ngram: float
    weighted_ngram: float
    ast_match: float
    dataflow_match: float
    combined: float
    weights: tuple[float, float, float, float]
    candidate_parse_failed: bool = False
    reference_parse_failed: bool = False

    def components(self) -> dict[str, float]:
        return {
            "ngram": self.ngram,
            "weighted_ngram": self.weighted_ngram,
            "ast_match": self.ast_match,
            "dataflow_match": self.dataflow_match,
        }


def codebleu(
    candidate: str,
    reference: str,
    language: str,
    weights: tuple[float, float, float, float] = DEFAULT_WEIGHTS,
) -> CodeBleuReport:
    if len(weights) != 4 or any(w < 0 for w in weights):
        raise ValueError("weights must be four non-negative numbers")
    cand_tokens = code_tokens(candidate, language)
    ref_tokens = code_tokens(reference, language)
    if not ref_tokens:
        raise ValueError("reference code must contain at least one token")

    ngram = bleu(cand_tokens, ref_tokens)
    weighted = weighted_bleu(cand_tokens, ref_tokens, _keywords(language))

    cand_failed = ref_failed = False
    try:
        ref_tree = parse_code(reference, language)
    except ParseError:
        ref_failed = True
    try:
        cand_tree = parse_code(candidate, language)
    except ParseError:
        cand_failed = True

    if cand_failed or ref_failed:
        ast_score = 0.0
        flow_score = 0.0
    else:
        ast_score = ast_match(cand_tree, ref_tree)
        flow_score = dataflow_match(candidate, reference, language)

    combined = (
        weights[0] * ngram
        + weights[1] * weighted
        + weights[2] * ast_score
        + weights[3] * flow_score
    )
    return CodeBleuReport(
        ngram=ngram,
        weighted_ngram=weighted,
        ast_match=ast_score,
        dataflow_match=flow_score,
        combined=combined,
        weights=tuple(weights),
        candidate_parse_failed=cand_failed,
        reference_parse_failed=ref_failed,
    )


__all__ = [
    "CodeBleuReport",
    "DEFAULT_WEIGHTS",
    "codebleu",
    "load_keywords",
    "ast_match",
    "subtree_counts",
    "dataflow_edges",
    "dataflow_match",
]
