"""Retrieval defense: TF-IDF candidate search, lexical re-ranking, name repair.

The index holds (description, method_name) pairs from a trusted corpus.
Given an incoming description, stage 1 takes the top-K pairs by TF-IDF
cosine, stage 2 re-ranks them by lambda * BLEU + (1 - lambda) * ROUGE-L
over the raw descriptions, and the winner's name (or a neural endpoint fed
the winner as an in-prompt exemplar) replaces the suspect method name.

All tokenization here is lowercase split on non-alphanumerics. Ties break
toward the lower pair index at every stage, so retrieval is deterministic.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import Language, Sample, substitute_method_name
from .metrics import bleu, rouge_l
from .morph import render_name, split_name

INDEX_FORMAT_VERSION = 1

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*\Z")


class IndexFormatError(ValueError):
    """Persisted index artifact is missing or has an unknown format version."""


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class RetrievalConfig:
    top_k: int
    fusion_lambda: float

    def __post_init__(self) -> None:
        if self.top_k < 1:
            raise ValueError("top_k must be a positive integer")
        if not 0.0 <= self.fusion_lambda <= 1.0:
            raise ValueError("fusion_lambda must lie in [0, 1]")


JAVA_RETRIEVAL = RetrievalConfig(top_k=9, fusion_lambda=0.6)
PYTHON_RETRIEVAL = RetrievalConfig(top_k=3, fusion_lambda=0.1)


def default_retrieval_config(language: Language | str) -> RetrievalConfig:
    return JAVA_RETRIEVAL if Language(language) is Language.JAVA else PYTHON_RETRIEVAL


@dataclass(frozen=True)
class RetrievedPair:
    index: int
    description: str
    name: str
    cosine: float
    lexical: float


class RetrievalIndex:
    """Immutable after construction; safe to share across threads."""

    def __init__(self, pairs: Sequence[tuple[str, str]]):
        if not pairs:
            raise ValueError("cannot build a retrieval index from an empty corpus")
        self.pairs: tuple[tuple[str, str], ...] = tuple((c, m) for c, m in pairs)
        docs = [tokenize(c) for c, _ in self.pairs]
        vocab = sorted({tok for doc in docs for tok in doc})
        self.vocab: dict[str, int] = {tok: i for i, tok in enumerate(vocab)}
        n_docs = len(docs)
        df = np.zeros(len(vocab), dtype=np.float64)
        for doc in docs:
            for tok in set(doc):
                df[self.vocab[tok]] += 1
        self.idf = np.log((1.0 + n_docs) / (1.0 + df)) + 1.0
        self.vectors = np.zeros((n_docs, len(vocab)), dtype=np.float64)
        for row, doc in enumerate(docs):
            for tok in doc:
                self.vectors[row, self.vocab[tok]] += 1.0  # raw tf
            self.vectors[row] *= self.idf
            norm = np.linalg.norm(self.vectors[row])
            if norm > 0.0:
                self.vectors[row] /= norm

    def __len__(self) -> int:
        return len(self.pairs)

    def query_vector(self, description: str) -> np.ndarray:
        vec = np.zeros(len(self.vocab), dtype=np.float64)
        for tok in tokenize(description):
            col = self.vocab.get(tok)
            if col is not None:
                vec[col] += 1.0
        vec *= self.idf
        norm = np.linalg.norm(vec)
        if norm > 0.0:
            vec /= norm
        return vec


def build_index(pairs: Sequence[tuple[str, str]]) -> RetrievalIndex:
    return RetrievalIndex(pairs)


def index_from_corpus(samples: Iterable[Sample]) -> RetrievalIndex:
    return RetrievalIndex([(s.description, s.method_name) for s in samples])


def save_index(index: RetrievalIndex, path: str | Path) -> None:
    payload = {
        "format_version": INDEX_FORMAT_VERSION,
        "pairs": [[c, m] for c, m in index.pairs],
    }
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, indent=None), encoding="utf-8"
    )


def load_index(path: str | Path) -> RetrievalIndex:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise IndexFormatError(f"cannot read index artifact {path}: {exc}") from exc
    version = payload.get("format_version") if isinstance(payload, dict) else None
    if version != INDEX_FORMAT_VERSION:
        raise IndexFormatError(
            f"unsupported index format version {version!r} in {path}"
        )
    return RetrievalIndex([tuple(pair) for pair in payload["pairs"]])


def _lexical_score(query_tokens: list[str], doc_tokens: list[str], lam: float) -> float:
    if not query_tokens or not doc_tokens:
        return 0.0
    return lam * bleu(query_tokens, doc_tokens) + (1.0 - lam) * rouge_l(
        query_tokens, doc_tokens
    )


def retrieve(
    index: RetrievalIndex, description: str, config: RetrievalConfig
) -> list[RetrievedPair]:
    """Two-stage retrieval; result is sorted best-first, ties by pair index."""
    scores = index.vectors @ index.query_vector(description)
    # stable sort on -score keeps lower pair indices first among ties
    order = np.argsort(-scores, kind="stable")[: config.top_k]
    query_tokens = tokenize(description)
    ranked = []
    for idx in order:
        idx = int(idx)
        c_r, m_r = index.pairs[idx]
        lexical = _lexical_score(query_tokens, tokenize(c_r), config.fusion_lambda)
        ranked.append(
            RetrievedPair(
                index=idx,
                description=c_r,
                name=m_r,
                cosine=float(scores[idx]),
                lexical=lexical,
            )
        )
    ranked.sort(key=lambda p: (-p.lexical, p.index))
    return ranked


def synthesize_name_ir(
    index: RetrievalIndex, description: str, config: RetrievalConfig
) -> str:
    """Retrieval-only defense: the best pair's method name, verbatim."""
    return retrieve(index, description, config)[0].name


def build_prompt(description: str, retrieved: tuple[str, str]) -> str:
    """Exemplar-augmented description for the neural name generator.

    The template is part of the wire contract and must not drift:
    "<e> FD: {c_r}, name: {m_r} </e> " + description.
    """
    c_r, m_r = retrieved
    return f"<e> FD: {c_r}, name: {m_r} </e> " + description


def synthesize_name_neural(
    client,
    index: RetrievalIndex,
    description: str,
    config: RetrievalConfig,
) -> tuple[str, bool]:
    """Ask the name endpoint, falling back to retrieval on illegal output.

    Returns (name, fell_back). Endpoint transport errors propagate.
    """
    best = retrieve(index, description, config)[0]
    prompt = build_prompt(description, (best.description, best.name))
    name = client.generate_name(prompt)
    if _IDENT_RE.match(name):
        return name, False
    return best.name, True


def defend_sample(sample: Sample, synthesized: str) -> Sample:
    """Swap the synthesized name into the sample, normalized to convention."""
    convention = sample.language.naming_convention
    normalized = render_name(split_name(synthesized, convention).subwords, convention)
    return substitute_method_name(sample, normalized)
