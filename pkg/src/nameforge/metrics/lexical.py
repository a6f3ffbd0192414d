"""Token-level metrics: BLEU, keyword-weighted BLEU, ROUGE-L, and friends.

All of these operate on token lists so callers choose the tokenization once
(the code lexer for code, whitespace for prose).
"""
from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

MAX_NGRAM = 4


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter[tuple[str, ...]]:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidate: Sequence[str], reference: Sequence[str], max_n: int = MAX_NGRAM) -> float:
    """Sentence BLEU with add-one smoothing on orders >= 2.

    The unigram precision is left unsmoothed, so a candidate sharing no
    tokens with the reference scores exactly 0.
    """
    if not reference:
        raise ValueError("reference must be non-empty")
    if not candidate:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        cand = _ngram_counts(candidate, n)
        ref = _ngram_counts(reference, n)
        num = sum(min(count, ref[gram]) for gram, count in cand.items())
        den = sum(cand.values())
        if n >= 2:
            num += 1
            den += 1
        if num == 0:
            return 0.0
        log_sum += math.log(num / den)
    precision = math.exp(log_sum / max_n)
    bp = 1.0 if len(candidate) >= len(reference) else math.exp(1.0 - len(reference) / len(candidate))
    return bp * precision


def weighted_bleu(
    candidate: Sequence[str],
    reference: Sequence[str],
    keywords: frozenset[str] | set[str],
    keyword_weight: float = 5.0,
    max_n: int = MAX_NGRAM,
) -> float:
    """BLEU where n-grams containing language keywords count more.

    An n-gram's weight is the mean of its token weights (keyword_weight for
    keywords, 1 otherwise).  With an empty keyword set this reduces exactly
    to bleu().
    """
    if not reference:
        raise ValueError("reference must be non-empty")
    if not candidate:
        return 0.0

    def gram_weight(gram: tuple[str, ...]) -> float:
        return sum(keyword_weight if tok in keywords else 1.0 for tok in gram) / len(gram)

    log_sum = 0.0
    for n in range(1, max_n + 1):
        cand = _ngram_counts(candidate, n)
        ref = _ngram_counts(reference, n)
        num = sum(gram_weight(g) * min(c, ref[g]) for g, c in cand.items())
        den = sum(gram_weight(g) * c for g, c in cand.items())
        if n >= 2:
            num += 1.0
            den += 1.0
        if num == 0.0:
            return 0.0
        log_sum += math.log(num / den)
    precision = math.exp(log_sum / max_n)
    bp = 1.0 if len(candidate) >= len(reference) else math.exp(1.0 - len(reference) / len(candidate))
    return bp * precision


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: Sequence[str], reference: Sequence[str]) -> float:
    """ROUGE-L F1 over token sequences."""
    if not candidate or not reference:
        return 0.0
    lcs = _lcs_length(candidate, reference)
    if lcs == 0:
        return 0.0
    precision = lcs / len(candidate)
    recall = lcs / len(reference)
    return 2.0 * precision * recall / (precision + recall)


def exact_match(candidate: str, reference: str) -> float:
    return 1.0 if candidate == reference else 0.0


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance (unit costs)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]
