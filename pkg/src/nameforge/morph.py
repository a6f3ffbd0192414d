"""Sub-word decomposition of method names and the four perturbation operators.

A name splits into sub-words at underscores and case boundaries.  The split
keeps the raw sub-word text plus the joiner characters between them, so
rendering the unmodified sequence reproduces the input byte for byte even for
names that mix conventions or carry leading underscores.

Operators produce candidate replacement sub-words:
  delete   every single-character deletion
  swap     every adjacent transposition
  visual   lookalike substitutions (l<->1, O<->0, to<->2, for<->4)
  semantic nearest neighbours in an embedding table

Candidate order is deterministic: positional left-to-right within an
operator, operators concatenated in the order above, duplicates dropped
keeping the first occurrence.  The original sub-word is never a candidate.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .embeddings import EmbeddingTable

_SEGMENT_RE = re.compile(r"[0-9]+|[A-Z]+(?![a-z])|[A-Z][a-z]*|[a-z]+")
_FRAGMENT_RE = re.compile(r"[A-Za-z0-9]+\Z")

SNAKE = "snake"
CAMEL = "camel"

# Visually confusable pairs, applied in both directions, one occurrence at a
# time.  Overridable through config for corpora with other conventions.
DEFAULT_VIS_TABLE: tuple[tuple[str, str], ...] = (
    ("l", "1"),
    ("O", "0"),
    ("to", "2"),
    ("for", "4"),
)

SEMANTIC_NEIGHBOURS = 5


@dataclass(frozen=True)
class SubwordSequence:
    """A method name decomposed into sub-words plus the glue around them."""

    subwords: tuple[str, ...]
    joiners: tuple[str, ...]      # len(subwords) - 1 entries, runs of "_" or ""
    convention: str               # "snake" or "camel"
    prefix: str = ""              # leading underscore run, if any
    suffix: str = ""              # trailing underscore run, if any

    def __post_init__(self) -> None:
        if not self.subwords:
            raise ValueError("a name must contain at least one sub-word")
        if len(self.joiners) != len(self.subwords) - 1:
            raise ValueError("joiner count must be len(subwords) - 1")

    @property
    def case_patterns(self) -> tuple[str, ...]:
        return tuple(_case_pattern(s) for s in self.subwords)

    def render(self) -> str:
        parts = [self.subwords[0]]
        for joiner, sub in zip(self.joiners, self.subwords[1:]):
            parts.append(joiner)
            parts.append(sub)
        return self.prefix + "".join(parts) + self.suffix

    def render_with(self, subwords: tuple[str, ...]) -> str:
        """Render replacement sub-words through the original glue."""
        if len(subwords) != len(self.subwords):
            raise ValueError("replacement must have the same sub-word count")
        parts = [subwords[0]]
        for joiner, sub in zip(self.joiners, subwords[1:]):
            parts.append(joiner)
            parts.append(sub)
        return self.prefix + "".join(parts) + self.suffix


def split_name(name: str, convention: str = SNAKE) -> SubwordSequence:
    """Split an identifier into sub-words.

    Handles snake_case, camelCase, digits, acronym runs (HTTPResponse ->
    HTTP, Response) and mixed forms.  render() of the result is the input.
    """
    if not name:
        raise ValueError("cannot split an empty name")
    core = name.strip("_")
    if not core:
        raise ValueError(f"{name!r} has no sub-words")
    prefix = name[: len(name) - len(name.lstrip("_"))]
    suffix = name[len(name.rstrip("_")) :]

    pieces = re.split(r"(_+)", core)
    subwords: list[str] = []
    joiners: list[str] = []
    pending = ""
    for piece in pieces:
        if piece.startswith("_"):
            pending += piece
            continue
        segments = _SEGMENT_RE.findall(piece)
        if "".join(segments) != piece:
            raise ValueError(f"{name!r} is not a splittable identifier")
        for seg in segments:
            if subwords:
                joiners.append(pending)
            subwords.append(seg)
            pending = ""
    return SubwordSequence(
        subwords=tuple(subwords),
        joiners=tuple(joiners),
        convention=convention,
        prefix=prefix,
        suffix=suffix,
    )


def render_name(subwords: tuple[str, ...] | list[str], convention: str) -> str:
    """Assemble sub-words into a conventional name (used by curation's H6)."""
    if not subwords:
        raise ValueError("cannot render an empty sub-word list")
    if convention == SNAKE:
        return "_".join(s.lower() for s in subwords)
    if convention == CAMEL:
        head = subwords[0].lower()
        tail = [s[:1].upper() + s[1:].lower() for s in subwords[1:]]
        return head + "".join(tail)
    raise ValueError(f"unknown convention {convention!r}")


def _case_pattern(subword: str) -> str:
    if len(subword) > 1 and subword.isupper():
        return "upper"
    if subword[:1].isupper():
        return "title"
    return "lower"


def _apply_case(pattern: str, text: str) -> str:
    if pattern == "upper":
        return text.upper()
    if pattern == "title":
        return text[:1].upper() + text[1:]
    return text


def delete_candidates(subword: str) -> list[str]:
    """All single-character deletions, in position order."""
    if len(subword) < 2:
        return []
    seen: list[str] = []
    for i in range(len(subword)):
        cand = subword[:i] + subword[i + 1 :]
        if cand != subword and cand not in seen:
            seen.append(cand)
    return seen


def swap_candidates(subword: str) -> list[str]:
    """All adjacent transpositions, in position order."""
    out: list[str] = []
    for i in range(len(subword) - 1):
        cand = subword[:i] + subword[i + 1] + subword[i] + subword[i + 2 :]
        if cand != subword and cand not in out:
            out.append(cand)
    return out


def vis_candidates(
    subword: str, table: tuple[tuple[str, str], ...] = DEFAULT_VIS_TABLE
) -> list[str]:
    """Lookalike substitutions, one occurrence per candidate."""
    out: list[str] = []
    directed = []
    for a, b in table:
        directed.append((a, b))
        directed.append((b, a))
    for src, dst in directed:
        start = 0
        while True:
            i = subword.find(src, start)
            if i < 0:
                break
            cand = subword[:i] + dst + subword[i + len(src) :]
            if cand != subword and cand not in out:
                out.append(cand)
            start = i + 1
    return out


def sem_candidates(
    subword: str, embeddings: EmbeddingTable, k: int = SEMANTIC_NEIGHBOURS
) -> list[str]:
    """Top-k embedding neighbours, re-cased to match the original sub-word.

    Out-of-vocabulary sub-words yield no candidates.  Lookup is done on the
    lowercased sub-word; word2vec-style vocabularies are lowercase.
    """
    token = subword.lower()
    if token not in embeddings:
        return []
    pattern = _case_pattern(subword)
    out: list[str] = []
    for neighbour, _score in embeddings.nearest(token, k):
        cand = _apply_case(pattern, neighbour)
        if cand != subword and _FRAGMENT_RE.match(cand) and cand not in out:
            out.append(cand)
    return out


@dataclass(frozen=True)
class Candidate:
    text: str
    operator: str  # "delete" | "swap" | "visual" | "semantic"


@dataclass(frozen=True)
class CandidateSet:
    """Per-sub-word candidate lists for one name, plus the split it came from."""

    sequence: SubwordSequence
    per_subword: tuple[tuple[Candidate, ...], ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.per_subword)

    def space_size(self) -> int:
        n = 1
        for k in self.sizes:
            n *= k + 1
        return n

    def decode(self, genes: tuple[int, ...] | list[int]) -> str:
        """Map a chromosome to a concrete name.  Gene 0 keeps the original."""
        if len(genes) != len(self.per_subword):
            raise ValueError("gene count must match sub-word count")
        subs = []
        for i, g in enumerate(genes):
            k = len(self.per_subword[i])
            if not 0 <= g <= k:
                raise ValueError(f"gene {i} out of range: {g} not in [0, {k}]")
            subs.append(self.sequence.subwords[i] if g == 0 else self.per_subword[i][g - 1].text)
        return self.sequence.render_with(tuple(subs))


def build_candidate_set(
    name: str,
    convention: str,
    embeddings: EmbeddingTable | None = None,
    max_per_subword: int | None = None,
    vis_table: tuple[tuple[str, str], ...] = DEFAULT_VIS_TABLE,
) -> CandidateSet:
    """Enumerate every operator's candidates for every sub-word of `name`.

    Deterministic for fixed inputs.  Candidates that would not be a legal
    identifier fragment are dropped, as is anything that would make the whole
    name start with a digit.
    """
    seq = split_name(name, convention)
    per_subword: list[tuple[Candidate, ...]] = []
    for i, sub in enumerate(seq.subwords):
        ordered: list[Candidate] = []
        texts: set[str] = set()
        groups = [
            ("delete", delete_candidates(sub)),
            ("swap", swap_candidates(sub)),
            ("visual", vis_candidates(sub, vis_table)),
            ("semantic", sem_candidates(sub, embeddings) if embeddings is not None else []),
        ]
        for op, cands in groups:
            for cand in cands:
                if not cand or cand == sub or cand in texts:
                    continue
                if not _FRAGMENT_RE.match(cand):
                    continue
                if i == 0 and not seq.prefix and cand[0].isdigit():
                    continue
                ordered.append(Candidate(text=cand, operator=op))
                texts.add(cand)
        if max_per_subword is not None:
            ordered = ordered[:max_per_subword]
        per_subword.append(tuple(ordered))
    return CandidateSet(sequence=seq, per_subword=tuple(per_subword))
