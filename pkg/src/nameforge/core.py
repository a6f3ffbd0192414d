"""Corpus records, JSONL persistence, and method-signature surgery.

Samples are immutable; "editing" a method name produces a new Sample whose
signature differs from the original only in the name slot, byte for byte.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Iterable

_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*\Z")
_IDENT_CHARS = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_$")

# Canonical JSONL field order.  Keeping it fixed makes load -> save a
# byte-identical round trip, which the campaign determinism checks rely on.
FIELD_ORDER = ("id", "language", "description", "signature", "method_name", "params", "code", "tests")


class Language(str, Enum):
    JAVA = "java"
    PYTHON = "python"

    @property
    def naming_convention(self) -> str:
        return "camel" if self is Language.JAVA else "snake"


class GenerationMode(str, Enum):
    """What the victim model sees: description only, or description + signature."""

    FD = "fd"
    FD_SIG = "fd_sig"


class CorpusError(ValueError):
    """A corpus file or record violated the schema.  Carries the 1-based line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SignatureError(ValueError):
    """A method header could not be parsed.  Carries the character offset."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (offset {offset})")


@dataclass(frozen=True)
class TestCase:
    input: str
    expected: str


@dataclass(frozen=True)
class Sample:
    """One corpus record: a natural-language description paired with code."""

    id: str
    language: Language
    description: str
    signature: str
    method_name: str
    params: tuple[str, ...] = ()
    code: str = ""
    tests: tuple[TestCase, ...] | str | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise CorpusError("record id must be a non-empty string")
        if not isinstance(self.language, Language):
            object.__setattr__(self, "language", Language(self.language))
        if not self.method_name:
            raise CorpusError(f"record {self.id!r}: method_name must be non-empty")
        parsed = parse_signature(self.signature, self.language)
        if parsed.name != self.method_name:
            raise CorpusError(
                f"record {self.id!r}: method_name {self.method_name!r} does not match "
                f"signature name {parsed.name!r}"
            )


@dataclass(frozen=True)
class ParsedSignature:
    """A method header split into byte-exact pieces.

    render() concatenates the pieces back into the original text, so replacing
    only `name` perturbs nothing else in the header.
    """

    prefix: str   # everything before the method name
    name: str
    gap: str      # between name and "(", plus the "(" itself
    params: str   # raw text between the parentheses
    suffix: str   # from the closing ")" to the end

    def render(self) -> str:
        return self.prefix + self.name + self.gap + self.params + self.suffix

    def with_name(self, name: str) -> ParsedSignature:
        return replace(self, name=name)


def parse_signature(signature: str, language: Language | str) -> ParsedSignature:
    """Locate the method name and parameter list in a header string.

    Works on both Java and Python headers: the name is the identifier
    immediately preceding the first top-level "(", and the parameter span is
    the balanced-paren region that follows it.
    """
    language = Language(language)
    open_idx = signature.find("(")
    if open_idx < 0:
        raise SignatureError("no parameter list found", len(signature))
    # walk back over whitespace, then over identifier characters
    j = open_idx
    while j > 0 and signature[j - 1].isspace():
        j -= 1
    i = j
    while i > 0 and signature[i - 1] in _IDENT_CHARS:
        i -= 1
    name = signature[i:j]
    if not _IDENT_RE.match(name):
        raise SignatureError("no method name before parameter list", open_idx)
    depth = 0
    close_idx = -1
    for pos in range(open_idx, len(signature)):
        ch = signature[pos]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                close_idx = pos
                break
    if close_idx < 0:
        raise SignatureError("unbalanced parameter list", len(signature))
    if language is Language.PYTHON and not re.search(r"(?:^|\s)def\s*$", signature[:i]):
        raise SignatureError("python header must declare the name with 'def'", i)
    return ParsedSignature(
        prefix=signature[:i],
        name=name,
        gap=signature[j : open_idx + 1],
        params=signature[open_idx + 1 : close_idx],
        suffix=signature[close_idx:],
    )


def validate_method_name(name: str, language: Language | str) -> None:
    language = Language(language)
    if not name:
        raise ValueError(f"empty method name is not a legal {language.value} identifier")
    if not _IDENT_RE.match(name) or (language is Language.PYTHON and "$" in name):
        raise ValueError(f"{name!r} is not a legal {language.value} identifier")


def substitute_method_name(sample: Sample, new_name: str) -> Sample:
    """Return a copy of `sample` whose signature carries `new_name`.

    Everything outside the name slot is preserved byte for byte.
    """
    validate_method_name(new_name, sample.language)
    parsed = parse_signature(sample.signature, sample.language)
    return replace(sample, signature=parsed.with_name(new_name).render(), method_name=new_name)


def _tests_to_json(tests: tuple[TestCase, ...] | str | None) -> Any:
    if tests is None or isinstance(tests, str):
        return tests
    return [{"input": t.input, "expected": t.expected} for t in tests]


def _tests_from_json(value: Any, line: int) -> tuple[TestCase, ...] | str | None:
    if value is None or isinstance(value, str):
        return value
    if isinstance(value, list):
        out = []
        for item in value:
            if not isinstance(item, dict) or set(item) != {"input", "expected"}:
                raise CorpusError("each test must be {'input': ..., 'expected': ...}", line)
            out.append(TestCase(input=str(item["input"]), expected=str(item["expected"])))
        return tuple(out)
    raise CorpusError("tests must be null, a string, or a list of objects", line)


def sample_to_dict(sample: Sample) -> dict[str, Any]:
    return {
        "id": sample.id,
        "language": sample.language.value,
        "description": sample.description,
        "signature": sample.signature,
        "method_name": sample.method_name,
        "params": list(sample.params),
        "code": sample.code,
        "tests": _tests_to_json(sample.tests),
    }


def sample_from_dict(raw: dict[str, Any], line: int = 0) -> Sample:
    missing = [f for f in FIELD_ORDER if f not in raw]
    if missing:
        raise CorpusError(f"missing field(s): {', '.join(missing)}", line)
    extra = [f for f in raw if f not in FIELD_ORDER]
    if extra:
        raise CorpusError(f"unknown field(s): {', '.join(sorted(extra))}", line)
    for name in ("id", "description", "signature", "method_name", "code"):
        if not isinstance(raw[name], str):
            raise CorpusError(f"field {name!r} must be a string", line)
    if raw["language"] not in (lang.value for lang in Language):
        raise CorpusError(f"unknown language {raw['language']!r}", line)
    params = raw["params"]
    if not isinstance(params, list) or not all(isinstance(p, str) for p in params):
        raise CorpusError("field 'params' must be a list of strings", line)
    try:
        return Sample(
            id=raw["id"],
            language=Language(raw["language"]),
            description=raw["description"],
            signature=raw["signature"],
            method_name=raw["method_name"],
            params=tuple(params),
            code=raw["code"],
            tests=_tests_from_json(raw["tests"], line),
        )
    except SignatureError as exc:
        raise CorpusError(f"bad signature: {exc}", line) from exc
    except CorpusError as exc:
        if exc.line is None:
            raise CorpusError(str(exc), line) from exc
        raise


def load_corpus(path: str | Path) -> list[Sample]:
    """Read a JSONL corpus.  Malformed lines raise CorpusError with the line number."""
    samples: list[Sample] = []
    seen_ids: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"invalid JSON: {exc.msg}", line_no) from exc
            if not isinstance(raw, dict):
                raise CorpusError("record must be a JSON object", line_no)
            sample = sample_from_dict(raw, line_no)
            if sample.id in seen_ids:
                raise CorpusError(
                    f"duplicate id {sample.id!r} (first seen on line {seen_ids[sample.id]})", line_no
                )
            seen_ids[sample.id] = line_no
            samples.append(sample)
    return samples


def save_corpus(samples: Iterable[Sample], path: str | Path) -> None:
    """Write samples as JSONL in canonical field order, one record per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for sample in samples:
            fh.write(json.dumps(sample_to_dict(sample), ensure_ascii=False))
            fh.write("\n")


@dataclass(frozen=True)
class RunStats:
    """Per-GA-run outcome: best fitness seen, generations evolved, oracle queries spent."""

    best_fitness: float
    generations: int
    queries: int
    error: str | None = None  # set when the run aborted mid-flight


@dataclass(frozen=True)
class AdversarialRecord:
    """Outcome of one attack on one sample."""

    sample_id: str
    attack_kind: str
    original_name: str
    adversarial_name: str
    original_fitness: float
    best_fitness: float
    runs: tuple[RunStats, ...] = ()
    unchanged: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "sample_id": self.sample_id,
            "attack_kind": self.attack_kind,
            "original_name": self.original_name,
            "adversarial_name": self.adversarial_name,
            "original_fitness": self.original_fitness,
            "best_fitness": self.best_fitness,
            "runs": [
                {
                    "best_fitness": r.best_fitness,
                    "generations": r.generations,
                    "queries": r.queries,
                    "error": r.error,
                }
                for r in self.runs
            ],
            "unchanged": self.unchanged,
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> AdversarialRecord:
        return cls(
            sample_id=raw["sample_id"],
            attack_kind=raw["attack_kind"],
            original_name=raw["original_name"],
            adversarial_name=raw["adversarial_name"],
            original_fitness=raw["original_fitness"],
            best_fitness=raw["best_fitness"],
            runs=tuple(RunStats(**r) for r in raw.get("runs", [])),
            unchanged=raw.get("unchanged", False),
        )
