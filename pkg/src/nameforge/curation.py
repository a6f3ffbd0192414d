"""Corpus curation: the H1..H6 quality rules.

H1  code parses
H2  method name has >= 2 sub-words, each <= 16 chars
H3  description length within [4, 50] tokens (whitespace tokens)
H4  code length <= 256 lexer tokens, measured after noise stripping
H5  strip comments, URLs in strings, and empty exception handlers; if the
    stripped code no longer parses the record is rejected under H5
H6  normalize the method name to the language convention (a rewrite, never a
    rejection; the definition and self-references in the code are renamed too)

Stripping is surgical: only bytes belonging to removed constructs change, so
already-clean code passes through byte-identical and the pass is idempotent.
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass, replace

from .codeparse import Node, ParseError, iter_nodes, parse_code
from .core import Language, Sample, substitute_method_name
from .lexer import COMMENT, STRING, code_tokens, lex
from .morph import render_name, split_name

RULES = ("H1", "H2", "H3", "H4", "H5", "H6")

_URL_RE = re.compile(r"(?:https?|ftp)://[^\s'\"<>]+")


@dataclass(frozen=True)
class CurationConfig:
    min_subwords: int = 2
    max_subword_chars: int = 16
    min_description_tokens: int = 4
    max_description_tokens: int = 50
    max_code_tokens: int = 256


@dataclass(frozen=True)
class CurationOutcome:
    sample: Sample | None          # cleaned record, None when rejected
    failed: tuple[str, ...]        # rule ids, possibly several
    name_rewritten: bool = False   # H6 fired

    @property
    def accepted(self) -> bool:
        return not self.failed


@dataclass(frozen=True)
class CurationReport:
    total: int
    accepted: int
    rejected: int
    per_rule: dict[str, int]
    rejects: tuple[tuple[str, str], ...]  # (record id, rule id)
    names_rewritten: int = 0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "accepted": self.accepted,
            "rejected": self.rejected,
            "per_rule": dict(self.per_rule),
            "rejects": [list(pair) for pair in self.rejects],
            "names_rewritten": self.names_rewritten,
        }


def check_syntax(code: str, language: Language | str) -> bool:
    try:
        parse_code(code, Language(language).value)
        return True
    except ParseError:
        return False


def description_token_count(description: str) -> int:
    return len(description.split())


# --- noise stripping --------------------------------------------------------


def _merge_edits(edits: list[tuple[int, int, str]]) -> list[tuple[int, int, str]]:
    """Coalesce overlapping edit spans.

    Different rules can target nested constructs (a comment inside a removed
    handler, a handler inside an unwrapped try).  Anything contained in a
    wider edit is dropped; overlapping deletions take their union.
    """
    merged: list[tuple[int, int, str]] = []
    for edit in sorted(set(edits)):
        if not merged or edit[0] >= merged[-1][1]:
            merged.append(edit)
            continue
        ps, pe, pr = merged[-1]
        start, end, repl = edit
        if end <= pe:
            continue  # fully inside the previous edit
        if pr == "" and repl == "":
            merged[-1] = (ps, end, "")
            continue
        raise ValueError(f"conflicting edits at offset {start}")
    return merged


def _splice(code: str, edits: list[tuple[int, int, str]]) -> tuple[str, list[int]]:
    """Apply (start, end, replacement) edits; return new text + edit offsets."""
    out: list[str] = []
    marks: list[int] = []
    pos = 0
    length = 0
    for start, end, repl in _merge_edits(edits):
        out.append(code[pos:start])
        length += start - pos
        marks.append(length)
        out.append(repl)
        length += len(repl)
        pos = end
    out.append(code[pos:])
    return "".join(out), marks


def _cleanup_edited_lines(text: str, marks: list[int]) -> str:
    """Drop lines an edit left whitespace-only; rstrip lines an edit touched."""
    if not marks:
        return text
    starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            starts.append(i + 1)

    def line_of(offset: int) -> int:
        lo, hi = 0, len(starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if starts[mid] <= offset:
                lo = mid
            else:
                hi = mid - 1
        return lo

    touched = {line_of(m) for m in marks}
    lines = text.split("\n")
    kept: list[str] = []
    for idx, line in enumerate(lines):
        if idx in touched:
            if not line.strip():
                continue
            kept.append(line.rstrip())
        else:
            kept.append(line)
    return "\n".join(kept)


def _scrub_string_urls(code: str, language: str) -> list[tuple[int, int, str]]:
    edits = []
    for tok in lex(code, language):
        if tok.kind != STRING:
            continue
        for m in _URL_RE.finditer(tok.text):
            edits.append((tok.start + m.start(), tok.start + m.end(), ""))
    return edits


def _python_doc_and_handler_edits(code: str) -> list[tuple[int, int, str]]:
    tree = ast.parse(code)
    starts = [0]
    for i, ch in enumerate(code):
        if ch == "\n":
            starts.append(i + 1)

    def line_span(first: ast.stmt, last: ast.stmt) -> tuple[int, int]:
        begin = starts[first.lineno - 1]
        end_line = last.end_lineno or last.lineno
        end = starts[end_line] if end_line < len(starts) else len(code)
        return begin, end

    edits: list[tuple[int, int, str]] = []
    for node in ast.walk(tree):
        body = getattr(node, "body", None)
        if (
            isinstance(node, (ast.Module, ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef))
            and body
            and isinstance(body[0], ast.Expr)
            and isinstance(body[0].value, ast.Constant)
            and isinstance(body[0].value.value, str)
        ):
            doc = body[0]
            begin, end = line_span(doc, doc)
            if len(body) == 1 and not isinstance(node, ast.Module):
                indent = " " * doc.col_offset
                edits.append((begin, end, f"{indent}pass\n"))
            else:
                edits.append((begin, end, ""))
        if isinstance(node, ast.Try):
            removable = [
                h for h in node.handlers if all(isinstance(s, ast.Pass) for s in h.body)
            ]
            if not removable:
                continue
            if len(removable) < len(node.handlers) or node.finalbody:
                for h in removable:
                    begin, end = line_span(h, h.body[-1])
                    edits.append((begin, end, ""))
                continue
            # every handler is pass-only and there is no finally: unwrap
            try_line_start = starts[node.lineno - 1]
            first = node.body[0]
            body_start = starts[first.lineno - 1]
            edits.append((try_line_start, body_start, ""))
            shift = first.col_offset - node.col_offset
            begin, end = line_span(first, node.body[-1])
            edits.extend(_dedent_edits(code, starts, begin, end, shift))
            for h in node.handlers:
                begin, end = line_span(h, h.body[-1])
                edits.append((begin, end, ""))
            if node.orelse:
                else_body_start = starts[node.orelse[0].lineno - 1]
                last_handler = node.handlers[-1]
                handler_end = line_span(last_handler, last_handler.body[-1])[1]
                edits.append((handler_end, else_body_start, ""))  # the else: line
                begin, end = line_span(node.orelse[0], node.orelse[-1])
                edits.extend(_dedent_edits(code, starts, begin, end, shift))
    return edits


def _dedent_edits(
    code: str, starts: list[int], begin: int, end: int, shift: int
) -> list[tuple[int, int, str]]:
    if shift <= 0:
        return []
    edits = []
    for line_start in starts:
        if line_start < begin or line_start >= end:
            continue
        prefix = code[line_start : line_start + shift]
        if prefix.strip() == "" and len(prefix) == shift:
            edits.append((line_start, line_start + shift, ""))
    return edits


def _java_handler_edits(code: str) -> list[tuple[int, int, str]]:
    root = parse_code(code, "java")
    edits: list[tuple[int, int, str]] = []
    for node in iter_nodes(root):
        if node.kind != "try_stmt":
            continue
        catches = [c for c in node.children if c.kind == "catch"]
        blocks = [c for c in node.children if c.kind == "block"]
        has_finally = any(c.kind == "finally" for c in node.children)
        has_resources = any(c.kind == "resources" for c in node.children)
        if not catches or not blocks:
            continue

        def block_is_empty(catch: Node) -> bool:
            body = catch.children[-1]
            return all(s.kind == "empty_stmt" for s in body.children)

        removable = [c for c in catches if block_is_empty(c)]
        if not removable:
            continue
        for c in removable:
            edits.append((c.start, c.end, ""))
        if len(removable) == len(catches) and not has_finally and not has_resources:
            # a bare try block is invalid: unwrap its braces
            body = blocks[0]
            edits.append((node.start, body.start + 1, ""))
            edits.append((body.end - 1, body.end, ""))
    return edits


def strip_noise(code: str, language: Language | str) -> str:
    """Remove comments, URLs inside strings, and empty exception handlers.

    Surgical: untouched bytes stay untouched, so clean code round-trips
    identically. Raises ParseError if the input does not parse.
    """
    language = Language(language).value
    edits: list[tuple[int, int, str]] = []
    for tok in lex(code, language):
        if tok.kind == COMMENT:
            edits.append((tok.start, tok.end, ""))
    edits.extend(_scrub_string_urls(code, language))
    if language == "python":
        edits.extend(_python_doc_and_handler_edits(code))
    else:
        edits.extend(_java_handler_edits(code))
    text, marks = _splice(code, edits)
    return _cleanup_edited_lines(text, marks)


def _rename_in_code(code: str, old: str, new: str) -> str:
    # covers the definition and recursive self-references
    return re.sub(rf"\b{re.escape(old)}\b", new, code)


def strip_test_prompts(description: str) -> str:
    """Drop interpreter-prompt examples (>>> lines and their outputs)."""
    lines = description.split("\n")
    kept: list[str] = []
    skipping = False
    for line in lines:
        stripped = line.strip()
        if stripped.startswith(">>>"):
            skipping = True
            continue
        if skipping:
            if stripped == "":
                skipping = False
            continue
        kept.append(line)
    return "\n".join(kept)


# --- the rule pipeline -------------------------------------------------------


def apply_heuristics(sample: Sample, config: CurationConfig | None = None) -> CurationOutcome:
    config = config or CurationConfig()
    failed: list[str] = []

    try:
        seq = split_name(sample.method_name, sample.language.naming_convention)
        subwords = seq.subwords
    except ValueError:
        subwords = ()
    if len(subwords) < config.min_subwords or any(
        len(s) > config.max_subword_chars for s in subwords
    ):
        failed.append("H2")

    n_desc = description_token_count(sample.description)
    if not config.min_description_tokens <= n_desc <= config.max_description_tokens:
        failed.append("H3")

    code = sample.code
    if not check_syntax(code, sample.language):
        failed.append("H1")
    else:
        try:
            stripped = strip_noise(code, sample.language)
        except (ParseError, ValueError):
            stripped = None
        if stripped is not None and check_syntax(stripped, sample.language):
            code = stripped
        else:
            failed.append("H5")

    if len(code_tokens(code, sample.language.value)) > config.max_code_tokens:
        failed.append("H4")

    failed.sort()
    if failed:
        return CurationOutcome(sample=None, failed=tuple(failed))

    cleaned = sample if code == sample.code else replace(sample, code=code)

    rewritten = False
    normalized = render_name(subwords, sample.language.naming_convention)
    if normalized != sample.method_name:
        new_code = _rename_in_code(cleaned.code, sample.method_name, normalized)
        cleaned = substitute_method_name(cleaned, normalized)
        cleaned = replace(cleaned, code=new_code)
        rewritten = True

    return CurationOutcome(sample=cleaned, failed=(), name_rewritten=rewritten)


def curate_corpus(
    samples: list[Sample], config: CurationConfig | None = None
) -> tuple[list[Sample], CurationReport]:
    config = config or CurationConfig()
    accepted: list[Sample] = []
    per_rule = {rule: 0 for rule in RULES}
    rejects: list[tuple[str, str]] = []
    rewrites = 0
    for sample in samples:
        outcome = apply_heuristics(sample, config)
        if outcome.accepted:
            accepted.append(outcome.sample)  # type: ignore[arg-type]
            if outcome.name_rewritten:
                rewrites += 1
                per_rule["H6"] += 1
        else:
            for rule in outcome.failed:
                per_rule[rule] += 1
                rejects.append((sample.id, rule))
    report = CurationReport(
        total=len(samples),
        accepted=len(accepted),
        rejected=len(samples) - len(accepted),
        per_rule=per_rule,
        rejects=tuple(rejects),
        names_rewritten=rewrites,
    )
    return accepted, report
