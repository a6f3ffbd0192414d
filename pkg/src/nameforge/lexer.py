"""A small code lexer shared by the n-gram metrics, curation, and the Java parser.

It never raises on weird input: anything unrecognizable becomes a one-char
operator token.  That matters because attack candidates can be arbitrary
model output, and the n-gram metrics must still score them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

IDENT = "ident"
NUMBER = "number"
STRING = "string"
OP = "op"
COMMENT = "comment"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int


_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_IDENT_CONT = _IDENT_START | frozenset("0123456789")
_NUMBER_RE = re.compile(r"\d[\w.]*(?:[eE][+-]?\d+)?")
_STRING_PREFIX_RE = re.compile(r"[rRbBuUfF]{1,3}")

# longest match first
_PY_OPS = (
    "**=", "//=", ">>=", "<<=", "...", "!=", ">=", "<=", "==", "->", ":=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=", "**", "//", "<<",
    ">>", "&&", "||",
)
_JAVA_OPS = (
    ">>>=", ">>>", ">>=", "<<=", "...", "->", "::", "++", "--", "&&", "||",
    "==", "!=", ">=", "<=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "<<", ">>",
)


def _match_op(code: str, i: int, ops: tuple[str, ...]) -> str:
    for op in ops:
        if code.startswith(op, i):
            return op
    return code[i]


def _scan_string(code: str, i: int, language: str) -> int:
    """Return the end offset of the string starting at code[i] (a quote)."""
    quote = code[i]
    if language == "python" and code.startswith(quote * 3, i):
        closer = quote * 3
        j = i + 3
        while j < len(code):
            if code[j] == "\\":
                j += 2
                continue
            if code.startswith(closer, j):
                return j + 3
            j += 1
        return len(code)
    j = i + 1
    while j < len(code):
        ch = code[j]
        if ch == "\\":
            j += 2
            continue
        if ch == quote or ch == "\n":
            return j + 1 if ch == quote else j
        j += 1
    return len(code)


def lex(code: str, language: str) -> list[Token]:
    """Tokenize code into ident/number/string/op/comment tokens with spans."""
    if language not in ("python", "java"):
        raise ValueError(f"unsupported language {language!r}")
    ops = _PY_OPS if language == "python" else _JAVA_OPS
    tokens: list[Token] = []
    i = 0
    n = len(code)
    while i < n:
        ch = code[i]
        if ch.isspace():
            i += 1
            continue
        if language == "python" and ch == "#":
            j = code.find("\n", i)
            j = n if j < 0 else j
            tokens.append(Token(COMMENT, code[i:j], i, j))
            i = j
            continue
        if language == "java" and code.startswith("//", i):
            j = code.find("\n", i)
            j = n if j < 0 else j
            tokens.append(Token(COMMENT, code[i:j], i, j))
            i = j
            continue
        if language == "java" and code.startswith("/*", i):
            j = code.find("*/", i + 2)
            j = n if j < 0 else j + 2
            tokens.append(Token(COMMENT, code[i:j], i, j))
            i = j
            continue
        if ch in ("'", '"'):
            j = _scan_string(code, i, language)
            tokens.append(Token(STRING, code[i:j], i, j))
            i = j
            continue
        if language == "python" and ch in _IDENT_START:
            m = _STRING_PREFIX_RE.match(code, i)
            if m and m.end() < n and code[m.end()] in ("'", '"'):
                j = _scan_string(code, m.end(), language)
                tokens.append(Token(STRING, code[i:j], i, j))
                i = j
                continue
        if ch in _IDENT_START:
            j = i + 1
            while j < n and code[j] in _IDENT_CONT:
                j += 1
            tokens.append(Token(IDENT, code[i:j], i, j))
            i = j
            continue
        if ch.isdigit():
            m = _NUMBER_RE.match(code, i)
            j = m.end()
            tokens.append(Token(NUMBER, code[i:j], i, j))
            i = j
            continue
        op = _match_op(code, i, ops)
        tokens.append(Token(OP, op, i, i + len(op)))
        i += len(op)
    return tokens


def code_tokens(code: str, language: str) -> list[str]:
    """Token texts with comments dropped: the unit the n-gram metrics score."""
    return [t.text for t in lex(code, language) if t.kind != COMMENT]
