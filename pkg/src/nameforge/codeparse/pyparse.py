"""Python source -> uniform Node tree, via the stdlib ast module."""
from __future__ import annotations

import ast

from .nodes import Node, ParseError

# string-valued AST fields that hold identifiers
_ID_FIELDS = frozenset({"id", "arg", "attr", "name", "asname", "module", "rest"})
# context/bookkeeping fields that add no structure
_SKIP_FIELDS = frozenset({"ctx", "type_comment", "type_ignores", "kind"})


def _line_starts(code: str) -> list[int]:
    starts = [0]
    for i, ch in enumerate(code):
        if ch == "\n":
            starts.append(i + 1)
    return starts


def _offset(starts: list[int], lineno: int, col: int) -> int:
    if 1 <= lineno <= len(starts):
        return starts[lineno - 1] + col
    return -1


def parse_python(code: str) -> Node:
    try:
        tree = ast.parse(code)
    except (SyntaxError, ValueError) as exc:
        offset = None
        if isinstance(exc, SyntaxError) and exc.lineno is not None:
            starts = _line_starts(code)
            offset = _offset(starts, exc.lineno, exc.offset or 0)
        raise ParseError(f"python parse failed: {exc}", offset) from exc
    starts = _line_starts(code)
    return _convert(tree, starts)


def _span(node: ast.AST, starts: list[int]) -> tuple[int, int]:
    if hasattr(node, "lineno") and getattr(node, "end_lineno", None) is not None:
        return (
            _offset(starts, node.lineno, node.col_offset),
            _offset(starts, node.end_lineno, node.end_col_offset),
        )
    return (-1, -1)


def _convert(node: ast.AST, starts: list[int]) -> Node:
    if isinstance(node, ast.Name):
        start, end = _span(node, starts)
        return Node("name", text=node.id, identifier=True, start=start, end=end)

    children: list[Node] = []
    for fname, value in ast.iter_fields(node):
        if fname in _SKIP_FIELDS:
            continue
        if isinstance(value, ast.AST):
            children.append(_convert(value, starts))
        elif isinstance(value, list):
            for item in value:
                if isinstance(item, ast.AST):
                    children.append(_convert(item, starts))
                elif isinstance(item, str):  # Global / Nonlocal name lists
                    children.append(Node("name", text=item, identifier=True))
        elif isinstance(value, str) and fname in _ID_FIELDS:
            children.append(Node("name", text=value, identifier=True))
        elif isinstance(node, ast.Constant) and fname == "value":
            children.append(Node("literal", text=repr(value)))
    start, end = _span(node, starts)
    return Node(type(node).__name__, tuple(children), start=start, end=end)
