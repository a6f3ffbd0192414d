"""Language-uniform syntax trees for the structural metrics and curation.

Python parses through the stdlib `ast` module; Java through a hand-written
recursive-descent parser over the shared code lexer.  Both produce the same
Node shape so the subtree and dataflow metrics stay language-agnostic.
"""
from __future__ import annotations

from .nodes import Node, ParseError, iter_nodes
from .pyparse import parse_python
from .javaparse import parse_java

__all__ = ["Node", "ParseError", "iter_nodes", "parse_code", "parse_python", "parse_java"]


def parse_code(code: str, language: str) -> Node:
    if language == "python":
        return parse_python(code)
    if language == "java":
        return parse_java(code)
    raise ValueError(f"unsupported language {language!r}")
