from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator


class ParseError(ValueError):
    """Source text could not be parsed.  Carries a character offset when known."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (offset {offset})"
        super().__init__(message)


@dataclass(frozen=True)
class Node:
    """One syntax-tree node.

    Leaves carry `text`; `identifier` marks names that the structural metrics
    anonymize.  `start`/`end` are character offsets into the source (-1 when
    the backend could not provide them).
    """

    kind: str
    children: tuple[Node, ...] = ()
    text: str | None = None
    identifier: bool = False
    start: int = -1
    end: int = -1


def iter_nodes(root: Node) -> Iterator[Node]:
    """Pre-order walk."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))
