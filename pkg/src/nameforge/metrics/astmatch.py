"""Subtree matching between syntax trees, identifiers anonymized.

The score is the fraction of the reference's rooted subtrees (every node
with at least one child) that also occur in the candidate, as a multiset.
Identifier leaves serialize as a fixed placeholder, so renaming variables or
the method itself leaves the score at 1.0 while structural edits lower it.
"""
from __future__ import annotations

from collections import Counter

from ..codeparse import Node, iter_nodes


def _serialize(node: Node, memo: dict[int, str]) -> str:
    key = id(node)
    cached = memo.get(key)
    if cached is not None:
        return cached
    if not node.children:
        if node.identifier:
            out = f"({node.kind} <id>)"
        elif node.text is not None:
            out = f"({node.kind} {node.text})"
        else:
            out = f"({node.kind})"
    else:
        label = node.kind if node.text is None else f"{node.kind}:{node.text}"
        inner = " ".join(_serialize(c, memo) for c in node.children)
        out = f"({label} {inner})"
    memo[key] = out
    return out


def subtree_counts(root: Node) -> Counter[str]:
    """Multiset of serialized subtrees rooted at internal nodes."""
    memo: dict[int, str] = {}
    counts: Counter[str] = Counter()
    for node in iter_nodes(root):
        if node.children:
            counts[_serialize(node, memo)] += 1
    return counts


def ast_match(candidate: Node, reference: Node) -> float:
    ref = subtree_counts(reference)
    total = sum(ref.values())
    if total == 0:
        return 1.0
    cand = subtree_counts(candidate)
    matched = sum(min(count, cand[s]) for s, count in ref.items())
    return matched / total
