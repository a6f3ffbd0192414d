"""Campaign-level success rates."""
from __future__ import annotations

from typing import Sequence


def pass_at_1(outcomes: Sequence[bool]) -> float:
    if not outcomes:
        raise ValueError("pass@1 needs at least one outcome")
    return sum(map(bool, outcomes)) / len(outcomes)


def asr_finetune(before: Sequence[float], after: Sequence[float]) -> float:
    """Fraction of samples whose metric strictly dropped under attack."""
    if len(before) != len(after) or not before:
        raise ValueError("before/after must be equal-length and non-empty")
    return sum(1 for b, a in zip(before, after) if a < b) / len(before)


def asr_zeroshot(before_pass: Sequence[bool], after_pass: Sequence[bool]) -> float | None:
    """Of samples passing before the attack, the fraction broken by it.

    Returns None when nothing passed before: the rate is undefined, and
    callers must not fold that into 0 or 1.
    """
    if len(before_pass) != len(after_pass):
        raise ValueError("before/after must be equal length")
    passed = [(b, a) for b, a in zip(before_pass, after_pass) if b]
    if not passed:
        return None
    return sum(1 for _, a in passed if not a) / len(passed)
