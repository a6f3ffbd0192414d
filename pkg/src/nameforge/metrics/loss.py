"""In-trust loss: cross entropy plus a noise-robust reversed term.

L = alpha * CE(q, p) + beta * DCE(q, p) where

    CE  = -sum_i q_i log p_i
    DCE = -sum_i p_i log(delta * p_i + (1 - delta) * q_i)

p is the model distribution, q the (possibly noisy) label distribution.
Log arguments are clamped at 1e-12 so boundary distributions stay finite.
"""
from __future__ import annotations

import numpy as np

CLAMP = 1e-12
_SUM_TOL = 1e-3


def _check(p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 1 or p.size == 0:
        raise ValueError("p and q must be non-empty 1-d arrays of equal length")
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
        raise ValueError("p and q must be finite")
    if np.any(p < 0) or np.any(q < 0):
        raise ValueError("p and q must be non-negative")
    # loose sum check: gradient checks nudge single coordinates
    for name, arr in (("p", p), ("q", q)):
        if abs(float(arr.sum()) - 1.0) > _SUM_TOL:
            raise ValueError(f"{name} must sum to 1 (got {float(arr.sum()):.6f})")
    return p, q


def in_trust_loss(
    p: np.ndarray,
    q: np.ndarray,
    alpha: float = 1.0,
    beta: float = 1.0,
    delta: float = 0.5,
) -> float:
    p, q = _check(p, q)
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must be in [0, 1]")
    ce = -float(np.sum(q * np.log(np.maximum(p, CLAMP))))
    mix = delta * p + (1.0 - delta) * q
    dce = -float(np.sum(p * np.log(np.maximum(mix, CLAMP))))
    return alpha * ce + beta * dce


def in_trust_grad_p(
    p: np.ndarray,
    q: np.ndarray,
    alpha: float = 1.0,
    beta: float = 1.0,
    delta: float = 0.5,
) -> np.ndarray:
    """Analytic dL/dp, matching the clamped forward computation."""
    p, q = _check(p, q)
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must be in [0, 1]")
    p_safe = np.maximum(p, CLAMP)
    grad_ce = -q / p_safe
    mix = np.maximum(delta * p + (1.0 - delta) * q, CLAMP)
    grad_dce = -(np.log(mix) + p * delta / mix)
    return alpha * grad_ce + beta * grad_dce
