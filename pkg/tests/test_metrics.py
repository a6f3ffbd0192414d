"""Lexical metrics, loss, and rates against independent oracles."""
from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nameforge.metrics import (
    asr_finetune,
    asr_zeroshot,
    bleu,
    edit_distance,
    exact_match,
    in_trust_grad_p,
    in_trust_loss,
    pass_at_1,
    rouge_l,
    weighted_bleu,
)
from oracles import (
    central_difference,
    oracle_bleu,
    oracle_edit_distance,
    oracle_rouge_l,
    oracle_weighted_bleu,
)

VOCAB = ["if", "return", "x", "y", "(", ")", "+", "=", "0", "1", "foo", "bar"]


def random_tokens(rng: random.Random, lo: int = 0, hi: int = 12) -> list[str]:
    return [rng.choice(VOCAB) for _ in range(rng.randint(lo, hi))]


def test_bleu_identity():
    toks = "def foo ( a , b ) : return a + b".split()
    assert bleu(toks, toks) == 1.0


def test_bleu_empty_candidate_is_zero():
    assert bleu([], ["a", "b"]) == 0.0


def test_bleu_zero_unigram_overlap_is_zero():
    assert bleu(["x"], ["y"]) == 0.0


def test_bleu_requires_reference():
    with pytest.raises(ValueError):
        bleu(["a"], [])


def test_bleu_brevity_penalty_hand_value():
    # perfect precisions, candidate 2 tokens vs reference 3: bp = exp(1 - 3/2)
    got = bleu(["a", "b"], ["a", "b", "c"])
    assert got == pytest.approx(math.exp(-0.5), abs=1e-12)


def test_bleu_matches_oracle_on_random_pairs():
    rng = random.Random(2024)
    for _ in range(300):
        cand = random_tokens(rng)
        ref = random_tokens(rng, lo=1)
        assert bleu(cand, ref) == pytest.approx(oracle_bleu(cand, ref), abs=1e-12)


def test_weighted_bleu_matches_oracle_on_random_pairs():
    rng = random.Random(77)
    keywords = {"if", "return"}
    for _ in range(300):
        cand = random_tokens(rng)
        ref = random_tokens(rng, lo=1)
        got = weighted_bleu(cand, ref, keywords)
        assert got == pytest.approx(oracle_weighted_bleu(cand, ref, keywords), abs=1e-12)


def test_weighted_bleu_degenerates_without_keywords():
    rng = random.Random(5)
    for _ in range(200):
        cand = random_tokens(rng)
        ref = random_tokens(rng, lo=1)
        assert weighted_bleu(cand, ref, frozenset()) == pytest.approx(
            bleu(cand, ref), abs=1e-12
        )


def test_weighted_bleu_prefers_keyword_matches():
    # both candidates miss exactly one token; plain BLEU ties, but the
    # candidate keeping the keyword wins once keywords weigh 5x
    ref = ["return", "a", "+", "b", ";"]
    keeps_keyword = ["return", "a", "+", "b", "!"]
    drops_keyword = ["fetch", "a", "+", "b", ";"]
    assert bleu(keeps_keyword, ref) == pytest.approx(bleu(drops_keyword, ref), abs=1e-12)
    kw = {"return"}
    assert weighted_bleu(keeps_keyword, ref, kw) > weighted_bleu(drops_keyword, ref, kw)


def test_rouge_l_hand_value():
    cand = "a b c d".split()
    ref = "a c d e".split()
    assert rouge_l(cand, ref) == pytest.approx(0.75, abs=1e-12)


def test_rouge_l_matches_oracle():
    rng = random.Random(31)
    for _ in range(200):
        cand = random_tokens(rng)
        ref = random_tokens(rng)
        assert rouge_l(cand, ref) == pytest.approx(oracle_rouge_l(cand, ref), abs=1e-12)


def test_rouge_l_empty_sides():
    assert rouge_l([], ["a"]) == 0.0
    assert rouge_l(["a"], []) == 0.0


def test_edit_distance_examples():
    assert edit_distance("kitten", "sitting") == 3
    assert edit_distance("", "abc") == 3
    assert edit_distance("same", "same") == 0


def test_edit_distance_matches_oracle():
    rng = random.Random(13)
    alphabet = "abcd"
    for _ in range(200):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 8)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 8)))
        assert edit_distance(a, b) == oracle_edit_distance(a, b)


@given(st.text(max_size=12), st.text(max_size=12))
def test_edit_distance_symmetry(a, b):
    assert edit_distance(a, b) == edit_distance(b, a)
    assert (edit_distance(a, b) == 0) == (a == b)


def test_exact_match():
    assert exact_match("x", "x") == 1.0
    assert exact_match("x", "y") == 0.0


def test_pass_at_1():
    assert pass_at_1([True, False, True, True]) == 0.75
    with pytest.raises(ValueError):
        pass_at_1([])


def test_asr_finetune_counts_strict_drops():
    before = [0.9, 0.5, 0.4]
    after = [0.5, 0.5, 0.6]
    assert asr_finetune(before, after) == pytest.approx(1 / 3)


def test_asr_zeroshot():
    assert asr_zeroshot([True, True, False], [False, True, False]) == 0.5
    assert asr_zeroshot([False, False], [False, False]) is None


# --- in-trust loss ---------------------------------------------------------


def test_in_trust_uniform_two_way_exact():
    p = np.array([0.5, 0.5])
    loss = in_trust_loss(p, p, alpha=1.0, beta=1.0, delta=0.5)
    assert loss == pytest.approx(2.0 * math.log(2.0), abs=1e-12)


def test_in_trust_loss_decomposes():
    rng = np.random.default_rng(3)
    p = rng.dirichlet(np.ones(6))
    q = rng.dirichlet(np.ones(6))
    ce = -float(np.sum(q * np.log(p)))
    mix = 0.25 * p + 0.75 * q
    dce = -float(np.sum(p * np.log(mix)))
    got = in_trust_loss(p, q, alpha=2.0, beta=3.0, delta=0.25)
    assert got == pytest.approx(2.0 * ce + 3.0 * dce, rel=1e-12)


def test_in_trust_clamps_zero_coordinates():
    p = np.array([1.0, 0.0])
    q = np.array([0.0, 1.0])
    loss = in_trust_loss(p, q)
    assert math.isfinite(loss)
    grad = in_trust_grad_p(p, q)
    assert np.all(np.isfinite(grad))


def test_in_trust_validates_inputs():
    good = np.array([0.5, 0.5])
    with pytest.raises(ValueError):
        in_trust_loss(good, np.array([0.5, 0.5, 0.0]))
    with pytest.raises(ValueError):
        in_trust_loss(np.array([-0.1, 1.1]), good)
    with pytest.raises(ValueError):
        in_trust_loss(np.array([0.9, 0.9]), good)
    with pytest.raises(ValueError):
        in_trust_loss(good, good, delta=1.5)


def test_in_trust_grad_matches_finite_differences():
    rng = np.random.default_rng(1234)
    for _ in range(100):
        n = rng.integers(2, 9)
        p = rng.dirichlet(np.ones(n) * rng.uniform(0.5, 3.0))
        q = rng.dirichlet(np.ones(n) * rng.uniform(0.5, 3.0))
        # keep coordinates away from the clamp so differences are smooth
        p = (p + 0.01) / (1.0 + 0.01 * n)
        q = (q + 0.01) / (1.0 + 0.01 * n)
        alpha = float(rng.uniform(0.2, 2.0))
        beta = float(rng.uniform(0.2, 2.0))
        delta = float(rng.uniform(0.1, 0.9))
        grad = in_trust_grad_p(p, q, alpha, beta, delta)

        def f(x):
            return in_trust_loss(x, q, alpha, beta, delta)

        for i in range(n):
            approx = central_difference(f, p, i)
            denom = max(abs(approx), 1e-8)
            assert abs(grad[i] - approx) / denom < 1e-5


def test_in_trust_delta_extremes():
    rng = np.random.default_rng(9)
    p = rng.dirichlet(np.ones(4))
    q = rng.dirichlet(np.ones(4))
    # delta=0: DCE becomes -sum p log q (reverse CE)
    expected = -float(np.sum(q * np.log(p))) - float(np.sum(p * np.log(q)))
    assert in_trust_loss(p, q, delta=0.0) == pytest.approx(expected, rel=1e-12)
    # delta=1: DCE becomes entropy of p
    expected = -float(np.sum(q * np.log(p))) - float(np.sum(p * np.log(p)))
    assert in_trust_loss(p, q, delta=1.0) == pytest.approx(expected, rel=1e-12)
