"""Metric suite: lexical n-gram scores, structural code scores, and rates."""
from __future__ import annotations

from ..lexer import Token, code_tokens, lex
from .codebleu import CodeBleuReport, DEFAULT_WEIGHTS, codebleu, load_keywords
from .astmatch import ast_match, subtree_counts
from .dataflow import dataflow_edges, dataflow_match
from .lexical import bleu, edit_distance, exact_match, rouge_l, weighted_bleu
from .loss import in_trust_grad_p, in_trust_loss
from .rates import asr_finetune, asr_zeroshot, pass_at_1

__all__ = [
    "CodeBleuReport",
    "DEFAULT_WEIGHTS",
    "Token",
    "asr_finetune",
    "asr_zeroshot",
    "ast_match",
    "bleu",
    "code_tokens",
    "codebleu",
    "dataflow_edges",
    "dataflow_match",
    "edit_distance",
    "exact_match",
    "in_trust_grad_p",
    "in_trust_loss",
    "lex",
    "load_keywords",
    "pass_at_1",
    "rouge_l",
    "subtree_counts",
    "weighted_bleu",
]
