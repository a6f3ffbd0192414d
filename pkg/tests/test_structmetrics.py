"""Structural metrics: subtree match, dataflow match, and the combined score."""
from __future__ import annotations

import pytest

from nameforge.codeparse import parse_code
from nameforge.metrics import (
    ast_match,
    codebleu,
    dataflow_edges,
    dataflow_match,
    subtree_counts,
)

PY_REF = """
def scale_values(values, factor):
    scaled = []
    for item in values:
        scaled.append(item * factor)
    return scaled
"""

JAVA_REF = """
public static int sumPositive(int[] values) {
    int total = 0;
    for (int i = 0; i < values.length; i++) {
        if (values[i] > 0) {
            total = total + values[i];
        }
    }
    return total;
}
"""


def rename(code: str, pairs: dict[str, str]) -> str:
    for old, new in pairs.items():
        code = code.replace(old, new)
    return code


def test_ast_match_identity():
    for code, lang in ((PY_REF, "python"), (JAVA_REF, "java")):
        tree = parse_code(code, lang)
        assert ast_match(tree, tree) == 1.0


def test_ast_match_ignores_identifier_names():
    renamed = rename(PY_REF, {"scaled": "out", "item": "v", "scale_values": "f"})
    a = parse_code(renamed, "python")
    b = parse_code(PY_REF, "python")
    assert ast_match(a, b) == 1.0

    jrenamed = rename(JAVA_REF, {"total": "acc", "values": "xs", "sumPositive": "go"})
    assert ast_match(parse_code(jrenamed, "java"), parse_code(JAVA_REF, "java")) == 1.0


def test_ast_match_detects_structural_change():
    # drop the if-guard: reference subtrees go missing
    edited = PY_REF.replace("        scaled.append(item * factor)", "        pass")
    score = ast_match(parse_code(edited, "python"), parse_code(PY_REF, "python"))
    assert score < 1.0


def test_ast_match_literal_change_is_structural():
    a = parse_code("x = 1", "python")
    b = parse_code("x = 2", "python")
    assert ast_match(a, b) < 1.0


def test_subtree_counts_are_multisets():
    code = "x = 1\nx = 1\n"
    counts = subtree_counts(parse_code(code, "python"))
    dup = [c for c in counts.values() if c >= 2]
    assert dup, "identical statements must count twice"


def test_dataflow_edges_python_hand_derived():
    code = "a = 1\nb = a + a\na = b\nc = a\n"
    assert dataflow_edges(code, "python") == [(0, 0), (0, 0), (1, 0), (0, 1)]


def test_dataflow_edges_java_hand_derived():
    code = "void f() { int a = 1; int b = a + a; a = b; int c = a; }"
    assert dataflow_edges(code, "java") == [(0, 0), (0, 0), (1, 0), (0, 1)]


def test_dataflow_python_aug_assign_reads_then_writes():
    code = "x = 1\nx += 2\ny = x\n"
    # x += 2 uses def 0 then redefines; y reads def 1
    assert dataflow_edges(code, "python") == [(0, 0), (0, 1)]


def test_dataflow_java_compound_assign_and_increment():
    code = "void f() { int x = 1; x += 2; x++; int y = x; }"
    assert dataflow_edges(code, "java") == [(0, 0), (0, 1), (0, 2)]


def test_dataflow_match_rename_invariant():
    renamed = rename(PY_REF, {"scaled": "out", "item": "v", "factor": "k"})
    assert dataflow_match(renamed, PY_REF, "python") == 1.0
    jrenamed = rename(JAVA_REF, {"total": "acc", "values": "xs"})
    assert dataflow_match(jrenamed, JAVA_REF, "java") == 1.0


def test_dataflow_match_detects_rewiring():
    ref = "a = 1\nb = 2\nc = a + b\n"
    cand = "a = 1\nb = 2\nc = a + a\n"
    assert dataflow_match(cand, ref, "python") < 1.0


def test_dataflow_match_vacuous_reference():
    # no def-use edges in the reference: score is 1 by convention
    assert dataflow_match("x = 1", "y = 2", "python") == 1.0


def test_dataflow_python_comprehension_and_walrus():
    code = "xs = [1, 2]\nys = [x * x for x in xs]\nif (n := len(ys)) > 0:\n    print(n)\n"
    edges = dataflow_edges(code, "python")
    assert edges.count((0, 0)) == 1  # xs read by the comprehension
    assert (2, 0) in edges  # ys read by len
    assert (3, 0) in edges  # n read by print


def test_dataflow_java_foreach_and_calls():
    code = "int f(int[] xs) { int s = 0; for (int v : xs) { s += helper(v); } return s; }"
    edges = dataflow_edges(code, "java")
    # helper is a bare call, not a variable: only xs, v, s produce edges
    assert (0, 0) in edges  # xs in the loop header
    assert (2, 0) in edges  # v passed to helper


def test_codebleu_identity():
    for code, lang in ((PY_REF, "python"), (JAVA_REF, "java")):
        report = codebleu(code, code, lang)
        assert report.combined == 1.0
        assert report.components() == {
            "ngram": 1.0,
            "weighted_ngram": 1.0,
            "ast_match": 1.0,
            "dataflow_match": 1.0,
        }


def test_codebleu_variable_rename_keeps_structure():
    renamed = rename(PY_REF, {"scaled": "out", "item": "v"})
    report = codebleu(renamed, PY_REF, "python")
    assert report.ast_match == 1.0
    assert report.dataflow_match == 1.0
    assert report.ngram < 1.0
    assert report.combined < 1.0


def test_codebleu_candidate_parse_failure_scores_zero_structure():
    report = codebleu("this is not ( valid", JAVA_REF, "java")
    assert report.candidate_parse_failed
    assert not report.reference_parse_failed
    assert report.ast_match == 0.0
    assert report.dataflow_match == 0.0
    assert 0.0 <= report.ngram < 1.0


def test_codebleu_custom_weights():
    report = codebleu(PY_REF, PY_REF, "python", weights=(0.1, 0.2, 0.3, 0.4))
    assert report.combined == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        codebleu("x", "y", "python", weights=(0.5, 0.5))


def test_codebleu_rejects_empty_reference():
    with pytest.raises(ValueError):
        codebleu("x = 1", "   ", "python")
