"""Corpus records, signature surgery, JSONL round trips."""
from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from nameforge.core import (
    CorpusError,
    Language,
    Sample,
    SignatureError,
    load_corpus,
    parse_signature,
    sample_from_dict,
    sample_to_dict,
    save_corpus,
    substitute_method_name,
)


def make_sample(**kw) -> Sample:
    base = dict(
        id="s1",
        language=Language.PYTHON,
        description="add two numbers and return the sum",
        signature="def add_numbers(a, b):",
        method_name="add_numbers",
        params=("a", "b"),
        code="def add_numbers(a, b):\n    return a + b\n",
        tests=None,
    )
    base.update(kw)
    return Sample(**base)


def test_parse_python_signature():
    sig = parse_signature("def add_numbers(a, b):", Language.PYTHON)
    assert sig.name == "add_numbers"
    assert sig.params == "a, b"
    assert sig.render() == "def add_numbers(a, b):"


def test_parse_java_signature():
    text = "public static int maxOf(int a, int b) throws Exception"
    sig = parse_signature(text, Language.JAVA)
    assert sig.name == "maxOf"
    assert sig.params == "int a, int b"
    assert sig.suffix == ") throws Exception"
    assert sig.render() == text


def test_parse_signature_nested_parens():
    sig = parse_signature("def f(x=(1, (2, 3)), *, y=()):", Language.PYTHON)
    assert sig.name == "f"
    assert sig.params == "x=(1, (2, 3)), *, y=()"


def test_parse_signature_gap_whitespace_preserved():
    text = "def spaced (a):"
    sig = parse_signature(text, Language.PYTHON)
    assert sig.name == "spaced"
    assert sig.render() == text


def test_parse_signature_no_parens_is_error():
    with pytest.raises(SignatureError) as err:
        parse_signature("def broken", Language.PYTHON)
    assert err.value.offset == len("def broken")


def test_parse_signature_requires_def_for_python():
    with pytest.raises(SignatureError):
        parse_signature("int foo(int a)", Language.PYTHON)


def test_parse_signature_unbalanced():
    with pytest.raises(SignatureError):
        parse_signature("def f(a, b:", Language.PYTHON)


def test_substitute_changes_only_the_name_slot():
    s = make_sample()
    out = substitute_method_name(s, "foo")
    assert out.method_name == "foo"
    assert out.signature == "def foo(a, b):"
    assert out.description == s.description
    assert out.code == s.code
    # original untouched
    assert s.signature == "def add_numbers(a, b):"


def test_substitute_rejects_illegal_names():
    s = make_sample()
    for bad in ("", "has space", "1starts_with_digit", "semi;colon"):
        with pytest.raises(ValueError):
            substitute_method_name(s, bad)


def test_substitute_java_signature():
    s = make_sample(
        id="j1",
        language=Language.JAVA,
        signature="public List<String> splitLines(String text)",
        method_name="splitLines",
        code="public List<String> splitLines(String text) { return null; }",
    )
    out = substitute_method_name(s, "sp1itLines")
    assert out.signature == "public List<String> sp1itLines(String text)"


IDENT = st.from_regex(r"[a-z][a-z0-9]{0,8}(_[a-z][a-z0-9]{0,8}){0,3}", fullmatch=True)


@given(IDENT, IDENT)
def test_substitute_round_trip_property(name, other):
    s = make_sample(
        signature=f"def {name}(a, b):",
        method_name=name,
        code=f"def {name}(a, b):\n    return a\n",
    )
    swapped = substitute_method_name(s, other)
    back = substitute_method_name(swapped, name)
    assert back.signature == s.signature
    assert back.method_name == name


def test_sample_rejects_name_signature_mismatch():
    with pytest.raises(CorpusError):
        make_sample(method_name="different")


def test_corpus_round_trip_is_byte_identical(tmp_path):
    path = tmp_path / "corpus.jsonl"
    samples = [
        make_sample(id="a", tests="assert add_numbers(1, 2) == 3"),
        make_sample(
            id="b",
            signature="def mul(a, b):",
            method_name="mul",
            code="def mul(a, b):\n    return a * b\n",
            tests=None,
        ),
    ]
    save_corpus(samples, path)
    first = path.read_bytes()
    save_corpus(load_corpus(path), path)
    assert path.read_bytes() == first


def test_load_corpus_preserves_order_and_ids(tmp_path):
    path = tmp_path / "c.jsonl"
    save_corpus([make_sample(id=f"s{i}") for i in range(3)], path)
    loaded = load_corpus(path)
    assert [s.id for s in loaded] == ["s0", "s1", "s2"]


def test_load_corpus_reports_line_of_bad_json(tmp_path):
    path = tmp_path / "c.jsonl"
    good = json.dumps(sample_to_dict(make_sample()))
    path.write_text(good + "\n{not json}\n", encoding="utf-8")
    with pytest.raises(CorpusError) as err:
        load_corpus(path)
    assert err.value.line == 2


def test_load_corpus_reports_missing_field(tmp_path):
    path = tmp_path / "c.jsonl"
    raw = sample_to_dict(make_sample())
    del raw["description"]
    path.write_text(json.dumps(raw) + "\n", encoding="utf-8")
    with pytest.raises(CorpusError) as err:
        load_corpus(path)
    assert err.value.line == 1
    assert "description" in str(err.value)


def test_load_corpus_rejects_duplicate_ids(tmp_path):
    path = tmp_path / "c.jsonl"
    save_corpus([make_sample(id="dup"), make_sample(id="dup")], path)
    with pytest.raises(CorpusError) as err:
        load_corpus(path)
    assert err.value.line == 2


def test_tests_field_accepts_three_shapes():
    raw = sample_to_dict(make_sample())
    raw["tests"] = None
    assert sample_from_dict(raw).tests is None
    raw["tests"] = "assert add_numbers(1, 1) == 2"
    assert sample_from_dict(raw).tests == "assert add_numbers(1, 1) == 2"
    raw["tests"] = [{"input": "add_numbers(1, 1)", "expected": "2"}]
    cases = sample_from_dict(raw).tests
    assert cases[0].input == "add_numbers(1, 1)"
    assert cases[0].expected == "2"


def test_tests_field_rejects_other_shapes():
    raw = sample_to_dict(make_sample())
    raw["tests"] = [{"input": "x"}]
    with pytest.raises(CorpusError):
        sample_from_dict(raw)
    raw["tests"] = 42
    with pytest.raises(CorpusError):
        sample_from_dict(raw)
