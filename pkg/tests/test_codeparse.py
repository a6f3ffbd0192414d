"""Lexer and parser behavior for both languages."""
from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from nameforge.codeparse import Node, ParseError, iter_nodes, parse_code, parse_java, parse_python
from nameforge.lexer import code_tokens, lex


def test_lex_python_basics():
    toks = lex("def f(a):\n    return a + 1  # done\n", "python")
    kinds = [(t.kind, t.text) for t in toks]
    assert ("ident", "def") in kinds
    assert ("number", "1") in kinds
    assert ("comment", "# done") in kinds
    assert ("op", "+") in kinds


def test_lex_python_strings():
    toks = lex("x = 'a\\'b' + \"c\" + f'{v}' + '''tri'''", "python")
    strings = [t.text for t in toks if t.kind == "string"]
    assert strings == ["'a\\'b'", '"c"', "f'{v}'", "'''tri'''"]


def test_lex_java_comments_and_chars():
    code = "int x = 'c'; // line\n/* block\n */ y >>= 2;"
    toks = lex(code, "java")
    assert [t.text for t in toks if t.kind == "comment"] == ["// line", "/* block\n */"]
    assert ("op", ">>=") in [(t.kind, t.text) for t in toks]
    assert ("string", "'c'") in [(t.kind, t.text) for t in toks]


def test_lex_spans_reconstruct_source():
    code = "public int f(int a) { return a * 37; }"
    for tok in lex(code, "java"):
        assert code[tok.start : tok.end] == tok.text


@given(st.text(alphabet=st.characters(codec="ascii"), max_size=80))
def test_lex_never_raises(text):
    for language in ("python", "java"):
        toks = lex(text, language)
        for tok in toks:
            assert 0 <= tok.start < tok.end <= len(text)


def test_code_tokens_drop_comments():
    assert code_tokens("x = 1  # note", "python") == ["x", "=", "1"]


def test_parse_python_name_leaves_are_identifiers():
    tree = parse_python("def f(a):\n    return a\n")
    names = [n for n in iter_nodes(tree) if n.kind == "name"]
    assert {n.text for n in names} >= {"f", "a"}
    assert all(n.identifier for n in names)


def test_parse_python_error_offset():
    with pytest.raises(ParseError):
        parse_python("def broken(:\n")


def test_parse_java_method_shape():
    tree = parse_java("int addOne(int v) { return v + 1; }")
    method = tree.children[0]
    assert method.kind == "method_decl"
    kinds = [c.kind for c in method.children]
    assert kinds[0] == "type"
    assert kinds[1] == "member"
    assert "params" in kinds and "block" in kinds


def test_parse_java_rejects_garbage():
    for bad in ("int f( {", "class", "int x = ;", ")))"):
        with pytest.raises(ParseError):
            parse_java(bad)


def test_parse_java_spans_cover_catch():
    code = "void f() { try { g(); } catch (Exception e) { } }"
    tree = parse_java(code)
    catches = [n for n in iter_nodes(tree) if n.kind == "catch"]
    assert len(catches) == 1
    snippet = code[catches[0].start : catches[0].end]
    assert snippet.startswith("catch")
    assert snippet.endswith("}")


def test_parse_java_generics_and_backtracking():
    # ">>" split inside generics must survive the decl-vs-expr backtrack
    code = """
    class C {
        Map<String, List<Integer>> cache = new HashMap<>();
        int shift(int a, int b) { return a >> b; }
    }
    """
    tree = parse_java(code)
    assert tree.kind == "unit"


def test_parse_java_statement_variety():
    code = """
    public class W {
        public static String run(int[] xs, String sep) {
            StringBuilder sb = new StringBuilder();
            for (int i = 0; i < xs.length; i++) { sb.append(xs[i]); }
            for (int x : xs) { if (x < 0) continue; }
            int n = 0;
            while (n < 3) { n++; }
            do { n--; } while (n > 0);
            switch (n) { case 0: n = 1; break; default: n = 2; }
            try { n = Integer.parseInt(sep); }
            catch (NumberFormatException e) { n = -1; }
            finally { n += 1; }
            String s = n > 0 ? "pos" : "neg";
            Object o = (Object) s;
            int[] more = new int[]{1, 2};
            return sb.toString() + s + more.length;
        }
    }
    """
    assert parse_java(code).kind == "unit"


def test_parse_code_dispatch():
    assert parse_code("x = 1", "python").kind == "Module"
    assert parse_code("int f() { return 0; }", "java").kind == "unit"
    with pytest.raises(ValueError):
        parse_code("x", "ruby")


def test_node_is_immutable():
    node = Node("literal", text="1")
    with pytest.raises(AttributeError):
        node.text = "2"
