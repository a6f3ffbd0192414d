"""Def-use dataflow extraction and matching.

An edge is recorded per variable *use* as (anon, ordinal): `anon` numbers
variables by order of first definition, `ordinal` says which definition of
that variable the use reads.  Names never appear in edges, so consistently
renaming variables leaves the edge multiset unchanged.

Uses of names that were never defined (globals, imports, type names leaking
through) produce no edges; that is symmetric for candidate and reference, so
the match score stays rename-invariant.
"""
from __future__ import annotations

import ast
from collections import Counter

from ..codeparse import Node, parse_java
from ..codeparse.nodes import ParseError

Edge = tuple[int, int]


class _Flow:
    def __init__(self) -> None:
        self.anon: dict[str, int] = {}
        self.defs: dict[str, int] = {}
        self.edges: list[Edge] = []

    def define(self, name: str) -> None:
        if name not in self.anon:
            self.anon[name] = len(self.anon)
        self.defs[name] = self.defs.get(name, 0) + 1

    def use(self, name: str) -> None:
        count = self.defs.get(name, 0)
        if count > 0:
            self.edges.append((self.anon[name], count - 1))


def dataflow_edges(code: str, language: str) -> list[Edge]:
    """Extract def-use edges in source order.  Raises ParseError on bad code."""
    if language == "python":
        return _python_edges(code)
    if language == "java":
        return _java_edges(code)
    raise ValueError(f"unsupported language {language!r}")


def dataflow_match(candidate: str, reference: str, language: str) -> float:
    ref_edges = dataflow_edges(reference, language)
    if not ref_edges:
        return 1.0
    cand = Counter(dataflow_edges(candidate, language))
    ref = Counter(ref_edges)
    matched = sum(min(count, cand[e]) for e, count in ref.items())
    return matched / len(ref_edges)


# --- python ---------------------------------------------------------------


def _python_edges(code: str) -> list[Edge]:
    try:
        tree = ast.parse(code)
    except (SyntaxError, ValueError) as exc:
        raise ParseError(f"python parse failed: {exc}") from exc
    flow = _Flow()
    _py_walk(tree, flow)
    return flow.edges


def _py_target(node: ast.AST, flow: _Flow) -> None:
    """Assignment targets: plain names define, everything else reads."""
    if isinstance(node, ast.Name):
        flow.define(node.id)
    elif isinstance(node, (ast.Tuple, ast.List)):
        for elt in node.elts:
            _py_target(elt, flow)
    elif isinstance(node, ast.Starred):
        _py_target(node.value, flow)
    else:
        _py_walk(node, flow)


def _py_args(args: ast.arguments, flow: _Flow) -> None:
    for default in list(args.defaults) + [d for d in args.kw_defaults if d is not None]:
        _py_walk(default, flow)
    every = args.posonlyargs + args.args + args.kwonlyargs
    for arg in every:
        flow.define(arg.arg)
    if args.vararg:
        flow.define(args.vararg.arg)
    if args.kwarg:
        flow.define(args.kwarg.arg)


def _py_walk(node: ast.AST, flow: _Flow) -> None:
    if isinstance(node, ast.Name):
        if isinstance(node.ctx, ast.Load):
            flow.use(node.id)
        elif isinstance(node.ctx, ast.Store):
            flow.define(node.id)
        return
    if isinstance(node, ast.Assign):
        _py_walk(node.value, flow)
        for target in node.targets:
            _py_target(target, flow)
        return
    if isinstance(node, ast.AnnAssign):
        if node.value is not None:
            _py_walk(node.value, flow)
        _py_target(node.target, flow)
        return
    if isinstance(node, ast.AugAssign):
        _py_walk(node.value, flow)
        if isinstance(node.target, ast.Name):
            flow.use(node.target.id)
            flow.define(node.target.id)
        else:
            _py_walk(node.target, flow)
        return
    if isinstance(node, ast.NamedExpr):
        _py_walk(node.value, flow)
        _py_target(node.target, flow)
        return
    if isinstance(node, (ast.For, ast.AsyncFor)):
        _py_walk(node.iter, flow)
        _py_target(node.target, flow)
        for stmt in node.body + node.orelse:
            _py_walk(stmt, flow)
        return
    if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef, ast.Lambda)):
        _py_args(node.args, flow)
        body = node.body if isinstance(node.body, list) else [node.body]
        for stmt in body:
            _py_walk(stmt, flow)
        return
    if isinstance(node, (ast.With, ast.AsyncWith)):
        for item in node.items:
            _py_walk(item.context_expr, flow)
            if item.optional_vars is not None:
                _py_target(item.optional_vars, flow)
        for stmt in node.body:
            _py_walk(stmt, flow)
        return
    if isinstance(node, ast.ExceptHandler):
        if node.type is not None:
            _py_walk(node.type, flow)
        if node.name:
            flow.define(node.name)
        for stmt in node.body:
            _py_walk(stmt, flow)
        return
    if isinstance(node, (ast.ListComp, ast.SetComp, ast.GeneratorExp, ast.DictComp)):
        for gen in node.generators:
            _py_walk(gen.iter, flow)
            _py_target(gen.target, flow)
            for cond in gen.ifs:
                _py_walk(cond, flow)
        if isinstance(node, ast.DictComp):
            _py_walk(node.key, flow)
            _py_walk(node.value, flow)
        else:
            _py_walk(node.elt, flow)
        return
    for child in ast.iter_child_nodes(node):
        _py_walk(child, flow)


# --- java -----------------------------------------------------------------


def _java_edges(code: str) -> list[Edge]:
    root = parse_java(code)
    flow = _Flow()
    _java_walk(root, flow)
    return flow.edges


def _first_leaf_name(node: Node) -> str | None:
    for child in node.children:
        if child.kind == "name":
            return child.text
    return None


def _java_walk(node: Node, flow: _Flow) -> None:
    kind = node.kind
    if kind == "name":
        if node.text:
            flow.use(node.text)
        return
    if kind == "param":
        name = _first_leaf_name(node)
        if name:
            flow.define(name)
        return
    if kind == "declarator":
        children = list(node.children)
        name_leaf = children[0]
        for extra in children[1:]:
            _java_walk(extra, flow)
        if name_leaf.kind == "name" and name_leaf.text:
            flow.define(name_leaf.text)
        return
    if kind == "assign":
        target, value = node.children
        _java_walk(value, flow)
        if target.kind == "name" and target.text:
            if node.text != "=":  # compound assignment reads first
                flow.use(target.text)
            flow.define(target.text)
        else:
            _java_walk(target, flow)
        return
    if kind == "foreach_stmt":
        var, iterable, body = node.children
        _java_walk(iterable, flow)
        name = _first_leaf_name(var)
        if name:
            flow.define(name)
        _java_walk(body, flow)
        return
    if kind in ("unary", "postfix") and node.text in ("++", "--"):
        operand = node.children[0]
        if operand.kind == "name" and operand.text:
            flow.use(operand.text)
            flow.define(operand.text)
        else:
            _java_walk(operand, flow)
        return
    if kind == "call":
        # bare calls: skip the method-name leaf, it is not a variable
        children = node.children
        if children and children[0].kind == "name":
            children = children[1:]
        for child in children:
            _java_walk(child, flow)
        return
    for child in node.children:
        _java_walk(child, flow)
