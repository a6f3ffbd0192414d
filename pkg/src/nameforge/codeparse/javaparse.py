"""Java source -> uniform Node tree.

A recursive-descent parser over the shared code lexer, covering the
method-level subset that code generation corpora actually contain: classes,
methods, fields, the usual statements, operator-precedence expressions,
generics in declarations, lambdas, anonymous classes, and array creation.
It is not a full JLS parser; exotic constructs raise ParseError, which the
curation rules treat as a syntax rejection.

Leaf kinds matter downstream: "name" leaves are variable-like identifiers
(the dataflow metric tracks them), "member" leaves are field/method names
after a dot, and "type" leaves are flattened type spellings.  All three are
identifier leaves, so the subtree metric anonymizes them alike.
"""
from __future__ import annotations

from ..lexer import COMMENT, IDENT, NUMBER, OP, STRING, Token, lex
from .nodes import Node, ParseError

_MODIFIERS = frozenset(
    "public private protected static final abstract native synchronized transient volatile strictfp default".split()
)
_PRIMITIVES = frozenset("boolean byte char short int long float double void".split())
_ASSIGN_OPS = frozenset(("=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="))


def parse_java(code: str) -> Node:
    tokens = [t for t in lex(code, "java") if t.kind != COMMENT]
    parser = _Parser(code, tokens)
    return parser.parse_unit()


class _Parser:
    def __init__(self, code: str, tokens: list[Token]):
        self.code = code
        self.toks = tokens
        self.i = 0

    # --- token plumbing -------------------------------------------------

    def peek(self, k: int = 0) -> Token | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.text == text

    def at_any(self, texts) -> bool:
        t = self.peek()
        return t is not None and t.text in texts

    def at_kind(self, kind: str) -> bool:
        t = self.peek()
        return t is not None and t.kind == kind

    def advance(self) -> Token:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input", len(self.code))
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t is None or t.text != text:
            got = t.text if t else "end of input"
            at = t.start if t else len(self.code)
            raise ParseError(f"expected {text!r}, got {got!r}", at)
        return self.advance()

    def expect_ident(self) -> Token:
        t = self.peek()
        if t is None or t.kind != IDENT:
            got = t.text if t else "end of input"
            at = t.start if t else len(self.code)
            raise ParseError(f"expected identifier, got {got!r}", at)
        return self.advance()

    def close_angle(self) -> None:
        """Consume one '>' out of '>', '>>' or '>>>' (shift tokens split here)."""
        t = self.peek()
        if t is None or not t.text.startswith(">"):
            at = t.start if t else len(self.code)
            raise ParseError("expected '>' in type arguments", at)
        if t.text == ">":
            self.advance()
        else:
            self.toks[self.i] = Token(OP, t.text[1:], t.start + 1, t.end)

    def here(self) -> int:
        t = self.peek()
        return t.start if t else len(self.code)

    def mark(self) -> tuple[int, list[Token]]:
        # close_angle() splits ">>" tokens in place, so backtracking must
        # restore the token list as well as the position
        return (self.i, self.toks.copy())

    def restore(self, state: tuple[int, list[Token]]) -> None:
        self.i, self.toks = state

    # --- top level ------------------------------------------------------

    def parse_unit(self) -> Node:
        members: list[Node] = []
        while self.peek() is not None:
            if self.at("package") or self.at("import"):
                while self.peek() is not None and not self.at(";"):
                    self.advance()
                self.expect(";")
                continue
            members.append(self.member())
        if not members:
            raise ParseError("empty compilation unit", 0)
        return Node("unit", tuple(members), start=0, end=len(self.code))

    def member(self) -> Node:
        start = self.here()
        self.modifiers()
        if self.at_any(("class", "interface", "enum")):
            return self.class_decl(start)
        return self.method_or_field(start)

    def modifiers(self) -> None:
        while True:
            if self.at_any(_MODIFIERS):
                self.advance()
            elif self.at("@"):
                self.advance()
                self.expect_ident()
                while self.at("."):
                    self.advance()
                    self.expect_ident()
                if self.at("("):
                    self.skip_balanced("(", ")")
            else:
                return

    def skip_balanced(self, open_text: str, close_text: str) -> None:
        depth = 0
        while True:
            t = self.peek()
            if t is None:
                raise ParseError(f"unbalanced {open_text!r}", len(self.code))
            self.advance()
            if t.text == open_text:
                depth += 1
            elif t.text == close_text:
                depth -= 1
                if depth == 0:
                    return

    def class_decl(self, start: int) -> Node:
        kind = self.advance().text  # class / interface / enum
        name = self.expect_ident()
        if self.at("<"):
            self.type_params()
        if self.at("extends"):
            self.advance()
            self.type()
            while self.at(","):
                self.advance()
                self.type()
        if self.at("implements"):
            self.advance()
            self.type()
            while self.at(","):
                self.advance()
                self.type()
        body = self.class_body()
        children = (Node("member", text=name.text, identifier=True, start=name.start, end=name.end), body)
        return Node(f"{kind}_decl", children, start=start, end=body.end)

    def type_params(self) -> None:
        self.expect("<")
        depth = 1
        while depth > 0:
            t = self.peek()
            if t is None:
                raise ParseError("unterminated type parameters", len(self.code))
            if t.text == "<":
                depth += 1
                self.advance()
            elif t.text.startswith(">"):
                take = min(depth, len(t.text))
                depth -= take
                if take == len(t.text):
                    self.advance()
                else:
                    self.toks[self.i] = Token(OP, t.text[take:], t.start + take, t.end)
            else:
                self.advance()

    def class_body(self) -> Node:
        open_tok = self.expect("{")
        members: list[Node] = []
        while not self.at("}"):
            if self.peek() is None:
                raise ParseError("unterminated class body", len(self.code))
            if self.at(";"):
                self.advance()
                continue
            members.append(self.member())
        close = self.expect("}")
        return Node("class_body", tuple(members), start=open_tok.start, end=close.end)

    def method_or_field(self, start: int) -> Node:
        if self.at("<"):
            self.type_params()
        # constructor: Name ( ... )
        t0, t1 = self.peek(), self.peek(1)
        if t0 is not None and t0.kind == IDENT and t1 is not None and t1.text == "(":
            name = self.advance()
            return self.method_tail(start, None, name)
        rtype = self.type()
        name = self.expect_ident()
        if self.at("("):
            return self.method_tail(start, rtype, name)
        # field declaration; rtype and the first declarator's name are parsed
        decls = [self.declarator_tail(name)]
        while self.at(","):
            self.advance()
            decls.append(self.declarator())
        end = self.expect(";").end
        return Node("field_decl", (rtype, *decls), start=start, end=end)

    def method_tail(self, start: int, rtype: Node | None, name: Token) -> Node:
        params = self.params()
        while self.at("["):  # ancient array-return syntax
            self.advance()
            self.expect("]")
        if self.at("throws"):
            self.advance()
            self.type()
            while self.at(","):
                self.advance()
                self.type()
        if self.at(";"):
            end = self.advance().end
            body: Node | None = None
        else:
            body = self.block()
            end = body.end
        name_leaf = Node("member", text=name.text, identifier=True, start=name.start, end=name.end)
        children = [name_leaf, params]
        if rtype is not None:
            children.insert(0, rtype)
        if body is not None:
            children.append(body)
        return Node("method_decl", tuple(children), start=start, end=end)

    def params(self) -> Node:
        open_tok = self.expect("(")
        out: list[Node] = []
        while not self.at(")"):
            if out:
                self.expect(",")
            start = self.here()
            self.modifiers()
            ptype = self.type()
            if self.at("..."):
                self.advance()
            name = self.expect_ident()
            while self.at("["):
                self.advance()
                self.expect("]")
            leaf = Node("name", text=name.text, identifier=True, start=name.start, end=name.end)
            out.append(Node("param", (ptype, leaf), start=start, end=name.end))
        close = self.expect(")")
        return Node("params", tuple(out), start=open_tok.start, end=close.end)

    # --- types ----------------------------------------------------------

    def type(self) -> Node:
        start = self.here()
        parts: list[str] = []
        t = self.peek()
        if t is None:
            raise ParseError("expected a type", len(self.code))
        if t.text in _PRIMITIVES:
            parts.append(self.advance().text)
        else:
            parts.append(self.expect_ident().text)
            while (
                self.at(".")
                and (p := self.peek(1)) is not None
                and p.kind == IDENT
                and p.text != "class"
            ):
                self.advance()
                parts.append(".")
                parts.append(self.advance().text)
        if self.at("<"):
            parts.append(self.type_args())
        while self.at("[") and (p := self.peek(1)) is not None and p.text == "]":
            self.advance()
            self.advance()
            parts.append("[]")
        end = self.toks[self.i - 1].end if self.i > 0 else start
        return Node("type", text="".join(parts), identifier=True, start=start, end=end)

    def type_args(self) -> str:
        self.expect("<")
        parts = ["<"]
        if self.peek() is not None and self.peek().text.startswith(">"):
            self.close_angle()
            return "<>"
        while True:
            if self.at("?"):
                self.advance()
                parts.append("?")
                if self.at_any(("extends", "super")):
                    parts.append(f" {self.advance().text} ")
                    parts.append(self.type().text or "")
            else:
                parts.append(self.type().text or "")
            if self.at(","):
                self.advance()
                parts.append(",")
                continue
            self.close_angle()
            parts.append(">")
            return "".join(parts)

    def looks_like_type_ahead(self) -> bool:
        """Cheap check used to disambiguate declarations from expressions."""
        t = self.peek()
        if t is None:
            return False
        if t.text in _PRIMITIVES:
            return True
        return t.kind == IDENT

    # --- statements -------------------------------------------------------

    def block(self) -> Node:
        open_tok = self.expect("{")
        stmts: list[Node] = []
        while not self.at("}"):
            if self.peek() is None:
                raise ParseError("unterminated block", len(self.code))
            stmts.append(self.statement())
        close = self.expect("}")
        return Node("block", tuple(stmts), start=open_tok.start, end=close.end)

    def statement(self) -> Node:
        start = self.here()
        if self.at("{"):
            return self.block()
        if self.at(";"):
            end = self.advance().end
            return Node("empty_stmt", start=start, end=end)
        if self.at("if"):
            return self.if_stmt(start)
        if self.at("while"):
            self.advance()
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            body = self.statement()
            return Node("while_stmt", (cond, body), start=start, end=body.end)
        if self.at("do"):
            self.advance()
            body = self.statement()
            self.expect("while")
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            end = self.expect(";").end
            return Node("do_stmt", (body, cond), start=start, end=end)
        if self.at("for"):
            return self.for_stmt(start)
        if self.at("switch"):
            return self.switch_stmt(start)
        if self.at("try"):
            return self.try_stmt(start)
        if self.at("return"):
            self.advance()
            if self.at(";"):
                end = self.advance().end
                return Node("return_stmt", start=start, end=end)
            value = self.expression()
            end = self.expect(";").end
            return Node("return_stmt", (value,), start=start, end=end)
        if self.at("throw"):
            self.advance()
            value = self.expression()
            end = self.expect(";").end
            return Node("throw_stmt", (value,), start=start, end=end)
        if self.at("break") or self.at("continue"):
            kind = self.advance().text
            if self.at_kind(IDENT):
                self.advance()  # label
            end = self.expect(";").end
            return Node(f"{kind}_stmt", start=start, end=end)
        if self.at("synchronized"):
            self.advance()
            self.expect("(")
            lock = self.expression()
            self.expect(")")
            body = self.block()
            return Node("synchronized_stmt", (lock, body), start=start, end=body.end)
        if self.at("assert"):
            self.advance()
            cond = self.expression()
            children = [cond]
            if self.at(":"):
                self.advance()
                children.append(self.expression())
            end = self.expect(";").end
            return Node("assert_stmt", tuple(children), start=start, end=end)
        decl = self.try_local_var(start)
        if decl is not None:
            return decl
        expr = self.expression()
        end = self.expect(";").end
        return Node("expr_stmt", (expr,), start=start, end=end)

    def try_local_var(self, start: int) -> Node | None:
        state = self.mark()
        try:
            if self.at("final"):
                self.advance()
            if not self.looks_like_type_ahead():
                raise ParseError("not a declaration", self.here())
            vtype = self.type()
            t = self.peek()
            if t is None or t.kind != IDENT:
                raise ParseError("not a declaration", self.here())
            after = self.peek(1)
            if after is None or after.text not in ("=", ",", ";", "["):
                raise ParseError("not a declaration", self.here())
            decls = [self.declarator()]
            while self.at(","):
                self.advance()
                decls.append(self.declarator())
            end = self.expect(";").end
            return Node("local_var", (vtype, *decls), start=start, end=end)
        except ParseError:
            self.restore(state)
            return None

    def declarator(self) -> Node:
        return self.declarator_tail(self.expect_ident())

    def declarator_tail(self, name: Token) -> Node:
        while self.at("["):
            self.advance()
            self.expect("]")
        leaf = Node("name", text=name.text, identifier=True, start=name.start, end=name.end)
        if self.at("="):
            self.advance()
            init = self.array_init() if self.at("{") else self.expression()
            return Node("declarator", (leaf, init), start=name.start, end=init.end)
        return Node("declarator", (leaf,), start=name.start, end=name.end)

    def if_stmt(self, start: int) -> Node:
        self.expect("if")
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        then = self.statement()
        if self.at("else"):
            self.advance()
            other = self.statement()
            return Node("if_stmt", (cond, then, other), start=start, end=other.end)
        return Node("if_stmt", (cond, then), start=start, end=then.end)

    def for_stmt(self, start: int) -> Node:
        self.expect("for")
        self.expect("(")
        state = self.mark()
        # enhanced for: ( [final] Type name : expr )
        try:
            if self.at("final"):
                self.advance()
            vtype = self.type()
            name = self.expect_ident()
            self.expect(":")
            iterable = self.expression()
            self.expect(")")
            body = self.statement()
            leaf = Node("name", text=name.text, identifier=True, start=name.start, end=name.end)
            var = Node("param", (vtype, leaf), start=vtype.start, end=name.end)
            return Node("foreach_stmt", (var, iterable, body), start=start, end=body.end)
        except ParseError:
            self.restore(state)
        init: Node | None = None
        if not self.at(";"):
            init = self.try_local_var(self.here())
            if init is None:
                init = Node("expr_list", tuple(self.expression_list()))
                self.expect(";")
        else:
            self.advance()
        cond = None
        if not self.at(";"):
            cond = self.expression()
        self.expect(";")
        update = None
        if not self.at(")"):
            update = Node("expr_list", tuple(self.expression_list()))
        self.expect(")")
        body = self.statement()
        children = tuple(c for c in (init, cond, update, body) if c is not None)
        return Node("for_stmt", children, start=start, end=body.end)

    def expression_list(self) -> list[Node]:
        out = [self.expression()]
        while self.at(","):
            self.advance()
            out.append(self.expression())
        return out

    def switch_stmt(self, start: int) -> Node:
        self.expect("switch")
        self.expect("(")
        selector = self.expression()
        self.expect(")")
        self.expect("{")
        cases: list[Node] = []
        label: list[Node] = []
        body: list[Node] = []
        case_start = -1

        def flush():
            nonlocal label, body, case_start
            if label or body:
                cases.append(Node("case", tuple(label + body), start=case_start))
                label, body = [], []

        while not self.at("}"):
            if self.peek() is None:
                raise ParseError("unterminated switch", len(self.code))
            if self.at("case"):
                flush()
                case_start = self.here()
                self.advance()
                label = [self.expression()]
                self.expect(":")
            elif self.at("default"):
                flush()
                case_start = self.here()
                self.advance()
                self.expect(":")
                label = [Node("default_label")]
            else:
                body.append(self.statement())
        flush()
        end = self.expect("}").end
        return Node("switch_stmt", (selector, *cases), start=start, end=end)

    def try_stmt(self, start: int) -> Node:
        self.expect("try")
        children: list[Node] = []
        if self.at("("):
            open_tok = self.advance()
            resources: list[Node] = []
            while not self.at(")"):
                if resources:
                    self.expect(";")
                    if self.at(")"):
                        break
                rstart = self.here()
                self.modifiers()
                rtype = self.type()
                name = self.expect_ident()
                self.expect("=")
                init = self.expression()
                leaf = Node("name", text=name.text, identifier=True, start=name.start, end=name.end)
                resources.append(
                    Node("declarator", (leaf, init), start=rstart, end=init.end)
                )
            close = self.expect(")")
            children.append(Node("resources", tuple(resources), start=open_tok.start, end=close.end))
        children.append(self.block())
        end = children[-1].end
        while self.at("catch"):
            cstart = self.here()
            self.advance()
            self.expect("(")
            self.modifiers()
            ctype = self.type()
            while self.at("|"):
                self.advance()
                self.type()
            name = self.expect_ident()
            self.expect(")")
            body = self.block()
            leaf = Node("name", text=name.text, identifier=True, start=name.start, end=name.end)
            children.append(Node("catch", (ctype, leaf, body), start=cstart, end=body.end))
            end = body.end
        if self.at("finally"):
            fstart = self.here()
            self.advance()
            body = self.block()
            children.append(Node("finally", (body,), start=fstart, end=body.end))
            end = body.end
        return Node("try_stmt", tuple(children), start=start, end=end)

    # --- expressions ------------------------------------------------------

    def expression(self) -> Node:
        return self.assignment()

    def assignment(self) -> Node:
        left = self.ternary()
        t = self.peek()
        if t is not None and t.text in _ASSIGN_OPS:
            op = self.advance().text
            right = self.assignment()
            return Node("assign", (left, right), text=op, start=left.start, end=right.end)
        return left

    def ternary(self) -> Node:
        cond = self.binary(0)
        if self.at("?"):
            self.advance()
            then = self.expression()
            self.expect(":")
            other = self.ternary()
            return Node("ternary", (cond, then, other), start=cond.start, end=other.end)
        return cond

    _LEVELS: tuple[tuple[str, ...], ...] = (
        ("||",),
        ("&&",),
        ("|",),
        ("^",),
        ("&",),
        ("==", "!="),
        ("<", ">", "<=", ">=", "instanceof"),
        ("<<", ">>", ">>>"),
        ("+", "-"),
        ("*", "/", "%"),
    )

    def binary(self, level: int) -> Node:
        if level >= len(self._LEVELS):
            return self.unary()
        left = self.binary(level + 1)
        while True:
            t = self.peek()
            if t is None or t.text not in self._LEVELS[level]:
                return left
            # '|' inside multi-catch and '>' closing generics never reach here
            op = self.advance().text
            if op == "instanceof":
                right: Node = self.type()
                if self.at_kind(IDENT):  # pattern variable, Java 16+
                    nm = self.advance()
                    right = Node(
                        "pattern",
                        (right, Node("name", text=nm.text, identifier=True, start=nm.start, end=nm.end)),
                        start=right.start,
                        end=nm.end,
                    )
            else:
                right = self.binary(level + 1)
            left = Node("binary", (left, right), text=op, start=left.start, end=right.end)

    def unary(self) -> Node:
        t = self.peek()
        if t is not None and t.text in ("+", "-", "!", "~", "++", "--"):
            self.advance()
            operand = self.unary()
            return Node("unary", (operand,), text=t.text, start=t.start, end=operand.end)
        cast = self.try_cast()
        if cast is not None:
            return cast
        return self.postfix()

    def try_cast(self) -> Node | None:
        if not self.at("("):
            return None
        state = self.mark()
        try:
            open_tok = self.advance()
            ctype = self.type()
            self.expect(")")
            nxt = self.peek()
            if nxt is None:
                raise ParseError("not a cast", self.here())
            starts_value = (
                nxt.kind in (IDENT, NUMBER, STRING)
                or nxt.text in ("(", "!", "~", "new", "this", "super")
            )
            if not starts_value or nxt.text in _ASSIGN_OPS:
                raise ParseError("not a cast", nxt.start)
            operand = self.unary()
            return Node("cast", (ctype, operand), start=open_tok.start, end=operand.end)
        except ParseError:
            self.restore(state)
            return None

    def postfix(self) -> Node:
        node = self.primary()
        while True:
            if self.at("."):
                dot_next = self.peek(1)
                if dot_next is not None and dot_next.text == "class":
                    self.advance()
                    cls = self.advance()
                    node = Node("class_literal", (node,), start=node.start, end=cls.end)
                    continue
                if dot_next is not None and dot_next.kind == IDENT:
                    self.advance()
                    member = self.advance()
                    leaf = Node("member", text=member.text, identifier=True, start=member.start, end=member.end)
                    if self.at("("):
                        args = self.call_args()
                        node = Node("call", (node, leaf, args), start=node.start, end=args.end)
                    else:
                        node = Node("field_access", (node, leaf), start=node.start, end=member.end)
                    continue
                break
            if self.at("["):
                self.advance()
                index = self.expression()
                close = self.expect("]")
                node = Node("index", (node, index), start=node.start, end=close.end)
                continue
            if self.at("::"):
                self.advance()
                member = self.advance()
                node = Node(
                    "method_ref",
                    (node, Node("member", text=member.text, identifier=True, start=member.start, end=member.end)),
                    start=node.start,
                    end=member.end,
                )
                continue
            if self.at("++") or self.at("--"):
                t = self.advance()
                node = Node("postfix", (node,), text=t.text, start=node.start, end=t.end)
                continue
            break
        return node

    def call_args(self) -> Node:
        open_tok = self.expect("(")
        args: list[Node] = []
        while not self.at(")"):
            if args:
                self.expect(",")
            args.append(self.array_init() if self.at("{") else self.expression())
        close = self.expect(")")
        return Node("args", tuple(args), start=open_tok.start, end=close.end)

    def try_lambda(self) -> Node | None:
        t = self.peek()
        if t is None:
            return None
        if t.kind == IDENT and (p := self.peek(1)) is not None and p.text == "->":
            name = self.advance()
            self.advance()
            body = self.block() if self.at("{") else self.expression()
            leaf = Node("name", text=name.text, identifier=True, start=name.start, end=name.end)
            return Node("lambda", (Node("params", (Node("param", (leaf,)),)), body), start=name.start, end=body.end)
        if t.text == "(":
            state = self.mark()
            depth = 0
            j = self.i
            while j < len(self.toks):
                txt = self.toks[j].text
                if txt == "(":
                    depth += 1
                elif txt == ")":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            after = self.toks[j + 1] if j + 1 < len(self.toks) else None
            if after is not None and after.text == "->":
                try:
                    self.advance()
                    params: list[Node] = []
                    while not self.at(")"):
                        if params:
                            self.expect(",")
                        pstart = self.here()
                        self.modifiers()
                        tok = self.expect_ident()
                        if self.at_kind(IDENT):  # typed parameter
                            self.i -= 1
                            ptype = self.type()
                            name_tok = self.expect_ident()
                            leaf = Node("name", text=name_tok.text, identifier=True, start=name_tok.start, end=name_tok.end)
                            params.append(Node("param", (ptype, leaf), start=pstart, end=name_tok.end))
                        else:
                            leaf = Node("name", text=tok.text, identifier=True, start=tok.start, end=tok.end)
                            params.append(Node("param", (leaf,), start=pstart, end=tok.end))
                    self.expect(")")
                    self.expect("->")
                    body = self.block() if self.at("{") else self.expression()
                    return Node("lambda", (Node("params", tuple(params)), body), start=t.start, end=body.end)
                except ParseError:
                    self.restore(state)
                    return None
        return None

    def primary(self) -> Node:
        lam = self.try_lambda()
        if lam is not None:
            return lam
        t = self.peek()
        if t is None:
            raise ParseError("expected an expression", len(self.code))
        if t.kind in (NUMBER, STRING):
            self.advance()
            return Node("literal", text=t.text, start=t.start, end=t.end)
        if t.text in ("true", "false", "null"):
            self.advance()
            return Node("literal", text=t.text, start=t.start, end=t.end)
        if t.text in ("this", "super"):
            self.advance()
            node = Node(t.text, start=t.start, end=t.end)
            if self.at("("):
                args = self.call_args()
                return Node("call", (node, args), start=t.start, end=args.end)
            return node
        if t.text == "new":
            return self.creator()
        if t.text == "(":
            self.advance()
            inner = self.expression()
            close = self.expect(")")
            return Node("paren", (inner,), start=t.start, end=close.end)
        if t.kind == IDENT:
            self.advance()
            name = Node("name", text=t.text, identifier=True, start=t.start, end=t.end)
            if self.at("("):
                args = self.call_args()
                return Node("call", (name, args), start=t.start, end=args.end)
            return name
        raise ParseError(f"unexpected token {t.text!r}", t.start)

    def creator(self) -> Node:
        start = self.expect("new").start
        ctype = self.type()
        if self.at("("):
            args = self.call_args()
            children: list[Node] = [ctype, args]
            end = args.end
            if self.at("{"):  # anonymous class
                body = self.class_body()
                children.append(body)
                end = body.end
            return Node("new_object", tuple(children), start=start, end=end)
        if self.at("["):
            dims: list[Node] = []
            while self.at("["):
                self.advance()
                if self.at("]"):
                    close = self.advance()
                    dims.append(Node("dim", start=close.start, end=close.end))
                else:
                    dims.append(self.expression())
                    self.expect("]")
            children = [ctype, *dims]
            end = dims[-1].end if dims else ctype.end
            if self.at("{"):
                init = self.array_init()
                children.append(init)
                end = init.end
            return Node("new_array", tuple(children), start=start, end=end)
        if self.at("{"):
            init = self.array_init()
            return Node("new_array", (ctype, init), start=start, end=init.end)
        raise ParseError("malformed object creation", self.here())

    def array_init(self) -> Node:
        open_tok = self.expect("{")
        items: list[Node] = []
        while not self.at("}"):
            if items:
                self.expect(",")
                if self.at("}"):
                    break
            items.append(self.array_init() if self.at("{") else self.expression())
        close = self.expect("}")
        return Node("array_init", tuple(items), start=open_tok.start, end=close.end)
