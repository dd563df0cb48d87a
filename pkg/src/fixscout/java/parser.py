"""Recursive-descent parser for a Java subset.

Covered: classes/interfaces (incl. nested and anonymous), fields, methods,
constructors, initializer blocks, local variables, if/else, while, do-while,
for, enhanced-for, switch, try/catch/finally (incl. resources), break/continue
without labels, throw, return, assert, and the usual expression forms.
Generic type arguments are scanned and erased to raw names, annotations are
skipped as trivia, and lambdas / method references become opaque leaves.

Anything else produces a ``ParseFailure`` value carrying the first offending
position; callers treat that as data, not as an error.
"""

from __future__ import annotations

from fixscout.java.lexer import LexError, Token, tokenize
from fixscout.java.nodes import AstNode, NodeKind, ParseFailure

MODIFIER_WORDS = frozenset(
    "public protected private static final abstract synchronized native transient volatile strictfp default".split()
)

PRIMITIVE_TYPES = frozenset("boolean byte char short int long float double void".split())

_ASSIGN_OPS = frozenset({"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="})


class _ParseError(Exception):
    def __init__(self, token: Token, message: str):
        super().__init__(f"{token.line}:{token.column}: {message}")
        self.token = token
        self.message = message


def parse_file(text: str) -> AstNode | ParseFailure:
    """Parse one compilation unit; returns a ParseFailure value instead of raising."""
    try:
        tokens = tokenize(text)
    except LexError as e:
        return ParseFailure(e.line, e.column, e.message)
    try:
        return _Parser(tokens).compilation_unit()
    except _ParseError as e:
        return ParseFailure(e.token.line, e.token.column, e.message)
    except RecursionError:
        return ParseFailure(1, 1, "nesting too deep for the subset parser")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # --- token helpers -------------------------------------------------

    def cur(self) -> Token:
        return self.tokens[self.pos]

    def prev(self) -> Token:
        return self.tokens[self.pos - 1] if self.pos else self.tokens[0]

    def at(self, text: str) -> bool:
        return self.cur().text == text and self.cur().type in ("op", "keyword")

    def at_any(self, *texts: str) -> bool:
        return any(self.at(t) for t in texts)

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise _ParseError(self.cur(), f"expected {text!r}, found {self.cur().text!r}")
        tok = self.cur()
        self.pos += 1
        return tok

    def expect_ident(self) -> Token:
        if self.cur().type != "ident":
            raise _ParseError(self.cur(), f"expected identifier, found {self.cur().text!r}")
        tok = self.cur()
        self.pos += 1
        return tok

    def fail(self, message: str):
        raise _ParseError(self.cur(), message)

    # --- trivia ---------------------------------------------------------

    def skip_annotations(self) -> None:
        while self.at("@"):
            if self.tokens[self.pos + 1].text == "interface":
                self.fail("annotation declarations are outside the subset")
            self.pos += 1
            self.expect_ident()
            while self.accept("."):
                self.expect_ident()
            if self.at("("):
                self._skip_balanced("(", ")")

    def _skip_balanced(self, open_text: str, close_text: str) -> None:
        depth = 0
        while True:
            tok = self.cur()
            if tok.type == "eof":
                self.fail(f"unbalanced {open_text!r}")
            if tok.text == open_text:
                depth += 1
            elif tok.text == close_text:
                depth -= 1
                if depth == 0:
                    self.pos += 1
                    return
            self.pos += 1

    def modifiers(self) -> tuple[str, ...]:
        mods: list[str] = []
        while True:
            self.skip_annotations()
            if self.cur().type == "keyword" and self.cur().text in MODIFIER_WORDS:
                mods.append(self.cur().text)
                self.pos += 1
            else:
                return tuple(mods)

    # --- types ----------------------------------------------------------

    def try_type(self) -> str | None:
        """Parse a type reference, returning its raw (generics-erased) name, or None."""
        mark = self.pos
        name = self._type_name()
        if name is None:
            self.pos = mark
            return None
        dims = ""
        while self.at("[") and self.tokens[self.pos + 1].text == "]":
            self.pos += 2
            dims += "[]"
        return name + dims

    def parse_type(self) -> str:
        name = self.try_type()
        if name is None:
            self.fail(f"expected type, found {self.cur().text!r}")
        return name

    def _type_name(self) -> str | None:
        tok = self.cur()
        if tok.type == "keyword" and tok.text in PRIMITIVE_TYPES:
            self.pos += 1
            return tok.text
        if tok.type != "ident":
            return None
        parts = [tok.text]
        self.pos += 1
        if self.at("<") and not self._scan_type_args():
            return None
        while self.at(".") and self.tokens[self.pos + 1].type == "ident":
            self.pos += 1
            parts.append(self.cur().text)
            self.pos += 1
            if self.at("<") and not self._scan_type_args():
                return None
        return ".".join(parts)

    def _scan_type_args(self) -> bool:
        """Consume a balanced ``<...>`` group containing only type-ish tokens.

        ``>>`` and ``>>>`` close two / three levels, which sidesteps the usual
        generics-vs-shift lexing conflict. Returns False (position restored)
        when the group is not a plausible type-argument list.
        """
        mark = self.pos
        depth = 0
        while True:
            tok = self.cur()
            if tok.text == "<":
                depth += 1
            elif tok.text == ">":
                depth -= 1
            elif tok.text == ">>":
                depth -= 2
            elif tok.text == ">>>":
                depth -= 3
            elif tok.text in (",", ".", "?", "&", "[", "]", "@"):
                pass
            elif tok.type == "ident" or (tok.type == "keyword" and tok.text in PRIMITIVE_TYPES | {"extends", "super"}):
                pass
            else:
                self.pos = mark
                return False
            self.pos += 1
            if depth <= 0:
                return True

    # --- compilation unit -------------------------------------------------

    def compilation_unit(self) -> AstNode:
        start = self.cur().line
        self.skip_annotations()
        if self.accept("package"):
            self.expect_ident()
            while self.accept("."):
                self.expect_ident()
            self.expect(";")
        while self.at("import"):
            self.pos += 1
            self.accept("static")
            self.expect_ident()
            while self.accept("."):
                if self.accept("*"):
                    break
                self.expect_ident()
            self.expect(";")
        types: list[AstNode] = []
        while self.cur().type != "eof":
            if self.accept(";"):
                continue
            types.append(self.type_declaration())
        end = self.prev().line if types else start
        return AstNode(NodeKind.COMPILATION_UNIT, (start, max(start, end)), types)

    def type_declaration(self) -> AstNode:
        start = self.cur().line
        mods = self.modifiers()
        if self.at("class"):
            return self.class_declaration(mods, start)
        if self.at("interface"):
            return self.interface_declaration(mods, start)
        if self.at_any("enum", "record"):
            self.fail(f"{self.cur().text} declarations are outside the subset")
        self.fail(f"expected type declaration, found {self.cur().text!r}")

    def class_declaration(self, mods: tuple[str, ...], start: int) -> AstNode:
        self.expect("class")
        name = self.expect_ident().text
        if self.at("<"):
            self._scan_type_args() or self.fail("malformed type parameters")
        extends = None
        if self.accept("extends"):
            extends = self.parse_type()
        if self.accept("implements"):
            self.parse_type()
            while self.accept(","):
                self.parse_type()
        members = self.class_body(name)
        node = AstNode(NodeKind.CLASS_DECL, (start, self.prev().line), members, token=name, modifiers=mods)
        node.type_name = extends
        return node

    def interface_declaration(self, mods: tuple[str, ...], start: int) -> AstNode:
        self.expect("interface")
        name = self.expect_ident().text
        if self.at("<"):
            self._scan_type_args() or self.fail("malformed type parameters")
        extends = None
        if self.accept("extends"):
            extends = self.parse_type()
            while self.accept(","):
                self.parse_type()
        members = self.class_body(name)
        node = AstNode(NodeKind.INTERFACE_DECL, (start, self.prev().line), members, token=name, modifiers=mods)
        node.type_name = extends
        return node

    def class_body(self, class_name: str) -> list[AstNode]:
        self.expect("{")
        members: list[AstNode] = []
        while not self.at("}"):
            if self.cur().type == "eof":
                self.fail("unexpected end of file in class body")
            if self.accept(";"):
                continue
            members.extend(self.member(class_name))
        self.expect("}")
        return members

    def member(self, class_name: str) -> list[AstNode]:
        start = self.cur().line
        mods = self.modifiers()
        if self.at("class"):
            return [self.class_declaration(mods, start)]
        if self.at("interface"):
            return [self.interface_declaration(mods, start)]
        if self.at_any("enum", "record"):
            self.fail(f"{self.cur().text} declarations are outside the subset")
        if self.at("{"):  # initializer block (mods may carry `static`)
            return [self.block()]
        if self.at("<"):  # generic method
            self._scan_type_args() or self.fail("malformed type parameters")
        # constructor: bare name followed by `(`
        if self.cur().type == "ident" and self.cur().text == class_name and self.tokens[self.pos + 1].text == "(":
            name = self.expect_ident().text
            return [self.method_rest(name, None, mods, start)]
        rtype = self.parse_type()
        name = self.expect_ident().text
        if self.at("("):
            return [self.method_rest(name, rtype, mods, start)]
        return self.field_rest(name, rtype, mods, start)

    def method_rest(self, name: str, rtype: str | None, mods: tuple[str, ...], start: int) -> AstNode:
        params = self.parameter_list()
        while self.at("[") and self.tokens[self.pos + 1].text == "]":
            self.pos += 2  # archaic `int f()[]` return dims
        if self.accept("throws"):
            self.parse_type()
            while self.accept(","):
                self.parse_type()
        children: list[AstNode] = list(params)
        if self.at("{"):
            children.append(self.block())
        else:
            self.expect(";")  # abstract / interface method
        node = AstNode(NodeKind.METHOD_DECL, (start, self.prev().line), children, token=name, modifiers=mods)
        node.type_name = rtype
        return node

    def parameter_list(self) -> list[AstNode]:
        self.expect("(")
        params: list[AstNode] = []
        if not self.at(")"):
            while True:
                self.skip_annotations()
                line = self.cur().line
                self.accept("final")
                ptype = self.parse_type()
                if self.accept("..."):
                    ptype += "[]"
                pname = self.expect_ident().text
                while self.at("[") and self.tokens[self.pos + 1].text == "]":
                    self.pos += 2
                    ptype += "[]"
                param = AstNode(NodeKind.PARAM, (line, self.prev().line), token=pname)
                param.type_name = ptype
                params.append(param)
                if not self.accept(","):
                    break
        self.expect(")")
        return params

    def field_rest(self, name: str, ftype: str, mods: tuple[str, ...], start: int) -> list[AstNode]:
        fields = [self._one_field(name, ftype, mods, start)]
        while self.accept(","):
            name = self.expect_ident().text
            dtype = ftype
            while self.at("[") and self.tokens[self.pos + 1].text == "]":
                self.pos += 2
                dtype += "[]"
            fields.append(self._one_field(name, dtype, mods, start))
        self.expect(";")
        end = self.prev().line
        for f in fields:
            f.span = (f.span[0], end)
        return fields

    def _one_field(self, name: str, ftype: str, mods: tuple[str, ...], start: int) -> AstNode:
        children: list[AstNode] = []
        if self.accept("="):
            children.append(self.variable_initializer())
        node = AstNode(NodeKind.FIELD_DECL, (start, self.prev().line), children, token=name, modifiers=mods)
        node.type_name = ftype
        return node

    def variable_initializer(self) -> AstNode:
        if self.at("{"):
            return self.array_initializer()
        return self.expression()

    def array_initializer(self) -> AstNode:
        start = self.cur().line
        self.expect("{")
        items: list[AstNode] = []
        if not self.at("}"):
            while True:
                if self.at("}"):
                    break  # trailing comma
                items.append(self.variable_initializer())
                if not self.accept(","):
                    break
        self.expect("}")
        return AstNode(NodeKind.ARRAY_INIT, (start, self.prev().line), items)

    # --- statements -------------------------------------------------------

    def block(self) -> AstNode:
        start = self.cur().line
        self.expect("{")
        stmts: list[AstNode] = []
        while not self.at("}"):
            if self.cur().type == "eof":
                self.fail("unexpected end of file in block")
            stmts.append(self.statement())
        self.expect("}")
        return AstNode(NodeKind.BLOCK, (start, self.prev().line), stmts)

    def statement(self) -> AstNode:
        self.skip_annotations()
        tok = self.cur()
        start = tok.line
        if self.at("{"):
            return self.block()
        if self.accept(";"):
            return AstNode(NodeKind.EMPTY, (start, start))
        if tok.type == "keyword":
            handler = {
                "if": self.if_statement,
                "while": self.while_statement,
                "do": self.do_statement,
                "for": self.for_statement,
                "switch": self.switch_statement,
                "try": self.try_statement,
                "return": self.return_statement,
                "throw": self.throw_statement,
                "break": self.break_statement,
                "continue": self.continue_statement,
                "assert": self.assert_statement,
            }.get(tok.text)
            if handler is not None:
                return handler()
            if tok.text in ("class", "interface", "enum", "record", "synchronized"):
                self.fail(f"{tok.text} statements are outside the subset")
            if tok.text == "final" or tok.text in PRIMITIVE_TYPES:
                return self.local_var_statement()
        decl = self.try_local_var_statement()
        if decl is not None:
            return decl
        expr = self.expression()
        self.expect(";")
        return AstNode(NodeKind.EXPR_STATEMENT, (start, self.prev().line), [expr])

    def try_local_var_statement(self) -> AstNode | None:
        if self.cur().type != "ident":
            return None
        mark = self.pos
        vtype = self.try_type()
        if vtype is None or self.cur().type != "ident":
            self.pos = mark
            return None
        nxt = self.tokens[self.pos + 1].text
        if nxt not in ("=", ",", ";", "["):
            self.pos = mark
            return None
        try:
            return self.local_var_rest(vtype, self.tokens[mark].line)
        except _ParseError:
            self.pos = mark
            return None

    def local_var_statement(self) -> AstNode:
        start = self.cur().line
        self.accept("final")
        self.skip_annotations()
        vtype = self.parse_type()
        return self.local_var_rest(vtype, start)

    def local_var_rest(self, vtype: str, start: int, consume_semi: bool = True) -> AstNode:
        declarators: list[AstNode] = []
        while True:
            name_tok = self.expect_ident()
            dtype = vtype
            while self.at("[") and self.tokens[self.pos + 1].text == "]":
                self.pos += 2
                dtype += "[]"
            ident = AstNode(NodeKind.IDENTIFIER, (name_tok.line, name_tok.line), token=name_tok.text)
            if self.at("="):
                eq = self.cur()
                self.pos += 1
                init = self.variable_initializer()
                declarators.append(
                    AstNode(NodeKind.ASSIGN, (name_tok.line, self.prev().line), [ident, init], token=eq.text)
                )
            else:
                declarators.append(ident)
            if not self.accept(","):
                break
        if consume_semi:
            self.expect(";")
        node = AstNode(NodeKind.LOCAL_VAR_DECL, (start, self.prev().line), declarators)
        node.type_name = vtype
        return node

    def if_statement(self) -> AstNode:
        start = self.cur().line
        self.expect("if")
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        then = self.statement()
        children = [cond, then]
        if self.accept("else"):
            children.append(self.statement())
        return AstNode(NodeKind.IF, (start, self.prev().line), children)

    def while_statement(self) -> AstNode:
        start = self.cur().line
        self.expect("while")
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        body = self.statement()
        return AstNode(NodeKind.WHILE, (start, self.prev().line), [cond, body])

    def do_statement(self) -> AstNode:
        start = self.cur().line
        self.expect("do")
        body = self.statement()
        self.expect("while")
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        self.expect(";")
        return AstNode(NodeKind.DO_WHILE, (start, self.prev().line), [body, cond])

    def for_statement(self) -> AstNode:
        start = self.cur().line
        self.expect("for")
        self.expect("(")
        enhanced = self._try_enhanced_for(start)
        if enhanced is not None:
            return enhanced
        if self.at(";"):
            init: AstNode = AstNode(NodeKind.EMPTY, (self.cur().line, self.cur().line))
            self.pos += 1
        else:
            init = self._for_init()
            self.expect(";")
        if self.at(";"):
            cond: AstNode = AstNode(NodeKind.EMPTY, (self.cur().line, self.cur().line))
        else:
            cond = self.expression()
        self.expect(";")
        if self.at(")"):
            update: AstNode = AstNode(NodeKind.EMPTY, (self.cur().line, self.cur().line))
        else:
            line = self.cur().line
            exprs = [self.expression()]
            while self.accept(","):
                exprs.append(self.expression())
            update = AstNode(NodeKind.EXPR_STATEMENT, (line, self.prev().line), exprs)
        self.expect(")")
        body = self.statement()
        return AstNode(NodeKind.FOR, (start, self.prev().line), [init, cond, update, body])

    def _try_enhanced_for(self, start: int) -> AstNode | None:
        mark = self.pos
        self.accept("final")
        vtype = self.try_type()
        if vtype is None or self.cur().type != "ident" or self.tokens[self.pos + 1].text != ":":
            self.pos = mark
            return None
        name_tok = self.expect_ident()
        self.expect(":")
        iterable = self.expression()
        self.expect(")")
        body = self.statement()
        var = AstNode(NodeKind.IDENTIFIER, (name_tok.line, name_tok.line), token=name_tok.text)
        var.type_name = vtype
        return AstNode(NodeKind.FOR_EACH, (start, self.prev().line), [var, iterable, body])

    def _for_init(self) -> AstNode:
        mark = self.pos
        line = self.cur().line
        if self.at("final") or (self.cur().type == "keyword" and self.cur().text in PRIMITIVE_TYPES):
            self.accept("final")
            return self.local_var_rest(self.parse_type(), line, consume_semi=False)
        if self.cur().type == "ident":
            vtype = self.try_type()
            if vtype is not None and self.cur().type == "ident":
                try:
                    return self.local_var_rest(vtype, line, consume_semi=False)
                except _ParseError:
                    self.pos = mark
            else:
                self.pos = mark
        exprs = [self.expression()]
        while self.accept(","):
            exprs.append(self.expression())
        return AstNode(NodeKind.EXPR_STATEMENT, (line, self.prev().line), exprs)

    def switch_statement(self) -> AstNode:
        start = self.cur().line
        self.expect("switch")
        self.expect("(")
        selector = self.expression()
        self.expect(")")
        self.expect("{")
        cases: list[AstNode] = []
        while not self.at("}"):
            cases.append(self._switch_case())
        self.expect("}")
        return AstNode(NodeKind.SWITCH, (start, self.prev().line), [selector] + cases)

    def _switch_case(self) -> AstNode:
        start = self.cur().line
        children: list[AstNode] = []
        if self.accept("case"):
            label = "case"
            children.append(self.expression())
            while self.at(",") :  # multi-label cases collapse into one Case node
                self.pos += 1
                children.append(self.expression())
        else:
            self.expect("default")
            label = "default"
        if self.at("->"):
            self.fail("arrow switch cases are outside the subset")
        self.expect(":")
        while not self.at_any("case", "default", "}"):
            children.append(self.statement())
        return AstNode(NodeKind.CASE, (start, self.prev().line), children, token=label)

    def try_statement(self) -> AstNode:
        start = self.cur().line
        self.expect("try")
        resources: list[AstNode] = []
        if self.at("("):
            self.pos += 1
            while not self.at(")"):
                self.accept("final")
                line = self.cur().line
                resources.append(self.local_var_rest(self.parse_type(), line, consume_semi=False))
                if not self.accept(";"):
                    break
            self.expect(")")
        body = self.block()
        body.children[:0] = resources
        children: list[AstNode] = [body]
        while self.at("catch"):
            children.append(self._catch_clause())
        if self.at("finally"):
            fline = self.cur().line
            self.pos += 1
            fblock = self.block()
            children.append(AstNode(NodeKind.FINALLY, (fline, self.prev().line), [fblock]))
        if len(children) == 1:
            self.fail("try without catch or finally")
        return AstNode(NodeKind.TRY, (start, self.prev().line), children)

    def _catch_clause(self) -> AstNode:
        start = self.cur().line
        self.expect("catch")
        self.expect("(")
        self.accept("final")
        types = [self.parse_type()]
        while self.accept("|"):
            types.append(self.parse_type())
        name_tok = self.expect_ident()
        self.expect(")")
        block = self.block()
        param = AstNode(NodeKind.IDENTIFIER, (name_tok.line, name_tok.line), token=name_tok.text)
        return AstNode(NodeKind.CATCH, (start, self.prev().line), [param, block], token="|".join(types))

    def return_statement(self) -> AstNode:
        start = self.cur().line
        self.expect("return")
        children = [] if self.at(";") else [self.expression()]
        self.expect(";")
        return AstNode(NodeKind.RETURN, (start, self.prev().line), children)

    def throw_statement(self) -> AstNode:
        start = self.cur().line
        self.expect("throw")
        expr = self.expression()
        self.expect(";")
        return AstNode(NodeKind.THROW, (start, self.prev().line), [expr])

    def break_statement(self) -> AstNode:
        start = self.cur().line
        self.expect("break")
        if self.cur().type == "ident":
            self.fail("labeled break is outside the subset")
        self.expect(";")
        return AstNode(NodeKind.BREAK, (start, start))

    def continue_statement(self) -> AstNode:
        start = self.cur().line
        self.expect("continue")
        if self.cur().type == "ident":
            self.fail("labeled continue is outside the subset")
        self.expect(";")
        return AstNode(NodeKind.CONTINUE, (start, start))

    def assert_statement(self) -> AstNode:
        start = self.cur().line
        self.expect("assert")
        exprs = [self.expression()]
        if self.accept(":"):
            exprs.append(self.expression())
        self.expect(";")
        return AstNode(NodeKind.EXPR_STATEMENT, (start, self.prev().line), exprs)

    # --- expressions --------------------------------------------------------

    def expression(self) -> AstNode:
        return self.assignment()

    def assignment(self) -> AstNode:
        left = self.conditional()
        if self.cur().type == "op" and self.cur().text in _ASSIGN_OPS:
            op = self.cur().text
            self.pos += 1
            right = self.assignment()
            return AstNode(NodeKind.ASSIGN, (left.span[0], right.span[1]), [left, right], token=op)
        return left

    def conditional(self) -> AstNode:
        cond = self.binary(0)
        if self.at("?"):
            self.pos += 1
            then = self.expression()
            self.expect(":")
            other = self.conditional()
            return AstNode(NodeKind.CONDITIONAL, (cond.span[0], other.span[1]), [cond, then, other])
        return cond

    _BINARY_LEVELS = [
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
    ]

    def binary(self, level: int) -> AstNode:
        if level >= len(self._BINARY_LEVELS):
            return self.unary()
        ops = self._BINARY_LEVELS[level]
        left = self.binary(level + 1)
        while True:
            tok = self.cur()
            if tok.text not in ops or tok.type not in ("op", "keyword"):
                return left
            self.pos += 1
            if tok.text == "instanceof":
                tname = self.parse_type()
                rhs = AstNode(NodeKind.IDENTIFIER, (self.prev().line, self.prev().line), token=tname)
                rhs.type_name = tname
            else:
                rhs = self.binary(level + 1)
            left = AstNode(NodeKind.BINARY_OP, (left.span[0], rhs.span[1]), [left, rhs], token=tok.text)

    def unary(self) -> AstNode:
        tok = self.cur()
        if tok.type == "op" and tok.text in ("+", "-", "!", "~", "++", "--"):
            self.pos += 1
            operand = self.unary()
            return AstNode(NodeKind.UNARY_OP, (tok.line, operand.span[1]), [operand], token=tok.text)
        cast = self._try_cast()
        if cast is not None:
            return cast
        return self.postfix()

    def _try_cast(self) -> AstNode | None:
        if not self.at("("):
            return None
        mark = self.pos
        line = self.cur().line
        self.pos += 1
        ctype = self.try_type()
        if ctype is None or not self.at(")"):
            self.pos = mark
            return None
        self.pos += 1
        nxt = self.cur()
        primitive = ctype.rstrip("[]") in PRIMITIVE_TYPES
        starts_operand = (
            nxt.type in ("ident", "int", "float", "string", "char")
            or nxt.text in ("(", "!", "~")
            or (nxt.type == "keyword" and nxt.text in ("new", "this", "super", "true", "false", "null"))
        )
        if not starts_operand or (not primitive and nxt.text in ("+", "-")):
            self.pos = mark
            return None
        operand = self.unary()
        node = AstNode(NodeKind.CAST, (line, operand.span[1]), [operand])
        node.type_name = ctype
        return node

    def postfix(self) -> AstNode:
        expr = self.primary()
        while True:
            tok = self.cur()
            if tok.text == "." and tok.type == "op":
                nxt = self.tokens[self.pos + 1]
                if nxt.type == "ident":
                    self.pos += 2
                    if self.at("("):
                        args = self.argument_list()
                        # modifiers mark that children[0] is the receiver, not an argument
                        expr = AstNode(
                            NodeKind.CALL,
                            (expr.span[0], self.prev().line),
                            [expr] + args,
                            token=nxt.text,
                            modifiers=("receiver",),
                        )
                    else:
                        expr = AstNode(NodeKind.FIELD_ACCESS, (expr.span[0], nxt.line), [expr], token=nxt.text)
                elif nxt.type == "keyword" and nxt.text in ("class", "this"):
                    self.pos += 2
                    expr = AstNode(NodeKind.FIELD_ACCESS, (expr.span[0], nxt.line), [expr], token=nxt.text)
                else:
                    self.fail(f"unsupported member access .{nxt.text!r}")
            elif tok.text == "[" and tok.type == "op":
                self.pos += 1
                index = self.expression()
                self.expect("]")
                expr = AstNode(NodeKind.INDEX, (expr.span[0], self.prev().line), [expr, index])
            elif tok.text in ("++", "--") and tok.type == "op":
                self.pos += 1
                expr = AstNode(NodeKind.UNARY_OP, (expr.span[0], tok.line), [expr], token=tok.text)
            elif tok.text == "::" and tok.type == "op":
                self.pos += 1
                if not self.accept("new"):
                    self.expect_ident()
                expr = AstNode(NodeKind.LAMBDA, (expr.span[0], self.prev().line), [expr])
            else:
                return expr

    def argument_list(self) -> list[AstNode]:
        self.expect("(")
        args: list[AstNode] = []
        if not self.at(")"):
            while True:
                args.append(self.expression())
                if not self.accept(","):
                    break
        self.expect(")")
        return args

    def primary(self) -> AstNode:
        tok = self.cur()
        if tok.type in ("int", "float", "string", "char"):
            self.pos += 1
            node = AstNode(NodeKind.LITERAL, (tok.line, tok.line), token=tok.text)
            node.literal_kind = tok.type
            return node
        if tok.type == "keyword":
            if tok.text in ("true", "false"):
                self.pos += 1
                node = AstNode(NodeKind.LITERAL, (tok.line, tok.line), token=tok.text)
                node.literal_kind = "bool"
                return node
            if tok.text == "null":
                self.pos += 1
                node = AstNode(NodeKind.LITERAL, (tok.line, tok.line), token=tok.text)
                node.literal_kind = "null"
                return node
            if tok.text in ("this", "super"):
                self.pos += 1
                if self.at("("):
                    args = self.argument_list()
                    return AstNode(NodeKind.CALL, (tok.line, self.prev().line), args, token=tok.text)
                return AstNode(NodeKind.IDENTIFIER, (tok.line, tok.line), token=tok.text)
            if tok.text == "new":
                return self.new_expression()
            if tok.text in PRIMITIVE_TYPES:
                # e.g. `int.class` or `long[].class`
                self.pos += 1
                while self.at("[") and self.tokens[self.pos + 1].text == "]":
                    self.pos += 2
                node = AstNode(NodeKind.IDENTIFIER, (tok.line, tok.line), token=tok.text)
                node.type_name = tok.text
                return node
            self.fail(f"unexpected keyword {tok.text!r} in expression")
        if tok.type == "ident":
            if self.tokens[self.pos + 1].text == "->":
                return self._opaque_lambda()
            self.pos += 1
            if self.at("("):
                args = self.argument_list()
                return AstNode(NodeKind.CALL, (tok.line, self.prev().line), args, token=tok.text)
            return AstNode(NodeKind.IDENTIFIER, (tok.line, tok.line), token=tok.text)
        if tok.text == "(" and tok.type == "op":
            if self._lambda_ahead():
                return self._opaque_lambda()
            self.pos += 1
            inner = self.expression()
            self.expect(")")
            return inner
        self.fail(f"unexpected token {tok.text!r} in expression")

    def _lambda_ahead(self) -> bool:
        """True when the parenthesized group at the cursor is a lambda parameter list."""
        depth = 0
        j = self.pos
        while j < len(self.tokens):
            text = self.tokens[j].text
            if text == "(":
                depth += 1
            elif text == ")":
                depth -= 1
                if depth == 0:
                    return j + 1 < len(self.tokens) and self.tokens[j + 1].text == "->"
            elif self.tokens[j].type == "eof":
                return False
            j += 1
        return False

    def _opaque_lambda(self) -> AstNode:
        start = self.cur().line
        if self.at("("):
            self._skip_balanced("(", ")")
        else:
            self.expect_ident()
        self.expect("->")
        if self.at("{"):
            self._skip_balanced("{", "}")
        else:
            self._skip_lambda_expression()
        return AstNode(NodeKind.LAMBDA, (start, self.prev().line))

    def _skip_lambda_expression(self) -> None:
        depth = 0
        while True:
            tok = self.cur()
            if tok.type == "eof":
                self.fail("unterminated lambda body")
            if tok.text in ("(", "[", "{"):
                depth += 1
            elif tok.text in (")", "]", "}"):
                if depth == 0:
                    return
                depth -= 1
            elif depth == 0 and tok.text in (",", ";"):
                return
            self.pos += 1

    def new_expression(self) -> AstNode:
        start = self.cur().line
        self.expect("new")
        ntype = self._type_name()  # dims handled below, so `new int[][] {...}` keeps its initializer
        if ntype is None:
            self.fail(f"expected type after new, found {self.cur().text!r}")
        node = AstNode(NodeKind.NEW, (start, start), [])
        if self.at("["):
            dims = ""
            while self.at("["):
                self.pos += 1
                if self.at("]"):
                    self.pos += 1
                else:
                    node.children.append(self.expression())
                    self.expect("]")
                dims += "[]"
            node.type_name = ntype + dims
            if self.at("{"):
                node.children.append(self.array_initializer())
            node.span = (start, self.prev().line)
            return node
        node.type_name = ntype
        node.children.extend(self.argument_list())
        if self.at("{"):  # anonymous class body
            members = self.class_body(ntype.split(".")[-1])
            anon = AstNode(
                NodeKind.CLASS_DECL,
                (start, self.prev().line),
                members,
                token=ntype.split(".")[-1],
                modifiers=("anonymous",),
            )
            node.children.append(anon)
        node.span = (start, self.prev().line)
        return node
