"""Render an AST back to compilable-looking source.

The output is canonical, not faithful to the original layout: every expression
is fully parenthesized and one statement goes on one line.  Re-parsing the
output reproduces the original tree at the node-kind level, which is what the
round-trip tests rely on.
"""

from __future__ import annotations

from fixscout.java.nodes import AstNode, NodeKind

_EXPR_KINDS = frozenset(
    {
        NodeKind.CALL,
        NodeKind.FIELD_ACCESS,
        NodeKind.INDEX,
        NodeKind.IDENTIFIER,
        NodeKind.LITERAL,
        NodeKind.BINARY_OP,
        NodeKind.UNARY_OP,
        NodeKind.ASSIGN,
        NodeKind.CONDITIONAL,
        NodeKind.NEW,
        NodeKind.ARRAY_INIT,
        NodeKind.LAMBDA,
        NodeKind.CAST,
    }
)


def pretty_print(node: AstNode) -> str:
    return _Printer().unit(node)


class _Printer:
    def __init__(self) -> None:
        self.lines: list[str] = []
        self.depth = 0

    def unit(self, node: AstNode) -> str:
        if node.kind != NodeKind.COMPILATION_UNIT:
            raise ValueError("pretty_print expects a CompilationUnit root")
        for child in node.children:
            self.member(child)
        return "\n".join(self.lines) + "\n"

    def line(self, text: str) -> None:
        self.lines.append("    " * self.depth + text)

    # --- declarations ---------------------------------------------------

    def member(self, node: AstNode) -> None:
        k = node.kind
        if k in (NodeKind.CLASS_DECL, NodeKind.INTERFACE_DECL):
            self.type_decl(node)
        elif k == NodeKind.METHOD_DECL:
            self.method(node)
        elif k == NodeKind.FIELD_DECL:
            init = f" = {self.expr(node.children[0])}" if node.children else ""
            self.line(f"{self._mods(node)}{node.type_name} {node.token}{init};")
        elif k == NodeKind.BLOCK:
            self.open_block("")
            for s in node.children:
                self.stmt(s)
            self.close_block()
        else:
            raise ValueError(f"unexpected class member kind {k}")

    def type_decl(self, node: AstNode) -> None:
        word = "interface" if node.kind == NodeKind.INTERFACE_DECL else "class"
        ext = f" extends {node.type_name}" if node.type_name else ""
        self.open_block(f"{self._mods(node)}{word} {node.token}{ext}")
        for child in node.children:
            self.member(child)
        self.close_block()

    def method(self, node: AstNode) -> None:
        params = ", ".join(f"{p.type_name} {p.token}" for p in node.children if p.kind == NodeKind.PARAM)
        rtype = f"{node.type_name} " if node.type_name is not None else ""
        head = f"{self._mods(node)}{rtype}{node.token}({params})"
        body = [c for c in node.children if c.kind == NodeKind.BLOCK]
        if body:
            self.open_block(head)
            for s in body[0].children:
                self.stmt(s)
            self.close_block()
        else:
            self.line(head + ";")

    @staticmethod
    def _mods(node: AstNode) -> str:
        mods = [m for m in node.modifiers if m not in ("anonymous", "receiver")]
        return " ".join(mods) + " " if mods else ""

    def open_block(self, head: str) -> None:
        self.line((head + " {").lstrip() if head else "{")
        self.depth += 1

    def close_block(self, suffix: str = "") -> None:
        self.depth -= 1
        self.line("}" + suffix)

    # --- statements -------------------------------------------------------

    def stmt(self, node: AstNode) -> None:
        k = node.kind
        if k == NodeKind.BLOCK:
            self.open_block("")
            for s in node.children:
                self.stmt(s)
            self.close_block()
        elif k == NodeKind.EMPTY:
            self.line(";")
        elif k == NodeKind.EXPR_STATEMENT:
            if len(node.children) == 2:
                # two expressions in one statement only come from `assert cond : msg`
                self.line(f"assert {self.expr(node.children[0])} : {self.expr(node.children[1])};")
            else:
                self.line(f"{self.expr(node.children[0])};")
        elif k == NodeKind.LOCAL_VAR_DECL:
            self.line(self.local_decl(node) + ";")
        elif k == NodeKind.IF:
            self._print_if(node)
        elif k == NodeKind.WHILE:
            self._headed_body(f"while ({self.expr(node.children[0])})", node.children[1])
        elif k == NodeKind.DO_WHILE:
            tail = f"while ({self.expr(node.children[1])});"
            if node.children[0].kind == NodeKind.BLOCK:
                self.open_block("do")
                for s in node.children[0].children:
                    self.stmt(s)
                self.close_block(" " + tail)
            else:
                self.line("do")
                self._indented(node.children[0])
                self.line(tail)
        elif k == NodeKind.FOR:
            init, cond, update, body = node.children
            init_s = "" if init.kind == NodeKind.EMPTY else (
                self.local_decl(init) if init.kind == NodeKind.LOCAL_VAR_DECL
                else ", ".join(self.expr(e) for e in init.children)
            )
            cond_s = "" if cond.kind == NodeKind.EMPTY else self.expr(cond)
            upd_s = "" if update.kind == NodeKind.EMPTY else ", ".join(self.expr(e) for e in update.children)
            self._headed_body(f"for ({init_s}; {cond_s}; {upd_s})", body)
        elif k == NodeKind.FOR_EACH:
            var, iterable, body = node.children
            self._headed_body(f"for ({var.type_name} {var.token} : {self.expr(iterable)})", body)
        elif k == NodeKind.SWITCH:
            self.open_block(f"switch ({self.expr(node.children[0])})")
            for case in node.children[1:]:
                labels = []
                body_start = 0
                if case.token == "case":
                    for c in case.children:
                        if c.kind in _EXPR_KINDS and body_start == len(labels):
                            labels.append(self.expr(c))
                            body_start += 1
                        else:
                            break
                    self.line(f"case {', '.join(labels)}:")
                else:
                    self.line("default:")
                self.depth += 1
                for s in case.children[body_start:]:
                    self.stmt(s)
                self.depth -= 1
            self.close_block()
        elif k == NodeKind.TRY:
            self.open_block("try")
            for s in node.children[0].children:
                self.stmt(s)
            for clause in node.children[1:]:
                if clause.kind == NodeKind.CATCH:
                    types = clause.token.replace("|", " | ")
                    self.close_block(f" catch ({types} {clause.children[0].token}) {{")
                    self.depth += 1
                    for s in clause.children[1].children:
                        self.stmt(s)
                else:
                    self.close_block(" finally {")
                    self.depth += 1
                    for s in clause.children[0].children:
                        self.stmt(s)
            self.close_block()
        elif k == NodeKind.RETURN:
            self.line(f"return {self.expr(node.children[0])};" if node.children else "return;")
        elif k == NodeKind.THROW:
            self.line(f"throw {self.expr(node.children[0])};")
        elif k == NodeKind.BREAK:
            self.line("break;")
        elif k == NodeKind.CONTINUE:
            self.line("continue;")
        elif k in (NodeKind.CLASS_DECL, NodeKind.INTERFACE_DECL):
            self.type_decl(node)
        else:
            raise ValueError(f"unexpected statement kind {k}")

    def _headed_body(self, head: str, body: AstNode) -> None:
        """Print `head body`, keeping bare (braceless) bodies bare so kinds round-trip."""
        if body.kind == NodeKind.BLOCK:
            self.open_block(head)
            for s in body.children:
                self.stmt(s)
            self.close_block()
        else:
            self.line(head)
            self._indented(body)

    def _indented(self, node: AstNode) -> None:
        self.depth += 1
        self.stmt(node)
        self.depth -= 1

    def _print_if(self, node: AstNode) -> None:
        head = f"if ({self.expr(node.children[0])})"
        then = node.children[1]
        els = node.children[2] if len(node.children) == 3 else None
        if then.kind == NodeKind.BLOCK:
            self.open_block(head)
            for s in then.children:
                self.stmt(s)
            if els is None:
                self.close_block()
            elif els.kind == NodeKind.BLOCK:
                self.close_block(" else {")
                self.depth += 1
                for s in els.children:
                    self.stmt(s)
                self.close_block()
            else:
                self.close_block(" else")
                self._indented(els)
        else:
            self.line(head)
            self._indented(then)
            if els is not None:
                if els.kind == NodeKind.BLOCK:
                    self.open_block("else")
                    for s in els.children:
                        self.stmt(s)
                    self.close_block()
                else:
                    self.line("else")
                    self._indented(els)

    def local_decl(self, node: AstNode) -> str:
        parts = []
        for d in node.children:
            if d.kind == NodeKind.ASSIGN:
                parts.append(f"{d.children[0].token} = {self.expr(d.children[1])}")
            else:
                parts.append(d.token)
        return f"{node.type_name} {', '.join(parts)}"

    # --- expressions --------------------------------------------------------

    def expr(self, node: AstNode) -> str:
        k = node.kind
        if k == NodeKind.LITERAL or k == NodeKind.IDENTIFIER:
            return node.token
        if k == NodeKind.BINARY_OP:
            lhs, rhs = node.children
            if node.token == "instanceof":
                return f"({self.expr(lhs)} instanceof {rhs.token})"
            return f"({self.expr(lhs)} {node.token} {self.expr(rhs)})"
        if k == NodeKind.UNARY_OP:
            return f"{node.token}({self.expr(node.children[0])})"
        if k == NodeKind.ASSIGN:
            return f"{self.expr(node.children[0])} {node.token} {self.expr(node.children[1])}"
        if k == NodeKind.CONDITIONAL:
            c, t, e = (self.expr(x) for x in node.children)
            return f"({c} ? {t} : {e})"
        if k == NodeKind.CALL:
            if "receiver" in node.modifiers:
                recv, args = node.children[0], node.children[1:]
                return f"{self._receiver(recv)}.{node.token}({', '.join(self.expr(a) for a in args)})"
            return f"{node.token}({', '.join(self.expr(a) for a in node.children)})"
        if k == NodeKind.FIELD_ACCESS:
            return f"{self._receiver(node.children[0])}.{node.token}"
        if k == NodeKind.INDEX:
            return f"{self._receiver(node.children[0])}[{self.expr(node.children[1])}]"
        if k == NodeKind.CAST:
            return f"({node.type_name}) {self._receiver(node.children[0])}"
        if k == NodeKind.NEW:
            return self._new(node)
        if k == NodeKind.ARRAY_INIT:
            return "{ " + ", ".join(self.expr(c) for c in node.children) + " }"
        if k == NodeKind.LAMBDA:
            if node.children:
                return f"{self._receiver(node.children[0])}::apply"
            return "() -> 0"
        raise ValueError(f"unexpected expression kind {k}")

    def _receiver(self, node: AstNode) -> str:
        text = self.expr(node)
        if node.kind in (NodeKind.IDENTIFIER, NodeKind.LITERAL, NodeKind.CALL, NodeKind.FIELD_ACCESS, NodeKind.INDEX):
            return text
        return f"({text})"

    def _new(self, node: AstNode) -> str:
        base = node.type_name.rstrip("[]")
        dims = (len(node.type_name) - len(base)) // 2
        if dims:
            sizes = [c for c in node.children if c.kind != NodeKind.ARRAY_INIT]
            init = [c for c in node.children if c.kind == NodeKind.ARRAY_INIT]
            out = f"new {base}"
            for i in range(dims):
                out += f"[{self.expr(sizes[i])}]" if i < len(sizes) else "[]"
            if init:
                out += " " + self.expr(init[0])
            return out
        anon = [c for c in node.children if c.kind == NodeKind.CLASS_DECL]
        args = [c for c in node.children if c.kind != NodeKind.CLASS_DECL]
        out = f"new {base}({', '.join(self.expr(a) for a in args)})"
        if anon:
            inner = _Printer()
            inner.depth = self.depth
            inner.open_block("")
            for m in anon[0].children:
                inner.member(m)
            inner.close_block()
            out += " " + "\n".join(inner.lines).lstrip()
        return out
