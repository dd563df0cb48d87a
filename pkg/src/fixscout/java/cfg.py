"""Graph views of parsed code: whole-file AST graphs and per-method CFGs.

CFG shape: one node per statement, with distinguished ENTRY/EXIT nodes.
Conditions live on the branching statement's node.  Catch clauses get their
own head node and receive an over-approximating edge from every statement in
the guarded try block.  Statements after return/throw/break/continue keep
their nodes but lose the incoming path, so unreachable code shows up as extra
weakly-connected components.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from fixscout.java.nodes import AstNode, NodeKind

_EXPRESSION_KINDS = frozenset(
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


@dataclass
class CodeGraph:
    kind: str  # "AST" | "CFG"
    node_count: int
    edges: list[tuple[int, int]]
    node_labels: list[str] = field(default_factory=list)

    def to_dot(self, name: str = "g") -> str:
        lines = [f"digraph {name} {{"]
        for i, label in enumerate(self.node_labels):
            lines.append(f'  n{i} [label="{label}"];')
        for a, b in self.edges:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines)


def ast_to_graph(root: AstNode) -> CodeGraph:
    """Project the syntax tree onto a graph: one node per AST node, one edge per parent-child link."""
    labels: list[str] = []
    edges: list[tuple[int, int]] = []
    stack: list[tuple[AstNode, int]] = [(root, -1)]
    while stack:
        node, parent = stack.pop()
        idx = len(labels)
        labels.append(node.kind.value)
        if parent >= 0:
            edges.append((parent, idx))
        for child in reversed(node.children):
            stack.append((child, idx))
    return CodeGraph("AST", len(labels), edges, labels)


ENTRY = 0
EXIT = 1


def build_cfg(method: AstNode) -> CodeGraph:
    """Build the control-flow graph of one method body."""
    if method.kind != NodeKind.METHOD_DECL:
        raise ValueError("build_cfg expects a MethodDecl node")
    bodies = [c for c in method.children if c.kind == NodeKind.BLOCK]
    if not bodies:
        raise ValueError("method has no body")
    builder = _CfgBuilder()
    frontier = builder.emit_block(bodies[0].children, {ENTRY})
    for n in frontier:
        builder.add_edge(n, EXIT)
    return CodeGraph("CFG", len(builder.labels), sorted(builder.edges), builder.labels)


class _CfgBuilder:
    def __init__(self) -> None:
        self.labels = ["ENTRY", "EXIT"]
        self.edges: set[tuple[int, int]] = set()
        # innermost-last collectors: breaks bind to loops and switches alike,
        # continues only to loop headers
        self.break_stack: list[list[int]] = []
        self.loop_headers: list[int] = []
        self.try_collectors: list[list[int]] = []

    def new_node(self, label: str) -> int:
        idx = len(self.labels)
        self.labels.append(label)
        for collector in self.try_collectors:
            collector.append(idx)
        return idx

    def add_edge(self, a: int, b: int) -> None:
        self.edges.add((a, b))

    def link(self, preds: set[int], node: int) -> None:
        for p in preds:
            self.add_edge(p, node)

    def emit_block(self, stmts: list[AstNode], preds: set[int]) -> set[int]:
        for stmt in stmts:
            preds = self.emit_stmt(stmt, preds)
        return preds

    def emit_stmt(self, stmt: AstNode, preds: set[int]) -> set[int]:
        kind = stmt.kind
        if kind == NodeKind.BLOCK:
            return self.emit_block(stmt.children, preds)
        if kind == NodeKind.IF:
            return self._emit_if(stmt, preds)
        if kind in (NodeKind.WHILE, NodeKind.FOR, NodeKind.FOR_EACH):
            return self._emit_loop(stmt, preds)
        if kind == NodeKind.DO_WHILE:
            return self._emit_do_while(stmt, preds)
        if kind == NodeKind.SWITCH:
            return self._emit_switch(stmt, preds)
        if kind == NodeKind.TRY:
            return self._emit_try(stmt, preds)
        if kind in (NodeKind.RETURN, NodeKind.THROW):
            node = self.new_node(kind.value)
            self.link(preds, node)
            self.add_edge(node, EXIT)
            return set()
        if kind == NodeKind.BREAK:
            node = self.new_node(kind.value)
            self.link(preds, node)
            if self.break_stack:
                self.break_stack[-1].append(node)
            return set()
        if kind == NodeKind.CONTINUE:
            node = self.new_node(kind.value)
            self.link(preds, node)
            if self.loop_headers:
                self.add_edge(node, self.loop_headers[-1])
            return set()
        # plain statement: ExprStatement, LocalVarDecl, Empty, ...
        node = self.new_node(kind.value)
        self.link(preds, node)
        return {node}

    def _emit_if(self, stmt: AstNode, preds: set[int]) -> set[int]:
        node = self.new_node("If")
        self.link(preds, node)
        then_exits = self.emit_stmt(stmt.children[1], {node})
        if len(stmt.children) == 3:
            else_exits = self.emit_stmt(stmt.children[2], {node})
        else:
            else_exits = {node}
        return then_exits | else_exits

    def _emit_loop(self, stmt: AstNode, preds: set[int]) -> set[int]:
        header = self.new_node(stmt.kind.value)
        self.link(preds, header)
        breaks: list[int] = []
        self.break_stack.append(breaks)
        self.loop_headers.append(header)
        body_exits = self.emit_stmt(stmt.children[-1], {header})
        self.loop_headers.pop()
        self.break_stack.pop()
        for n in body_exits:
            self.add_edge(n, header)  # back edge
        return {header} | set(breaks)

    def _emit_do_while(self, stmt: AstNode, preds: set[int]) -> set[int]:
        header = self.new_node("DoWhile")  # the condition check, reached after the body
        breaks: list[int] = []
        self.break_stack.append(breaks)
        self.loop_headers.append(header)
        # entry flows straight into the body; the header loops back into it too
        body_exits = self.emit_stmt(stmt.children[0], preds | {header})
        self.loop_headers.pop()
        self.break_stack.pop()
        for n in body_exits:
            self.add_edge(n, header)
        return {header} | set(breaks)

    def _emit_switch(self, stmt: AstNode, preds: set[int]) -> set[int]:
        node = self.new_node("Switch")
        self.link(preds, node)
        breaks: list[int] = []
        self.break_stack.append(breaks)
        fallthrough: set[int] = set()
        has_default = False
        for case in stmt.children[1:]:
            if case.kind != NodeKind.CASE:
                continue
            has_default = has_default or case.token == "default"
            case_node = self.new_node("Case")
            self.add_edge(node, case_node)
            self.link(fallthrough, case_node)
            stmts = [c for c in case.children if c.kind not in _EXPRESSION_KINDS]
            fallthrough = self.emit_block(stmts, {case_node})
        self.break_stack.pop()
        exits = fallthrough | set(breaks)
        if not has_default:
            exits.add(node)
        return exits

    def _emit_try(self, stmt: AstNode, preds: set[int]) -> set[int]:
        collector: list[int] = []
        self.try_collectors.append(collector)
        try_exits = self.emit_block(stmt.children[0].children, preds)
        self.try_collectors.pop()
        exits = set(try_exits)
        finally_clause = None
        for clause in stmt.children[1:]:
            if clause.kind == NodeKind.FINALLY:
                finally_clause = clause
                continue
            catch_node = self.new_node("Catch")
            for n in collector:
                self.add_edge(n, catch_node)
            exits |= self.emit_block(clause.children[1].children, {catch_node})
        if finally_clause is not None:
            exits = self.emit_block(finally_clause.children[0].children, exits)
        return exits
