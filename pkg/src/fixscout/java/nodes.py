"""AST node types shared by the parser, the analyzers, and the graph builders."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator


class NodeKind(str, enum.Enum):
    COMPILATION_UNIT = "CompilationUnit"
    CLASS_DECL = "ClassDecl"
    INTERFACE_DECL = "InterfaceDecl"
    METHOD_DECL = "MethodDecl"
    FIELD_DECL = "FieldDecl"
    PARAM = "Param"
    BLOCK = "Block"
    EMPTY = "Empty"
    IF = "If"
    WHILE = "While"
    DO_WHILE = "DoWhile"
    FOR = "For"
    FOR_EACH = "ForEach"
    SWITCH = "Switch"
    CASE = "Case"
    TRY = "Try"
    CATCH = "Catch"
    FINALLY = "Finally"
    RETURN = "Return"
    BREAK = "Break"
    CONTINUE = "Continue"
    THROW = "Throw"
    EXPR_STATEMENT = "ExprStatement"
    LOCAL_VAR_DECL = "LocalVarDecl"
    CALL = "Call"
    FIELD_ACCESS = "FieldAccess"
    INDEX = "Index"
    IDENTIFIER = "Identifier"
    LITERAL = "Literal"
    BINARY_OP = "BinaryOp"
    UNARY_OP = "UnaryOp"
    ASSIGN = "Assign"
    CONDITIONAL = "Conditional"
    NEW = "New"
    ARRAY_INIT = "ArrayInit"
    LAMBDA = "Lambda"
    CAST = "Cast"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


# Statement kinds that open a new control-nesting level.
CONTROL_KINDS = frozenset(
    {
        NodeKind.IF,
        NodeKind.WHILE,
        NodeKind.DO_WHILE,
        NodeKind.FOR,
        NodeKind.FOR_EACH,
        NodeKind.SWITCH,
        NodeKind.TRY,
    }
)

LOOP_KINDS = frozenset({NodeKind.WHILE, NodeKind.DO_WHILE, NodeKind.FOR, NodeKind.FOR_EACH})


@dataclass
class AstNode:
    """One syntax-tree node.

    ``token`` carries the leaf payload: names for declarations and accesses,
    operator text for operators, raw source text for literals.  ``type_name``
    is the raw (generics-erased) type attached to declarations, casts and
    allocations; for ``Literal`` nodes ``literal_kind`` classifies the value
    instead.
    """

    kind: NodeKind
    span: tuple[int, int]
    children: list["AstNode"] = field(default_factory=list)
    token: str | None = None
    type_name: str | None = None
    modifiers: tuple[str, ...] = ()
    literal_kind: str | None = None

    def walk(self) -> Iterator["AstNode"]:
        """Pre-order traversal of the subtree rooted here."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def find_all(self, kind: NodeKind) -> list["AstNode"]:
        return [n for n in self.walk() if n.kind == kind]

    def tree_size(self) -> int:
        return sum(1 for _ in self.walk())

    @property
    def is_constructor(self) -> bool:
        return self.kind == NodeKind.METHOD_DECL and self.type_name is None

    def kind_tree(self):
        """Nested-tuple view of the node kinds, used for structural comparison."""
        return (self.kind.value, tuple(c.kind_tree() for c in self.children))


@dataclass(frozen=True)
class ParseFailure:
    """Returned (never raised) by ``parse_file`` when the input is outside the subset."""

    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"parse failure at {self.line}:{self.column}: {self.message}"
