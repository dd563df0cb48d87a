"""Pattern-rule linter: a 20-rule catalog counting violations per file.

Rule ids are stable and generic; they never embed identifiers, literals or
positions from the analyzed code.  Two configurations ship: `strict` runs the
whole catalog, `style` only the style/size rules.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from fixscout.embedding import FeatureVector
from fixscout.java.nodes import AstNode, CONTROL_KINDS, NodeKind, ParseFailure
from fixscout.java.parser import parse_file

LONG_LINE_LIMIT = 120
LONG_METHOD_LINES = 60
GOD_CLASS_LINES = 500
MAX_NESTING = 4
MAX_PARAMETERS = 6
ALLOWED_NUMBERS = {-1.0, 0.0, 1.0, 2.0}
BROAD_EXCEPTIONS = {"Exception", "Throwable", "RuntimeException"}
SECRET_NAME = re.compile(r"password|passwd|pwd|secret|token|api_?key|credential", re.IGNORECASE)


@dataclass(frozen=True)
class Rule:
    id: str
    category: str  # error_prone | design | style | security | size
    description: str
    matcher: Callable[[AstNode, list[str]], int]
    needs_ast: bool = True
    threshold: int | None = None


def normalize_rule_id(raw: str) -> str:
    """Strip case-specific suffixes (`RuleId:someVariable` becomes `RuleId`); idempotent."""
    return raw.split(":", 1)[0].strip()


def run_rules(ast: AstNode | ParseFailure, text: str, catalog: list[Rule]) -> dict[str, int]:
    """Count violations per rule id. On ParseFailure only text-based rules run."""
    if not catalog:
        raise ValueError("empty rule catalog")
    lines = text.splitlines()
    failed = isinstance(ast, ParseFailure)
    counts: dict[str, int] = {}
    for rule in catalog:
        if failed and rule.needs_ast:
            counts[rule.id] = 0
        else:
            counts[normalize_rule_id(rule.id)] = int(rule.matcher(None if failed else ast, lines))
    return counts


# --- matcher helpers ------------------------------------------------------


def _count(ast: AstNode, pred) -> int:
    return sum(1 for n in ast.walk() if pred(n))


def _is_empty_body(node: AstNode) -> bool:
    return node.kind == NodeKind.EMPTY or (node.kind == NodeKind.BLOCK and not node.children)


def _numeric_value(node: AstNode) -> float | None:
    raw = node.token.rstrip("lLfFdD").replace("_", "")
    try:
        if node.literal_kind == "int":
            return float(int(raw, 0))
        return float(raw)
    except ValueError:
        return None


def _magic_numbers(ast: AstNode, _lines) -> int:
    count = 0

    def visit(node: AstNode, in_decl_init: bool) -> None:
        nonlocal count
        if node.kind == NodeKind.LITERAL and node.literal_kind in ("int", "float") and not in_decl_init:
            value = _numeric_value(node)
            if value is not None and value not in ALLOWED_NUMBERS:
                count += 1
        shield = in_decl_init or node.kind in (NodeKind.FIELD_DECL, NodeKind.LOCAL_VAR_DECL)
        for child in node.children:
            visit(child, shield)

    visit(ast, False)
    return count


def _deep_nesting(ast: AstNode, _lines) -> int:
    count = 0

    def visit(node: AstNode, depth: int) -> None:
        nonlocal count
        level = depth
        if node.kind in CONTROL_KINDS:
            level += 1
            if level > MAX_NESTING:
                count += 1
        for child in node.children:
            visit(child, level)

    visit(ast, 0)
    return count


def _system_print(ast: AstNode, _lines) -> int:
    def is_violation(n: AstNode) -> bool:
        if n.kind != NodeKind.CALL or "receiver" not in n.modifiers:
            return False
        if n.token not in ("print", "println", "printf"):
            return False
        recv = n.children[0]
        return (
            recv.kind == NodeKind.FIELD_ACCESS
            and recv.token in ("out", "err")
            and recv.children[0].kind == NodeKind.IDENTIFIER
            and recv.children[0].token == "System"
        )

    return _count(ast, is_violation)


def _string_equals_operator(ast: AstNode, _lines) -> int:
    def is_violation(n: AstNode) -> bool:
        if n.kind != NodeKind.BINARY_OP or n.token not in ("==", "!="):
            return False
        return any(c.kind == NodeKind.LITERAL and c.literal_kind == "string" for c in n.children)

    return _count(ast, is_violation)


def _hardcoded_secret(ast: AstNode, _lines) -> int:
    count = 0
    for node in ast.walk():
        if node.kind == NodeKind.FIELD_DECL and node.children:
            if SECRET_NAME.search(node.token or "") and _is_nonempty_string_literal(node.children[0]):
                count += 1
        elif node.kind == NodeKind.LOCAL_VAR_DECL:
            for d in node.children:
                if d.kind == NodeKind.ASSIGN and SECRET_NAME.search(d.children[0].token or ""):
                    if _is_nonempty_string_literal(d.children[1]):
                        count += 1
    return count


def _is_nonempty_string_literal(expr: AstNode) -> bool:
    # only a literal assigned directly counts; reading from a config/env call does not
    return expr.kind == NodeKind.LITERAL and expr.literal_kind == "string" and expr.token != '""'


def _unused_private_field(ast: AstNode, _lines) -> int:
    count = 0
    for cls in ast.walk():
        if cls.kind not in (NodeKind.CLASS_DECL, NodeKind.INTERFACE_DECL):
            continue
        private_fields = [
            m.token for m in cls.children if m.kind == NodeKind.FIELD_DECL and "private" in m.modifiers
        ]
        if not private_fields:
            continue
        used: set[str] = set()
        for node in cls.walk():
            if node.kind in (NodeKind.IDENTIFIER, NodeKind.FIELD_ACCESS) and node.token:
                used.add(node.token)
        count += sum(1 for name in private_fields if name not in used)
    return count


def _switch_fallthrough(ast: AstNode, _lines) -> int:
    terminators = {NodeKind.BREAK, NodeKind.RETURN, NodeKind.THROW, NodeKind.CONTINUE}
    count = 0
    for sw in ast.find_all(NodeKind.SWITCH):
        cases = [c for c in sw.children if c.kind == NodeKind.CASE]
        for case in cases[:-1]:
            stmts = [c for c in case.children if c.kind not in _EXPR_KINDS]
            if stmts and stmts[-1].kind not in terminators:
                count += 1
    return count


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


def _catalog() -> list[Rule]:
    def rule(id, category, description, matcher, needs_ast=True, threshold=None):
        return Rule(id, category, description, matcher, needs_ast, threshold)

    return [
        rule(
            "EmptyCatchBlock", "error_prone", "catch clause with an empty body",
            lambda a, _: _count(a, lambda n: n.kind == NodeKind.CATCH and not n.children[1].children),
        ),
        rule(
            "CatchBroadException", "error_prone", "catch of Exception/Throwable",
            lambda a, _: _count(
                a,
                lambda n: n.kind == NodeKind.CATCH
                and any(t.split(".")[-1] in BROAD_EXCEPTIONS for t in (n.token or "").split("|")),
            ),
        ),
        rule(
            "EmptyIf", "error_prone", "if statement with an empty then-branch",
            lambda a, _: _count(a, lambda n: n.kind == NodeKind.IF and _is_empty_body(n.children[1])),
        ),
        rule(
            "EmptyWhile", "error_prone", "while loop with an empty body",
            lambda a, _: _count(a, lambda n: n.kind == NodeKind.WHILE and _is_empty_body(n.children[1])),
        ),
        rule(
            "MissingBracesIf", "style", "if/else branch without braces",
            lambda a, _: sum(
                (n.children[1].kind != NodeKind.BLOCK)
                + (len(n.children) == 3 and n.children[2].kind not in (NodeKind.BLOCK, NodeKind.IF))
                for n in a.find_all(NodeKind.IF)
            ),
        ),
        rule(
            "MissingSwitchDefault", "error_prone", "switch without a default case",
            lambda a, _: _count(
                a,
                lambda n: n.kind == NodeKind.SWITCH
                and not any(c.kind == NodeKind.CASE and c.token == "default" for c in n.children),
            ),
        ),
        rule(
            "MagicNumber", "style", "numeric literal outside a declaration initializer",
            _magic_numbers,
        ),
        rule(
            "LongMethod", "size", f"method body longer than {LONG_METHOD_LINES} lines",
            lambda a, _: _count(
                a, lambda n: n.kind == NodeKind.METHOD_DECL and n.span[1] - n.span[0] + 1 > LONG_METHOD_LINES
            ),
            threshold=LONG_METHOD_LINES,
        ),
        rule(
            "LongLine", "style", f"line longer than {LONG_LINE_LIMIT} characters",
            lambda _a, lines: sum(1 for line in lines if len(line) > LONG_LINE_LIMIT),
            needs_ast=False,
            threshold=LONG_LINE_LIMIT,
        ),
        rule(
            "DeepNesting", "design", f"control statement nested deeper than {MAX_NESTING}",
            _deep_nesting,
            threshold=MAX_NESTING,
        ),
        rule(
            "TooManyParameters", "design", f"method with more than {MAX_PARAMETERS} parameters",
            lambda a, _: _count(
                a,
                lambda n: n.kind == NodeKind.METHOD_DECL
                and sum(1 for c in n.children if c.kind == NodeKind.PARAM) > MAX_PARAMETERS,
            ),
            threshold=MAX_PARAMETERS,
        ),
        rule("SystemOutPrint", "style", "printing to System.out/System.err", _system_print),
        rule(
            "PrintStackTrace", "error_prone", "exception handled by printStackTrace",
            lambda a, _: _count(a, lambda n: n.kind == NodeKind.CALL and n.token == "printStackTrace"),
        ),
        rule("StringEqualsOperator", "error_prone", "== or != against a string literal", _string_equals_operator),
        rule(
            "HardcodedSecretString", "security",
            "string literal assigned to a password/secret/token-like name",
            _hardcoded_secret,
        ),
        rule(
            "EmptyFinally", "error_prone", "finally clause with an empty body",
            lambda a, _: _count(a, lambda n: n.kind == NodeKind.FINALLY and not n.children[0].children),
        ),
        rule(
            "ReturnInFinally", "error_prone", "return inside a finally clause",
            lambda a, _: sum(len(n.find_all(NodeKind.RETURN)) for n in a.find_all(NodeKind.FINALLY)),
        ),
        rule("UnusedPrivateField", "design", "private field never referenced", _unused_private_field),
        rule(
            "SwitchFallthrough", "error_prone", "non-empty case without a terminating statement",
            _switch_fallthrough,
        ),
        rule(
            "GodClass", "size", f"type declaration longer than {GOD_CLASS_LINES} lines",
            lambda a, _: _count(
                a,
                lambda n: n.kind in (NodeKind.CLASS_DECL, NodeKind.INTERFACE_DECL)
                and n.span[1] - n.span[0] + 1 > GOD_CLASS_LINES,
            ),
            threshold=GOD_CLASS_LINES,
        ),
    ]


def catalog(config: str = "strict") -> list[Rule]:
    rules = _catalog()
    if config == "strict":
        return rules
    if config == "style":
        return [r for r in rules if r.category in ("style", "size")]
    raise ValueError(f"unknown lint configuration {config!r}")


class LintAnalyzer:
    def __init__(self, config: str = "strict"):
        self.config = config
        self.rules = catalog(config)
        self.analyzer_id = "lint" if config == "strict" else f"lint_{config}"
        self.feature_names = tuple(sorted(r.id for r in self.rules)) + ("parse_error",)

    def features_for(self, ast: AstNode | ParseFailure, text: str) -> FeatureVector:
        counts = run_rules(ast, text, self.rules)
        counts["parse_error"] = 1 if isinstance(ast, ParseFailure) else 0
        return FeatureVector.from_dict(self.feature_names, counts)

    def analyze(self, text: str) -> FeatureVector:
        return self.features_for(parse_file(text), text)
