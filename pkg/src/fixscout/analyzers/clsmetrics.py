"""Class-level software metrics (WMC, DIT, CBO, RFC, LCOM and size/count metrics).

All resolution is syntactic: DIT follows extends-chains within the file, CBO
counts distinct referenced type names outside a small JDK allowlist, LCOM is
the LCOM1 pair count (method pairs sharing no field).  Counting stops at
nested type declarations, which get their own rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from fixscout.embedding import FeatureVector
from fixscout.java.nodes import AstNode, CONTROL_KINDS, LOOP_KINDS, NodeKind, ParseFailure
from fixscout.java.parser import parse_file

METRIC_IDS = (
    "wmc",
    "dit",
    "cbo",
    "rfc",
    "lcom",
    "loc",
    "method_count",
    "field_count",
    "static_method_count",
    "return_count",
    "loop_count",
    "comparison_count",
    "try_count",
    "string_literal_count",
    "number_literal_count",
    "math_op_count",
    "variable_count",
    "max_nesting",
)

COMPARISON_OPS = {"<", ">", "<=", ">=", "==", "!="}
MATH_OPS = {"+", "-", "*", "/", "%"}
BOOLEAN_OPS = {"&&", "||"}

# Types ignored by the coupling count: primitives plus ubiquitous java.lang/java.util names.
JDK_ALLOWLIST = frozenset(
    """boolean byte char short int long float double void
    String Object Integer Long Short Byte Double Float Boolean Character Number
    Math System Thread Runnable Override Class Void Iterable Comparable CharSequence
    Exception RuntimeException Throwable Error IllegalArgumentException
    IllegalStateException NullPointerException IndexOutOfBoundsException
    UnsupportedOperationException StringBuilder StringBuffer Objects Arrays
    List ArrayList Map HashMap Set HashSet Collection Collections Iterator Optional""".split()
)


@dataclass
class ClassMetricsRow:
    file: str
    class_name: str
    class_type: str  # class | interface | anonymous
    metrics: dict[str, float]


def class_metrics(ast: AstNode, file: str = "") -> list[ClassMetricsRow]:
    """One metrics row per type declaration found in the compilation unit."""
    classes = [n for n in ast.walk() if n.kind in (NodeKind.CLASS_DECL, NodeKind.INTERFACE_DECL)]
    by_name = {}
    for c in classes:
        by_name.setdefault(c.token, c)
    return [_class_row(c, by_name, file) for c in classes]


def file_metrics_vector(rows: list[ClassMetricsRow]) -> FeatureVector:
    """Per-metric sum over all classes of one file."""
    totals = dict.fromkeys(METRIC_IDS, 0.0)
    for row in rows:
        for key, value in row.metrics.items():
            totals[key] += value
    return FeatureVector.from_dict(METRIC_IDS, totals)


def _own_nodes(cls: AstNode):
    """Walk the class subtree but stop at nested type declarations."""
    stack = list(cls.children)
    while stack:
        node = stack.pop()
        if node.kind in (NodeKind.CLASS_DECL, NodeKind.INTERFACE_DECL):
            continue
        yield node
        stack.extend(node.children)


def cyclomatic_complexity(method: AstNode) -> int:
    """McCabe count: decisions + 1, where branch points, case labels, catches,
    ternaries and short-circuit operators each add one."""
    decisions = 0
    stack = list(method.children)
    while stack:
        node = stack.pop()
        if node.kind in (NodeKind.CLASS_DECL, NodeKind.INTERFACE_DECL):
            continue
        if node.kind in (NodeKind.IF, NodeKind.CATCH, NodeKind.CONDITIONAL) or node.kind in LOOP_KINDS:
            decisions += 1
        elif node.kind == NodeKind.CASE and node.token == "case":
            decisions += 1
        elif node.kind == NodeKind.BINARY_OP and node.token in BOOLEAN_OPS:
            decisions += 1
        stack.extend(node.children)
    return decisions + 1


def _max_nesting(cls: AstNode) -> int:
    deepest = 0

    def visit(node: AstNode, depth: int) -> None:
        nonlocal deepest
        if node.kind in (NodeKind.CLASS_DECL, NodeKind.INTERFACE_DECL):
            return
        level = depth + 1 if node.kind in CONTROL_KINDS else depth
        deepest = max(deepest, level)
        for child in node.children:
            visit(child, level)

    for child in cls.children:
        visit(child, 0)
    return deepest


def _dit(cls: AstNode, by_name: dict[str, AstNode]) -> int:
    depth = 1
    seen = {cls.token}
    parent = cls.type_name
    while parent is not None:
        simple = parent.split(".")[-1]
        node = by_name.get(simple)
        if node is None or node.token in seen:
            break
        depth += 1
        seen.add(node.token)
        parent = node.type_name
    return depth


def _referenced_types(cls: AstNode) -> set[str]:
    refs: set[str] = set()
    if cls.type_name:
        refs.add(cls.type_name)
    for node in _own_nodes(cls):
        if node.kind == NodeKind.CATCH:
            refs.update((node.token or "").split("|"))
        elif node.type_name:
            refs.add(node.type_name)
    out = set()
    for ref in refs:
        simple = ref.rstrip("[]").split(".")[-1]
        if simple and simple not in JDK_ALLOWLIST and simple != cls.token:
            out.add(simple)
    return out


def _class_row(cls: AstNode, by_name: dict[str, AstNode], file: str) -> ClassMetricsRow:
    if cls.kind == NodeKind.INTERFACE_DECL:
        class_type = "interface"
    elif "anonymous" in cls.modifiers:
        class_type = "anonymous"
    else:
        class_type = "class"

    methods = [m for m in cls.children if m.kind == NodeKind.METHOD_DECL]
    fields = [f for f in cls.children if f.kind == NodeKind.FIELD_DECL]
    own = list(_own_nodes(cls))

    call_names = {n.token for n in own if n.kind == NodeKind.CALL}
    field_names = {f.token for f in fields}
    method_field_use = []
    for m in methods:
        used = set()
        for n in m.walk():
            if n is m:
                continue
            if n.kind in (NodeKind.IDENTIFIER, NodeKind.FIELD_ACCESS) and n.token in field_names:
                used.add(n.token)
        method_field_use.append(used)
    lcom = sum(1 for a, b in combinations(method_field_use, 2) if not (a & b))

    metrics = {
        "wmc": float(sum(cyclomatic_complexity(m) for m in methods)),
        "dit": float(_dit(cls, by_name)),
        "cbo": float(len(_referenced_types(cls))),
        "rfc": float(len(methods) + len(call_names)),
        "lcom": float(lcom),
        "loc": float(cls.span[1] - cls.span[0] + 1),
        "method_count": float(len(methods)),
        "field_count": float(len(fields)),
        "static_method_count": float(sum(1 for m in methods if "static" in m.modifiers)),
        "return_count": float(sum(1 for n in own if n.kind == NodeKind.RETURN)),
        "loop_count": float(sum(1 for n in own if n.kind in LOOP_KINDS)),
        "comparison_count": float(
            sum(1 for n in own if n.kind == NodeKind.BINARY_OP and n.token in COMPARISON_OPS)
        ),
        "try_count": float(sum(1 for n in own if n.kind == NodeKind.TRY)),
        "string_literal_count": float(
            sum(1 for n in own if n.kind == NodeKind.LITERAL and n.literal_kind == "string")
        ),
        "number_literal_count": float(
            sum(1 for n in own if n.kind == NodeKind.LITERAL and n.literal_kind in ("int", "float"))
        ),
        "math_op_count": float(sum(1 for n in own if n.kind == NodeKind.BINARY_OP and n.token in MATH_OPS)),
        "variable_count": float(sum(len(n.children) for n in own if n.kind == NodeKind.LOCAL_VAR_DECL)),
        "max_nesting": float(_max_nesting(cls)),
    }
    return ClassMetricsRow(file, cls.token or "", class_type, metrics)


class MetricsAnalyzer:
    analyzer_id = "metrics"
    feature_names = tuple(sorted(METRIC_IDS)) + ("parse_error",)

    def features_for(self, ast: AstNode | ParseFailure, text: str) -> FeatureVector:
        if isinstance(ast, ParseFailure):
            values = dict.fromkeys(self.feature_names, 0.0)
            values["parse_error"] = 1.0
            return FeatureVector.from_dict(self.feature_names, values)
        vec = file_metrics_vector(class_metrics(ast))
        values = vec.as_dict()
        values["parse_error"] = 0.0
        return FeatureVector.from_dict(self.feature_names, values)

    def analyze(self, text: str) -> FeatureVector:
        return self.features_for(parse_file(text), text)
