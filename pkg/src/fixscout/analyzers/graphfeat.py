"""Network measures over AST and CFG graphs, with conditional-zero semantics.

A measure whose precondition fails is exactly 0: distance measures need a
connected graph, assortativity needs at least one edge, and the component
count belongs only to the CFG measure set (ASTs are connected by
construction, CFGs may fall apart through unreachable code).
"""

from __future__ import annotations

from collections import deque

from fixscout.embedding import FeatureVector
from fixscout.java.cfg import CodeGraph, ast_to_graph, build_cfg
from fixscout.java.nodes import AstNode, NodeKind, ParseFailure
from fixscout.java.parser import parse_file

AST_MEASURES = (
    "node_count",
    "edge_count",
    "density",
    "mean_degree",
    "max_degree",
    "degree_variance",
    "leaf_fraction",
    "max_depth",
    "diameter",
    "mean_shortest_path",
    "degree_assortativity",
)

CFG_MEASURES = (
    "node_count",
    "edge_count",
    "density",
    "mean_out_degree",
    "max_out_degree",
    "branch_node_count",
    "weakly_connected_components",
    "cyclomatic_number",
    "degree_assortativity",
)

# counts add up across a file's methods, normalized measures average
_CFG_SUMMED = frozenset(
    {"node_count", "edge_count", "branch_node_count", "weakly_connected_components", "cyclomatic_number"}
)


def _undirected_adjacency(g: CodeGraph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(g.node_count)]
    for a, b in g.edges:
        adj[a].append(b)
        if a != b:
            adj[b].append(a)
    return adj


def _bfs_distances(adj: list[list[int]], source: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[source] = 0
    queue = deque([source])
    while queue:
        node = queue.popleft()
        for nxt in adj[node]:
            if dist[nxt] < 0:
                dist[nxt] = dist[node] + 1
                queue.append(nxt)
    return dist


def _is_connected(adj: list[list[int]]) -> bool:
    if not adj:
        return True
    return all(d >= 0 for d in _bfs_distances(adj, 0))


def _component_count(adj: list[list[int]]) -> int:
    seen = [False] * len(adj)
    components = 0
    for start in range(len(adj)):
        if seen[start]:
            continue
        components += 1
        queue = deque([start])
        seen[start] = True
        while queue:
            node = queue.popleft()
            for nxt in adj[node]:
                if not seen[nxt]:
                    seen[nxt] = True
                    queue.append(nxt)
    return components


def degree_assortativity(g: CodeGraph) -> float:
    """Pearson correlation of endpoint degrees over the undirected edge list
    (both orientations); 0 when there are no edges or the correlation is undefined."""
    if not g.edges:
        return 0.0
    degree = [0] * g.node_count
    for a, b in g.edges:  # undirected view; a self-loop contributes 2 to its endpoint
        degree[a] += 1
        degree[b] += 1
    xs: list[int] = []
    ys: list[int] = []
    for a, b in g.edges:
        xs.extend((degree[a], degree[b]))
        ys.extend((degree[b], degree[a]))
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    cov = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    var_x = sum((x - mean_x) ** 2 for x in xs)
    var_y = sum((y - mean_y) ** 2 for y in ys)
    if var_x == 0 or var_y == 0:
        return 0.0
    return cov / (var_x**0.5 * var_y**0.5)


def _ast_features(g: CodeGraph) -> dict[str, float]:
    n = g.node_count
    e = len(g.edges)
    out: dict[str, float] = dict.fromkeys(AST_MEASURES, 0.0)
    out["node_count"] = float(n)
    out["edge_count"] = float(e)
    if n == 0:
        return out
    adj = _undirected_adjacency(g)
    degrees = [len(neigh) for neigh in adj]
    if n > 1:
        out["density"] = 2.0 * e / (n * (n - 1))
    mean_degree = sum(degrees) / n
    out["mean_degree"] = mean_degree
    out["max_degree"] = float(max(degrees))
    out["degree_variance"] = sum((d - mean_degree) ** 2 for d in degrees) / n
    out_degree = [0] * n
    for a, _ in g.edges:
        out_degree[a] += 1
    if e > 0:  # leaves are meaningless on an edgeless graph
        out["leaf_fraction"] = sum(1 for d in out_degree if d == 0) / n
    depths = _bfs_distances(_directed_adj(g), 0)
    out["max_depth"] = float(max((d for d in depths if d >= 0), default=0))
    if _is_connected(adj):
        diameter = 0
        total = 0
        pairs = 0
        for source in range(n):
            dist = _bfs_distances(adj, source)
            diameter = max(diameter, max(dist))
            total += sum(dist)
            pairs += n - 1
        out["diameter"] = float(diameter)
        if pairs:
            out["mean_shortest_path"] = total / pairs  # both orientations cancel out
    out["degree_assortativity"] = degree_assortativity(g)
    return out


def _directed_adj(g: CodeGraph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(g.node_count)]
    for a, b in g.edges:
        adj[a].append(b)
    return adj


def _cfg_features(g: CodeGraph) -> dict[str, float]:
    n = g.node_count
    e = len(g.edges)
    out: dict[str, float] = dict.fromkeys(CFG_MEASURES, 0.0)
    out["node_count"] = float(n)
    out["edge_count"] = float(e)
    if n == 0:
        return out
    if n > 1:
        out["density"] = e / (n * (n - 1))
    out_degree = [0] * n
    for a, _ in g.edges:
        out_degree[a] += 1
    out["mean_out_degree"] = e / n
    out["max_out_degree"] = float(max(out_degree))
    out["branch_node_count"] = float(sum(1 for d in out_degree if d >= 2))
    components = _component_count(_undirected_adjacency(g))
    out["weakly_connected_components"] = float(components)
    out["cyclomatic_number"] = float(e - n + 2 * components)
    out["degree_assortativity"] = degree_assortativity(g)
    return out


def graph_features(g: CodeGraph) -> dict[str, float]:
    """Fixed measure set per graph kind; preconditions that fail yield exact zeros."""
    if g.kind == "AST":
        return _ast_features(g)
    if g.kind == "CFG":
        return _cfg_features(g)
    raise ValueError(f"unknown graph kind {g.kind!r}")


def file_graph_vector(ast_graph: CodeGraph, cfgs: list[CodeGraph]) -> FeatureVector:
    """Combine one file AST graph with its per-method CFGs (`ast_` / `cfg_` prefixes)."""
    values: dict[str, float] = {}
    for key, val in graph_features(ast_graph).items():
        values[f"ast_{key}"] = val
    per_method = [graph_features(c) for c in cfgs]
    for key in CFG_MEASURES:
        if not per_method:
            values[f"cfg_{key}"] = 0.0
        elif key in _CFG_SUMMED:
            values[f"cfg_{key}"] = sum(m[key] for m in per_method)
        else:
            values[f"cfg_{key}"] = sum(m[key] for m in per_method) / len(per_method)
    names = tuple(sorted(values))
    return FeatureVector.from_dict(names, values)


class GraphAnalyzer:
    analyzer_id = "graph"
    feature_names = tuple(sorted([f"ast_{m}" for m in AST_MEASURES] + [f"cfg_{m}" for m in CFG_MEASURES])) + (
        "parse_error",
    )

    def features_for(self, ast: AstNode | ParseFailure, text: str) -> FeatureVector:
        if isinstance(ast, ParseFailure):
            values = dict.fromkeys(self.feature_names, 0.0)
            values["parse_error"] = 1.0
            return FeatureVector.from_dict(self.feature_names, values)
        cfgs = [
            build_cfg(m)
            for m in ast.find_all(NodeKind.METHOD_DECL)
            if any(c.kind == NodeKind.BLOCK for c in m.children)
        ]
        vec = file_graph_vector(ast_to_graph(ast), cfgs)
        values = vec.as_dict()
        values["parse_error"] = 0.0
        return FeatureVector.from_dict(self.feature_names, values)

    def analyze(self, text: str) -> FeatureVector:
        return self.features_for(parse_file(text), text)
