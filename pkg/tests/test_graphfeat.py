"""Graph measures checked against brute-force BFS / pair-enumeration oracles."""

import math
from itertools import combinations

import pytest

from fixscout.analyzers.graphfeat import (
    AST_MEASURES,
    CFG_MEASURES,
    GraphAnalyzer,
    degree_assortativity,
    file_graph_vector,
    graph_features,
)
from fixscout.java.cfg import CodeGraph
from fixscout.java.nodes import NodeKind
from fixscout.java.parser import parse_file


# --- oracles (independent of the implementation) ---------------------------


def brute_distances(n, edges):
    """Floyd-Warshall over the undirected view."""
    INF = math.inf
    dist = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for a, b in edges:
        dist[a][b] = min(dist[a][b], 1)
        dist[b][a] = min(dist[b][a], 1)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if dist[i][k] + dist[k][j] < dist[i][j]:
                    dist[i][j] = dist[i][k] + dist[k][j]
    return dist


def brute_pearson(pairs):
    n = len(pairs)
    mx = sum(p[0] for p in pairs) / n
    my = sum(p[1] for p in pairs) / n
    cov = sum((x - mx) * (y - my) for x, y in pairs)
    vx = sum((x - mx) ** 2 for x, _ in pairs)
    vy = sum((y - my) ** 2 for _, y in pairs)
    if vx == 0 or vy == 0:
        return 0.0
    return cov / math.sqrt(vx * vy)


def brute_assortativity(n, edges):
    deg = [0] * n
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    pairs = []
    for a, b in edges:
        pairs.append((deg[a], deg[b]))
        pairs.append((deg[b], deg[a]))
    return brute_pearson(pairs) if pairs else 0.0


# --- fixtures ----------------------------------------------------------------

P4 = CodeGraph("AST", 4, [(0, 1), (1, 2), (2, 3)], ["a", "b", "c", "d"])
S4 = CodeGraph("AST", 5, [(0, 1), (0, 2), (0, 3), (0, 4)], ["hub", "l1", "l2", "l3", "l4"])
# full binary tree of depth 3: 15 nodes, children of i are 2i+1 and 2i+2
BTREE = CodeGraph(
    "AST",
    15,
    [(i, 2 * i + 1) for i in range(7)] + [(i, 2 * i + 2) for i in range(7)],
    [str(i) for i in range(15)],
)
# diamond CFG: ENTRY -> If -> {a, b} -> join -> EXIT
DIAMOND = CodeGraph(
    "CFG",
    6,
    [(0, 2), (2, 3), (2, 4), (3, 5), (4, 5), (5, 1)],
    ["ENTRY", "EXIT", "If", "a", "b", "join"],
)


class TestPathGraph:
    def test_p4_measures(self):
        f = graph_features(P4)
        assert f["node_count"] == 4
        assert f["edge_count"] == 3
        assert f["density"] == pytest.approx(2 * 3 / (4 * 3))
        assert f["mean_degree"] == pytest.approx(6 / 4)
        assert f["max_degree"] == 2
        assert f["diameter"] == 3
        # unordered pairs by hand: three at distance 1, two at 2, one at 3
        assert f["mean_shortest_path"] == pytest.approx((1 * 3 + 2 * 2 + 3 * 1) / 6)
        assert f["degree_assortativity"] == pytest.approx(brute_assortativity(4, P4.edges))

    def test_p4_against_brute_distances(self):
        dist = brute_distances(4, P4.edges)
        pair_dists = [dist[i][j] for i, j in combinations(range(4), 2)]
        f = graph_features(P4)
        assert f["diameter"] == max(pair_dists)
        assert f["mean_shortest_path"] == pytest.approx(sum(pair_dists) / len(pair_dists))


class TestStarGraph:
    def test_s4_assortativity_is_minus_one(self):
        f = graph_features(S4)
        assert f["degree_assortativity"] == pytest.approx(-1.0)
        assert f["degree_assortativity"] == pytest.approx(brute_assortativity(5, S4.edges))

    def test_s4_degrees(self):
        f = graph_features(S4)
        assert f["max_degree"] == 4
        assert f["leaf_fraction"] == pytest.approx(4 / 5)
        assert f["max_depth"] == 1
        assert f["diameter"] == 2


class TestBinaryTree:
    def test_btree_measures_match_oracles(self):
        f = graph_features(BTREE)
        assert f["node_count"] == 15
        assert f["edge_count"] == 14
        assert f["leaf_fraction"] == pytest.approx(8 / 15)
        assert f["max_depth"] == 3
        dist = brute_distances(15, BTREE.edges)
        pair_dists = [dist[i][j] for i, j in combinations(range(15), 2)]
        assert f["diameter"] == max(pair_dists) == 6
        assert f["mean_shortest_path"] == pytest.approx(sum(pair_dists) / len(pair_dists))
        assert f["degree_assortativity"] == pytest.approx(brute_assortativity(15, BTREE.edges))
        # degree stats by hand: root 2, internal nodes 3, leaves 1
        degs = [2] + [3] * 6 + [1] * 8
        mean = sum(degs) / 15
        assert f["mean_degree"] == pytest.approx(mean)
        assert f["degree_variance"] == pytest.approx(sum((d - mean) ** 2 for d in degs) / 15)


class TestDiamondCfg:
    def test_diamond_measures(self):
        f = graph_features(DIAMOND)
        assert f["node_count"] == 6
        assert f["edge_count"] == 6
        assert f["density"] == pytest.approx(6 / (6 * 5))
        assert f["mean_out_degree"] == pytest.approx(1.0)
        assert f["max_out_degree"] == 2
        assert f["branch_node_count"] == 1
        assert f["weakly_connected_components"] == 1
        assert f["cyclomatic_number"] == 6 - 6 + 2
        assert f["degree_assortativity"] == pytest.approx(brute_assortativity(6, DIAMOND.edges))

    def test_disconnected_cfg_components(self):
        g = CodeGraph("CFG", 5, [(0, 2), (2, 1), (3, 4)], ["ENTRY", "EXIT", "s", "dead1", "dead2"])
        f = graph_features(g)
        assert f["weakly_connected_components"] == 2
        assert f["cyclomatic_number"] == 3 - 5 + 4


class TestConditionalZeros:
    def test_single_node_ast(self):
        g = CodeGraph("AST", 1, [], ["only"])
        f = graph_features(g)
        assert f["node_count"] == 1
        assert all(v == 0 for k, v in f.items() if k != "node_count")

    def test_edgeless_assortativity_zero(self):
        g = CodeGraph("AST", 3, [], ["a", "b", "c"])
        assert graph_features(g)["degree_assortativity"] == 0.0

    def test_disconnected_ast_distance_measures_zero(self):
        g = CodeGraph("AST", 4, [(0, 1), (2, 3)], list("abcd"))
        f = graph_features(g)
        assert f["diameter"] == 0.0
        assert f["mean_shortest_path"] == 0.0
        assert "weakly_connected_components" not in f  # CFG-only measure

    def test_degenerate_assortativity_zero(self):
        # every endpoint has equal degree -> zero variance -> defined as 0
        cycle = CodeGraph("AST", 3, [(0, 1), (1, 2), (2, 0)], list("abc"))
        assert graph_features(cycle)["degree_assortativity"] == 0.0

    def test_measure_sets_fixed_per_kind(self):
        assert set(graph_features(P4)) == set(AST_MEASURES)
        assert set(graph_features(DIAMOND)) == set(CFG_MEASURES)


class TestAssortativityBounds:
    @pytest.mark.parametrize(
        "edges,n",
        [
            ([(0, 1)], 2),
            ([(0, 1), (1, 2)], 3),
            ([(0, 1), (0, 2), (1, 2), (2, 3)], 4),
            ([(0, 1), (2, 3), (1, 2), (3, 4), (0, 4)], 5),
        ],
    )
    def test_in_unit_interval(self, edges, n):
        g = CodeGraph("AST", n, edges, [str(i) for i in range(n)])
        v = degree_assortativity(g)
        assert -1.0 - 1e-12 <= v <= 1.0 + 1e-12
        assert v == pytest.approx(brute_assortativity(n, edges))


class TestFileVector:
    def test_no_methods_all_cfg_zero(self):
        ast = parse_file("class A { int x; }")
        vec = file_graph_vector(
            graph_from(ast), []
        )
        assert vec["cfg_node_count"] == 0
        assert vec["cfg_density"] == 0

    def test_sum_and_mean_aggregation(self):
        c1 = CodeGraph("CFG", 5, [(0, 2), (2, 3), (3, 4), (4, 1)], ["ENTRY", "EXIT", "a", "b", "c"])
        c2 = CodeGraph("CFG", 7, [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)], ["ENTRY", "EXIT"] + list("abcde"))
        vec = file_graph_vector(P4, [c1, c2])
        assert vec["cfg_node_count"] == 12
        d1 = graph_features(c1)["density"]
        d2 = graph_features(c2)["density"]
        assert vec["cfg_density"] == pytest.approx((d1 + d2) / 2)

    def test_straight_line_cyclomatic_number_is_one(self):
        ast = parse_file("class A { void f() { a(); b(); c(); } }")
        analyzer = GraphAnalyzer()
        vec = analyzer.analyze("class A { void f() { a(); b(); c(); } }")
        # E - N + 2 = (k+1) - (k+2) + 2 = 1 on a straight-line method
        assert vec["cfg_cyclomatic_number"] == 1


def graph_from(ast):
    from fixscout.java.cfg import ast_to_graph

    return ast_to_graph(ast)


def test_analyzer_universe_and_parse_error():
    analyzer = GraphAnalyzer()
    assert analyzer.feature_names[-1] == "parse_error"
    assert len(analyzer.feature_names) == len(AST_MEASURES) + len(CFG_MEASURES) + 1
    vec = analyzer.analyze("garbage ###")
    assert vec["parse_error"] == 1
    assert sum(vec.values) == 1
