import pytest

from fixscout.java import ast_to_graph, build_cfg, parse_file
from fixscout.java.nodes import AstNode, NodeKind


def method_cfg(body: str):
    ast = parse_file("class A { void f() { " + body + " } }")
    assert isinstance(ast, AstNode), ast
    return build_cfg(ast.find_all(NodeKind.METHOD_DECL)[0])


def label_edges(g):
    """Edge set in terms of labels, disambiguated by node index."""
    named = [f"{l}#{i}" for i, l in enumerate(g.node_labels)]
    return {(named[a], named[b]) for a, b in g.edges}


class TestAstGraph:
    def test_single_node(self):
        node = AstNode(NodeKind.IDENTIFIER, (1, 1), token="x")
        g = ast_to_graph(node)
        assert g.node_count == 1
        assert g.edges == []

    def test_tree_edge_count(self):
        ast = parse_file("class A { int f(int a) { return a + 1; } void g() {} }")
        g = ast_to_graph(ast)
        assert g.node_count == ast.tree_size()
        assert len(g.edges) == g.node_count - 1

    def test_expected_edge_list(self):
        # hand-built: CompilationUnit(0) -> ClassDecl(1) -> MethodDecl(2) -> Block(3) -> Return(4) -> Literal(5)
        ast = parse_file("class A { int f(){ return 1; } }")
        g = ast_to_graph(ast)
        assert g.node_labels == ["CompilationUnit", "ClassDecl", "MethodDecl", "Block", "Return", "Literal"]
        assert sorted(g.edges) == [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]

    def test_connected(self):
        ast = parse_file("class A { void f() { if (x) { y(); } } }")
        g = ast_to_graph(ast)
        seen = {0}
        stack = [0]
        adj = {}
        for a, b in g.edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        while stack:
            for nxt in adj.get(stack.pop(), []):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        assert len(seen) == g.node_count


class TestCfg:
    def test_empty_body(self):
        g = method_cfg("")
        assert g.node_count == 2
        assert g.edges == [(0, 1)]
        assert g.node_labels == ["ENTRY", "EXIT"]

    def test_straight_line(self):
        g = method_cfg("a(); b(); c();")
        assert g.node_count == 5
        assert sorted(g.edges) == [(0, 2), (2, 3), (3, 4), (4, 1)]

    @pytest.mark.parametrize("k", [1, 2, 5, 9])
    def test_straight_line_counts(self, k):
        g = method_cfg(" ".join("x();" for _ in range(k)))
        assert g.node_count == k + 2
        assert len(g.edges) == k + 1

    def test_if_diamond(self):
        # hand-drawn: ENTRY -> If; If -> a, If -> b; a -> d, b -> d; d -> EXIT
        g = method_cfg("if (c) { a(); } else { b(); } d();")
        assert g.node_count == 6
        if_node = g.node_labels.index("If")
        succ = sorted(b for a, b in g.edges if a == if_node)
        assert len(succ) == 2
        d_node = 5
        assert g.node_labels[d_node] == "ExprStatement"
        assert {(s, d_node) for s in succ} <= set(g.edges)
        assert (d_node, 1) in g.edges
        assert len(g.edges) == 6

    def test_if_without_else(self):
        g = method_cfg("if (c) a(); d();")
        # ENTRY->If, If->a, If->d, a->d, d->EXIT
        assert g.node_count == 5
        assert len(g.edges) == 5

    def test_while_back_edge(self):
        g = method_cfg("while (c) { a(); } b();")
        w = g.node_labels.index("While")
        a = g.node_labels.index("ExprStatement")
        assert (w, a) in g.edges
        assert (a, w) in g.edges  # back edge
        b = g.node_labels.index("ExprStatement", a + 1)
        assert (w, b) in g.edges

    def test_do_while(self):
        g = method_cfg("do { a(); } while (c);")
        do = g.node_labels.index("DoWhile")
        a = g.node_labels.index("ExprStatement")
        assert (0, a) in g.edges  # body entered directly
        assert (a, do) in g.edges
        assert (do, a) in g.edges  # back edge
        assert (do, 1) in g.edges

    def test_break_exits_loop(self):
        g = method_cfg("while (c) { if (x) break; a(); } b();")
        br = g.node_labels.index("Break")
        w = g.node_labels.index("While")
        b = [i for i, l in enumerate(g.node_labels) if l == "ExprStatement"][-1]
        succs_of_break = {t for s, t in g.edges if s == br}
        assert succs_of_break == {b}  # to the loop successor, never back to the header
        assert (w, b) in g.edges

    def test_continue_targets_header(self):
        g = method_cfg("while (c) { if (x) continue; a(); }")
        cont = g.node_labels.index("Continue")
        w = g.node_labels.index("While")
        assert {t for s, t in g.edges if s == cont} == {w}

    def test_return_goes_to_exit_and_unreachable_code_detaches(self):
        g = method_cfg("return; a();")
        ret = g.node_labels.index("Return")
        assert (ret, 1) in g.edges
        a = g.node_labels.index("ExprStatement")
        assert all(t != a for _, t in g.edges)

    def test_switch_shape(self):
        g = method_cfg("switch (k) { case 1: a(); break; case 2: b(); default: c(); } d();")
        sw = g.node_labels.index("Switch")
        cases = [i for i, l in enumerate(g.node_labels) if l == "Case"]
        assert len(cases) == 3
        for c in cases:
            assert (sw, c) in g.edges  # one edge per case
        b_stmt = cases[1] + 1
        default = cases[2]
        assert (b_stmt, default) in g.edges  # fall-through
        d = [i for i, l in enumerate(g.node_labels) if l == "ExprStatement"][-1]
        assert (sw, d) not in g.edges  # default present, no direct successor edge

    def test_switch_without_default_flows_to_successor(self):
        g = method_cfg("switch (k) { case 1: a(); break; } d();")
        sw = g.node_labels.index("Switch")
        d = [i for i, l in enumerate(g.node_labels) if l == "ExprStatement"][-1]
        assert (sw, d) in g.edges

    def test_try_catch_over_approximation(self):
        g = method_cfg("try { a(); b(); } catch (E e) { h(); } c();")
        catch = g.node_labels.index("Catch")
        stmts = [i for i, l in enumerate(g.node_labels) if l == "ExprStatement"]
        a_stmt, b_stmt, h_stmt, c_stmt = stmts
        assert (a_stmt, catch) in g.edges
        assert (b_stmt, catch) in g.edges
        assert (catch, h_stmt) in g.edges
        assert (b_stmt, c_stmt) in g.edges  # try exit
        assert (h_stmt, c_stmt) in g.edges  # catch exit

    def test_finally_joins_paths(self):
        g = method_cfg("try { a(); } catch (E e) { h(); } finally { f(); } z();")
        stmts = [i for i, l in enumerate(g.node_labels) if l == "ExprStatement"]
        a_stmt, h_stmt, f_stmt, z_stmt = stmts
        assert (a_stmt, f_stmt) in g.edges
        assert (h_stmt, f_stmt) in g.edges
        assert (f_stmt, z_stmt) in g.edges

    def test_throw_edges(self):
        g = method_cfg("if (x) throw new E(); a();")
        th = g.node_labels.index("Throw")
        assert (th, 1) in g.edges
        a = [i for i, l in enumerate(g.node_labels) if l == "ExprStatement"][-1]
        assert all(s != th or t == 1 for s, t in g.edges if s == th)
        assert (g.node_labels.index("If"), a) in g.edges

    def test_no_body_raises(self):
        ast = parse_file("interface I { void f(); }")
        with pytest.raises(ValueError):
            build_cfg(ast.find_all(NodeKind.METHOD_DECL)[0])
