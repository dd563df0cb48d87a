import pytest

from fixscout.analyzers.clsmetrics import (
    METRIC_IDS,
    MetricsAnalyzer,
    class_metrics,
    cyclomatic_complexity,
    file_metrics_vector,
)
from fixscout.java.nodes import NodeKind
from fixscout.java.parser import parse_file


def rows_for(source: str):
    ast = parse_file(source)
    assert not hasattr(ast, "message"), ast
    return class_metrics(ast)


def test_empty_class():
    (row,) = rows_for("class A {}")
    assert row.class_name == "A"
    assert row.class_type == "class"
    assert row.metrics["wmc"] == 0
    assert row.metrics["method_count"] == 0
    assert row.metrics["dit"] == 1
    assert row.metrics["loc"] == 1


def test_wmc_two_methods_one_if_each():
    # hand-computed per McCabe: each method has one decision -> complexity 2; WMC = 4
    src = """
    class A {
        int f(int x) { if (x > 0) { return x; } return 0; }
        int g(int y) { if (y > 0) { return y; } return 0; }
    }
    """
    (row,) = rows_for(src)
    assert row.metrics["wmc"] == 4
    assert row.metrics["method_count"] == 2


@pytest.mark.parametrize(
    "body,expected",
    [
        ("return 1;", 1),
        ("if (a) { x(); } return 1;", 2),
        ("if (a && b) { x(); } return 1;", 3),
        ("for (int i = 0; i < n; i++) { if (p(i)) x(); } return 1;", 3),
        ("try { x(); } catch (E e) { y(); } return 1;", 2),
        ("switch (k) { case 1: a(); break; case 2: b(); break; default: c(); } return 1;", 3),
        ("return a > 0 ? 1 : 2;", 2),
        ("while (a) { do { x(); } while (b); } return 1;", 3),
    ],
)
def test_cyclomatic_complexity_cases(body, expected):
    ast = parse_file("class A { int f(int a, int b, int n, int k) { " + body + " } }")
    method = ast.find_all(NodeKind.METHOD_DECL)[0]
    assert cyclomatic_complexity(method) == expected


def test_lcom_single_method_is_zero():
    src = """
    class A {
        int a; int b; int c;
        int f() { return a; }
    }
    """
    (row,) = rows_for(src)
    assert row.metrics["lcom"] == 0
    assert row.metrics["field_count"] == 3


def test_lcom_pair_counting():
    # methods: f uses {a}, g uses {a, b}, h uses {c}
    # pairs sharing no field, enumerated by hand: (f,h), (g,h) -> LCOM1 = 2
    src = """
    class A {
        int a; int b; int c;
        int f() { return a; }
        int g() { return a + b; }
        int h() { return c; }
    }
    """
    (row,) = rows_for(src)
    assert row.metrics["lcom"] == 2


def test_dit_chain_within_file():
    src = """
    class Base {}
    class Mid extends Base {}
    class Leaf extends Mid {}
    class Orphan extends SomewhereElse {}
    """
    rows = {r.class_name: r.metrics for r in rows_for(src)}
    assert rows["Base"]["dit"] == 1
    assert rows["Mid"]["dit"] == 2
    assert rows["Leaf"]["dit"] == 3
    assert rows["Orphan"]["dit"] == 1  # unresolvable parent


def test_cbo_distinct_non_jdk_types():
    # referenced: Base (extends), Widget (field), Gadget (param), Helper (new),
    # CustomError (catch); String/int/List are allowlisted  -> CBO = 5
    src = """
    class A extends Base {
        Widget w;
        String name;
        void f(Gadget g, int n) {
            Helper h = new Helper();
            try { h.go(); } catch (CustomError e) { }
        }
    }
    """
    (row,) = rows_for(src)
    assert row.metrics["cbo"] == 5


def test_rfc_methods_plus_distinct_calls():
    # declared methods: f, g (2); distinct invoked names: a, b (2) -> RFC 4
    src = """
    class A {
        void f() { a(); b(); a(); }
        void g() { b(); }
    }
    """
    (row,) = rows_for(src)
    assert row.metrics["rfc"] == 4


def test_count_metrics():
    src = """
    class A {
        int f(int n) {
            int total = 0;
            for (int i = 0; i < n; i++) { total += i; }
            while (total > 100) { total = total - 7; }
            try { g("x"); } catch (E e) { return -1; }
            return total;
        }
    }
    """
    (row,) = rows_for(src)
    m = row.metrics
    assert m["loop_count"] == 2
    assert m["try_count"] == 1
    assert m["return_count"] == 2
    assert m["comparison_count"] == 2  # i < n, total > 100
    assert m["string_literal_count"] == 1
    assert m["number_literal_count"] == 5  # 0, 0, 100, 7, 1 (the -1 literal)
    assert m["math_op_count"] == 1  # total - 7 (compound assignment += not counted)
    assert m["variable_count"] == 2  # total, i
    assert m["max_nesting"] == 1


def test_static_methods_and_interface_type():
    src = """
    interface I { int f(); }
    class A { static void util() {} void inst() {} }
    """
    rows = {r.class_name: r for r in rows_for(src)}
    assert rows["I"].class_type == "interface"
    assert rows["I"].metrics["method_count"] == 1
    assert rows["A"].metrics["static_method_count"] == 1


def test_nested_and_anonymous_classes_get_own_rows():
    src = """
    class Outer {
        int x;
        class Inner { int f() { return 1; } }
        Runnable r = new Runnable() { public void run() { a(); b(); } };
        void g() { x++; }
    }
    """
    rows = rows_for(src)
    names = [(r.class_name, r.class_type) for r in rows]
    assert ("Outer", "class") in names
    assert ("Inner", "class") in names
    assert ("Runnable", "anonymous") in names
    outer = next(r for r in rows if r.class_name == "Outer")
    # Inner's method and the anonymous run() are not Outer's
    assert outer.metrics["method_count"] == 1
    assert outer.metrics["rfc"] == 1  # g plus no calls of its own


def test_all_metrics_non_negative_and_loc_positive():
    src = "class A { int f() { return 1; } }"
    for row in rows_for(src):
        assert all(v >= 0 for v in row.metrics.values())
        assert row.metrics["loc"] >= 1
        assert row.metrics["wmc"] >= row.metrics["method_count"]


class TestFileVector:
    def test_single_class_identity(self):
        rows = rows_for("class A { void f() {} }")
        vec = file_metrics_vector(rows)
        assert vec.as_dict() == {**dict.fromkeys(METRIC_IDS, 0.0), **rows[0].metrics}

    def test_additivity(self):
        rows = rows_for("class A { void f() {} void g() {} }\nclass B { void h() {} void i() {} void j() {} }")
        vec = file_metrics_vector(rows)
        assert vec["method_count"] == 5

    def test_empty_rows_zero_vector(self):
        vec = file_metrics_vector([])
        assert all(v == 0 for v in vec.values)


def test_analyzer_parse_error_vector():
    analyzer = MetricsAnalyzer()
    vec = analyzer.analyze("class A { broken(")
    assert vec["parse_error"] == 1
    assert sum(vec.values) == 1
