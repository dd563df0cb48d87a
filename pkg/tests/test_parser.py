import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixscout.java import parse_file
from fixscout.java.nodes import AstNode, NodeKind, ParseFailure
from fixscout.java.printer import pretty_print


def kinds(node: AstNode) -> list[str]:
    return [n.kind.value for n in node.walk()]


def test_minimal_class():
    ast = parse_file("class A {}")
    assert isinstance(ast, AstNode)
    assert ast.kind == NodeKind.COMPILATION_UNIT
    assert [c.kind for c in ast.children] == [NodeKind.CLASS_DECL]
    assert ast.children[0].token == "A"
    assert ast.children[0].find_all(NodeKind.METHOD_DECL) == []


def test_method_node_sequence():
    # expected tree written out by hand:
    # CompilationUnit > ClassDecl > MethodDecl > Block > Return > Literal
    ast = parse_file("class A { int f(){ return 1; } }")
    assert isinstance(ast, AstNode)
    assert kinds(ast) == ["CompilationUnit", "ClassDecl", "MethodDecl", "Block", "Return", "Literal"]
    method = ast.children[0].children[0]
    assert method.token == "f"
    assert method.type_name == "int"
    literal = method.children[0].children[0].children[0]
    assert literal.token == "1"
    assert literal.literal_kind == "int"


def test_parse_failure_is_a_value():
    result = parse_file("class A { int f( }")
    assert isinstance(result, ParseFailure)
    assert result.line == 1
    assert result.column >= 17


@pytest.mark.parametrize(
    "source",
    [
        "class A { enum E {X} }",
        "class A { void f() { synchronized (x) { y(); } } }",
        "class A { void f() { loop: while (true) break loop; } }",
        "@interface Anno {}",
    ],
)
def test_outside_subset_fails(source):
    assert isinstance(parse_file(source), ParseFailure)


def test_spans_nested_in_parent():
    src = "class A {\n  int f() {\n    if (x) {\n      g();\n    }\n    return 0;\n  }\n}\n"
    ast = parse_file(src)
    assert isinstance(ast, AstNode)

    def check(node):
        for child in node.children:
            assert node.span[0] <= child.span[0] <= child.span[1] <= node.span[1]
            check(child)

    check(ast)
    cls = ast.children[0]
    assert cls.span == (1, 8)
    assert cls.children[0].span == (2, 7)


def test_constructor_has_no_return_type():
    ast = parse_file("class A { A(int x) {} void f() {} }")
    methods = ast.find_all(NodeKind.METHOD_DECL)
    assert [m.is_constructor for m in methods] == [True, False]


def test_interface_and_anonymous_class():
    src = """
    interface Greeter { String greet(String who); }
    class Main {
        Greeter g = new Greeter() {
            public String greet(String who) { return "hi " + who; }
        };
    }
    """
    ast = parse_file(src)
    assert isinstance(ast, AstNode)
    assert ast.children[0].kind == NodeKind.INTERFACE_DECL
    anon = [n for n in ast.walk() if n.kind == NodeKind.CLASS_DECL and "anonymous" in n.modifiers]
    assert len(anon) == 1
    assert anon[0].token == "Greeter"


def test_generics_are_erased():
    ast = parse_file("class A { java.util.Map<String, java.util.List<Integer>> m; }")
    fld = ast.find_all(NodeKind.FIELD_DECL)[0]
    assert fld.type_name == "java.util.Map"


def test_lambda_is_opaque_leaf():
    ast = parse_file("class A { void f() { run(x -> x.close(), () -> { a(); b(); }); } }")
    lambdas = ast.find_all(NodeKind.LAMBDA)
    assert len(lambdas) == 2
    assert all(not l.children for l in lambdas)


def test_less_than_is_not_generics():
    ast = parse_file("class A { boolean f(int a, int b) { return a < b && b > a; } }")
    assert isinstance(ast, AstNode)
    ops = [n.token for n in ast.find_all(NodeKind.BINARY_OP)]
    assert ops == ["&&", "<", ">"]


def test_multi_declarator_field_splits():
    ast = parse_file("class A { private int a = 1, b; }")
    fields = ast.find_all(NodeKind.FIELD_DECL)
    assert [f.token for f in fields] == ["a", "b"]
    assert all(f.modifiers == ("private",) for f in fields)


SNIPPETS = [
    "class A { void f() { if (a) b(); else { c(); } } }",
    "class A { int f(int n) { int s = 0; for (int i = 0; i < n; i++) s += i; return s; } }",
    "class A { void f() { while (x) { if (y) break; else continue; } } }",
    "class A { void f() { do { g(); } while (p()); } }",
    "class A { void f(int k) { switch (k) { case 1: a(); break; case 2: default: b(); } } }",
    "class A { void f() { try { a(); } catch (E1 | E2 e) { b(); } finally { c(); } } }",
    "class A { void f() { for (String s : items) use(s); } }",
    "class A { int[] f() { return new int[] { 1, 2, 3 }; } }",
    "class A { Object f() { return cond ? new B(1) : null; } }",
    "class A { void f() { x = (int) ((long) y + 1); } }",
    "class A { void f() { assert x != null : \"boom\"; } }",
    "class A { void f() { a.b.c.d(e.f, g[h]).i++; } }",
    "interface I { int g(); default int h() { return g() * 2; } }",
]


@pytest.mark.parametrize("source", SNIPPETS)
def test_round_trip_kind_identical(source):
    ast = parse_file(source)
    assert isinstance(ast, AstNode), ast
    printed = pretty_print(ast)
    ast2 = parse_file(printed)
    assert isinstance(ast2, AstNode), (ast2, printed)
    assert ast.kind_tree() == ast2.kind_tree(), printed


@st.composite
def java_classes(draw):
    """Small random programs assembled from statement templates."""
    stmts = draw(
        st.lists(
            st.sampled_from(
                [
                    "int x = {n};",
                    "x = x + {n};",
                    "if (x > {n}) {{ x--; }}",
                    "if (x == {n}) x = 0; else x = 1;",
                    "while (x < {n}) {{ x++; }}",
                    "for (int i = 0; i < {n}; i++) {{ use(i); }}",
                    "try {{ risky(); }} catch (Exception e) {{ x = {n}; }}",
                    "switch (x) {{ case {n}: done(); break; default: x = 2; }}",
                    "return;",
                ]
            ),
            min_size=1,
            max_size=6,
        )
    )
    nums = [draw(st.integers(min_value=0, max_value=99)) for _ in stmts]
    body = "\n        ".join(s.format(n=n) for s, n in zip(stmts, nums))
    return "class G {\n    void f() {\n        " + body + "\n    }\n}\n"


@given(java_classes())
@settings(max_examples=60, deadline=None)
def test_round_trip_property(source):
    ast = parse_file(source)
    assert isinstance(ast, AstNode), (ast, source)
    printed = pretty_print(ast)
    ast2 = parse_file(printed)
    assert isinstance(ast2, AstNode), (ast2, printed)
    assert ast.kind_tree() == ast2.kind_tree()
