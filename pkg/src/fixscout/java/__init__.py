"""Java-subset front end: lexer, parser, AST, and per-method control-flow graphs."""

from fixscout.java.nodes import AstNode, NodeKind, ParseFailure
from fixscout.java.parser import parse_file
from fixscout.java.cfg import CodeGraph, ast_to_graph, build_cfg

__all__ = [
    "AstNode",
    "NodeKind",
    "ParseFailure",
    "parse_file",
    "CodeGraph",
    "ast_to_graph",
    "build_cfg",
]
