"""Parsing and rendering for the supported unit-test subset."""
from .nodes import (
    AssertCall,
    AssertStmt,
    Assign,
    Cast,
    Expr,
    ExprStmt,
    FieldAccess,
    Literal,
    MethodCall,
    MethodSignature,
    New,
    OpaqueExpr,
    OpaqueStmt,
    Statement,
    TestMethod,
    TestPrefix,
    TryCatch,
    UnitContext,
    VarDecl,
    VarRef,
    node_to_json,
)
from .parser import (
    parse_assert_line,
    parse_expression,
    parse_signature,
    parse_test_method,
)
from .render import (
    render_assert_call,
    render_expr,
    render_prefix,
    render_statement,
    render_test_method,
)

__all__ = [
    "AssertCall",
    "AssertStmt",
    "Assign",
    "Cast",
    "Expr",
    "ExprStmt",
    "FieldAccess",
    "Literal",
    "MethodCall",
    "MethodSignature",
    "New",
    "OpaqueExpr",
    "OpaqueStmt",
    "Statement",
    "TestMethod",
    "TestPrefix",
    "TryCatch",
    "UnitContext",
    "VarDecl",
    "VarRef",
    "node_to_json",
    "parse_assert_line",
    "parse_expression",
    "parse_signature",
    "parse_test_method",
    "render_assert_call",
    "render_prefix",
    "render_expr",
    "render_statement",
    "render_test_method",
]
