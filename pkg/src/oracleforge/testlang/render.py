"""Canonical source rendering: two-space indent, one statement per line."""
from __future__ import annotations

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
    New,
    OpaqueExpr,
    OpaqueStmt,
    Statement,
    TestMethod,
    TryCatch,
    VarDecl,
    VarRef,
)

_INDENT = "  "


def render_expr(expr: Expr) -> str:
    if isinstance(expr, Literal):
        return expr.text
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, MethodCall):
        args = ", ".join(render_expr(a) for a in expr.args)
        if expr.receiver is None:
            return f"{expr.method}({args})"
        return f"{render_expr(expr.receiver)}.{expr.method}({args})"
    if isinstance(expr, FieldAccess):
        return f"{render_expr(expr.receiver)}.{expr.field_name}"
    if isinstance(expr, New):
        args = ", ".join(render_expr(a) for a in expr.args)
        return f"new {expr.type_name}({args})"
    if isinstance(expr, Cast):
        return f"({expr.type_name}) {render_expr(expr.expr)}"
    if isinstance(expr, OpaqueExpr):
        return expr.text
    raise TypeError(f"unknown expression node: {expr!r}")


def render_assert_call(call: AssertCall) -> str:
    args = ", ".join(render_expr(a) for a in call.args)
    if call.receiver is None:
        return f"{call.method_name}({args})"
    return f"{call.receiver}.{call.method_name}({args})"


def render_statement(stmt: Statement, depth: int = 1) -> list[str]:
    pad = _INDENT * depth
    if isinstance(stmt, VarDecl):
        if stmt.init is None:
            return [f"{pad}{stmt.declared_type} {stmt.name};"]
        return [f"{pad}{stmt.declared_type} {stmt.name} = {render_expr(stmt.init)};"]
    if isinstance(stmt, Assign):
        return [f"{pad}{stmt.target} = {render_expr(stmt.value)};"]
    if isinstance(stmt, ExprStmt):
        return [f"{pad}{render_expr(stmt.expr)};"]
    if isinstance(stmt, AssertStmt):
        return [f"{pad}{render_assert_call(stmt.call)};"]
    if isinstance(stmt, TryCatch):
        lines = [f"{pad}try {{"]
        for inner in stmt.body:
            lines.extend(render_statement(inner, depth + 1))
        lines.append(f"{pad}}} catch ({stmt.caught_type} {stmt.catch_var}) {{")
        for inner in stmt.catch_body:
            lines.extend(render_statement(inner, depth + 1))
        lines.append(f"{pad}}}")
        return lines
    if isinstance(stmt, OpaqueStmt):
        return [pad + stmt.text]
    raise TypeError(f"unknown statement node: {stmt!r}")


def render_prefix(prefix) -> str:
    """Statements only, no method wrapper, no indent."""
    lines: list[str] = []
    for stmt in prefix.statements:
        lines.extend(render_statement(stmt, 0))
    return "\n".join(lines)


def render_test_method(test: TestMethod) -> str:
    lines = [f"public void {test.name}() {{"]
    for stmt in test.statements:
        lines.extend(render_statement(stmt))
    lines.append("}")
    return "\n".join(lines)
