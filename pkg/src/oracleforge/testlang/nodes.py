"""AST node types for the supported test-method subset.

The subset is deliberately small: straight-line statements, variable
declarations and assignments, call/field/constructor/cast expressions,
try/catch blocks, and JUnit-style assert calls.  Anything else survives
as an OpaqueStmt carrying its raw source text.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields


# --- expressions ---


@dataclass(frozen=True)
class Literal:
    """A literal constant. `text` is the exact source spelling, quotes included."""

    literal_type: str  # int | long | double | float | boolean | char | string | null
    text: str


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class MethodCall:
    receiver: "Expr | None"
    method: str
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class FieldAccess:
    receiver: "Expr"
    field_name: str


@dataclass(frozen=True)
class New:
    type_name: str
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Cast:
    type_name: str
    expr: "Expr"


@dataclass(frozen=True)
class OpaqueExpr:
    """A call argument outside the expression subset, kept verbatim.

    Only produced inside argument lists; assertTrue(x > y) stays a
    recognizable assert call even though its argument is opaque.
    """

    text: str


Expr = Literal | VarRef | MethodCall | FieldAccess | New | Cast | OpaqueExpr


# --- statements ---


@dataclass(frozen=True)
class AssertCall:
    """A call to an assert-family method (name starts with "assert", or "fail").

    `receiver` preserves an explicit qualifier such as "Assert" so that
    re-rendering a parsed test does not silently drop it.
    """

    method_name: str
    args: tuple[Expr, ...]
    receiver: str | None = None


@dataclass(frozen=True)
class VarDecl:
    declared_type: str
    name: str
    init: Expr | None


@dataclass(frozen=True)
class Assign:
    target: str
    value: Expr


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr


@dataclass(frozen=True)
class AssertStmt:
    call: AssertCall


@dataclass(frozen=True)
class TryCatch:
    body: tuple["Statement", ...]
    caught_type: str
    catch_body: tuple["Statement", ...]
    catch_var: str = "e"

    @property
    def has_fail_call(self) -> bool:
        """True when the try body ends with a fail() call."""
        if not self.body:
            return False
        last = self.body[-1]
        return isinstance(last, AssertStmt) and last.call.method_name == "fail"


@dataclass(frozen=True)
class OpaqueStmt:
    """A statement outside the subset, kept verbatim."""

    text: str


Statement = VarDecl | Assign | ExprStmt | AssertStmt | TryCatch | OpaqueStmt


@dataclass(frozen=True)
class TestMethod:
    name: str
    statements: tuple[Statement, ...]
    source_span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class TestPrefix:
    """An oracle-free statement sequence: no asserts, no try/fail shape."""

    statements: tuple[Statement, ...]


@dataclass(frozen=True)
class MethodSignature:
    """Parsed pieces of a focal-method signature."""

    modifiers: tuple[str, ...]
    return_type: str
    name: str
    params: tuple[tuple[str, str], ...]  # (type, name) in declaration order


@dataclass(frozen=True)
class UnitContext:
    """What the oracle generator knows about the unit under test."""

    class_name: str
    signature: str
    docstring: str = ""
    implementation_present: bool = False
    method: MethodSignature | None = field(default=None, compare=False)


def node_to_json(node):
    """Nested-dict form of an AST node, tagged with the node class name.

    Fields excluded from equality (source spans, attached method objects)
    are left out so the output is stable across reparses.
    """
    if node is None or isinstance(node, (str, int, float, bool)):
        return node
    if isinstance(node, tuple):
        return [node_to_json(item) for item in node]
    out = {"node": type(node).__name__}
    for f in fields(node):
        if not f.compare:
            continue
        out[f.name] = node_to_json(getattr(node, f.name))
    return out
