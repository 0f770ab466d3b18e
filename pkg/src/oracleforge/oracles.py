"""Oracle grammar: classify assertions, strip oracles from tests, render them back.

An oracle is either an expected exception (the try/fail/catch shape) or one
of five assert forms: assertEquals with a constant-or-variable expected side,
assertTrue, assertFalse, assertNull, assertNotNull.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InvalidOracle
from .testlang import (
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
    Statement,
    TestMethod,
    TestPrefix,
    TryCatch,
    VarDecl,
    VarRef,
    render_expr,
)

# --- oracle types ---


@dataclass(frozen=True)
class Equals:
    expected: Expr  # restricted to Literal | VarRef
    actual: Expr


@dataclass(frozen=True)
class IsTrue:
    expr: Expr


@dataclass(frozen=True)
class IsFalse:
    expr: Expr


@dataclass(frozen=True)
class IsNull:
    expr: Expr


@dataclass(frozen=True)
class NotNull:
    expr: Expr


AssertionForm = Equals | IsTrue | IsFalse | IsNull | NotNull

_FORM_TO_METHOD = {
    Equals: "assertEquals",
    IsTrue: "assertTrue",
    IsFalse: "assertFalse",
    IsNull: "assertNull",
    NotNull: "assertNotNull",
}
_UNARY_METHODS = {
    "assertTrue": IsTrue,
    "assertFalse": IsFalse,
    "assertNull": IsNull,
    "assertNotNull": NotNull,
}

GENERIC_EXCEPTION_TYPES = frozenset(
    ["Exception", "Throwable", "java.lang.Exception", "java.lang.Throwable"]
)


@dataclass(frozen=True)
class ExpectedException:
    """Oracle: the prefix must raise. exception_type None means unspecified."""

    exception_type: str | None = None


@dataclass(frozen=True)
class Assertion:
    form: AssertionForm


Oracle = ExpectedException | Assertion


@dataclass(frozen=True)
class OutOfGrammar:
    """Why an assert call is not representable in the oracle grammar."""

    reason: str  # unsupported-method | expected-not-const-or-var | arity
    call: AssertCall


def classify_assertion(call: AssertCall) -> AssertionForm | OutOfGrammar:
    """Map one assert call into the grammar, or say why it does not fit.

    A two-argument assertEquals with the constant second (a widespread
    corpus style) is canonicalized to put the Literal first.
    """
    name = call.method_name
    if name == "assertEquals":
        if len(call.args) != 2:
            return OutOfGrammar("arity", call)
        first, second = call.args
        if isinstance(first, (Literal, VarRef)):
            return Equals(first, second)
        if isinstance(second, (Literal, VarRef)):
            return Equals(second, first)
        return OutOfGrammar("expected-not-const-or-var", call)
    if name in _UNARY_METHODS:
        if len(call.args) != 1:
            return OutOfGrammar("arity", call)
        return _UNARY_METHODS[name](call.args[0])
    return OutOfGrammar("unsupported-method", call)


def assertion_to_call(form: AssertionForm) -> AssertCall:
    if isinstance(form, Equals):
        return AssertCall("assertEquals", (form.expected, form.actual))
    return AssertCall(_FORM_TO_METHOD[type(form)], (form.expr,))


def render_assertion(form: AssertionForm) -> str:
    call = assertion_to_call(form)
    args = ", ".join(render_expr(a) for a in call.args)
    return f"{call.method_name}({args})"


# --- stripping ---


@dataclass(frozen=True)
class StripResult:
    """Oracles removed from a test, plus the oracle-free prefixes.

    kind is "exception", "assertions", or "none" (the distinguished
    no-oracle result).  per_oracle_prefixes pairs each oracle with the
    prefix that drives it; for an expected exception there is exactly one
    pair.  out_of_grammar lists assert calls that were removed but do not
    fit the grammar.
    """

    kind: str
    prefix: TestPrefix
    oracles: tuple[Oracle, ...]
    per_oracle_prefixes: tuple[tuple[TestPrefix, Oracle], ...]
    out_of_grammar: tuple[OutOfGrammar, ...] = ()


def _is_fail_stmt(stmt: Statement) -> bool:
    return isinstance(stmt, AssertStmt) and stmt.call.method_name == "fail"


def _contains_fail(statements: tuple[Statement, ...]) -> bool:
    return any(_is_fail_stmt(s) for s in statements)


def _scrub_asserts(stmt: Statement) -> Statement:
    """Remove assert statements nested inside a retained try/catch."""
    if not isinstance(stmt, TryCatch):
        return stmt
    body = tuple(_scrub_asserts(s) for s in stmt.body if not isinstance(s, AssertStmt))
    catch = tuple(
        _scrub_asserts(s) for s in stmt.catch_body if not isinstance(s, AssertStmt)
    )
    return TryCatch(body, stmt.caught_type, catch, stmt.catch_var)


def _exception_type_from(trycatch: TryCatch) -> str | None:
    """Expected type: an explicit verifyException argument wins, then a
    specific caught type; a generic catch means unspecified."""
    for stmt in trycatch.catch_body:
        if (
            isinstance(stmt, ExprStmt)
            and isinstance(stmt.expr, MethodCall)
            and stmt.expr.method == "verifyException"
            and len(stmt.expr.args) >= 2
        ):
            rendered = render_expr(stmt.expr.args[1])
            if rendered.startswith('"') and rendered.endswith('"'):
                rendered = rendered[1:-1]
            return rendered
    if trycatch.caught_type not in GENERIC_EXCEPTION_TYPES:
        return trycatch.caught_type
    return None


def strip_oracles(test: TestMethod) -> StripResult:
    """Split a test into its oracle-free prefix and the oracles it carried.

    The first try block whose body ends in fail() is the expected-exception
    shape and wins outright.  Otherwise every assert statement is removed;
    the in-grammar ones become oracles, each paired with the statements that
    precede it.  A try block whose catch (not body) ends in fail() asserts
    the absence of an exception; its body is unwrapped into the prefix.
    """
    for index, stmt in enumerate(test.statements):
        if isinstance(stmt, TryCatch) and stmt.has_fail_call:
            kept: list[Statement] = [
                _scrub_asserts(s)
                for s in test.statements[:index]
                if not isinstance(s, AssertStmt)
            ]
            kept.extend(
                _scrub_asserts(s) for s in stmt.body if not isinstance(s, AssertStmt)
            )
            prefix = TestPrefix(tuple(kept))
            oracle = ExpectedException(_exception_type_from(stmt))
            return StripResult(
                "exception", prefix, (oracle,), ((prefix, oracle),)
            )

    kept = []
    oracles: list[Oracle] = []
    pairs: list[tuple[TestPrefix, Oracle]] = []
    rejected: list[OutOfGrammar] = []
    for stmt in test.statements:
        if isinstance(stmt, AssertStmt):
            outcome = classify_assertion(stmt.call)
            if isinstance(outcome, OutOfGrammar):
                rejected.append(outcome)
            else:
                oracle = Assertion(outcome)
                oracles.append(oracle)
                pairs.append((TestPrefix(tuple(kept)), oracle))
            continue
        if isinstance(stmt, TryCatch) and _contains_fail(stmt.catch_body):
            kept.extend(
                _scrub_asserts(s) for s in stmt.body if not isinstance(s, AssertStmt)
            )
            continue
        kept.append(_scrub_asserts(stmt))
    prefix = TestPrefix(tuple(kept))
    kind = "assertions" if oracles else "none"
    return StripResult(kind, prefix, tuple(oracles), tuple(pairs), tuple(rejected))


# --- rendering oracles back into tests ---


def _defined_names(prefix: TestPrefix) -> set[str]:
    names: set[str] = set()

    def walk(statements: tuple[Statement, ...]) -> None:
        for stmt in statements:
            if isinstance(stmt, VarDecl):
                names.add(stmt.name)
            elif isinstance(stmt, Assign):
                names.add(stmt.target)
            elif isinstance(stmt, TryCatch):
                names.add(stmt.catch_var)
                walk(stmt.body)
                walk(stmt.catch_body)

    walk(prefix.statements)
    return names


def _referenced_names(expr: Expr) -> set[str]:
    """Lowercase-initial VarRef names; uppercase-initial ones are class refs."""
    out: set[str] = set()
    if isinstance(expr, VarRef):
        if expr.name[:1].islower() or expr.name[:1] == "_":
            out.add(expr.name)
    elif isinstance(expr, MethodCall):
        if expr.receiver is not None:
            out |= _referenced_names(expr.receiver)
        for arg in expr.args:
            out |= _referenced_names(arg)
    elif isinstance(expr, FieldAccess):
        out |= _referenced_names(expr.receiver)
    elif isinstance(expr, New):
        for arg in expr.args:
            out |= _referenced_names(arg)
    elif isinstance(expr, Cast):
        out |= _referenced_names(expr.expr)
    return out


def assertion_free_variables(form: AssertionForm) -> set[str]:
    call = assertion_to_call(form)
    names: set[str] = set()
    for arg in call.args:
        names |= _referenced_names(arg)
    return names


def render_oracle_test(prefix: TestPrefix, oracle: Oracle, name: str) -> TestMethod:
    """Build a complete test method from a prefix and one oracle.

    Expected-exception oracles wrap the whole prefix in
    try { ...; fail("expecting exception"); } catch (Exception e) { ... },
    with a verifyException call when the type is known.
    """
    if not prefix.statements:
        raise InvalidOracle("empty prefix")
    if isinstance(oracle, Assertion):
        missing = assertion_free_variables(oracle.form) - _defined_names(prefix)
        if missing:
            raise InvalidOracle(
                f"assertion references undefined variable(s): {', '.join(sorted(missing))}"
            )
        stmts = prefix.statements + (AssertStmt(assertion_to_call(oracle.form)),)
        return TestMethod(name, stmts)
    body = prefix.statements + (
        AssertStmt(AssertCall("fail", (Literal("string", '"expecting exception"'),))),
    )
    catch_body: tuple[Statement, ...] = ()
    if oracle.exception_type is not None:
        catch_body = (
            ExprStmt(
                MethodCall(
                    None,
                    "verifyException",
                    (VarRef("e"), VarRef(oracle.exception_type)),
                )
            ),
        )
    return TestMethod(name, (TryCatch(body, "Exception", catch_body, "e"),))


# --- small helpers over whole tests ---

_TEST_N = re.compile(r"^test\d+$")


def normalize_test_name(test: TestMethod, n: int) -> TestMethod:
    return TestMethod(f"test{n}", test.statements, test.source_span)


def is_normalized_name(name: str) -> bool:
    return _TEST_N.match(name) is not None


def label_exception(test: TestMethod) -> int:
    """1 when the test's oracle is an expected exception, else 0."""
    return 1 if strip_oracles(test).kind == "exception" else 0
