"""Recursive-descent parser for the test subset.

Parsing is total at the statement level: constructs outside the subset
(loops, conditionals, lambdas, multi-catch, arithmetic) fall back to
OpaqueStmt nodes carrying the raw source slice.  Structural damage such
as unbalanced braces or an unterminated string raises ParseError.
"""
from __future__ import annotations

from ..errors import ParseError
from .lexer import Token, lex, literal_type_of
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
    TryCatch,
    UnitContext,
    VarDecl,
    VarRef,
)

_RESERVED = frozenset(
    "abstract assert break case catch class const continue default do else enum "
    "extends final finally for goto if implements import instanceof interface "
    "native new package private protected public return static strictfp super "
    "switch synchronized this throw throws transient try void volatile while".split()
)
_MODIFIERS = frozenset(
    "public private protected static final abstract synchronized native default strictfp".split()
)
_BLOCK_KEYWORDS = frozenset("if for while do switch synchronized return throw assert".split())
_ASSERT_RECEIVERS = frozenset(["Assert", "org.junit.Assert", "junit.framework.Assert"])


class _Unsupported(Exception):
    """Internal: expression/statement shape outside the subset."""


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = lex(source)
        self.pos = 0

    # --- token plumbing ---

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("punct", "ident")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise ParseError(self.peek().start, repr(text))
        return self.advance()

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in _RESERVED:
            raise ParseError(tok.start, "identifier")
        return self.advance()

    # --- method level ---

    def parse_method(self) -> TestMethod:
        self._skip_annotations()
        start = self.peek().start
        name = self._parse_header()
        self.expect("{")
        statements = self._parse_statements_until_close()
        end = self.tokens[self.pos - 1].end
        if self.peek().kind != "eof":
            raise ParseError(self.peek().start, "end of input")
        if not statements:
            raise ParseError(end, "non-empty method body")
        return TestMethod(name, tuple(statements), (start, end))

    def _skip_annotations(self) -> None:
        while self.at("@"):
            self.advance()
            self.expect_ident()
            if self.at("("):
                self._skip_balanced("(", ")")

    def _parse_header(self) -> str:
        name: str | None = None
        while not self.at("(") :
            tok = self.peek()
            if tok.kind == "eof" or tok.text == "{":
                raise ParseError(tok.start, "method header")
            if tok.kind == "ident" and tok.text not in _RESERVED - {"void"}:
                name = tok.text
            elif tok.kind == "ident" and tok.text in _MODIFIERS | {"void"}:
                pass
            elif tok.kind == "punct" and tok.text in "<>[].,":
                pass
            else:
                raise ParseError(tok.start, "method header")
            self.advance()
        if name is None:
            raise ParseError(self.peek().start, "method name")
        self._skip_balanced("(", ")")
        if self.at("throws"):
            self.advance()
            self.expect_ident()
            while self.at(","):
                self.advance()
                self.expect_ident()
        return name

    def _skip_balanced(self, opener: str, closer: str) -> None:
        start = self.expect(opener).start
        depth = 1
        while depth:
            tok = self.advance()
            if tok.kind == "eof":
                raise ParseError(start, f"matching {closer!r}")
            if tok.text == opener and tok.kind == "punct":
                depth += 1
            elif tok.text == closer and tok.kind == "punct":
                depth -= 1

    def _parse_statements_until_close(self) -> list[Statement]:
        statements: list[Statement] = []
        while not self.at("}"):
            if self.peek().kind == "eof":
                raise ParseError(self.peek().start, "'}'")
            statements.append(self.parse_statement())
        self.advance()
        return statements

    # --- statements ---

    def parse_statement(self) -> Statement:
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "try":
            return self._parse_try()
        if tok.kind == "ident" and tok.text in _BLOCK_KEYWORDS:
            return self._opaque_statement()

        mark = self.pos
        try:
            return self._parse_var_decl()
        except ParseError:
            self.pos = mark
        try:
            return self._parse_assign()
        except ParseError:
            self.pos = mark
        try:
            expr = self.parse_expr()
            self.expect(";")
            return _to_statement(expr)
        except (ParseError, _Unsupported):
            self.pos = mark
        return self._opaque_statement()

    def _parse_var_decl(self) -> VarDecl:
        if self.at("final"):
            self.advance()
        declared_type = self._parse_type_name()
        name = self.expect_ident().text
        if self.at(";"):
            self.advance()
            return VarDecl(declared_type, name, None)
        self.expect("=")
        try:
            init = self.parse_expr()
        except _Unsupported as exc:
            raise ParseError(self.peek().start, "expression") from exc
        self.expect(";")
        return VarDecl(declared_type, name, init)

    def _parse_assign(self) -> Assign:
        target = self.expect_ident().text
        self.expect("=")
        try:
            value = self.parse_expr()
        except _Unsupported as exc:
            raise ParseError(self.peek().start, "expression") from exc
        self.expect(";")
        return Assign(target, value)

    def _parse_try(self) -> Statement:
        mark = self.pos
        self.expect("try")
        if not self.at("{"):
            self.pos = mark
            return self._opaque_statement()  # try-with-resources
        self.advance()
        body = self._parse_statements_until_close()
        if not self.at("catch"):
            self.pos = mark
            return self._opaque_statement()  # bare try/finally
        self.advance()
        self.expect("(")
        if self.at("final"):
            self.advance()
        caught_type = self._parse_type_name()
        if not self.at(")"):
            catch_var = self.expect_ident().text
        else:
            catch_var = "e"
        self.expect(")")
        self.expect("{")
        catch_body = self._parse_statements_until_close()
        if self.at("catch") or self.at("finally"):
            self.pos = mark
            return self._opaque_statement()
        return TryCatch(tuple(body), caught_type, tuple(catch_body), catch_var)

    def _opaque_statement(self) -> Statement:
        """Consume one statement-shaped run of tokens verbatim.

        Stops at a top-level ';', or after a balanced '{...}' block unless a
        continuation keyword (else/catch/finally/while) follows it.
        """
        start_tok = self.peek()
        if start_tok.kind == "eof" or start_tok.text == "}":
            raise ParseError(start_tok.start, "statement")
        depth = 0
        last = start_tok
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                raise ParseError(start_tok.start, "statement terminator")
            if depth == 0 and tok.text == "}" and tok.kind == "punct":
                if last is start_tok:
                    raise ParseError(tok.start, "statement")
                break
            last = self.advance()
            if last.kind == "punct":
                if last.text in "({":
                    depth += 1
                elif last.text in ")}":
                    depth -= 1
                    if depth < 0:
                        raise ParseError(last.start, "balanced statement")
                    if depth == 0 and last.text == "}":
                        if self.peek().kind == "ident" and self.peek().text in (
                            "else",
                            "catch",
                            "finally",
                            "while",
                        ):
                            continue
                        break
                elif last.text == ";" and depth == 0:
                    break
        return OpaqueStmt(self.source[start_tok.start : last.end])

    # --- types and expressions ---

    def _parse_type_name(self) -> str:
        first = self.peek()
        if first.kind != "ident" or (first.text in _RESERVED and not _is_primitive(first.text)):
            raise ParseError(first.start, "type name")
        self.advance()
        while self.at(".") and self.peek(1).kind == "ident":
            self.advance()
            if self.peek().text in _RESERVED:
                raise ParseError(self.peek().start, "type name segment")
            self.advance()
        if self.at("<"):
            depth = 0
            opener = self.peek().start
            while True:
                tok = self.advance()
                if tok.kind == "eof" or tok.text in (";", "{", "}"):
                    raise ParseError(opener, "closing '>'")
                if tok.text == "<":
                    depth += 1
                elif tok.text == ">":
                    depth -= 1
                    if depth == 0:
                        break
        while self.at("[") and self.peek(1).text == "]":
            self.advance()
            self.advance()
        end = self.tokens[self.pos - 1].end
        return _squeeze(self.source[first.start : end])

    def parse_expr(self) -> Expr:
        expr = self._parse_primary()
        while self.at(".") and self.peek(1).kind == "ident":
            self.advance()
            member = self.advance().text
            if self.at("("):
                expr = MethodCall(expr, member, self._parse_args())
            else:
                expr = FieldAccess(expr, member)
        return expr

    def _parse_primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "punct" and tok.text == "-":
            nxt = self.peek(1)
            if nxt.kind != "number":
                raise _Unsupported()
            self.advance()
            self.advance()
            merged = Token("number", "-" + nxt.text, tok.start, nxt.end)
            return Literal(literal_type_of(merged), merged.text)
        if tok.kind in ("number", "string", "char"):
            self.advance()
            return Literal(literal_type_of(tok), tok.text)
        if tok.kind == "punct" and tok.text == "(":
            return self._parse_cast_or_group()
        if tok.kind == "ident":
            if tok.text in ("true", "false", "null"):
                self.advance()
                return Literal(literal_type_of(tok), tok.text)
            if tok.text == "new":
                self.advance()
                type_name = self._parse_type_name()
                if not self.at("("):
                    raise _Unsupported()  # array creation
                return New(type_name, self._parse_args())
            if tok.text in _RESERVED:
                raise _Unsupported()
            self.advance()
            if self.at("("):
                return MethodCall(None, tok.text, self._parse_args())
            return VarRef(tok.text)
        raise _Unsupported()

    def _parse_cast_or_group(self) -> Expr:
        mark = self.pos
        self.expect("(")
        try:
            type_name = self._parse_type_name()
            self.expect(")")
            nxt = self.peek()
            starts_operand = nxt.kind in ("ident", "number", "string", "char") or (
                nxt.kind == "punct" and nxt.text in "(-"
            )
            if not starts_operand or (nxt.kind == "ident" and nxt.text in _RESERVED - {"new", "true", "false", "null"}):
                raise ParseError(nxt.start, "cast operand")
            return Cast(type_name, self.parse_expr())
        except ParseError:
            self.pos = mark
        self.expect("(")
        inner = self.parse_expr()
        self.expect(")")
        return inner

    def _parse_args(self) -> tuple[Expr, ...]:
        self.expect("(")
        args: list[Expr] = []
        if not self.at(")"):
            args.append(self._parse_arg())
            while self.at(","):
                self.advance()
                args.append(self._parse_arg())
        self.expect(")")
        return tuple(args)

    def _parse_arg(self) -> Expr:
        """One call argument; falls back to OpaqueExpr on unsupported syntax."""
        mark = self.pos
        try:
            expr = self.parse_expr()
            if self.at(",") or self.at(")"):
                return expr
        except (ParseError, _Unsupported):
            pass
        self.pos = mark
        start_tok = self.peek()
        depth = 0
        last: Token | None = None
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                raise ParseError(start_tok.start, "call argument")
            if depth == 0 and tok.kind == "punct" and tok.text in ",)":
                break
            if tok.kind == "punct" and tok.text in "}{;":
                raise ParseError(tok.start, "call argument")
            last = self.advance()
            if last.kind == "punct":
                if last.text == "(":
                    depth += 1
                elif last.text == ")":
                    depth -= 1
        if last is None:
            raise ParseError(start_tok.start, "call argument")
        return OpaqueExpr(self.source[start_tok.start : last.end])


def _is_primitive(name: str) -> bool:
    return name in ("int", "long", "short", "byte", "char", "float", "double", "boolean", "void")


def _squeeze(text: str) -> str:
    return " ".join(text.split())


def _render_receiver_path(expr: Expr) -> str | None:
    """Dotted text of a VarRef/FieldAccess chain, or None for anything else."""
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, FieldAccess):
        base = _render_receiver_path(expr.receiver)
        return None if base is None else f"{base}.{expr.field_name}"
    return None


def _to_statement(expr: Expr) -> Statement:
    if isinstance(expr, MethodCall) and (
        expr.method.startswith("assert") or expr.method == "fail"
    ):
        receiver = None
        if expr.receiver is not None:
            path = _render_receiver_path(expr.receiver)
            if path not in _ASSERT_RECEIVERS:
                return ExprStmt(expr)
            receiver = path
        return AssertStmt(AssertCall(expr.method, expr.args, receiver))
    return ExprStmt(expr)


# --- public entry points ---


def parse_test_method(source: str) -> TestMethod:
    """Parse a single test method. Raises ParseError on structural damage."""
    return _Parser(source).parse_method()


def parse_expression(source: str) -> Expr:
    """Parse one standalone expression (no trailing ';')."""
    parser = _Parser(source)
    try:
        expr = parser.parse_expr()
    except _Unsupported as exc:
        raise ParseError(parser.peek().start, "expression") from exc
    if parser.peek().kind != "eof":
        raise ParseError(parser.peek().start, "end of expression")
    return expr


def parse_assert_line(source: str) -> AssertCall:
    """Parse one assertion call written on its own line (';' optional)."""
    text = source.strip()
    if text.endswith(";"):
        text = text[:-1]
    expr = parse_expression(text)
    stmt = _to_statement(expr)
    if not isinstance(stmt, AssertStmt):
        raise ParseError(0, "assert call")
    return stmt.call


def parse_signature(
    sig: str, *, class_name: str = "", docstring: str = ""
) -> UnitContext:
    """Parse a focal-method signature into a UnitContext.

    Accepts the usual `modifiers return-type name(params)` shape.
    Constructor-style headers (modifier + name only) use the class name as
    the return type.
    """
    parser = _Parser(sig)
    head: list[tuple[str, str]] = []  # (text, kind-ish)
    while not parser.at("("):
        tok = parser.peek()
        if tok.kind == "eof":
            raise ParseError(tok.start, "parameter list")
        if tok.kind == "ident" and tok.text not in _MODIFIERS:
            start = parser.pos
            type_text = parser._parse_type_name()
            head.append((type_text, "type"))
            continue
        if tok.kind == "ident":
            head.append((tok.text, "modifier"))
        elif tok.text not in "<>[].,":
            raise ParseError(tok.start, "signature")
        parser.advance()
    if not head:
        raise ParseError(parser.peek().start, "method name")
    name_text, name_kind = head[-1]
    if name_kind != "type" or "." in name_text or "<" in name_text:
        raise ParseError(0, "method name")
    types = [t for t, kind in head[:-1] if kind == "type"]
    modifiers = tuple(t for t, kind in head[:-1] if kind == "modifier")
    if types:
        return_type = types[-1]
    elif modifiers:
        return_type = name_text  # constructor
    else:
        raise ParseError(0, "return type")

    parser.expect("(")
    params: list[tuple[str, str]] = []
    if not parser.at(")"):
        while True:
            if parser.at("final"):
                parser.advance()
            param_type = parser._parse_type_name()
            if parser.at("."):  # varargs written as Type... name
                while parser.at("."):
                    parser.advance()
                param_type += "..."
            param_name = parser.expect_ident().text
            params.append((param_type, param_name))
            if parser.at(","):
                parser.advance()
                continue
            break
    parser.expect(")")

    method = MethodSignature(modifiers, return_type, name_text, tuple(params))
    return UnitContext(
        class_name=class_name,
        signature=_squeeze(sig),
        docstring=docstring,
        implementation_present=False,
        method=method,
    )
