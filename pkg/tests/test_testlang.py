"""Parser, lexer, and renderer behavior."""
import pytest
from hypothesis import given, strategies as st

from oracleforge.errors import ParseError
from oracleforge.testlang import (
    AssertStmt,
    Assign,
    Cast,
    ExprStmt,
    FieldAccess,
    Literal,
    MethodCall,
    New,
    OpaqueExpr,
    OpaqueStmt,
    TryCatch,
    VarDecl,
    VarRef,
    node_to_json,
    parse_assert_line,
    parse_expression,
    parse_signature,
    parse_test_method,
    render_statement,
    render_test_method,
)


def stmts(source):
    return parse_test_method("public void t() { " + source + " }").statements


class TestExpressions:
    def test_literal_types(self):
        cases = {
            "42": ("int", "42"),
            "-7": ("int", "-7"),
            "2L": ("long", "2L"),
            "3.5": ("double", "3.5"),
            "2.5F": ("float", "2.5F"),
            "0x1F": ("int", "0x1F"),
            "true": ("boolean", "true"),
            "null": ("null", "null"),
            "'x'": ("char", "'x'"),
            '"hi"': ("string", '"hi"'),
        }
        for text, (literal_type, spelled) in cases.items():
            expr = parse_expression(text)
            assert expr == Literal(literal_type, spelled), text

    def test_string_escapes_preserved(self):
        expr = parse_expression('"a\\nb\\"c"')
        assert expr == Literal("string", '"a\\nb\\"c"')

    def test_call_chain(self):
        expr = parse_expression("a.b().c(1)")
        assert expr == MethodCall(
            MethodCall(VarRef("a"), "b", ()), "c", (Literal("int", "1"),)
        )

    def test_field_access(self):
        assert parse_expression("p.x") == FieldAccess(VarRef("p"), "x")

    def test_new_with_args(self):
        expr = parse_expression('new Widget("n", 3)')
        assert expr == New("Widget", (Literal("string", '"n"'), Literal("int", "3")))

    def test_cast(self):
        expr = parse_expression("(String) box.get()")
        assert expr == Cast("String", MethodCall(VarRef("box"), "get", ()))

    def test_parenthesized_group_is_not_cast(self):
        # (x) followed by nothing callable is just grouping
        assert parse_expression("(x)") == VarRef("x")

    def test_unterminated_string_raises(self):
        with pytest.raises(ParseError):
            parse_expression('"unclosed')


class TestStatements:
    def test_var_decl_with_init(self):
        (stmt,) = stmts("int x = 1;")
        assert stmt == VarDecl("int", "x", Literal("int", "1"))

    def test_var_decl_without_init(self):
        (stmt,) = stmts("KeyedValues kv;")
        assert stmt == VarDecl("KeyedValues", "kv", None)

    def test_assignment(self):
        decl, assign = stmts("Cursor c; c = Table.open();")
        assert assign == Assign("c", MethodCall(VarRef("Table"), "open", ()))

    def test_final_modifier_ignored(self):
        (stmt,) = stmts("final int x = 1;")
        assert stmt == VarDecl("int", "x", Literal("int", "1"))

    def test_generic_type_name(self):
        (stmt,) = stmts("List<String> xs = new ArrayList<String>();")
        assert isinstance(stmt, VarDecl)
        assert stmt.declared_type == "List<String>"

    def test_array_type_name(self):
        (stmt,) = stmts("int[] bins = h.bins();")
        assert isinstance(stmt, VarDecl)
        assert stmt.declared_type == "int[]"

    def test_assert_statement_recognized(self):
        (stmt,) = stmts("assertEquals(0, x);")
        assert isinstance(stmt, AssertStmt)
        assert stmt.call.method_name == "assertEquals"

    def test_qualified_assert_keeps_receiver(self):
        (stmt,) = stmts("Assert.fail();")
        assert isinstance(stmt, AssertStmt)
        assert stmt.call.receiver == "Assert"

    def test_try_catch(self):
        (stmt,) = stmts("try { s.pop(); fail(); } catch (Exception e) { }")
        assert isinstance(stmt, TryCatch)
        assert stmt.caught_type == "Exception"
        assert stmt.has_fail_call

    def test_try_without_fail(self):
        (stmt,) = stmts("try { s.pop(); } catch (Exception e) { log(e); }")
        assert isinstance(stmt, TryCatch)
        assert not stmt.has_fail_call

    def test_for_loop_survives_as_opaque(self):
        (stmt,) = stmts("for (int i = 0; i < 3; i++) { obj.poke(); }")
        assert isinstance(stmt, OpaqueStmt)

    def test_lambda_argument_goes_opaque(self):
        (stmt,) = stmts("list.forEach(x -> { sink.accept(x); });")
        assert isinstance(stmt, OpaqueStmt)

    def test_binary_comparison_arg_is_opaque_expr(self):
        (stmt,) = stmts("assertTrue(now > 0);")
        assert isinstance(stmt, AssertStmt)
        assert stmt.call.args == (OpaqueExpr("now > 0"),)

    def test_empty_body_rejected(self):
        with pytest.raises(ParseError):
            parse_test_method("public void t() { }")

    def test_annotation_skipped(self):
        test = parse_test_method(
            "@Test(timeout = 4000)\npublic void t() { int x = obj.go(); assertEquals(0, x); }"
        )
        assert test.name == "t"
        assert len(test.statements) == 2


class TestAssertLine:
    def test_plain(self):
        call = parse_assert_line("assertEquals(0, int0);")
        assert call.method_name == "assertEquals"
        assert call.args == (Literal("int", "0"), VarRef("int0"))

    def test_token_spaced_corpus_style(self):
        call = parse_assert_line(
            "org . junit . Assert . assertEquals ( 0 , int0 )"
        )
        assert call.method_name == "assertEquals"
        assert call.args == (Literal("int", "0"), VarRef("int0"))

    def test_non_assert_rejected(self):
        with pytest.raises(ParseError):
            parse_assert_line("foo.bar(1)")


class TestSignatures:
    def test_plain_method(self):
        ctx = parse_signature("public int itemCount()", class_name="KeyedValues")
        assert ctx.method.return_type == "int"
        assert ctx.method.name == "itemCount"
        assert ctx.method.params == ()

    def test_params(self):
        ctx = parse_signature(
            "public static Number createNumber(String str)", class_name="NumberUtils"
        )
        assert ctx.method.modifiers == ("public", "static")
        assert ctx.method.params == (("String", "str"),)

    def test_constructor_uses_class_name(self):
        ctx = parse_signature("public KeyedValues()", class_name="KeyedValues")
        assert ctx.method.return_type == "KeyedValues"

    def test_missing_return_type_rejected(self):
        with pytest.raises(ParseError):
            parse_signature("frob()", class_name="X")


class TestRendering:
    def test_round_trip_stability(self):
        source = (
            "public void test0() { KeyedValues kv; kv = new KeyedValues(); "
            "Short short0 = new Short(2); kv.insertValue(0, short0, 2); "
            "int int0 = kv.itemCount(); assertEquals(0, int0); }"
        )
        once = render_test_method(parse_test_method(source))
        twice = render_test_method(parse_test_method(once))
        assert once == twice

    def test_try_catch_layout(self):
        (stmt,) = stmts('try { s.pop(); fail("boom"); } catch (Exception e) { log(e); }')
        assert render_statement(stmt, 0) == [
            "try {",
            "  s.pop();",
            '  fail("boom");',
            "} catch (Exception e) {",
            "  log(e);",
            "}",
        ]

    def test_node_to_json_tags_classes(self):
        (stmt,) = stmts("int x = 1;")
        data = node_to_json(stmt)
        assert data["node"] == "VarDecl"
        assert data["init"] == {"node": "Literal", "literal_type": "int", "text": "1"}


_ident = st.from_regex(r"[a-z][a-zA-Z0-9]{0,6}", fullmatch=True)
_int_literal = st.integers(min_value=-999, max_value=999).map(
    lambda n: Literal("int", str(n))
)
_string_literal = st.from_regex(r"[A-Za-z0-9 ]{0,8}", fullmatch=True).map(
    lambda s: Literal("string", f'"{s}"')
)
_leaf = st.one_of(_int_literal, _string_literal, _ident.map(VarRef))
_expr = st.recursive(
    _leaf,
    lambda inner: st.one_of(
        st.tuples(_ident, _ident, st.lists(inner, max_size=2)).map(
            lambda t: MethodCall(VarRef(t[0]), t[1], tuple(t[2]))
        ),
        st.tuples(
            st.from_regex(r"[A-Z][a-zA-Z0-9]{0,6}", fullmatch=True),
            st.lists(inner, max_size=2),
        ).map(lambda t: New(t[0], tuple(t[1]))),
    ),
    max_leaves=8,
)


@given(_expr)
def test_expression_render_parse_inverts(expr):
    from oracleforge.testlang import render_expr

    assert parse_expression(render_expr(expr)) == expr
