"""Type-constrained candidate assertion generation.

For a prefix ending in an assignment, the candidate set combines
structural checks keyed on the returned value's type kind with equality
checks against two value dictionaries: a corpus-wide table of frequent
constants and the values already visible in the prefix itself.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .errors import NoAssignment, ParseError
from .oracles import AssertionForm, Equals, IsFalse, IsNull, IsTrue, NotNull, render_assertion
from .testlang import (
    Assign,
    Cast,
    Expr,
    ExprStmt,
    FieldAccess,
    Literal,
    MethodCall,
    New,
    OpaqueStmt,
    Statement,
    TestPrefix,
    TryCatch,
    VarDecl,
    VarRef,
    render_expr,
)

NULL_TYPE = "nulltype"

_BOXED_TO_PRIMITIVE = {
    "Integer": "int",
    "Long": "long",
    "Double": "double",
    "Float": "float",
    "Boolean": "boolean",
    "Character": "char",
    "Short": "short",
    "Byte": "byte",
}
_PRIMITIVE_NON_BOOLEAN = frozenset(
    ["int", "long", "short", "byte", "char", "float", "double"]
)
_LITERAL_TYPE_TO_KEY = {
    "int": "int",
    "long": "long",
    "double": "double",
    "float": "float",
    "boolean": "boolean",
    "char": "char",
    "string": "String",
    "null": NULL_TYPE,
}

KIND_BOOLEAN = "boolean"
KIND_PRIMITIVE = "primitive-non-boolean"
KIND_OBJECT = "object"
KIND_VOID = "void"


def erase_type(type_name: str) -> str:
    """Dictionary key for a declared type: generics dropped, simple name,
    boxed primitives folded onto their primitive."""
    name = type_name.split("<", 1)[0].strip()
    suffix = ""
    while name.endswith("[]"):
        name = name[:-2].strip()
        suffix += "[]"
    simple = name.rsplit(".", 1)[-1]
    return _BOXED_TO_PRIMITIVE.get(simple, simple) + suffix


def literal_key(lit: Literal) -> str:
    return _LITERAL_TYPE_TO_KEY[lit.literal_type]


def type_kind(declared_type: str) -> str:
    erased = erase_type(declared_type)
    if erased == "boolean":
        return KIND_BOOLEAN
    if erased in _PRIMITIVE_NON_BOOLEAN:
        return KIND_PRIMITIVE
    if erased == "void":
        return KIND_VOID
    return KIND_OBJECT


@dataclass(frozen=True)
class RetVal:
    var_name: str
    declared_type: str
    kind: str


def extract_ret_val(prefix: TestPrefix) -> RetVal:
    """The value under test: left-hand side of the prefix's final assignment.

    Raises NoAssignment when the prefix is empty or its last statement
    neither declares-with-initializer nor assigns.
    """
    if not prefix.statements:
        raise NoAssignment("empty prefix")
    last = prefix.statements[-1]
    if isinstance(last, VarDecl) and last.init is not None:
        return RetVal(last.name, last.declared_type, type_kind(last.declared_type))
    if isinstance(last, Assign):
        for stmt in reversed(prefix.statements[:-1]):
            if isinstance(stmt, VarDecl) and stmt.name == last.target:
                return RetVal(last.target, stmt.declared_type, type_kind(stmt.declared_type))
        return RetVal(last.target, "", KIND_OBJECT)
    raise NoAssignment("prefix does not end with an assignment")


# --- dictionaries ---


@dataclass
class LocalValueTable:
    """Values visible in a prefix, keyed by erased type, in first-appearance
    order: declared variables plus every literal occurring in an expression."""

    entries: dict[str, list[Expr]] = field(default_factory=dict)

    def add(self, key: str, value: Expr) -> None:
        bucket = self.entries.setdefault(key, [])
        text = render_expr(value)
        if all(render_expr(v) != text for v in bucket):
            bucket.append(value)

    def lookup(self, type_name: str) -> list[Expr]:
        return list(self.entries.get(erase_type(type_name), []))


def _walk_literals(expr: Expr, sink: LocalValueTable) -> None:
    if isinstance(expr, Literal):
        sink.add(literal_key(expr), expr)
    elif isinstance(expr, MethodCall):
        if expr.receiver is not None:
            _walk_literals(expr.receiver, sink)
        for arg in expr.args:
            _walk_literals(arg, sink)
    elif isinstance(expr, New):
        for arg in expr.args:
            _walk_literals(arg, sink)
    elif isinstance(expr, Cast):
        _walk_literals(expr.expr, sink)
    elif isinstance(expr, FieldAccess):
        _walk_literals(expr.receiver, sink)


def create_local_value_table(prefix: TestPrefix) -> LocalValueTable:
    """Collect local dictionary entries, excluding the returned variable."""
    try:
        excluded = extract_ret_val(prefix).var_name
    except NoAssignment:
        excluded = None
    table = LocalValueTable()

    def walk(statements: tuple[Statement, ...]) -> None:
        for stmt in statements:
            if isinstance(stmt, VarDecl):
                if stmt.name != excluded:
                    table.add(erase_type(stmt.declared_type), VarRef(stmt.name))
                if stmt.init is not None:
                    _walk_literals(stmt.init, table)
            elif isinstance(stmt, Assign):
                _walk_literals(stmt.value, table)
            elif isinstance(stmt, ExprStmt):
                _walk_literals(stmt.expr, table)
            elif isinstance(stmt, TryCatch):
                walk(stmt.body)
                walk(stmt.catch_body)
            elif isinstance(stmt, OpaqueStmt):
                continue

    walk(prefix.statements)
    return table


@dataclass
class GlobalConstantTable:
    """Most frequent literal constants per erased type, rank order.

    entries maps type key to (literal, count) pairs sorted by descending
    count, ties broken by literal text.  k bounds each list's length.
    """

    k: int
    entries: dict[str, list[tuple[Literal, int]]] = field(default_factory=dict)

    def lookup(self, type_name: str, k: int | None = None) -> list[tuple[Literal, int]]:
        limit = self.k if k is None else min(k, self.k)
        return list(self.entries.get(erase_type(type_name), []))[:limit]


def build_global_constant_table(
    forms: Iterable[AssertionForm], k: int
) -> GlobalConstantTable:
    """Count Literal expected sides of Equals assertions; keep top k per type.

    Null literals carry no usable equality type and are skipped.
    """
    counts: dict[str, dict[str, tuple[Literal, int]]] = {}
    for form in forms:
        if not isinstance(form, Equals) or not isinstance(form.expected, Literal):
            continue
        lit = form.expected
        key = literal_key(lit)
        if key == NULL_TYPE:
            continue
        bucket = counts.setdefault(key, {})
        seen = bucket.get(lit.text)
        bucket[lit.text] = (lit, 1 if seen is None else seen[1] + 1)
    table = GlobalConstantTable(k)
    for key, bucket in counts.items():
        ranked = sorted(bucket.values(), key=lambda pair: (-pair[1], pair[0].text))
        table.entries[key] = ranked[:k]
    return table


# --- candidate templates ---

PROVENANCE_STRUCTURAL = "structural"
PROVENANCE_GLOBAL = "global"
PROVENANCE_LOCAL = "local"


@dataclass(frozen=True)
class CandidateEntry:
    form: AssertionForm
    provenance: str
    global_rank: int | None = None


@dataclass(frozen=True)
class CandidateSet:
    ret_val: RetVal
    entries: tuple[CandidateEntry, ...]

    @property
    def forms(self) -> tuple[AssertionForm, ...]:
        return tuple(entry.form for entry in self.entries)


def create_candidate_templates(
    table: GlobalConstantTable, k: int, prefix: TestPrefix
) -> CandidateSet:
    """Candidate assertions for a prefix: structural checks by type kind,
    then equality against global constants (rank order), then equality
    against local values (appearance order), deduplicated keeping the
    first occurrence."""
    ret = extract_ret_val(prefix)
    if ret.kind == KIND_VOID:
        return CandidateSet(ret, ())
    ref = VarRef(ret.var_name)
    entries: list[CandidateEntry] = []
    if ret.kind == KIND_OBJECT:
        entries.append(CandidateEntry(NotNull(ref), PROVENANCE_STRUCTURAL))
        entries.append(CandidateEntry(IsNull(ref), PROVENANCE_STRUCTURAL))
    elif ret.kind == KIND_BOOLEAN:
        entries.append(CandidateEntry(IsTrue(ref), PROVENANCE_STRUCTURAL))
        entries.append(CandidateEntry(IsFalse(ref), PROVENANCE_STRUCTURAL))
    if ret.declared_type:
        for rank, (lit, _count) in enumerate(table.lookup(ret.declared_type, k)):
            entries.append(CandidateEntry(Equals(lit, ref), PROVENANCE_GLOBAL, rank))
        local = create_local_value_table(prefix)
        for value in local.lookup(ret.declared_type):
            entries.append(CandidateEntry(Equals(value, ref), PROVENANCE_LOCAL))
    unique: list[CandidateEntry] = []
    seen: set[str] = set()
    for entry in entries:
        rendered = render_assertion(entry.form)
        if rendered not in seen:
            seen.add(rendered)
            unique.append(entry)
    return CandidateSet(ret, tuple(unique))


# --- vocabulary file format ---

VOCAB_MAGIC = "oracle-forge-vocab"
VOCAB_VERSION = "v1"

_KEY_TO_LITERAL_TYPE = {
    "int": "int",
    "long": "long",
    "double": "double",
    "float": "float",
    "boolean": "boolean",
    "char": "char",
    "String": "string",
}


def save_vocab(table: GlobalConstantTable, out: TextIO) -> None:
    out.write(f"{VOCAB_MAGIC} {VOCAB_VERSION} k={table.k}\n")
    for key in sorted(table.entries):
        for rank, (lit, count) in enumerate(table.entries[key]):
            out.write(f"{key}\t{rank}\t{lit.text}\t{count}\n")


def vocab_to_text(table: GlobalConstantTable) -> str:
    buf = io.StringIO()
    save_vocab(table, buf)
    return buf.getvalue()


def load_vocab(source: TextIO) -> GlobalConstantTable:
    header = source.readline().rstrip("\n")
    parts = header.split()
    if (
        len(parts) != 3
        or parts[0] != VOCAB_MAGIC
        or parts[1] != VOCAB_VERSION
        or not parts[2].startswith("k=")
    ):
        raise ParseError(0, f"vocabulary header '{VOCAB_MAGIC} {VOCAB_VERSION} k=<k>'")
    try:
        k = int(parts[2][2:])
    except ValueError as exc:
        raise ParseError(0, "integer k in vocabulary header") from exc
    table = GlobalConstantTable(k)
    for line_no, line in enumerate(source, start=2):
        line = line.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise ParseError(line_no, "4 tab-separated vocabulary fields")
        key, rank_text, literal_text, count_text = fields
        try:
            rank = int(rank_text)
            count = int(count_text)
        except ValueError as exc:
            raise ParseError(line_no, "integer rank and count") from exc
        bucket = table.entries.setdefault(key, [])
        if rank != len(bucket) or rank >= k:
            raise ParseError(line_no, f"rank {len(bucket)} below k={k} for type {key}")
        literal_type = _KEY_TO_LITERAL_TYPE.get(key, "string")
        bucket.append((Literal(literal_type, literal_text), count))
    return table
