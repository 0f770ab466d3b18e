"""Deterministic rule-based scorer used when no trained model is wired in.

Every rule is inspectable: the exception score starts from a small prior
and grows when the docstring mentions throwing or when the prefix feeds
the unit a suspicious argument; assertion scores favor values the prefix
itself exposes, then high-frequency corpus constants by rank.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..candidates import (
    CandidateEntry,
    PROVENANCE_GLOBAL,
    PROVENANCE_LOCAL,
    PROVENANCE_STRUCTURAL,
)
from ..testlang import (
    Assign,
    Cast,
    Expr,
    ExprStmt,
    FieldAccess,
    Literal,
    MethodCall,
    New,
    Statement,
    TestPrefix,
    TryCatch,
    UnitContext,
    VarDecl,
)

_TOKEN_RE = re.compile(r"@?[A-Za-z0-9_]+")
_THROW_TOKENS = frozenset(["@throws", "throws", "exception"])
_INDEX_PARAM_NAMES = frozenset(["i", "index", "pos"])


@dataclass(frozen=True)
class HeuristicWeights:
    exception_prior: float = 0.2
    doc_throws_bonus: float = 0.5
    suspicious_arg_bonus: float = 0.2
    local_weight: float = 0.5
    global_weight: float = 0.3
    structural_weight: float = 0.4
    rank_bonus: float = 0.2


def _doc_mentions_throwing(docstring: str) -> bool:
    tokens = {t.lower() for t in _TOKEN_RE.findall(docstring)}
    return bool(tokens & _THROW_TOKENS)


def _is_negative_int(expr: Expr) -> bool:
    return (
        isinstance(expr, Literal)
        and expr.literal_type in ("int", "long")
        and expr.text.startswith("-")
    )


def _is_null(expr: Expr) -> bool:
    return isinstance(expr, Literal) and expr.literal_type == "null"


def _iter_calls(statements: tuple[Statement, ...]):
    """Yield (callee name, args) for every call or constructor invocation."""

    def from_expr(expr: Expr):
        if isinstance(expr, MethodCall):
            if expr.receiver is not None:
                yield from from_expr(expr.receiver)
            yield expr.method, expr.args
            for arg in expr.args:
                yield from from_expr(arg)
        elif isinstance(expr, New):
            yield expr.type_name.split("<", 1)[0].rsplit(".", 1)[-1], expr.args
            for arg in expr.args:
                yield from from_expr(arg)
        elif isinstance(expr, Cast):
            yield from from_expr(expr.expr)
        elif isinstance(expr, FieldAccess):
            yield from from_expr(expr.receiver)

    for stmt in statements:
        if isinstance(stmt, VarDecl) and stmt.init is not None:
            yield from from_expr(stmt.init)
        elif isinstance(stmt, Assign):
            yield from from_expr(stmt.value)
        elif isinstance(stmt, ExprStmt):
            yield from from_expr(stmt.expr)
        elif isinstance(stmt, TryCatch):
            yield from _iter_calls(stmt.body)
            yield from _iter_calls(stmt.catch_body)


def _has_suspicious_argument(prefix: TestPrefix, context: UnitContext) -> bool:
    """A null call argument, or a negative literal in an index-named focal slot."""
    focal = context.method
    for callee, args in _iter_calls(prefix.statements):
        for position, arg in enumerate(args):
            if _is_null(arg):
                return True
            if (
                focal is not None
                and callee == focal.name
                and _is_negative_int(arg)
                and position < len(focal.params)
                and focal.params[position][1] in _INDEX_PARAM_NAMES
            ):
                return True
    return False


class BuiltinHeuristic:
    """Scorer with the documented closed-form rules.

    The seed is accepted for interface parity with trained scorers; the
    rules themselves are deterministic.  Scores are rounded to six
    decimals so serialized results are stable across platforms.
    """

    def __init__(self, seed: int = 0, weights: HeuristicWeights | None = None):
        self.seed = seed
        self.weights = weights or HeuristicWeights()

    def score_exception(self, prefix: TestPrefix, context: UnitContext) -> float:
        w = self.weights
        score = w.exception_prior
        if _doc_mentions_throwing(context.docstring):
            score += w.doc_throws_bonus
        if _has_suspicious_argument(prefix, context):
            score += w.suspicious_arg_bonus
        return round(min(1.0, score), 6)

    def score_assertion(
        self, prefix: TestPrefix, context: UnitContext, entry: CandidateEntry
    ) -> float:
        w = self.weights
        if entry.provenance == PROVENANCE_LOCAL:
            score = w.local_weight
        elif entry.provenance == PROVENANCE_GLOBAL:
            score = w.global_weight + w.rank_bonus / (1 + (entry.global_rank or 0))
        elif entry.provenance == PROVENANCE_STRUCTURAL:
            score = w.structural_weight
        else:
            raise ValueError(f"unknown provenance: {entry.provenance}")
        return round(min(1.0, score), 6)
