"""Two-stage rank-and-threshold oracle inference.

Stage one decides whether the prefix should raise; if not, stage two
ranks candidate assertions and keeps the winner only when its score
clears the threshold, otherwise the prefix ships without an oracle.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Protocol

from ..candidates import CandidateEntry, CandidateSet, GlobalConstantTable, create_candidate_templates
from ..errors import NoAssignment
from ..oracles import Assertion, AssertionForm, ExpectedException, Oracle, render_assertion
from ..testlang import TestPrefix, UnitContext
from .wire import check_score

_THROWS_TAG_RE = re.compile(r"@throws\s+([A-Za-z_][A-Za-z0-9_.]*)")

DECISION_EXCEPTION = "exception"
DECISION_ASSERTION = "assertion"
DECISION_PREFIX_ONLY = "prefix-only"


class Scorer(Protocol):
    def score_exception(self, prefix: TestPrefix, context: UnitContext) -> float: ...

    def score_assertion(
        self, prefix: TestPrefix, context: UnitContext, entry: CandidateEntry
    ) -> float: ...


@dataclass(frozen=True)
class RankerConfig:
    threshold: float = 0.5
    k: int = 8
    exception_cutoff: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must be in [0, 1]: {self.threshold}")
        if not 0.0 <= self.exception_cutoff <= 1.0:
            raise ValueError(f"exception_cutoff must be in [0, 1]: {self.exception_cutoff}")
        if self.k < 0:
            raise ValueError(f"k must be non-negative: {self.k}")


@dataclass(frozen=True)
class InferenceResult:
    """What the pipeline decided for one prefix.

    decision is one of the DECISION_* kinds.  oracle is the chosen oracle
    (None for prefix-only).  ranked holds every candidate with its score,
    best first; assertion_score is the winner's score when one was kept.
    """

    decision: str
    oracle: Oracle | None
    exception_score: float
    ranked: tuple[tuple[AssertionForm, float], ...] = ()
    assertion_score: float | None = None

    def to_json(self) -> dict:
        payload: dict = {
            "decision": self.decision,
            "exception_score": self.exception_score,
            "ranked": [
                [render_assertion(form), score] for form, score in self.ranked
            ],
        }
        if self.decision == DECISION_EXCEPTION:
            assert isinstance(self.oracle, ExpectedException)
            payload["exception_type"] = self.oracle.exception_type
        if self.decision == DECISION_ASSERTION:
            assert isinstance(self.oracle, Assertion)
            payload["assertion"] = render_assertion(self.oracle.form)
            payload["score"] = self.assertion_score
        return payload


def documented_throws(docstring: str) -> list[str]:
    """Exception type names promised by @throws tags, in tag order."""
    return _THROWS_TAG_RE.findall(docstring)


def classify_exception(
    prefix: TestPrefix,
    context: UnitContext,
    scorer: Scorer,
    config: RankerConfig,
) -> tuple[int, float]:
    score = check_score(scorer.score_exception(prefix, context))
    return (1 if score >= config.exception_cutoff else 0), score


def rank_assertions(
    prefix: TestPrefix,
    context: UnitContext,
    candidate_set: CandidateSet,
    scorer: Scorer,
) -> list[tuple[CandidateEntry, float]]:
    """Candidates with scores, highest first; ties keep candidate-set order."""
    scored = [
        (entry, check_score(scorer.score_assertion(prefix, context, entry)))
        for entry in candidate_set.entries
    ]
    scored.sort(key=lambda pair: -pair[1])
    return scored


def infer_oracle(
    prefix: TestPrefix,
    context: UnitContext,
    config: RankerConfig,
    scorer: Scorer,
    table: GlobalConstantTable | None = None,
) -> InferenceResult:
    """Run both stages for one prefix and pick at most one oracle."""
    label, exception_score = classify_exception(prefix, context, scorer, config)
    if label == 1:
        tags = documented_throws(context.docstring)
        oracle = ExpectedException(tags[0] if tags else None)
        return InferenceResult(DECISION_EXCEPTION, oracle, exception_score)
    table = table if table is not None else GlobalConstantTable(config.k)
    try:
        candidate_set = create_candidate_templates(table, config.k, prefix)
    except NoAssignment:
        return InferenceResult(DECISION_PREFIX_ONLY, None, exception_score)
    if not candidate_set.entries:
        return InferenceResult(DECISION_PREFIX_ONLY, None, exception_score)
    scored = rank_assertions(prefix, context, candidate_set, scorer)
    ranked = tuple((entry.form, score) for entry, score in scored)
    best_entry, best_score = scored[0]
    if best_score >= config.threshold:
        return InferenceResult(
            DECISION_ASSERTION,
            Assertion(best_entry.form),
            exception_score,
            ranked,
            best_score,
        )
    return InferenceResult(DECISION_PREFIX_ONLY, None, exception_score, ranked)
