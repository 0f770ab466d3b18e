"""Evaluation: verdicts over buggy/fixed runs, coverage and accuracy metrics.

An execution record says how one generated test behaved on the buggy and
on the fixed version of a unit.  A useful oracle fails on the bug and
passes on the fix; the four combinations map onto the usual confusion
matrix, with "bug found" meaning at least one true positive.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .candidates import build_global_constant_table, create_candidate_templates
from .errors import LengthMismatch, MissingTruth, NoAssignment, ParseError
from .oracles import (
    Assertion,
    OutOfGrammar,
    classify_assertion,
    render_assertion,
    strip_oracles,
)
from .ranking import BuiltinHeuristic, RankerConfig, Scorer, infer_oracle
from .testlang import parse_assert_line, parse_test_method

VERDICT_TP = "TP"  # failed on buggy, passed on fixed
VERDICT_FP = "FP"  # failed on both
VERDICT_TN = "TN"  # passed on both
VERDICT_FN = "FN"  # passed on buggy, failed on fixed

ORACLE_KINDS = (
    "exception-raised",
    "exception-not-raised",
    "assertion",
    "prefix-only",
)


@dataclass(frozen=True)
class ExecutionRecord:
    test_id: str
    bug_id: str
    outcome_on_buggy: str  # "pass" | "fail"
    outcome_on_fixed: str
    oracle_kind: str
    source: str = ""

    @staticmethod
    def from_json(data: Mapping[str, Any]) -> "ExecutionRecord":
        for key in ("test_id", "bug_id", "buggy", "fixed", "oracle_kind"):
            if key not in data:
                raise KeyError(f"execution record missing {key!r}")
        for key in ("buggy", "fixed"):
            if data[key] not in ("pass", "fail"):
                raise ValueError(f"outcome {key!r} must be 'pass' or 'fail'")
        return ExecutionRecord(
            str(data["test_id"]),
            str(data["bug_id"]),
            data["buggy"],
            data["fixed"],
            str(data["oracle_kind"]),
            str(data.get("source", "")),
        )

    def to_json(self) -> dict[str, Any]:
        row = {
            "test_id": self.test_id,
            "bug_id": self.bug_id,
            "buggy": self.outcome_on_buggy,
            "fixed": self.outcome_on_fixed,
            "oracle_kind": self.oracle_kind,
        }
        if self.source:
            row["source"] = self.source
        return row


def judge(record: ExecutionRecord) -> str:
    fails_on_buggy = record.outcome_on_buggy == "fail"
    fails_on_fixed = record.outcome_on_fixed == "fail"
    if fails_on_buggy and not fails_on_fixed:
        return VERDICT_TP
    if fails_on_buggy and fails_on_fixed:
        return VERDICT_FP
    if not fails_on_buggy and not fails_on_fixed:
        return VERDICT_TN
    return VERDICT_FN


@dataclass
class MetricsReport:
    counts: dict[str, int] = field(default_factory=dict)
    fpr: float = 0.0
    bugs_found: list[str] = field(default_factory=list)
    bugs_by_kind: dict[str, list[str]] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "counts": {v: self.counts.get(v, 0) for v in (VERDICT_TP, VERDICT_FP, VERDICT_TN, VERDICT_FN)},
            "fpr": self.fpr,
            "bugs_found": list(self.bugs_found),
            "bugs_by_kind": {k: list(v) for k, v in sorted(self.bugs_by_kind.items())},
        }


def aggregate(records: Iterable[ExecutionRecord]) -> MetricsReport:
    """Confusion counts, false-positive rate, and bugs found per oracle kind."""
    report = MetricsReport()
    found: set[str] = set()
    by_kind: dict[str, set[str]] = {}
    for record in records:
        verdict = judge(record)
        report.counts[verdict] = report.counts.get(verdict, 0) + 1
        if verdict == VERDICT_TP:
            found.add(record.bug_id)
            by_kind.setdefault(record.oracle_kind, set()).add(record.bug_id)
    fp = report.counts.get(VERDICT_FP, 0)
    tn = report.counts.get(VERDICT_TN, 0)
    report.fpr = fp / (fp + tn) if (fp + tn) else 0.0
    report.bugs_found = sorted(found)
    report.bugs_by_kind = {kind: sorted(bugs) for kind, bugs in by_kind.items()}
    return report


def render_metrics_table(report: MetricsReport) -> str:
    """Aligned text table over the aggregate verdicts."""
    lines = ["verdict  count", "-------  -----"]
    for verdict in (VERDICT_TP, VERDICT_FP, VERDICT_TN, VERDICT_FN):
        lines.append(f"{verdict:<7}  {report.counts.get(verdict, 0):>5}")
    lines.append("")
    lines.append(f"false-positive rate: {report.fpr:.4f}")
    lines.append(f"bugs found: {len(report.bugs_found)}")
    if report.bugs_by_kind:
        lines.append("")
        lines.append("oracle kind           bugs")
        lines.append("-------------------   ----")
        for kind, bugs in sorted(report.bugs_by_kind.items()):
            lines.append(f"{kind:<19}   {len(bugs):>4}")
    return "\n".join(lines)


# --- grammar coverage ---


@dataclass
class CoverageReport:
    total: int = 0
    in_grammar: int = 0
    parse_failures: int = 0
    out_of_grammar: dict[str, int] = field(default_factory=dict)

    @property
    def fraction(self) -> float:
        denominator = self.total - self.parse_failures
        return self.in_grammar / denominator if denominator else 0.0

    def to_json(self) -> dict[str, Any]:
        return {
            "total": self.total,
            "in_grammar": self.in_grammar,
            "parse_failures": self.parse_failures,
            "out_of_grammar": dict(sorted(self.out_of_grammar.items())),
            "fraction": self.fraction,
        }


def grammar_coverage(assert_lines: Iterable[str]) -> CoverageReport:
    """Fraction of parseable assert calls that fit the oracle grammar."""
    report = CoverageReport()
    for line in assert_lines:
        if not line.strip():
            continue
        report.total += 1
        try:
            call = parse_assert_line(line)
        except ParseError:
            report.parse_failures += 1
            continue
        outcome = classify_assertion(call)
        if isinstance(outcome, OutOfGrammar):
            report.out_of_grammar[outcome.reason] = (
                report.out_of_grammar.get(outcome.reason, 0) + 1
            )
        else:
            report.in_grammar += 1
    return report


# --- lexical accuracy ---


def canonical_assertion_text(text: str) -> str:
    """Whitespace-insensitive form: runs collapse, none around punctuation."""
    squeezed = " ".join(text.split())
    out: list[str] = []
    for ch in squeezed:
        if ch == " " and out and out[-1] in "()[]{},.;":
            continue
        if ch in "()[]{},.;" and out and out[-1] == " ":
            out.pop()
        out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class TruthEntry:
    text: str
    in_vocab: bool


@dataclass
class LexicalAccuracy:
    total: int
    matched: int
    in_vocab_total: int
    in_vocab_matched: int

    @property
    def overall(self) -> float:
        return self.matched / self.total if self.total else 0.0

    @property
    def in_vocab(self) -> float:
        return self.in_vocab_matched / self.in_vocab_total if self.in_vocab_total else 0.0

    def to_json(self) -> dict[str, Any]:
        return {
            "total": self.total,
            "matched": self.matched,
            "in_vocab_total": self.in_vocab_total,
            "in_vocab_matched": self.in_vocab_matched,
            "overall": self.overall,
            "in_vocab": self.in_vocab,
        }


def lexical_accuracy(
    predictions: Iterable[tuple[str, str]],
    truth: Mapping[str, TruthEntry],
) -> LexicalAccuracy:
    """Exact-match accuracy per group after whitespace canonicalization.

    Groups with no prediction count as misses; a prediction whose group
    has no truth entry raises MissingTruth.
    """
    predicted: dict[str, str] = {}
    for gid, text in predictions:
        if gid not in truth:
            raise MissingTruth(f"prediction for unknown group {gid!r}")
        predicted[gid] = text
    total = len(truth)
    matched = 0
    in_vocab_total = 0
    in_vocab_matched = 0
    for gid, entry in truth.items():
        hit = gid in predicted and canonical_assertion_text(
            predicted[gid]
        ) == canonical_assertion_text(entry.text)
        if hit:
            matched += 1
        if entry.in_vocab:
            in_vocab_total += 1
            if hit:
                in_vocab_matched += 1
    return LexicalAccuracy(total, matched, in_vocab_total, in_vocab_matched)


# --- classification metrics ---


@dataclass
class ClassificationMetrics:
    accuracy: float
    precision: float
    recall: float
    f1: float

    def to_json(self) -> dict[str, float]:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def classification_metrics(
    predicted: Sequence[int], actual: Sequence[int]
) -> ClassificationMetrics:
    if len(predicted) != len(actual):
        raise LengthMismatch(
            f"{len(predicted)} predictions vs {len(actual)} labels"
        )
    if not predicted:
        return ClassificationMetrics(0.0, 0.0, 0.0, 0.0)
    tp = sum(1 for p, a in zip(predicted, actual) if p == 1 and a == 1)
    fp = sum(1 for p, a in zip(predicted, actual) if p == 1 and a == 0)
    fn = sum(1 for p, a in zip(predicted, actual) if p == 0 and a == 1)
    correct = sum(1 for p, a in zip(predicted, actual) if p == a)
    accuracy = correct / len(predicted)
    precision = tp / (tp + fp) if (tp + fp) else 0.0
    recall = tp / (tp + fn) if (tp + fn) else 0.0
    f1 = (
        2 * precision * recall / (precision + recall)
        if (precision + recall)
        else 0.0
    )
    return ClassificationMetrics(accuracy, precision, recall, f1)


def weighted_coin_labels(n: int, q: float, seed: int) -> list[int]:
    """Baseline predictor: label 0 with probability q, independently per item."""
    rng = random.Random(seed)
    return [0 if rng.random() < q else 1 for _ in range(n)]


# --- k sweep ---


def _ground_truth_forms(records: Sequence[Mapping[str, Any]]):
    for record in records:
        try:
            test = parse_test_method(record.get("test", ""))
        except ParseError:
            continue
        stripped = strip_oracles(test)
        for _, oracle in stripped.per_oracle_prefixes:
            if isinstance(oracle, Assertion):
                yield oracle.form


@dataclass
class KAblationRow:
    k: int
    overall_accuracy: float
    in_vocab_fraction: float
    in_vocab_accuracy: float
    default: bool

    def to_json(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "overall_accuracy": self.overall_accuracy,
            "in_vocab_fraction": self.in_vocab_fraction,
            "in_vocab_accuracy": self.in_vocab_accuracy,
            "default": self.default,
        }


def k_ablation(
    records: Sequence[Mapping[str, Any]],
    ks: Sequence[int],
    scorer: Scorer | None = None,
    *,
    default_k: int = 8,
) -> list[KAblationRow]:
    """Rebuild the constant table and rerun ranking at each k.

    Ranking runs without threshold suppression (threshold 0) so the rows
    measure ranking quality alone; in_vocab_fraction is the share of
    groups whose ground truth appears among the candidates at that k.
    """
    scorer = scorer or BuiltinHeuristic()
    rows: list[KAblationRow] = []
    forms = list(_ground_truth_forms(records))
    groups: list[tuple[Any, Any, Any]] = []  # (prefix, context, truth form)
    for record in records:
        try:
            test = parse_test_method(record.get("test", ""))
        except ParseError:
            continue
        stripped = strip_oracles(test)
        for prefix, oracle in stripped.per_oracle_prefixes:
            if isinstance(oracle, Assertion) and prefix.statements:
                groups.append((prefix, record, oracle.form))
    for k in ks:
        table = build_global_constant_table(forms, k)
        config = RankerConfig(threshold=0.0, k=k, exception_cutoff=1.0)
        total = 0
        matched = 0
        in_vocab_total = 0
        in_vocab_matched = 0
        for prefix, record, truth_form in groups:
            total += 1
            truth_text = canonical_assertion_text(render_assertion(truth_form))
            try:
                candidate_set = create_candidate_templates(table, k, prefix)
            except NoAssignment:
                continue
            if not candidate_set.entries:
                continue
            rendered = {
                canonical_assertion_text(render_assertion(e.form))
                for e in candidate_set.entries
            }
            in_vocab = truth_text in rendered
            if in_vocab:
                in_vocab_total += 1
            context = _context_of(record)
            result = infer_oracle(prefix, context, config, scorer, table)
            if result.oracle is None or not isinstance(result.oracle, Assertion):
                continue
            hit = (
                canonical_assertion_text(render_assertion(result.oracle.form))
                == truth_text
            )
            if hit:
                matched += 1
                if in_vocab:
                    in_vocab_matched += 1
        rows.append(
            KAblationRow(
                k,
                matched / total if total else 0.0,
                in_vocab_total / total if total else 0.0,
                in_vocab_matched / in_vocab_total if in_vocab_total else 0.0,
                k == default_k,
            )
        )
    return rows


def _context_of(record: Mapping[str, Any]):
    from .datasets import strip_implementation

    try:
        return strip_implementation(
            record.get("focal_method", ""),
            record.get("docstring", ""),
            class_name=record.get("class_name", ""),
        )
    except ParseError:
        from .testlang import UnitContext

        return UnitContext(
            record.get("class_name", ""), "", record.get("docstring", "")
        )


def read_execution_records(path: str) -> list[ExecutionRecord]:
    records: list[ExecutionRecord] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{line_no}: bad JSON: {exc}") from exc
            records.append(ExecutionRecord.from_json(data))
    return records
