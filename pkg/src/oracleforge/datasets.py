"""Build training corpora from raw (focal method, test) records.

Input records are JSONL objects with keys focal_method, docstring,
class_name, test (and optionally project, used for split assignment).
Outputs carry an oracle-free prefix, a unit context stripped of any
implementation, a label, and a stable group id.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

from .candidates import GlobalConstantTable, create_candidate_templates
from .errors import NoAssignment, ParseError
from .oracles import (
    Assertion,
    render_assertion,
    strip_oracles,
    normalize_test_name,
)
from .testlang import (
    TestPrefix,
    UnitContext,
    parse_test_method,
    parse_signature,
    render_prefix,
)

_JAVADOC_RE = re.compile(r"^\s*/\*\*(.*?)\*/", re.DOTALL)


def _strip_javadoc_gutter(body: str) -> str:
    lines = [re.sub(r"^\s*\*? ?", "", line) for line in body.strip().splitlines()]
    return "\n".join(lines).strip()


def strip_implementation(
    focal_source: str, docstring: str = "", *, class_name: str = ""
) -> UnitContext:
    """Reduce a focal method to its signature plus docstring.

    A leading javadoc comment becomes the docstring when none is given.
    Idempotent: running it on an already-stripped signature changes nothing.
    """
    source = focal_source.strip()
    m = _JAVADOC_RE.match(source)
    if m is not None:
        if not docstring:
            docstring = _strip_javadoc_gutter(m.group(1))
        source = source[m.end() :].strip()
    open_paren = source.find("(")
    if open_paren < 0:
        raise ParseError(0, "method signature with parameter list")
    depth = 0
    close = -1
    for i in range(open_paren, len(source)):
        if source[i] == "(":
            depth += 1
        elif source[i] == ")":
            depth -= 1
            if depth == 0:
                close = i
                break
    if close < 0:
        raise ParseError(open_paren, "closing ')'")
    signature = " ".join(source[: close + 1].split())
    context = parse_signature(signature, class_name=class_name, docstring=docstring)
    return context


def group_id(prefix_text: str, context: UnitContext) -> str:
    """Stable id over the normalized prefix text and the context text."""
    context_text = "\x1f".join([context.class_name, context.signature, context.docstring])
    digest = hashlib.sha256()
    digest.update(prefix_text.encode("utf-8"))
    digest.update(b"\x00")
    digest.update(context_text.encode("utf-8"))
    return digest.hexdigest()[:16]


def split_of(record: dict[str, Any]) -> str:
    """90/5/5 train/valid/test assignment, keyed by project when present."""
    key = record.get("project") or json.dumps(record, sort_keys=True)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    bucket = int.from_bytes(digest[:4], "big") % 100
    if bucket < 90:
        return "train"
    if bucket < 95:
        return "valid"
    return "test"


@dataclass
class BuildReport:
    input: int = 0
    kept: int = 0
    dropped: dict[str, int] = field(default_factory=dict)
    labels: dict[str, int] = field(default_factory=dict)
    oov: int = 0

    def drop(self, reason: str) -> None:
        self.dropped[reason] = self.dropped.get(reason, 0) + 1

    def count_label(self, label: int) -> None:
        key = str(label)
        self.labels[key] = self.labels.get(key, 0) + 1

    def to_json(self) -> dict[str, Any]:
        return {
            "input": self.input,
            "kept": self.kept,
            "dropped": dict(sorted(self.dropped.items())),
            "labels": dict(sorted(self.labels.items())),
            "oov": self.oov,
        }


def _context_json(context: UnitContext) -> dict[str, str]:
    return {
        "class_name": context.class_name,
        "signature": context.signature,
        "docstring": context.docstring,
    }


def context_from_json(data: dict[str, Any]) -> UnitContext:
    """Rebuild a UnitContext from its JSONL form, reparsing the signature
    when possible so parameter names stay available."""
    signature = data.get("signature", "")
    class_name = data.get("class_name", "")
    docstring = data.get("docstring", "")
    try:
        return parse_signature(signature, class_name=class_name, docstring=docstring)
    except ParseError:
        return UnitContext(class_name, signature, docstring, False, None)


def _prepare_record(
    record: dict[str, Any], index: int
) -> tuple[TestPrefix, UnitContext, Any] | str:
    """Parse and strip one record; returns a drop reason string on failure."""
    try:
        test = parse_test_method(record.get("test", ""))
    except ParseError:
        return "parse-error"
    test = normalize_test_name(test, index)
    try:
        context = strip_implementation(
            record.get("focal_method", ""),
            record.get("docstring", ""),
            class_name=record.get("class_name", ""),
        )
    except ParseError:
        return "bad-signature"
    stripped = strip_oracles(test)
    if not stripped.prefix.statements:
        return "empty-prefix"
    return stripped.prefix, context, stripped


def build_exception_dataset(
    records: Iterable[dict[str, Any]],
) -> tuple[list[dict[str, Any]], BuildReport]:
    """One sample per test: does its oracle expect an exception?"""
    report = BuildReport()
    samples: list[dict[str, Any]] = []
    for index, record in enumerate(records):
        report.input += 1
        prepared = _prepare_record(record, index)
        if isinstance(prepared, str):
            report.drop(prepared)
            continue
        prefix, context, stripped = prepared
        label = 1 if stripped.kind == "exception" else 0
        prefix_text = render_prefix(prefix)
        samples.append(
            {
                "prefix": prefix_text,
                "context": _context_json(context),
                "label": label,
                "group_id": group_id(prefix_text, context),
                "split": split_of(record),
            }
        )
        report.kept += 1
        report.count_label(label)
    return samples, report


def build_assertion_dataset(
    records: Iterable[dict[str, Any]],
    table: GlobalConstantTable,
    *,
    keep_oov: bool = False,
) -> tuple[list[dict[str, Any]], BuildReport]:
    """One sample per candidate assertion, label 1 on the ground-truth match.

    Groups whose ground truth is not among the candidates are out of
    vocabulary: counted, and emitted with all-zero labels only when
    keep_oov is set.
    """
    report = BuildReport()
    samples: list[dict[str, Any]] = []
    for index, record in enumerate(records):
        report.input += 1
        prepared = _prepare_record(record, index)
        if isinstance(prepared, str):
            report.drop(prepared)
            continue
        _, context, stripped = prepared
        if stripped.kind == "exception":
            report.drop("exception-oracle")
            continue
        if stripped.kind == "none":
            reason = "out-of-grammar-oracle" if stripped.out_of_grammar else "no-oracle"
            report.drop(reason)
            continue
        emitted_any = False
        record_oov = 0
        for prefix, oracle in stripped.per_oracle_prefixes:
            assert isinstance(oracle, Assertion)
            if not prefix.statements:
                continue
            try:
                candidate_set = create_candidate_templates(table, table.k, prefix)
            except NoAssignment:
                continue
            if not candidate_set.entries:
                continue
            truth_text = render_assertion(oracle.form)
            rendered = [render_assertion(e.form) for e in candidate_set.entries]
            if truth_text not in rendered:
                record_oov += 1
                if not keep_oov:
                    continue
            prefix_text = render_prefix(prefix)
            gid = group_id(prefix_text, context)
            split = split_of(record)
            for candidate_text in rendered:
                label = 1 if candidate_text == truth_text else 0
                samples.append(
                    {
                        "prefix": prefix_text,
                        "context": _context_json(context),
                        "candidate": candidate_text,
                        "label": label,
                        "group_id": gid,
                        "split": split,
                    }
                )
                report.count_label(label)
            emitted_any = True
        report.oov += record_oov
        if emitted_any:
            report.kept += 1
        elif record_oov:
            report.drop("out-of-vocab")
        else:
            report.drop("no-assignment")
    return samples, report


# --- JSONL plumbing ---


def read_jsonl(lines: Iterable[str]) -> Iterator[dict[str, Any]]:
    for line in lines:
        line = line.strip()
        if line:
            yield json.loads(line)


def to_jsonl(rows: Iterable[dict[str, Any]]) -> str:
    return "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows)
