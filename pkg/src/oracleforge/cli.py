"""Command-line front end: the pipeline as subcommands over JSONL files.

Flags override config-file entries which override defaults.  Record-level
problems become error objects in the output stream; only --strict turns
them into a non-zero exit.  Given the same inputs, flags, and seed the
output bytes are identical run to run.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator, Sequence, TextIO

from .candidates import (
    GlobalConstantTable,
    build_global_constant_table,
    load_vocab,
    save_vocab,
)
from .datasets import (
    build_assertion_dataset,
    build_exception_dataset,
    group_id,
    strip_implementation,
)
from .errors import InvalidOracle, OracleForgeError, ParseError, ScorerUnavailable
from .evalharness import (
    ExecutionRecord,
    aggregate,
    grammar_coverage,
    render_metrics_table,
)
from .oracles import Assertion, render_oracle_test, strip_oracles
from .ranking import (
    BuiltinHeuristic,
    ExternalScorer,
    RankerConfig,
    infer_oracle,
)
from .testlang import (
    TestMethod,
    node_to_json,
    parse_test_method,
    render_prefix,
    render_test_method,
)


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    k: int = 8
    threshold: float = 0.5
    exception_cutoff: float = 0.5
    scorer: str = "heuristic"
    fallback_heuristic: bool = False
    seed: int = 0
    jobs: int = 1
    strict: bool = False

    def validate(self) -> None:
        if self.k < 0:
            raise ConfigError(f"k must be non-negative: {self.k}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold must be in [0, 1]: {self.threshold}")
        if not 0.0 <= self.exception_cutoff <= 1.0:
            raise ConfigError(
                f"exception-cutoff must be in [0, 1]: {self.exception_cutoff}"
            )
        if self.jobs < 1:
            raise ConfigError(f"jobs must be at least 1: {self.jobs}")
        if self.scorer != "heuristic" and not self.scorer.startswith(("cmd:", "tcp:")):
            raise ConfigError(
                f"scorer must be 'heuristic', 'cmd:<command>', or 'tcp:<host>:<port>': {self.scorer}"
            )


_BOOL_WORDS = {"1": True, "true": True, "yes": True, "0": False, "false": False, "no": False}


def _coerce(name: str, text: str, target_type: type) -> Any:
    try:
        if target_type is bool:
            return _BOOL_WORDS[text.lower()]
        return target_type(text)
    except (KeyError, ValueError):
        raise ConfigError(f"bad value for {name}: {text!r}") from None


_CONFIG_TYPES = {"k": int, "threshold": float, "exception_cutoff": float,
                 "scorer": str, "fallback_heuristic": bool, "seed": int,
                 "jobs": int, "strict": bool}


def load_config_file(path: str) -> dict[str, Any]:
    """Flat key=value lines; blank lines and # comments are skipped."""
    out: dict[str, Any] = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for line_no, raw in enumerate(handle, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, value = line.partition("=")
                key = key.strip().replace("-", "_")
                if not sep:
                    raise ConfigError(f"{path}:{line_no}: expected key=value")
                if key not in _CONFIG_TYPES:
                    raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
                out[key] = _coerce(key, value.strip(), _CONFIG_TYPES[key])
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    layered: dict[str, Any] = {}
    if getattr(args, "config", None):
        layered.update(load_config_file(args.config))
    for name in ("k", "threshold", "exception_cutoff", "scorer",
                 "fallback_heuristic", "seed", "jobs", "strict"):
        value = getattr(args, name, None)
        if value is not None:
            layered[name] = value
    config = RunConfig(**layered)
    config.validate()
    return config


# --- IO helpers ---


def _open_out(path: str | None) -> TextIO:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8")


def _close_out(handle: TextIO) -> None:
    if handle is not sys.stdout:
        handle.close()


def _read_lines(path: str) -> Iterator[str]:
    if path == "-":
        yield from sys.stdin
        return
    with open(path, "r", encoding="utf-8") as handle:
        yield from handle


def _error_object(line_no: int, exc: Exception) -> dict[str, Any]:
    return {
        "error": {"type": type(exc).__name__, "message": str(exc)},
        "line": line_no,
    }


def _dump(row: dict[str, Any]) -> str:
    return json.dumps(row, sort_keys=True)


def _decode_records(
    lines: Iterable[str],
) -> Iterator[tuple[int, dict[str, Any] | Exception]]:
    """Yield (line_no, record-or-error) pairs, skipping blank lines."""
    for line_no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
            if not isinstance(data, dict):
                raise ParseError(0, "a JSON object per line")
            yield line_no, data
        except (json.JSONDecodeError, ParseError) as exc:
            yield line_no, exc


def _parallel_map(
    worker: Callable[[Any], Any], items: Iterable[Any], jobs: int
) -> Iterator[Any]:
    if jobs <= 1:
        yield from map(worker, items)
        return
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(worker, items)


# --- scorers ---


class FallbackScorer:
    """Uses the external scorer until it fails, the heuristic afterwards."""

    def __init__(self, primary, fallback) -> None:
        self._primary = primary
        self._fallback = fallback
        self.fell_back = False

    def _call(self, method: str, *args) -> float:
        if not self.fell_back:
            try:
                return getattr(self._primary, method)(*args)
            except ScorerUnavailable as exc:
                print(f"warning: scorer unavailable, using heuristic: {exc}",
                      file=sys.stderr)
                self.fell_back = True
        return getattr(self._fallback, method)(*args)

    def score_exception(self, prefix, context) -> float:
        return self._call("score_exception", prefix, context)

    def score_assertion(self, prefix, context, entry) -> float:
        return self._call("score_assertion", prefix, context, entry)


def make_scorer(config: RunConfig):
    heuristic = BuiltinHeuristic(seed=config.seed)
    if config.scorer == "heuristic":
        return heuristic, None
    try:
        external = ExternalScorer(config.scorer)
    except ScorerUnavailable:
        if config.fallback_heuristic:
            print("warning: scorer unavailable at startup, using heuristic",
                  file=sys.stderr)
            return heuristic, None
        raise
    if config.fallback_heuristic:
        return FallbackScorer(external, heuristic), external
    return external, external


# --- subcommands ---


def cmd_parse(args: argparse.Namespace, config: RunConfig) -> int:
    def worker(item: tuple[int, dict[str, Any] | Exception]) -> dict[str, Any]:
        line_no, record = item
        if isinstance(record, Exception):
            return _error_object(line_no, record)
        try:
            test = parse_test_method(record.get("test", ""))
        except ParseError as exc:
            return _error_object(line_no, exc)
        return node_to_json(test)

    out = _open_out(args.output)
    try:
        for row in _parallel_map(worker, _decode_records(_read_lines(args.input)), config.jobs):
            out.write(_dump(row) + "\n")
            if config.strict and "error" in row:
                return 1
    finally:
        _close_out(out)
    return 0


def cmd_dataset(args: argparse.Namespace, config: RunConfig) -> int:
    records: list[dict[str, Any]] = []
    errors: list[dict[str, Any]] = []
    for line_no, record in _decode_records(_read_lines(args.input)):
        if isinstance(record, Exception):
            errors.append(_error_object(line_no, record))
            if config.strict:
                print(_dump(errors[-1]), file=sys.stderr)
                return 1
        else:
            records.append(record)
    if args.kind == "exceptions":
        samples, report = build_exception_dataset(records)
    else:
        with open(args.vocab, "r", encoding="utf-8") as handle:
            table = load_vocab(handle)
        samples, report = build_assertion_dataset(
            records, table, keep_oov=args.keep_oov
        )
    out = _open_out(args.output)
    try:
        for row in errors:
            out.write(_dump(row) + "\n")
        for sample in samples:
            out.write(_dump(sample) + "\n")
    finally:
        _close_out(out)
    report_text = json.dumps(report.to_json(), sort_keys=True)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as handle:
            handle.write(report_text + "\n")
    else:
        print(report_text, file=sys.stderr)
    return 0


def cmd_vocab(args: argparse.Namespace, config: RunConfig) -> int:
    forms = []
    for line_no, record in _decode_records(_read_lines(args.input)):
        if isinstance(record, Exception):
            if config.strict:
                print(_dump(_error_object(line_no, record)), file=sys.stderr)
                return 1
            continue
        try:
            test = parse_test_method(record.get("test", ""))
        except ParseError as exc:
            if config.strict:
                print(_dump(_error_object(line_no, exc)), file=sys.stderr)
                return 1
            continue
        for _, oracle in strip_oracles(test).per_oracle_prefixes:
            if isinstance(oracle, Assertion):
                forms.append(oracle.form)
    table = build_global_constant_table(forms, config.k)
    out = _open_out(args.output)
    try:
        save_vocab(table, out)
    finally:
        _close_out(out)
    return 0


def cmd_infer(args: argparse.Namespace, config: RunConfig) -> int:
    if args.vocab:
        with open(args.vocab, "r", encoding="utf-8") as handle:
            table = load_vocab(handle)
    else:
        table = GlobalConstantTable(config.k)
    ranker = RankerConfig(
        threshold=config.threshold,
        k=config.k,
        exception_cutoff=config.exception_cutoff,
    )
    scorer, owned = make_scorer(config)

    def worker(item):
        line_no, record = item
        if isinstance(record, Exception):
            return [_error_object(line_no, record)]
        try:
            test = parse_test_method(record.get("test", ""))
            context = strip_implementation(
                record.get("focal_method", ""),
                record.get("docstring", ""),
                class_name=record.get("class_name", ""),
            )
        except ParseError as exc:
            return [_error_object(line_no, exc)]
        stripped = strip_oracles(test)
        pairs = stripped.per_oracle_prefixes or ((stripped.prefix, None),)
        rows = []
        for prefix, _ in pairs:
            result = infer_oracle(prefix, context, ranker, scorer, table)
            rows.append((prefix, context, result))
        return rows

    out = _open_out(args.output)
    emitted = 0
    try:
        for rows in _parallel_map(
            worker, _decode_records(_read_lines(args.input)), config.jobs
        ):
            for row in rows:
                if isinstance(row, dict):
                    out.write(_dump(row) + "\n")
                    if config.strict:
                        return 1
                    continue
                prefix, context, result = row
                name = f"test{emitted}"
                emitted += 1
                try:
                    if result.oracle is None:
                        text = render_test_method(
                            TestMethod(name, prefix.statements)
                        )
                    else:
                        text = render_test_method(
                            render_oracle_test(prefix, result.oracle, name)
                        )
                except InvalidOracle as exc:
                    out.write(_dump(_error_object(emitted - 1, exc)) + "\n")
                    if config.strict:
                        return 1
                    continue
                out.write(
                    _dump(
                        {
                            "group_id": group_id(render_prefix(prefix), context),
                            "name": name,
                            "result": result.to_json(),
                            "test": text,
                        }
                    )
                    + "\n"
                )
    finally:
        _close_out(out)
        if owned is not None:
            owned.close()
    return 0


def cmd_eval(args: argparse.Namespace, config: RunConfig) -> int:
    records: list[ExecutionRecord] = []
    for line_no, data in _decode_records(_read_lines(args.records)):
        if isinstance(data, Exception):
            if config.strict:
                print(_dump(_error_object(line_no, data)), file=sys.stderr)
                return 1
            continue
        try:
            records.append(ExecutionRecord.from_json(data))
        except (KeyError, ValueError) as exc:
            if config.strict:
                print(_dump(_error_object(line_no, exc)), file=sys.stderr)
                return 1
    report = aggregate(records)
    out = _open_out(args.output)
    try:
        out.write(json.dumps(report.to_json(), sort_keys=True) + "\n")
    finally:
        _close_out(out)
    table_text = render_metrics_table(report)
    if args.table:
        with open(args.table, "w", encoding="utf-8") as handle:
            handle.write(table_text + "\n")
    else:
        print(table_text, file=sys.stderr)
    return 0


def cmd_coverage(args: argparse.Namespace, config: RunConfig) -> int:
    report = grammar_coverage(_read_lines(args.input))
    out = _open_out(args.output)
    try:
        out.write(json.dumps(report.to_json(), sort_keys=True) + "\n")
    finally:
        _close_out(out)
    return 0


# --- argument wiring ---


def _shared_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--jobs", type=int, default=None,
                        help="worker threads; output order is input order")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--strict", action="store_const", const=True, default=None,
                        help="stop at the first record-level error")
    parser.add_argument("--k", type=int, default=None,
                        help="global constant table size per type")
    parser.add_argument("--threshold", type=float, default=None,
                        help="minimum score to keep the top-ranked assertion")
    parser.add_argument("--exception-cutoff", dest="exception_cutoff",
                        type=float, default=None,
                        help="score at or above which a prefix expects an exception")
    parser.add_argument("--scorer", default=None,
                        help="'heuristic', 'cmd:<command>', or 'tcp:<host>:<port>'")
    parser.add_argument("--fallback-heuristic", dest="fallback_heuristic",
                        action="store_const", const=True, default=None,
                        help="fall back to the heuristic when the scorer fails")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oracle-forge",
        description="Generate, score, and evaluate test oracles over JSONL corpora.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("parse", help="parse tests and echo ASTs as JSON")
    p.add_argument("input", help="JSONL file with a 'test' field per record, or -")
    p.add_argument("-o", "--output", default=None)
    _shared_flags(p)
    p.set_defaults(run=cmd_parse)

    p = commands.add_parser("dataset", help="build a labelled dataset")
    p.add_argument("input")
    p.add_argument("--kind", choices=("exceptions", "assertions"), required=True)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--vocab", default=None, help="vocab file (required for assertions)")
    p.add_argument("--keep-oov", action="store_true",
                   help="keep groups whose truth is outside the candidate set")
    p.add_argument("--report", default=None, help="write the build report here")
    _shared_flags(p)
    p.set_defaults(run=cmd_dataset)

    p = commands.add_parser("vocab", help="build the global constant table")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    _shared_flags(p)
    p.set_defaults(run=cmd_vocab)

    p = commands.add_parser("infer", help="strip oracles and infer replacements")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--vocab", default=None)
    _shared_flags(p)
    p.set_defaults(run=cmd_infer)

    p = commands.add_parser("eval", help="score execution records")
    p.add_argument("records")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--table", default=None, help="write the text table here")
    _shared_flags(p)
    p.set_defaults(run=cmd_eval)

    p = commands.add_parser("coverage", help="grammar coverage over assert lines")
    p.add_argument("input", help="text file, one assert call per line")
    _shared_flags(p)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(run=cmd_coverage)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.command == "dataset" and args.kind == "assertions" and not args.vocab:
        print("error: dataset --kind assertions requires --vocab", file=sys.stderr)
        return 2
    try:
        return args.run(args, config)
    except ScorerUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OracleForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
