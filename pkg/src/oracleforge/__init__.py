"""Test-oracle generation: parse test prefixes, rank candidate oracles, evaluate.

The pipeline turns an oracle-less unit test plus the focal method's
signature and docstring into either an expected-exception wrapper or a
single assertion chosen from a type-constrained candidate set.  Scoring
is pluggable: a built-in heuristic or any external process speaking the
line protocol in ranking.wire.
"""
from .candidates import (
    CandidateEntry,
    CandidateSet,
    GlobalConstantTable,
    LocalValueTable,
    RetVal,
    build_global_constant_table,
    create_candidate_templates,
    create_local_value_table,
    erase_type,
    extract_ret_val,
    load_vocab,
    save_vocab,
    type_kind,
    vocab_to_text,
)
from .datasets import (
    BuildReport,
    build_assertion_dataset,
    build_exception_dataset,
    group_id,
    split_of,
    strip_implementation,
)
from .errors import (
    InvalidOracle,
    LengthMismatch,
    MissingTruth,
    NoAssignment,
    NoOracle,
    OracleForgeError,
    ParseError,
    ScorerUnavailable,
)
from .evalharness import (
    ExecutionRecord,
    aggregate,
    classification_metrics,
    grammar_coverage,
    judge,
    k_ablation,
    lexical_accuracy,
    weighted_coin_labels,
)
from .oracles import (
    Assertion,
    Equals,
    ExpectedException,
    IsFalse,
    IsNull,
    IsTrue,
    NotNull,
    OutOfGrammar,
    classify_assertion,
    label_exception,
    render_assertion,
    render_oracle_test,
    strip_oracles,
)
from .ranking import (
    BuiltinHeuristic,
    ExternalScorer,
    InferenceResult,
    RankerConfig,
    infer_oracle,
)
from .testlang import (
    TestMethod,
    TestPrefix,
    UnitContext,
    parse_signature,
    parse_test_method,
    render_prefix,
    render_test_method,
)

__version__ = "0.1.0"
