"""Oracle inference: scorers and the rank-and-threshold pipeline."""
from .heuristic import BuiltinHeuristic, HeuristicWeights
from .pipeline import (
    DECISION_ASSERTION,
    DECISION_EXCEPTION,
    DECISION_PREFIX_ONLY,
    InferenceResult,
    RankerConfig,
    Scorer,
    classify_exception,
    documented_throws,
    infer_oracle,
    rank_assertions,
)
from .wire import ExternalScorer, ScoreRequest, check_score

__all__ = [
    "BuiltinHeuristic",
    "HeuristicWeights",
    "DECISION_ASSERTION",
    "DECISION_EXCEPTION",
    "DECISION_PREFIX_ONLY",
    "InferenceResult",
    "RankerConfig",
    "Scorer",
    "classify_exception",
    "documented_throws",
    "infer_oracle",
    "rank_assertions",
    "ExternalScorer",
    "ScoreRequest",
    "check_score",
]
