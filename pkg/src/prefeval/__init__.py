"""Meta-evaluation of search result-list metrics against stated user preferences."""

from .config import Metric, MetricConfig, RatingSource
from .dataset import (
    Click,
    EvaluationDataset,
    GradedJudgment,
    Language,
    PreferenceJudgment,
    Query,
    QueryType,
    RankedListPair,
    Session,
    ValidationError,
    ValidationMode,
    ValidationReport,
    Variant,
    Verdict,
    validate,
)
from .metrics import ApNorm, ExcludedQuery
from .pir import PirCell, PirGrid, best_threshold, detailed_breakdown, pir, pir_sweep, pref
from .scales import DiscountFunction, DiscountKind, RelevanceScale, conflate, grade_to_unit
from .synth import SynthSpec, generate_synthetic

__all__ = [
    "ApNorm",
    "Click",
    "DiscountFunction",
    "DiscountKind",
    "EvaluationDataset",
    "ExcludedQuery",
    "GradedJudgment",
    "Language",
    "Metric",
    "MetricConfig",
    "PirCell",
    "PirGrid",
    "PreferenceJudgment",
    "Query",
    "QueryType",
    "RankedListPair",
    "RatingSource",
    "RelevanceScale",
    "Session",
    "SynthSpec",
    "ValidationError",
    "ValidationMode",
    "ValidationReport",
    "Variant",
    "Verdict",
    "best_threshold",
    "conflate",
    "detailed_breakdown",
    "generate_synthetic",
    "grade_to_unit",
    "pir",
    "pir_sweep",
    "pref",
    "validate",
]

__version__ = "0.1.0"
