"""Isochrono: isochrony-aware machine translation evaluation.

Measures how closely a translation's predicted speech duration matches its
source (ICM), combines that with reference-free quality estimation into a
single ranking score (A-ICM), and renders per-language leaderboards.
"""

from .corpus import FilterPolicy, Segment, Submission, apply_filter, token_histogram
from .errors import IsochronoError
from .evaluation import (
    ConstantQE,
    EvaluationResult,
    Flag,
    FlagPolicy,
    SystemReport,
    evaluate_system,
    flag_system,
    rank_systems,
)
from .metrics import (
    AggregateMetrics,
    DurationEstimate,
    SegmentMetrics,
    aggregate,
    compute_aicm,
    compute_icm,
)
from .predictors import (
    RateDurationPredictor,
    RatePredictorProfile,
    calibrate_rate,
    rate_predict,
)
from .validation import build_error_curve, compare_predictors, find_reliability_threshold

__version__ = "0.1.0"

__all__ = [
    "AggregateMetrics",
    "ConstantQE",
    "DurationEstimate",
    "EvaluationResult",
    "FilterPolicy",
    "Flag",
    "FlagPolicy",
    "IsochronoError",
    "RateDurationPredictor",
    "RatePredictorProfile",
    "Segment",
    "SegmentMetrics",
    "Submission",
    "SystemReport",
    "aggregate",
    "apply_filter",
    "build_error_curve",
    "calibrate_rate",
    "compare_predictors",
    "compute_aicm",
    "compute_icm",
    "evaluate_system",
    "find_reliability_threshold",
    "flag_system",
    "rank_systems",
    "rate_predict",
    "token_histogram",
]
