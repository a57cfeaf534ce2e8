"""Core isochrony metrics.

ICM is the relative absolute deviation between the predicted speech duration
of a source segment and of its translation (0 = perfectly isochronic, lower is
better). A-ICM folds a reference-free quality score into it:

    aicm = (1 - icm) * qe

Both are pure functions; aggregation over a system's segments reports the
combined score computed from mean ICM and mean QE as the headline value, with
the mean of per-segment A-ICM alongside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import fmean

from .errors import EmptyAggregateError, InvalidInputError


@dataclass(frozen=True)
class DurationEstimate:
    """Predicted speech duration for one piece of text."""

    seconds: float
    predictor_id: str
    text_units: int = 0

    def __post_init__(self):
        if not math.isfinite(self.seconds) or self.seconds < 0:
            raise InvalidInputError(f"seconds must be finite and >= 0, got {self.seconds!r}")
        if not self.predictor_id:
            raise InvalidInputError("predictor_id must be nonempty")
        if self.text_units < 0:
            raise InvalidInputError("text_units must be >= 0")


@dataclass(frozen=True)
class SegmentMetrics:
    """Per-segment (icm, qe, aicm) triple."""

    icm: float
    qe: float
    aicm: float


@dataclass(frozen=True)
class AggregateMetrics:
    """Per-system summary. ``aicm_from_means`` is the headline combined score;
    ``mean_segment_aicm`` is the mean of the per-segment values."""

    mean_icm: float
    mean_qe: float
    aicm_from_means: float
    mean_segment_aicm: float
    n_segments: int


def compute_icm(original: DurationEstimate, translated: DurationEstimate,
                squared: bool = False) -> float:
    """Relative absolute error of the translated duration against the original.

    ``squared`` exposes the squared variant for comparison; the default
    (unsquared) matches the "0.5 means half the duration" semantics.
    """
    if original.seconds == 0:
        raise InvalidInputError(
            f"original duration is zero (predictor {original.predictor_id!r}); "
            "ICM is undefined"
        )
    ratio = abs(original.seconds - translated.seconds) / original.seconds
    return ratio * ratio if squared else ratio


def compute_aicm(icm: float, qe: float) -> float:
    """Combined score (1 - icm) * qe. Negative when icm > 1 and qe > 0;
    never clamped."""
    if not math.isfinite(icm) or icm < 0:
        raise InvalidInputError(f"icm must be finite and >= 0, got {icm!r}")
    if not math.isfinite(qe):
        raise InvalidInputError(f"qe must be finite, got {qe!r}")
    return (1.0 - icm) * qe


def segment_metrics(icm: float, qe: float) -> SegmentMetrics:
    """Build a SegmentMetrics triple with aicm derived from icm and qe."""
    return SegmentMetrics(icm=icm, qe=qe, aicm=compute_aicm(icm, qe))


def aggregate(per_segment: list[SegmentMetrics]) -> AggregateMetrics:
    """Summarize per-segment metrics into one row."""
    if not per_segment:
        raise EmptyAggregateError("cannot aggregate zero segments")
    for m in per_segment:
        if not (math.isfinite(m.icm) and math.isfinite(m.qe) and math.isfinite(m.aicm)):
            raise InvalidInputError(f"non-finite segment metrics: {m}")
    mean_icm = fmean(m.icm for m in per_segment)
    mean_qe = fmean(m.qe for m in per_segment)
    return AggregateMetrics(
        mean_icm=mean_icm,
        mean_qe=mean_qe,
        aicm_from_means=compute_aicm(mean_icm, mean_qe),
        mean_segment_aicm=fmean(m.aicm for m in per_segment),
        n_segments=len(per_segment),
    )
