"""Validation harness for duration predictors.

Bins the relative absolute error of predicted against reference durations by
word count and locates the word count beyond which the predictor stays within
tolerance, i.e. where the isochrony metric becomes trustworthy.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from statistics import fmean, median

from .errors import InvalidInputError
from .metrics import DurationEstimate
from .predictors import DurationPredictor
from .text import count_tokens

DEFAULT_BIN_WIDTH = 5
DEFAULT_TOLERANCE = 0.05


@dataclass(frozen=True)
class ErrorCurve:
    """Mean relative absolute error per word-count bin; empty bins omitted."""

    bins: list[tuple[int, float, int]]  # (bin_start, mean_rel_abs_error, n)


@dataclass
class CandidateResult:
    predictor_id: str
    curve: ErrorCurve
    threshold: int | None
    failed: bool = False
    errors: list[str] = field(default_factory=list)


def build_error_curve(pairs: list[tuple[int, float, float]],
                      bin_width: int = DEFAULT_BIN_WIDTH,
                      statistic: str = "mean") -> ErrorCurve:
    """Bin (word_count, reference_seconds, predicted_seconds) triples.

    ``statistic`` is "mean" (default) or "median" for robustness.
    """
    if bin_width < 1:
        raise InvalidInputError("bin_width must be >= 1")
    if statistic not in ("mean", "median"):
        raise InvalidInputError("statistic must be 'mean' or 'median'")
    grouped: dict[int, list[float]] = {}
    for word_count, reference, predicted in pairs:
        if reference <= 0 or predicted <= 0:
            raise InvalidInputError(
                f"durations must be > 0, got reference={reference}, predicted={predicted}"
            )
        if word_count < 1:
            raise InvalidInputError(f"word_count must be >= 1, got {word_count}")
        grouped.setdefault((word_count // bin_width) * bin_width, []).append(
            abs(reference - predicted) / reference
        )
    reduce = fmean if statistic == "mean" else median
    return ErrorCurve(bins=[(start, reduce(errs), len(errs))
                            for start, errs in sorted(grouped.items())])


def find_reliability_threshold(curve: ErrorCurve, tolerance: float = DEFAULT_TOLERANCE) -> int | None:
    """Smallest bin start from which every later bin stays within tolerance;
    None when no suffix of the curve qualifies."""
    if tolerance < 0:
        raise InvalidInputError("tolerance must be >= 0")
    threshold = None
    for start, err, _ in reversed(curve.bins):
        if err <= tolerance:
            threshold = start
        else:
            break
    return threshold


def compare_predictors(reference: list[tuple[str, str, float]],
                       candidates: list[DurationPredictor],
                       bin_width: int = DEFAULT_BIN_WIDTH,
                       tolerance: float = DEFAULT_TOLERANCE) -> list[CandidateResult]:
    """Run every candidate over the same (text, language, reference_seconds)
    set. A candidate erroring on more than half the texts is marked failed;
    the others are unaffected."""
    if not candidates:
        raise InvalidInputError("at least one candidate predictor required")
    results = []
    for candidate in candidates:
        pairs: list[tuple[int, float, float]] = []
        errors: list[str] = []
        for text, language, ref_seconds in reference:
            try:
                estimate: DurationEstimate = candidate.predict(text, language)
                pairs.append((count_tokens(text), ref_seconds, estimate.seconds))
            except Exception as exc:  # noqa: BLE001 - candidate quality is unknown
                errors.append(f"{language}:{text[:40]!r}: {exc}")
        failed = len(errors) > len(reference) / 2
        curve = ErrorCurve(bins=[]) if failed else build_error_curve(pairs, bin_width)
        results.append(CandidateResult(
            predictor_id=candidate.id(),
            curve=curve,
            threshold=None if failed else find_reliability_threshold(curve, tolerance),
            failed=failed,
            errors=errors,
        ))
    return results


def curve_csv(curve: ErrorCurve) -> str:
    """CSV export with header bin_start,mean_rel_abs_error,n."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["bin_start", "mean_rel_abs_error", "n"])
    for start, err, n in curve.bins:
        writer.writerow([start, err, n])
    return out.getvalue()
