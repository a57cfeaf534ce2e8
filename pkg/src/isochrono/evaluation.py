"""Pipeline orchestration: score one system's submission segment by segment,
aggregate, flag degenerate systems, and rank.

A segment contributes to the aggregate only if the system translated it and
both duration predictions plus the QE score succeeded; everything else counts
against coverage. A system erroring on more than half of the segments it
attempted fails the whole evaluation rather than producing a quietly thin row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol, runtime_checkable

import numpy as np

from .corpus import Segment, Submission
from .errors import EvaluationError, InvalidInputError, IsochronoError
from .metrics import AggregateMetrics, SegmentMetrics, aggregate, compute_icm, segment_metrics
from .predictors import DurationPredictor


@runtime_checkable
class QEProvider(Protocol):
    """Reference-free translation quality scorer."""

    def score(self, source_text: str, translated_text: str,
              source_language: str, target_language: str) -> float: ...


class ConstantQE:
    """Test-only provider returning a fixed score for every pair."""

    def __init__(self, value: float):
        self.value = float(value)

    def score(self, source_text, translated_text, source_language, target_language) -> float:
        return self.value


class PrecomputedQE:
    """Replays scores precomputed elsewhere, keyed by segment id."""

    def __init__(self, scores: dict[str, float]):
        self._scores = dict(scores)

    def score(self, source_text, translated_text, source_language, target_language) -> float:
        raise InvalidInputError("PrecomputedQE is keyed by segment id; "
                                "use score_segment")

    def score_segment(self, segment_id: str, source_text, translated_text,
                      source_language, target_language) -> float:
        if segment_id not in self._scores:
            raise InvalidInputError(f"no precomputed QE score for segment {segment_id!r}")
        return self._scores[segment_id]


class Flag(str, Enum):
    LOW_QUALITY = "LOW_QUALITY"
    SUSPECT_TRUNCATION = "SUSPECT_TRUNCATION"
    NO_SUBMISSION = "NO_SUBMISSION"


@dataclass(frozen=True)
class FlagPolicy:
    qe_floor: float = 4.0  # heuristic for the BLASER-like 0-5 scale
    icm_suspicion_quantile: float = 0.25

    def __post_init__(self):
        if not 0 < self.icm_suspicion_quantile < 1:
            raise InvalidInputError("icm_suspicion_quantile must be in (0, 1)")


@dataclass
class SystemReport:
    system_name: str
    language_pair: tuple[str, str]
    aggregate: AggregateMetrics | None
    coverage: float
    flags: set[Flag] = field(default_factory=set)

    def __post_init__(self):
        if not 0 <= self.coverage <= 1:
            raise InvalidInputError("coverage must be in [0, 1]")
        if (self.aggregate is None) != (Flag.NO_SUBMISSION in self.flags):
            raise InvalidInputError("aggregate is absent iff NO_SUBMISSION is flagged")


@dataclass(frozen=True)
class SegmentDiagnostic:
    """One segment that errored during evaluation."""

    segment_id: str
    reason: str


@dataclass
class EvaluationResult:
    per_segment: list[tuple[str, SegmentMetrics]]
    report: SystemReport
    diagnostics: list[SegmentDiagnostic]


def _score_one(seg: Segment, translation: str, source_lang: str, target_lang: str,
               predictor: DurationPredictor, qe: QEProvider) -> SegmentMetrics:
    original = predictor.predict(seg.source_text, source_lang)
    translated = predictor.predict(translation, target_lang)
    icm = compute_icm(original, translated)
    if hasattr(qe, "score_segment"):
        score = qe.score_segment(seg.id, seg.source_text, translation,
                                 source_lang, target_lang)
    else:
        score = qe.score(seg.source_text, translation, source_lang, target_lang)
    return segment_metrics(icm, score)


def evaluate_system(segments: list[Segment], submission: Submission,
                    predictor: DurationPredictor, qe: QEProvider,
                    max_in_flight: int = 1) -> EvaluationResult:
    """Score every translated segment and aggregate into one SystemReport.

    ``max_in_flight`` bounds per-segment parallelism; results are collected in
    input order, so the aggregate is identical to the sequential one.
    """
    if not segments:
        raise InvalidInputError("corpus is empty")
    source_lang, target_lang = submission.language_pair
    supported = predictor.supported_languages()
    if not {source_lang, target_lang} <= supported:
        raise InvalidInputError(
            f"predictor {predictor.id()!r} does not support pair "
            f"{source_lang}-{target_lang} (supports {sorted(supported)})"
        )

    attempted_segments = [(seg, submission.translations[seg.id])
                          for seg in segments if seg.id in submission.translations]
    attempted = len(attempted_segments)

    def score(item):
        seg, translation = item
        try:
            return seg.id, _score_one(seg, translation, source_lang, target_lang,
                                      predictor, qe), None
        except IsochronoError as exc:
            return seg.id, None, str(exc)

    if max_in_flight > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
            outcomes = list(pool.map(score, attempted_segments))
    else:
        outcomes = [score(item) for item in attempted_segments]

    per_segment: list[tuple[str, SegmentMetrics]] = []
    diagnostics: list[SegmentDiagnostic] = []
    for seg_id, metrics, reason in outcomes:
        if metrics is not None:
            per_segment.append((seg_id, metrics))
        else:
            diagnostics.append(SegmentDiagnostic(segment_id=seg_id, reason=reason))

    if attempted and len(diagnostics) > attempted / 2:
        raise EvaluationError(
            f"{submission.system_name}: {len(diagnostics)} of {attempted} "
            f"segments errored; first: {diagnostics[0].reason}"
        )

    if per_segment:
        agg = aggregate([m for _, m in per_segment])
        flags: set[Flag] = set()
    else:
        agg = None
        flags = {Flag.NO_SUBMISSION}
    report = SystemReport(
        system_name=submission.system_name,
        language_pair=submission.language_pair,
        aggregate=agg,
        coverage=len(per_segment) / len(segments),
        flags=flags,
    )
    return EvaluationResult(per_segment=per_segment, report=report,
                            diagnostics=diagnostics)


def flag_system(report: SystemReport, all_reports: list[SystemReport],
                policy: FlagPolicy) -> set[Flag]:
    """Degenerate-system flags for one report.

    LOW_QUALITY: mean QE below the configured floor. SUSPECT_TRUNCATION:
    additionally sitting in the best (lowest-ICM) quantile of its language
    pair, the signature of output that is short rather than well paced.
    """
    if report.aggregate is None:
        raise InvalidInputError("flag_system requires a report with an aggregate")
    flags: set[Flag] = set()
    if report.aggregate.mean_qe < policy.qe_floor:
        flags.add(Flag.LOW_QUALITY)
        peer_icms = [r.aggregate.mean_icm for r in all_reports
                     if r.aggregate is not None
                     and r.language_pair == report.language_pair]
        if peer_icms:
            cutoff = float(np.quantile(peer_icms, policy.icm_suspicion_quantile))
            if report.aggregate.mean_icm <= cutoff:
                flags.add(Flag.SUSPECT_TRUNCATION)
    return flags


def apply_flags(reports: list[SystemReport], policy: FlagPolicy) -> list[SystemReport]:
    """Annotate every scored report in place with its flags."""
    for report in reports:
        if report.aggregate is not None:
            report.flags |= flag_system(report, reports, policy)
    return reports


def rank_systems(reports: list[SystemReport]) -> list[SystemReport]:
    """Order by descending combined score; ties broken by lower mean ICM,
    then name. Systems without an aggregate sort last, alphabetically."""
    scored = [r for r in reports if r.aggregate is not None]
    absent = [r for r in reports if r.aggregate is None]
    scored.sort(key=lambda r: (-r.aggregate.aicm_from_means,
                               r.aggregate.mean_icm,
                               r.system_name))
    absent.sort(key=lambda r: r.system_name)
    return scored + absent


def metrics_jsonl(results: list[EvaluationResult]) -> str:
    """Per-segment metrics export: one {segment_id, system, icm, qe, aicm}
    object per line."""
    import json

    lines = []
    for result in results:
        for seg_id, m in result.per_segment:
            lines.append(json.dumps({
                "segment_id": seg_id,
                "system": result.report.system_name,
                "icm": m.icm,
                "qe": m.qe,
                "aicm": m.aicm,
            }, ensure_ascii=False, sort_keys=True))
    return "".join(line + "\n" for line in lines)
