"""Duration predictors: the contract, a deterministic rate-based model, and
its least-squares calibration.

The rate model predicts ``pause_floor + units / units_per_second`` where units
are non-whitespace characters (default) or tokens. It is the ML-free stand-in
for a neural TTS duration predictor; the bridge adapter in
:mod:`isochrono.bridge` delegates to a real one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, runtime_checkable

import numpy as np

from .errors import InsufficientDataError, InvalidInputError, SchemaError
from .metrics import DurationEstimate
from .text import count_characters, count_tokens

UNIT_KINDS = ("characters", "tokens")


@runtime_checkable
class DurationPredictor(Protocol):
    """Behavioral contract for anything that can predict speech duration."""

    def predict(self, text: str, language: str) -> DurationEstimate: ...

    def id(self) -> str: ...

    def supported_languages(self) -> set[str]: ...


@dataclass(frozen=True)
class RatePredictorProfile:
    """Per-language speaking-rate parameters."""

    language: str
    units_per_second: float
    unit_kind: str = "characters"
    pause_floor: float = 0.0

    def __post_init__(self):
        if self.units_per_second <= 0:
            raise InvalidInputError("units_per_second must be > 0")
        if self.pause_floor < 0:
            raise InvalidInputError("pause_floor must be >= 0")
        if self.unit_kind not in UNIT_KINDS:
            raise InvalidInputError(f"unit_kind must be one of {UNIT_KINDS}")


def count_units(text: str, unit_kind: str) -> int:
    if unit_kind == "characters":
        return count_characters(text)
    if unit_kind == "tokens":
        return count_tokens(text)
    raise InvalidInputError(f"unknown unit_kind {unit_kind!r}")


def rate_predict(profile: RatePredictorProfile, text: str) -> DurationEstimate:
    """Predict duration from a speaking-rate profile."""
    if not text.strip():
        raise InvalidInputError("cannot predict duration for empty text")
    units = count_units(text, profile.unit_kind)
    seconds = profile.pause_floor + units / profile.units_per_second
    return DurationEstimate(
        seconds=seconds,
        predictor_id=f"rate:{profile.language}",
        text_units=count_tokens(text),
    )


def calibrate_rate(samples: list[tuple[str, float]], unit_kind: str = "characters",
                   language: str = "und") -> RatePredictorProfile:
    """Fit (units_per_second, pause_floor) to (text, reference seconds) pairs.

    Least squares over seconds = floor + units * (1/rate). Rank-deficient or
    degenerate fits (nonpositive rate or floor) fall back to a zero-floor
    rate of total units over total seconds.
    """
    if len(samples) < 2:
        raise InsufficientDataError(f"need >= 2 samples to calibrate, got {len(samples)}")
    counts = np.array([count_units(text, unit_kind) for text, _ in samples], dtype=float)
    secs = np.array([s for _, s in samples], dtype=float)
    if np.any(secs <= 0):
        raise InvalidInputError("reference_seconds must all be > 0")

    design = np.column_stack([counts, np.ones_like(counts)])
    slope = floor = None
    if np.linalg.matrix_rank(design) == 2:
        (slope, floor), *_ = np.linalg.lstsq(design, secs, rcond=None)
    if slope is None or slope <= 0 or floor < 0:
        return RatePredictorProfile(
            language=language,
            units_per_second=float(counts.sum() / secs.sum()),
            unit_kind=unit_kind,
            pause_floor=0.0,
        )
    return RatePredictorProfile(
        language=language,
        units_per_second=float(1.0 / slope),
        unit_kind=unit_kind,
        pause_floor=float(floor),
    )


class RateDurationPredictor:
    """Deterministic multi-language predictor backed by speaking-rate profiles.

    Immutable after construction; offers a minimal fit/predict surface so it
    composes with calibration workflows: ``fit`` re-derives the profile for
    one language from reference data and returns a new instance.
    """

    def __init__(self, profiles: dict[str, RatePredictorProfile]):
        if not profiles:
            raise InvalidInputError("at least one profile required")
        self._profiles = dict(profiles)

    def get_params(self) -> dict[str, RatePredictorProfile]:
        return dict(self._profiles)

    def fit(self, language: str, samples: list[tuple[str, float]],
            unit_kind: str = "characters") -> "RateDurationPredictor":
        profiles = dict(self._profiles)
        profiles[language] = calibrate_rate(samples, unit_kind=unit_kind, language=language)
        return RateDurationPredictor(profiles)

    def predict(self, text: str, language: str) -> DurationEstimate:
        profile = self._profiles.get(language)
        if profile is None:
            raise InvalidInputError(f"no rate profile for language {language!r}")
        return rate_predict(profile, text)

    def id(self) -> str:
        return "rate"

    def supported_languages(self) -> set[str]:
        return set(self._profiles)


def load_profiles(path: str | Path) -> dict[str, RatePredictorProfile]:
    """Read a profile configuration file.

    Schema: a JSON object keyed by language code, each value an object with
    ``units_per_second`` (required, > 0), ``unit_kind`` ("characters" or
    "tokens", default "characters") and ``pause_floor`` (seconds, default 0)::

        {"en": {"units_per_second": 14.0, "unit_kind": "characters",
                "pause_floor": 0.25}}
    """
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise SchemaError("profile file must be a JSON object keyed by language")
    profiles = {}
    for lang, cfg in raw.items():
        if not isinstance(cfg, dict) or "units_per_second" not in cfg:
            raise SchemaError(f"profile for {lang!r} must define units_per_second")
        try:
            profiles[lang] = RatePredictorProfile(
                language=lang,
                units_per_second=float(cfg["units_per_second"]),
                unit_kind=cfg.get("unit_kind", "characters"),
                pause_floor=float(cfg.get("pause_floor", 0.0)),
            )
        except InvalidInputError as exc:
            raise SchemaError(f"invalid profile for {lang!r}: {exc}") from exc
    return profiles
