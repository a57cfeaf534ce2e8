"""Corpus ingestion and filtering.

Imports CoVoST-2/CommonVoice-style TSV exports, applies the quality filter
(token count plus community vote thresholds), and produces the token-count
histogram used to pick the length cutoff. The canonical on-disk form is JSONL,
one segment per line.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field, replace
from typing import BinaryIO, Iterable

from .errors import (
    AlignmentError,
    DuplicateIdError,
    InvalidInputError,
    SchemaError,
    UnknownIdError,
)
from .text import count_tokens

TSV_COLUMNS = ("sentence", "translation", "up_votes", "down_votes")

CORPUS_FIELDS = ("id", "source_text", "source_language", "reference_translation",
                 "up_votes", "down_votes")


@dataclass(frozen=True)
class Segment:
    id: str
    source_text: str
    source_language: str
    reference_translation: str | None = None
    up_votes: int = 0
    down_votes: int = 0
    token_count: int = field(default=-1)

    def __post_init__(self):
        if self.token_count < 0:
            object.__setattr__(self, "token_count", count_tokens(self.source_text))
        if self.up_votes < 0 or self.down_votes < 0:
            raise InvalidInputError(f"segment {self.id!r}: vote counts must be >= 0")


@dataclass(frozen=True)
class Submission:
    system_name: str
    language_pair: tuple[str, str]
    translations: dict[str, str]

    def __post_init__(self):
        if not self.system_name:
            raise InvalidInputError("system_name must be nonempty")


@dataclass(frozen=True)
class FilterPolicy:
    min_tokens: int = 20
    min_upvotes: int = 3
    max_downvotes: int = 0

    def __post_init__(self):
        if min(self.min_tokens, self.min_upvotes, self.max_downvotes) < 0:
            raise InvalidInputError("filter thresholds must be >= 0")

    def keeps(self, segment: Segment) -> bool:
        return (segment.token_count >= self.min_tokens
                and segment.up_votes >= self.min_upvotes
                and segment.down_votes <= self.max_downvotes)


def _decode_stream(stream: BinaryIO) -> str:
    data = stream.read()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SchemaError(f"corpus is not valid UTF-8 at byte offset {exc.start}") from exc


def import_covost_tsv(stream: BinaryIO, source_language: str = "en") -> list[Segment]:
    """Parse a CommonVoice/CoVoST TSV export.

    Header must carry ``id`` or ``path`` (used as the segment id) plus
    ``sentence``, ``translation``, ``up_votes`` and ``down_votes``. Cells are
    raw (no quoting); tabs and newlines cannot appear inside them.
    """
    text = _decode_stream(stream)
    lines = text.splitlines()
    if not lines:
        raise SchemaError("empty TSV: missing header row")
    header = lines[0].split("\t")
    columns = {name: idx for idx, name in enumerate(header)}

    id_column = "id" if "id" in columns else "path"
    for required in (id_column,) + TSV_COLUMNS:
        if required not in columns:
            raise SchemaError(f"TSV header is missing column {required!r}")

    segments: list[Segment] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cells = line.split("\t")
        if len(cells) != len(header):
            raise SchemaError(
                f"row {lineno}: expected {len(header)} cells, got {len(cells)}"
            )
        row = {name: cells[idx] for name, idx in columns.items()}
        for required in (id_column, "sentence", "up_votes", "down_votes"):
            if row[required] == "":
                raise SchemaError(f"row {lineno}: empty mandatory cell {required!r}")
        seg_id = row[id_column]
        if seg_id in seen:
            raise DuplicateIdError(f"row {lineno}: duplicate segment id {seg_id!r}")
        seen.add(seg_id)
        try:
            up, down = int(row["up_votes"]), int(row["down_votes"])
        except ValueError as exc:
            raise SchemaError(f"row {lineno}: vote counts must be integers") from exc
        segments.append(Segment(
            id=seg_id,
            source_text=row["sentence"],
            source_language=source_language,
            reference_translation=row["translation"] or None,
            up_votes=up,
            down_votes=down,
        ))
    return segments


def write_corpus_jsonl(segments: Iterable[Segment]) -> str:
    """Serialize segments to the canonical JSONL form (LF line endings)."""
    out = io.StringIO()
    for seg in segments:
        out.write(json.dumps({
            "id": seg.id,
            "source_text": seg.source_text,
            "source_language": seg.source_language,
            "reference_translation": seg.reference_translation,
            "up_votes": seg.up_votes,
            "down_votes": seg.down_votes,
        }, ensure_ascii=False, sort_keys=True))
        out.write("\n")
    return out.getvalue()


def read_corpus_jsonl(stream: BinaryIO) -> list[Segment]:
    """Parse canonical JSONL back into segments."""
    segments: list[Segment] = []
    seen: set[str] = set()
    for lineno, line in enumerate(_decode_stream(stream).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"line {lineno}: invalid JSON") from exc
        missing = [f for f in CORPUS_FIELDS if f not in row]
        if missing:
            raise SchemaError(f"line {lineno}: missing fields {missing}")
        if row["id"] in seen:
            raise DuplicateIdError(f"line {lineno}: duplicate segment id {row['id']!r}")
        seen.add(row["id"])
        segments.append(Segment(
            id=row["id"],
            source_text=row["source_text"],
            source_language=row["source_language"],
            reference_translation=row["reference_translation"],
            up_votes=int(row["up_votes"]),
            down_votes=int(row["down_votes"]),
        ))
    return segments


def load_submission(stream: BinaryIO, system_name: str,
                    language_pair: tuple[str, str],
                    segments: list[Segment],
                    fmt: str = "text") -> Submission:
    """Load one system's translations.

    ``fmt="text"``: one translation per line, order-aligned with ``segments``
    (line counts must match). ``fmt="jsonl"``: {"id", "text"} records; ids must
    exist in the corpus, partial coverage is allowed.
    """
    text = _decode_stream(stream)
    if fmt == "text":
        lines = text.splitlines()
        if len(lines) != len(segments):
            raise AlignmentError(
                f"{system_name}: expected {len(segments)} lines, got {len(lines)}"
            )
        translations = {seg.id: line for seg, line in zip(segments, lines)}
    elif fmt == "jsonl":
        known = {seg.id for seg in segments}
        translations = {}
        unknown = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
                seg_id, t = row["id"], row["text"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise SchemaError(f"{system_name} line {lineno}: expected "
                                  '{"id", "text"} records') from exc
            if seg_id not in known:
                unknown.append(seg_id)
            else:
                translations[seg_id] = t
        if unknown:
            raise UnknownIdError(f"{system_name}: unknown segment ids {unknown}")
    else:
        raise InvalidInputError(f"unknown submission format {fmt!r}")
    return Submission(system_name=system_name, language_pair=language_pair,
                      translations=translations)


def apply_filter(segments: list[Segment], policy: FilterPolicy) -> list[Segment]:
    """Keep segments meeting the token and vote thresholds, in stable order."""
    return [seg for seg in segments if policy.keeps(seg)]


def token_histogram(segments: list[Segment], bin_width: int = 1) -> list[tuple[int, int]]:
    """Histogram of segment count by token count. Bins cover 0 up to the
    maximum observed count; zero-count bins are included."""
    if bin_width < 1:
        raise InvalidInputError("bin_width must be >= 1")
    if not segments:
        return []
    max_count = max(seg.token_count for seg in segments)
    bins = [(start, 0) for start in range(0, max_count + 1, bin_width)]
    counts = [0] * len(bins)
    for seg in segments:
        counts[seg.token_count // bin_width] += 1
    return [(start, counts[i]) for i, (start, _) in enumerate(bins)]


def retokenize(segment: Segment) -> Segment:
    """Recompute token_count from source_text (invariant repair helper)."""
    return replace(segment, token_count=count_tokens(segment.source_text))
