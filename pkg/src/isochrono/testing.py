"""Mock scorer bridge worker, runnable as ``python -m isochrono.testing``.

Serves the JSON-lines bridge protocol with deterministic stand-in models:
duration from fixed per-language speaking rates, QE from character trigram
overlap scaled to the 0-5 range. Used by the test suite and as the reference
implementation of the wire protocol.
"""

from __future__ import annotations

import json
import sys

from .text import count_characters

LANGUAGES = ("en", "de", "es", "ru", "zh")

# chars/s stand-ins; zh is slower per character because each carries a syllable
_CHARS_PER_SECOND = {"en": 14.0, "de": 13.0, "es": 14.5, "ru": 12.5, "zh": 5.5}
_PAUSE_FLOOR = 0.25


def mock_duration(text: str, language: str) -> float:
    return _PAUSE_FLOOR + count_characters(text) / _CHARS_PER_SECOND[language]


def _trigrams(text: str) -> set[str]:
    normalized = "".join(ch.lower() for ch in text if ch.isalnum() or ch.isspace())
    padded = f"  {' '.join(normalized.split())}  "
    return {padded[i:i + 3] for i in range(len(padded) - 2)}


def mock_qe(source_text: str, translated_text: str) -> float:
    """Trigram Dice similarity mapped onto a 0-5 scale. Identity pairs score
    5; unrelated pairs approach 0. A stand-in, not a quality model."""
    a, b = _trigrams(source_text), _trigrams(translated_text)
    if not a or not b:
        return 0.0
    dice = 2 * len(a & b) / (len(a) + len(b))
    return 5.0 * dice


def handle_request(msg: dict) -> dict:
    def error(code: str, message: str) -> dict:
        return {"id": msg.get("id"), "ok": False,
                "error": {"code": code, "message": message}}

    if not isinstance(msg.get("id"), int) or "op" not in msg:
        return error("BAD_REQUEST", "request must carry an integer id and an op")
    op = msg["op"]
    payload = msg.get("payload") or {}

    if op == "capabilities":
        return {"id": msg["id"], "ok": True,
                "result": {"languages": list(LANGUAGES), "qe": True}}
    if op == "duration":
        text, language = payload.get("text"), payload.get("language")
        if not isinstance(text, str) or not isinstance(language, str):
            return error("BAD_REQUEST", "duration payload needs text and language")
        if not text.strip():
            return error("EMPTY_TEXT", "cannot predict duration for empty text")
        if language not in LANGUAGES:
            return error("UNSUPPORTED_LANGUAGE", f"no model for {language!r}")
        return {"id": msg["id"], "ok": True,
                "result": {"seconds": mock_duration(text, language)}}
    if op == "qe":
        required = ("source_text", "translated_text", "source_language",
                    "target_language")
        if not all(isinstance(payload.get(k), str) for k in required):
            return error("BAD_REQUEST", f"qe payload needs {required}")
        if not payload["source_text"].strip() or not payload["translated_text"].strip():
            return error("EMPTY_TEXT", "cannot score empty text")
        for key in ("source_language", "target_language"):
            if payload[key] not in LANGUAGES:
                return error("UNSUPPORTED_LANGUAGE", f"no model for {payload[key]!r}")
        return {"id": msg["id"], "ok": True,
                "result": {"score": mock_qe(payload["source_text"],
                                            payload["translated_text"])}}
    return error("BAD_REQUEST", f"unknown op {op!r}")


def serve(stdin=None, stdout=None) -> None:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            msg = json.loads(line)
            if not isinstance(msg, dict):
                raise ValueError("not an object")
        except (json.JSONDecodeError, ValueError):
            response = {"id": None, "ok": False,
                        "error": {"code": "BAD_REQUEST", "message": "invalid JSON line"}}
        else:
            response = handle_request(msg)
        stdout.write(json.dumps(response, ensure_ascii=False) + "\n")
        stdout.flush()


if __name__ == "__main__":
    serve()
