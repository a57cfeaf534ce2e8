"""Tokenization and character counting shared by corpus filtering and duration models.

Token rule: whitespace-separated tokens for space-delimited scripts; each CJK
character counts as its own token, because Chinese text carries no spaces.
"""

from __future__ import annotations

# Unified ideographs, extension A, and CJK-adjacent syllabaries.
_CJK_RANGES = (
    (0x3040, 0x30FF),   # hiragana + katakana
    (0x3400, 0x4DBF),
    (0x4E00, 0x9FFF),
    (0xF900, 0xFAFF),
    (0x20000, 0x2A6DF),
)


def is_cjk(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _CJK_RANGES)


def count_tokens(text: str) -> int:
    """Count tokens: one per whitespace-delimited chunk, except CJK characters
    inside a chunk each count individually."""
    total = 0
    for chunk in text.split():
        cjk = sum(1 for ch in chunk if is_cjk(ch))
        non_cjk = len(chunk) - cjk
        total += cjk + (1 if non_cjk > 0 else 0)
    return total


def count_characters(text: str) -> int:
    """Count non-whitespace characters."""
    return sum(1 for ch in text if not ch.isspace())
