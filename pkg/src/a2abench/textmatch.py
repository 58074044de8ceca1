"""Deterministic text matching used by the offline judge and the skill matcher.

A tiny tokenizer (lowercase, alphanumeric split, stopword removal, light
suffix stemming) plus two normalized overlap scores. This is a testing
surrogate for semantic matching, tuned for reproducibility, not recall.
"""

from __future__ import annotations

import re

_WORD_RE = re.compile(r"[a-z0-9]+")

STOPWORDS = frozenset(
    {
        "a", "an", "and", "are", "as", "at", "be", "by", "each", "for",
        "from", "given", "in", "into", "is", "it", "of", "on", "or",
        "per", "please", "provided", "that", "the", "this", "to", "with",
        "using", "your",
    }
)

# Applied repeatedly (longest suffix first) until no rule fires, so that
# inflected forms of the same word collapse to one stem.
_SUFFIXES = ("ation", "ate", "ing", "ed", "s")
_MIN_STEM = 3


def stem(word: str) -> str:
    """Strip common suffixes; purely heuristic, stable across calls."""
    while True:
        for suffix in _SUFFIXES:
            if word.endswith(suffix) and len(word) - len(suffix) >= _MIN_STEM:
                if suffix == "s" and word.endswith(("ss", "us", "is")):
                    continue
                word = word[: -len(suffix)]
                break
        else:
            return word


def tokens(text: str) -> frozenset[str]:
    """Normalized token set of a text fragment."""
    raw = _WORD_RE.findall(text.lower())
    return frozenset(stem(w) for w in raw if w not in STOPWORDS)


def coverage(test: frozenset[str], target: frozenset[str]) -> float:
    """Fraction of `test` tokens present in `target`; 0.0 for empty test."""
    if not test:
        return 0.0
    return len(test & target) / len(test)


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    """|A ∩ B| / |A ∪ B|, with 0.0 for two empty sets."""
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


def skill_text(name: str, description: str, tags: list[str] | tuple[str, ...]) -> str:
    """Single text blob a skill exposes to matching (name + description + tags)."""
    return " ".join([name, description, *tags])
