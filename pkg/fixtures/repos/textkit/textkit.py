"""Core text helpers shared by the textkit command-line tools."""

import re

_WORD = re.compile(r"[A-Za-z0-9']+")


def words(text):
    """Split text into word tokens, keeping digits and apostrophes."""
    return _WORD.findall(text)


def to_upper(text):
    return text.upper()
