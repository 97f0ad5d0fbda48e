"""Grapheme-cluster segmentation and emoji classification.

Segmentation follows Unicode extended grapheme cluster rules (via the
``regex`` module's ``\\X``), so one user-perceived emoji — including ZWJ
sequences, skin-tone modifiers, flags, and keycaps — is always one token.
Splitting never loses text: concatenating the clusters of any string
reproduces the string exactly.
"""

from __future__ import annotations

import unicodedata
from functools import lru_cache
from importlib import resources
from typing import Iterable, List, Optional

import regex

_GRAPHEME = regex.compile(r"\X")
_PICTOGRAPHIC = regex.compile(r"\p{Extended_Pictographic}")

_KEYCAP = "⃣"  # COMBINING ENCLOSING KEYCAP
_RI_FIRST, _RI_LAST = 0x1F1E6, 0x1F1FF  # regional indicators (flag pairs)
_VARIATION_SELECTORS = {"︎", "️"}
_TAG_FIRST, _TAG_LAST = 0xE0020, 0xE007F  # tag characters (subdivision flags)


def split_graphemes(text: str) -> List[str]:
    """Split into extended grapheme clusters; concatenation round-trips."""
    if not text:
        return []
    return _GRAPHEME.findall(text)


def is_emoji_cluster(cluster: str) -> bool:
    """True if a single grapheme cluster renders as an emoji.

    Pictographic base characters, regional-indicator flags, and keycap
    sequences count; bare digits/#/* (which carry the Emoji property but
    display as text) do not.
    """
    if not cluster:
        return False
    if _PICTOGRAPHIC.search(cluster):
        return True
    if _RI_FIRST <= ord(cluster[0]) <= _RI_LAST:
        return True
    if _KEYCAP in cluster:
        return True
    return False


@lru_cache(maxsize=1)
def emoji_name_table() -> dict:
    """The pinned emoji -> short-name table shipped with the package."""
    table = {}
    text = resources.files("speakease").joinpath("assets/emoji_names.tsv").read_text("utf-8")
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        emoji, _, name = line.partition("\t")
        if emoji and name:
            table[emoji] = name.strip()
    return table


def emoji_short_name(cluster: str) -> str:
    """Short name for one emoji cluster.

    Table lookup first (tried with and without variation selectors); unknown
    clusters fall back to a name derived from the Unicode character name of
    the first non-selector code point, and finally to "emoji".
    """
    table = emoji_name_table()
    if cluster in table:
        return table[cluster]
    stripped = "".join(c for c in cluster if c not in _VARIATION_SELECTORS)
    if stripped in table:
        return table[stripped]
    for char in stripped or cluster:
        if char in _VARIATION_SELECTORS or char == "‍":
            continue
        try:
            name = unicodedata.name(char)
        except ValueError:
            continue
        return name.lower().replace(" ", "_").replace("-", "_")
    return "emoji"


class Token:
    """One tokenizer output: an emoji grapheme cluster or a run of text."""

    __slots__ = ("kind", "text")

    def __init__(self, kind: str, text: str):
        self.kind = kind  # "emoji" | "text"
        self.text = text

    @property
    def is_emoji(self) -> bool:
        return self.kind == "emoji"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Token) and (self.kind, self.text) == (other.kind, other.text)

    def __hash__(self) -> int:
        return hash((self.kind, self.text))

    def __repr__(self) -> str:
        return f"Token({self.kind!r}, {self.text!r})"


def tokenize(text: str) -> List[Token]:
    """Split into emoji tokens (one cluster each) and text runs (consecutive
    non-emoji clusters merged). Concatenating token texts reproduces the
    input exactly."""
    tokens: List[Token] = []
    run: List[str] = []
    for cluster in split_graphemes(text):
        if is_emoji_cluster(cluster):
            if run:
                tokens.append(Token("text", "".join(run)))
                run = []
            tokens.append(Token("emoji", cluster))
        else:
            run.append(cluster)
    if run:
        tokens.append(Token("text", "".join(run)))
    return tokens
