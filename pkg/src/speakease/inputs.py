"""Input normalization: text, emoji sequences, and voice audio become one
textual payload for the interpretation engine.

Normalization never rewrites user wording: apart from a leading/trailing
whitespace trim, the payload preserves the input byte-for-byte (repairing
unclear wording is the language model's job, not ours).
"""

from __future__ import annotations

import string
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .domain import Transcript
from .errors import EmptyAudio, EmptyInputError, EncodingError, ValidationError
from .graphemes import Token, tokenize
from .providers.base import ASRProvider

#: diarization label assumed to be the AAC user unless the session says otherwise
DEFAULT_USER_SPEAKER = "S0"


@dataclass(frozen=True)
class NormalizedInput:
    """Payload ready for interpretation, tagged with how it arrived."""

    payload_text: str
    kind: str  # "text" | "emoji" | "voice"
    emoji_tokens: Optional[Tuple[str, ...]] = None
    transcript: Optional[Transcript] = None

    def __post_init__(self) -> None:
        if self.kind not in ("text", "emoji", "voice"):
            raise ValidationError(f"unknown normalized kind: {self.kind!r}")
        if self.kind == "emoji" and not self.emoji_tokens:
            raise ValidationError("emoji input must carry its emoji tokens")
        if self.kind == "voice" and self.transcript is None:
            raise ValidationError("voice input must carry its transcript")


def _require_valid_text(raw: str) -> None:
    if not isinstance(raw, str):
        raise EncodingError(f"expected text, got {type(raw).__name__}")
    try:
        raw.encode("utf-8")
    except UnicodeEncodeError as exc:
        raise EncodingError(f"invalid text: {exc}") from exc


def ingest_text(raw: str) -> NormalizedInput:
    """Trim and classify typed input. Inner whitespace, casing, punctuation,
    and profanity pass through untouched; inputs containing at least one
    emoji cluster are classified as emoji input."""
    _require_valid_text(raw)
    payload = raw.strip()
    emoji_tokens = tuple(t.text for t in tokenize(payload) if t.is_emoji)
    if emoji_tokens:
        return NormalizedInput(payload_text=payload, kind="emoji", emoji_tokens=emoji_tokens)
    return NormalizedInput(payload_text=payload, kind="text")


def tokenize_emoji(raw: str) -> List[Token]:
    """Split into emoji tokens and text runs; concatenating the token texts
    in order reproduces the input exactly."""
    if not raw:
        raise EmptyInputError("emoji input must be non-empty")
    _require_valid_text(raw)
    return tokenize(raw)


def transcribe(audio: bytes, asr: ASRProvider) -> Transcript:
    """Run ASR over an audio clip. The provider owns format handling; we only
    guard the trivially-broken cases before spending a call."""
    if not audio:
        raise EmptyAudio("audio clip is empty")
    return asr.transcribe(audio)


def normalize_voice(transcript: Transcript, user_speaker: str = DEFAULT_USER_SPEAKER) -> NormalizedInput:
    """Reduce a transcript to the user's own words.

    Only segments spoken by ``user_speaker`` feed payload_text; other
    speakers stay available on the attached transcript. Transcripts without
    segments fall back to the full text."""
    if transcript.segments:
        payload = " ".join(s.text for s in transcript.segments if s.speaker == user_speaker)
    else:
        payload = transcript.text
    return NormalizedInput(payload_text=payload.strip(), kind="voice", transcript=transcript)


_WORD_TRIM = string.punctuation.replace("'", "")


def _words(text: str) -> List[str]:
    out = []
    for token in text.lower().split():
        word = token.strip(_WORD_TRIM)
        if word:
            out.append(word)
    return out


def suggest_next_words(prefix: str, corpus: Sequence[str], limit: int = 3) -> List[str]:
    """Up to ``limit`` next-word candidates ranked by bigram frequency of
    (last prefix word -> candidate) over prior spoken texts; ties break
    lexicographically. Empty prefix or unseen bigrams yield an empty list."""
    prefix_words = _words(prefix)
    if not prefix_words:
        return []
    last = prefix_words[-1]
    counts: Counter = Counter()
    for text in corpus:
        words = _words(text)
        for first, second in zip(words, words[1:]):
            if first == last:
                counts[second] += 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [word for word, _ in ranked[:limit]]
