"""Speech synthesis: mood-matched voice resolution, prosody, and caching.

The synthesized artifact is always stored as canonical WAV (PCM 16-bit mono)
regardless of what the provider returned, and is content-addressed so
repeated identical requests can be served from cache without another
provider call.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Dict, Optional, Union

from .domain import (
    BlobRef,
    EmotionVoice,
    FALLBACK_VOICE,
    Mood,
    ProsodyHints,
    canonical_json,
    parse_mood,
)
from .errors import EmptyTextError, ValidationError
from .providers.base import TTSProvider
from .storage import Store, sha256_text
from .wavio import read_wav, rewrap_wav

#: voice id handed to the provider when no banked voice applies
PROVIDER_DEFAULT_VOICE_ID = "default"


@lru_cache(maxsize=1)
def load_prosody_table() -> Dict[Mood, ProsodyHints]:
    """The shipped mood -> prosody table (assets/prosody.json, editable)."""
    text = resources.files("speakease").joinpath("assets/prosody.json").read_text("utf-8")
    raw = json.loads(text)
    table = {}
    for name, row in raw.items():
        table[parse_mood(name)] = ProsodyHints.from_json_dict(row)
    missing = [m.value for m in Mood if m not in table]
    if missing:
        raise ValidationError(f"prosody table missing moods: {missing}")
    return table


def prosody_for(mood: Mood) -> ProsodyHints:
    """Deterministic table lookup; neutral is the identity row."""
    return load_prosody_table()[mood]


@dataclass(frozen=True)
class AudioFormat:
    sample_rate: int
    bit_depth: int = 16
    channels: int = 1

    def to_json_dict(self) -> dict:
        return {
            "sample_rate": self.sample_rate,
            "bit_depth": self.bit_depth,
            "channels": self.channels,
        }


@dataclass(frozen=True)
class AudioArtifact:
    """A stored synthesis result plus the request fields it answers.

    ``fingerprint`` is a pure function of (text, mood, voice id), so identical
    requests share one artifact identity.
    """

    audio: BlobRef
    format: AudioFormat
    duration: float
    voice_used: Union[EmotionVoice, str]
    text: str
    mood: Mood
    fingerprint: str

    def to_json_dict(self) -> dict:
        voice = (
            self.voice_used
            if isinstance(self.voice_used, str)
            else self.voice_used.to_json_dict()
        )
        return {
            "audio": self.audio.to_json_dict(),
            "format": self.format.to_json_dict(),
            "duration": self.duration,
            "voice_used": voice,
            "text": self.text,
            "mood": self.mood.value,
            "fingerprint": self.fingerprint,
        }


def voice_id_of(voice: Union[EmotionVoice, str]) -> str:
    return voice.provider_voice_id if isinstance(voice, EmotionVoice) else FALLBACK_VOICE


def request_fingerprint(text: str, mood: Mood, voice: Union[EmotionVoice, str]) -> str:
    """Stable identity of a synthesis request."""
    return sha256_text(
        canonical_json({"text": text, "mood": mood.value, "voice_id": voice_id_of(voice)})
    )


def resolve_voice(profile, mood: Mood) -> Union[EmotionVoice, str]:
    """The ready voice for the mood, else the ready neutral voice, else the
    provider-default marker — always in that order, never an error."""
    voices = profile.voices
    candidate = voices.get(mood)
    if candidate is not None and candidate.status == "ready":
        return candidate
    neutral = voices.get(Mood.NEUTRAL)
    if neutral is not None and neutral.status == "ready":
        return neutral
    return FALLBACK_VOICE


class SpeechService:
    """Synthesizes selected text with the mood-matched personalized voice."""

    def __init__(self, store: Store, tts: TTSProvider, cache_enabled: bool = True):
        self.store = store
        self.tts = tts
        self.cache_enabled = cache_enabled
        self._cache: Dict[tuple, AudioArtifact] = {}
        self._cache_lock = threading.Lock()

    def synthesize(self, text: str, mood: Mood, profile_id: str) -> AudioArtifact:
        """One provider call per distinct (text, mood, resolved voice); cached
        results are returned verbatim for repeats."""
        if not text:
            raise EmptyTextError("cannot synthesize empty text")
        profile = self.store.load_profile(profile_id)
        voice = resolve_voice(profile, mood)
        fingerprint = request_fingerprint(text, mood, voice)
        cache_key = (profile_id, fingerprint)
        if self.cache_enabled:
            with self._cache_lock:
                hit = self._cache.get(cache_key)
            if hit is not None:
                return hit

        provider_voice_id = (
            voice.provider_voice_id if isinstance(voice, EmotionVoice) else PROVIDER_DEFAULT_VOICE_ID
        )
        raw = self.tts.synthesize(text, provider_voice_id, prosody_for(mood))
        wav = rewrap_wav(raw)
        _, rate, frames = read_wav(wav)
        blob = self.store.blobs.put(wav, media_type="audio/wav")
        artifact = AudioArtifact(
            audio=blob,
            format=AudioFormat(sample_rate=rate),
            duration=frames / rate,
            voice_used=voice,
            text=text,
            mood=mood,
            fingerprint=fingerprint,
        )
        if self.cache_enabled:
            with self._cache_lock:
                self._cache[cache_key] = artifact
        return artifact
