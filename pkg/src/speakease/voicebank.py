"""Voice banking: five scripted recordings per emotion, then provider
registration of a personalized voice.

Sessions survive process restarts (they are persisted as documents) and a
failed provider registration never costs the user their recordings: the
session stays complete and finalize can simply be retried.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Dict, Optional, Tuple

from .domain import (
    EmotionVoice,
    Mood,
    UserProfile,
    VoiceSample,
    new_id,
    parse_mood,
    utc_now,
)
from .errors import (
    IncompleteSession,
    InvalidIndex,
    ProviderError,
    SampleTooShort,
    SessionNotCollecting,
    UnknownProfile,
    ValidationError,
)
from .providers.base import TTSProvider
from .storage import Store
from .wavio import read_wav

SAMPLE_COUNT = 5
MIN_SAMPLE_DURATION = 1.0  # seconds; rejects accidental taps

SESSION_STATES = ("collecting", "complete", "finalized", "failed")


@lru_cache(maxsize=1)
def banking_scripts() -> Dict[Mood, Tuple[str, ...]]:
    """The configurable five-sentence recording script for each mood."""
    text = resources.files("speakease").joinpath("assets/banking_scripts.json").read_text("utf-8")
    raw = json.loads(text)
    scripts = {}
    for name, sentences in raw.items():
        if len(sentences) != SAMPLE_COUNT:
            raise ValidationError(f"script for {name} must have {SAMPLE_COUNT} sentences")
        scripts[parse_mood(name)] = tuple(sentences)
    return scripts


@dataclass
class BankingSession:
    session_id: str
    profile_id: str
    emotion: Mood
    script: Tuple[str, ...]
    samples: Dict[int, VoiceSample] = field(default_factory=dict)
    state: str = "collecting"

    @property
    def complete(self) -> bool:
        return set(self.samples) == set(range(1, SAMPLE_COUNT + 1))

    def to_json_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "profile_id": self.profile_id,
            "emotion": self.emotion.value,
            "script": list(self.script),
            "samples": {str(i): s.to_json_dict() for i, s in sorted(self.samples.items())},
            "state": self.state,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "BankingSession":
        return cls(
            session_id=data["session_id"],
            profile_id=data["profile_id"],
            emotion=parse_mood(data["emotion"]),
            script=tuple(data["script"]),
            samples={int(i): VoiceSample.from_json_dict(s) for i, s in data.get("samples", {}).items()},
            state=data["state"],
        )


class VoicebankService:
    """Manages banking sessions and voice registration for all profiles."""

    def __init__(self, store: Store, tts: TTSProvider):
        self.store = store
        self.tts = tts

    # -- session lifecycle ---------------------------------------------------

    def start_session(self, profile_id: str, emotion: Mood) -> BankingSession:
        """Open a collecting session with the configured script; any prior
        unfinalized session for the same (profile, emotion) is superseded."""
        if not self.store.profile_exists(profile_id):
            raise UnknownProfile(profile_id)
        session = BankingSession(
            session_id=new_id(),
            profile_id=profile_id,
            emotion=emotion,
            script=banking_scripts()[emotion],
        )
        self._save(session)
        return session

    def get_session(self, profile_id: str, emotion: Mood) -> Optional[BankingSession]:
        doc = self.store.load_banking_doc(profile_id, emotion.value)
        return BankingSession.from_json_dict(doc) if doc else None

    def _find_by_id(self, session_id: str) -> Optional[BankingSession]:
        for profile_id in self.store.list_profiles():
            for mood in Mood:
                session = self.get_session(profile_id, mood)
                if session is not None and session.session_id == session_id:
                    return session
        return None

    def _resolve(self, session_ref) -> BankingSession:
        """Accept a BankingSession or a session_id; always re-read the
        persisted state so superseded sessions are caught."""
        session_id = session_ref.session_id if isinstance(session_ref, BankingSession) else session_ref
        if isinstance(session_ref, BankingSession):
            current = self.get_session(session_ref.profile_id, session_ref.emotion)
            if current is None or current.session_id != session_id:
                raise SessionNotCollecting(f"session {session_id} was superseded")
            return current
        session = self._find_by_id(session_id)
        if session is None:
            raise SessionNotCollecting(f"no active session {session_id}")
        return session

    def _save(self, session: BankingSession) -> None:
        self.store.save_banking_doc(session.profile_id, session.emotion.value, session.to_json_dict())

    # -- operations ------------------------------------------------------------

    def submit_sample(self, session_ref, index: int, audio: bytes) -> BankingSession:
        """Store one recording (content-addressed); resubmitting an index
        overwrites it; the session flips to complete at five samples."""
        session = self._resolve(session_ref)
        if session.state != "collecting":
            raise SessionNotCollecting(f"session is {session.state}")
        if not isinstance(index, int) or not 1 <= index <= SAMPLE_COUNT:
            raise InvalidIndex(f"sample index must be 1..{SAMPLE_COUNT}, got {index}")
        _, rate, frames = read_wav(audio)
        duration = frames / rate
        if duration < MIN_SAMPLE_DURATION:
            raise SampleTooShort(duration, MIN_SAMPLE_DURATION)
        blob = self.store.blobs.put(audio, media_type="audio/wav")
        session.samples[index] = VoiceSample(
            emotion=session.emotion, index=index, audio=blob, duration=duration
        )
        if session.complete:
            session.state = "complete"
        self._save(session)
        return session

    def finalize_voice(self, session_ref) -> EmotionVoice:
        """Register the five samples as a personalized voice.

        Exactly one provider call; on success the profile gets a ready voice
        and the session is finalized. On provider failure the profile records
        a failed voice, the session stays complete, and the error propagates
        so the caller can retry later without re-recording.
        """
        session = self._resolve(session_ref)
        if session.state not in ("complete",):
            if session.state == "collecting":
                raise IncompleteSession(
                    f"only {len(session.samples)}/{SAMPLE_COUNT} samples recorded"
                )
            raise SessionNotCollecting(f"session is {session.state}")
        profile = self.store.load_profile(session.profile_id)
        blobs = [
            self.store.blobs.get(session.samples[i].audio.sha256)
            for i in range(1, SAMPLE_COUNT + 1)
        ]
        try:
            voice_id = self.tts.create_voice(blobs)
        except ProviderError:
            self.store.save_profile(profile.with_voice(EmotionVoice(
                emotion=session.emotion, provider_voice_id="", status="failed",
                created_at=utc_now(),
            )))
            raise
        voice = EmotionVoice(
            emotion=session.emotion, provider_voice_id=voice_id, status="ready",
            created_at=utc_now(),
        )
        self.store.save_profile(profile.with_voice(voice))
        session.state = "finalized"
        self._save(session)
        return voice

    def list_voices(self, profile_id: str) -> Dict[Mood, EmotionVoice]:
        """Only voices that are actually usable (status ready)."""
        profile = self.store.load_profile(profile_id)
        return {mood: v for mood, v in profile.voices.items() if v.status == "ready"}
