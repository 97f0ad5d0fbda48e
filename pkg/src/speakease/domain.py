"""Core domain types shared by every other module.

All types are immutable values validated at construction, so an instance in
hand always satisfies its invariants. Each type has a canonical JSON form
(lowercase snake_case keys) produced by ``to_json_dict`` and consumed by
``from_json_dict``; those forms are what the API, the document store, and the
audit ledger persist, and they are pinned by the schema documents under
docs/schemas/.
"""

from __future__ import annotations

import enum
import json
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

from .errors import CardinalityError, ValidationError


class Mood(enum.Enum):
    """The six selectable emotional tones."""

    HAPPY = "happy"
    SCARED = "scared"
    SAD = "sad"
    ANGRY = "angry"
    NEUTRAL = "neutral"
    DISGUST = "disgust"

    def __str__(self) -> str:
        return self.value

    @property
    def index(self) -> int:
        """Stable position in the canonical mood order (happy=0 .. disgust=5)."""
        return MOOD_ORDER.index(self)


#: canonical ordering used for mood indices (mock tone frequencies, UI order)
MOOD_ORDER = (Mood.HAPPY, Mood.SCARED, Mood.SAD, Mood.ANGRY, Mood.NEUTRAL, Mood.DISGUST)


def parse_mood(value: str) -> Mood:
    """Parse a mood name; only the six canonical lowercase names are accepted
    (case-insensitively), anything else is a ValidationError."""
    if not isinstance(value, str):
        raise ValidationError(f"mood must be a string, got {type(value).__name__}")
    try:
        return Mood(value.strip().lower())
    except ValueError:
        raise ValidationError(f"unknown mood: {value!r}") from None


MAX_RECEIVER_LENGTH = 64


@dataclass(frozen=True)
class Receiver:
    """Who the message is intended for ("mom", "friend", "doctor", ...)."""

    label: str

    def __post_init__(self) -> None:
        if not isinstance(self.label, str):
            raise ValidationError("receiver label must be a string")
        if self.label != self.label.strip():
            raise ValidationError("receiver label must be whitespace-trimmed")
        if not self.label:
            raise ValidationError("receiver label must be non-empty")
        if len(self.label) > MAX_RECEIVER_LENGTH:
            raise ValidationError(
                f"receiver label exceeds {MAX_RECEIVER_LENGTH} characters"
            )
        if "\n" in self.label or "\r" in self.label:
            raise ValidationError("receiver label must not contain line breaks")


def parse_receiver(value: str) -> Receiver:
    """Trim and validate a receiver label."""
    if not isinstance(value, str):
        raise ValidationError("receiver must be a string")
    return Receiver(value.strip())


@dataclass(frozen=True)
class ContextSetting:
    """Current conversation context: optional receiver plus a mood."""

    receiver: Optional[Receiver] = None
    mood: Mood = Mood.NEUTRAL

    def to_json_dict(self) -> dict:
        return {
            "receiver": self.receiver.label if self.receiver else None,
            "mood": self.mood.value,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "ContextSetting":
        receiver = data.get("receiver")
        return cls(
            receiver=parse_receiver(receiver) if receiver is not None else None,
            mood=parse_mood(data.get("mood", "neutral")),
        )


@dataclass(frozen=True)
class BlobRef:
    """Content address of stored bytes."""

    sha256: str
    length: int
    media_type: str

    def __post_init__(self) -> None:
        if len(self.sha256) != 64 or any(c not in "0123456789abcdef" for c in self.sha256):
            raise ValidationError("sha256 must be a 64-char lowercase hex digest")
        if self.length < 0:
            raise ValidationError("blob length must be non-negative")

    def to_json_dict(self) -> dict:
        return {"sha256": self.sha256, "length": self.length, "media_type": self.media_type}

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "BlobRef":
        return cls(sha256=data["sha256"], length=int(data["length"]), media_type=data["media_type"])


INPUT_KINDS = ("text", "emoji", "voice")


@dataclass(frozen=True)
class InputEvent:
    """One user input: exactly one of a text string, an emoji string, or a
    voice clip is populated, according to ``kind``."""

    event_id: str
    created_at: datetime
    kind: str
    raw: Optional[str] = None
    audio: Optional[BlobRef] = None
    sample_rate: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in INPUT_KINDS:
            raise ValidationError(f"unknown input kind: {self.kind!r}")
        if self.kind in ("text", "emoji"):
            if self.raw is None or self.audio is not None or self.sample_rate is not None:
                raise ValidationError(f"{self.kind} input must populate raw text only")
        else:
            if self.audio is None or self.sample_rate is None or self.raw is not None:
                raise ValidationError("voice input must populate audio and sample_rate only")
            if self.sample_rate <= 0:
                raise ValidationError("sample_rate must be positive")

    @classmethod
    def text(cls, raw: str, event_id: Optional[str] = None) -> "InputEvent":
        return cls(event_id or new_id(), utc_now(), "text", raw=raw)

    @classmethod
    def emoji(cls, raw: str, event_id: Optional[str] = None) -> "InputEvent":
        return cls(event_id or new_id(), utc_now(), "emoji", raw=raw)

    @classmethod
    def voice(cls, audio: BlobRef, sample_rate: int, event_id: Optional[str] = None) -> "InputEvent":
        return cls(event_id or new_id(), utc_now(), "voice", audio=audio, sample_rate=sample_rate)

    def to_json_dict(self) -> dict:
        out: dict = {
            "event_id": self.event_id,
            "created_at": format_timestamp(self.created_at),
            "kind": self.kind,
        }
        if self.kind in ("text", "emoji"):
            out["raw"] = self.raw
        else:
            out["audio"] = self.audio.to_json_dict()
            out["sample_rate"] = self.sample_rate
        return out

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "InputEvent":
        kind = data["kind"]
        if kind == "voice":
            return cls(
                event_id=data["event_id"],
                created_at=parse_timestamp(data["created_at"]),
                kind=kind,
                audio=BlobRef.from_json_dict(data["audio"]),
                sample_rate=int(data["sample_rate"]),
            )
        return cls(
            event_id=data["event_id"],
            created_at=parse_timestamp(data["created_at"]),
            kind=kind,
            raw=data["raw"],
        )


@dataclass(frozen=True)
class TranscriptSegment:
    start: float
    end: float
    text: str
    speaker: str

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise ValidationError("segment must satisfy 0 <= start <= end")

    def to_json_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "text": self.text, "speaker": self.speaker}

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "TranscriptSegment":
        return cls(float(data["start"]), float(data["end"]), data["text"], data["speaker"])


@dataclass(frozen=True)
class Transcript:
    """ASR result: full text plus time-aligned, speaker-labeled segments."""

    text: str
    segments: tuple = ()

    def __post_init__(self) -> None:
        segments = tuple(self.segments)
        object.__setattr__(self, "segments", segments)
        for earlier, later in zip(segments, segments[1:]):
            if later.start < earlier.end:
                raise ValidationError("segments must be sorted and non-overlapping")
        joined = " ".join(seg.text for seg in segments)
        if joined != self.text:
            raise ValidationError("transcript text must equal space-joined segment texts")

    def to_json_dict(self) -> dict:
        return {"text": self.text, "segments": [s.to_json_dict() for s in self.segments]}

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "Transcript":
        return cls(
            text=data["text"],
            segments=tuple(TranscriptSegment.from_json_dict(s) for s in data.get("segments", [])),
        )


INTERPRETATION_COUNT = 4


@dataclass(frozen=True)
class InterpretationSet:
    """Exactly four ordered candidate utterances."""

    items: tuple
    source_event: str = ""
    request_id: str = ""

    def __post_init__(self) -> None:
        items = tuple(self.items)
        object.__setattr__(self, "items", items)
        if len(items) != INTERPRETATION_COUNT:
            raise CardinalityError(len(items))
        for item in items:
            if not isinstance(item, str):
                raise TypeError(f"interpretation items must be strings, got {type(item).__name__}")
        if not self.request_id:
            object.__setattr__(self, "request_id", new_id())

    def to_json_dict(self) -> dict:
        return {
            "items": list(self.items),
            "source_event": self.source_event,
            "request_id": self.request_id,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "InterpretationSet":
        return cls(
            items=tuple(data["items"]),
            source_event=data.get("source_event", ""),
            request_id=data.get("request_id", ""),
        )


def validate_interpretation_set(
    items: Sequence[str], source_event: str = "", request_id: str = ""
) -> InterpretationSet:
    """Build an InterpretationSet iff ``items`` is exactly four strings.

    Raises CardinalityError for any other length and TypeError for
    non-string entries; order is preserved.
    """
    if not isinstance(items, (list, tuple)):
        raise TypeError("interpretations must be a list")
    return InterpretationSet(tuple(items), source_event=source_event, request_id=request_id)


PROSODY_FACTOR_RANGE = (0.5, 2.0)


@dataclass(frozen=True)
class ProsodyHints:
    """Relative pitch/rate/volume factors applied at synthesis (1.0 = neutral)."""

    pitch_shift: float = 1.0
    rate: float = 1.0
    volume: float = 1.0

    def __post_init__(self) -> None:
        low, high = PROSODY_FACTOR_RANGE
        for name in ("pitch_shift", "rate", "volume"):
            value = getattr(self, name)
            if not low <= value <= high:
                raise ValidationError(f"{name} must be within [{low}, {high}], got {value}")

    def to_json_dict(self) -> dict:
        return {"pitch_shift": self.pitch_shift, "rate": self.rate, "volume": self.volume}

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "ProsodyHints":
        return cls(
            pitch_shift=float(data["pitch_shift"]),
            rate=float(data["rate"]),
            volume=float(data["volume"]),
        )


#: marker used when synthesis fell through to the provider's default voice
FALLBACK_VOICE = "fallback"

VOICE_STATUSES = ("pending", "ready", "failed")


@dataclass(frozen=True)
class EmotionVoice:
    """A provider-registered personalized voice for one mood."""

    emotion: Mood
    provider_voice_id: str
    status: str
    created_at: datetime

    def __post_init__(self) -> None:
        if self.status not in VOICE_STATUSES:
            raise ValidationError(f"unknown voice status: {self.status!r}")
        if self.status == "ready" and not self.provider_voice_id:
            raise ValidationError("ready voice must carry a provider_voice_id")

    def to_json_dict(self) -> dict:
        return {
            "emotion": self.emotion.value,
            "provider_voice_id": self.provider_voice_id,
            "status": self.status,
            "created_at": format_timestamp(self.created_at),
        }

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "EmotionVoice":
        return cls(
            emotion=parse_mood(data["emotion"]),
            provider_voice_id=data["provider_voice_id"],
            status=data["status"],
            created_at=parse_timestamp(data["created_at"]),
        )


VOICE_SAMPLE_INDICES = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class VoiceSample:
    """One of the five recorded sentences for an emotion's voice bank."""

    emotion: Mood
    index: int
    audio: BlobRef
    duration: float

    def __post_init__(self) -> None:
        if self.index not in VOICE_SAMPLE_INDICES:
            raise ValidationError(f"sample index must be 1..5, got {self.index}")
        if self.duration < 0:
            raise ValidationError("sample duration must be non-negative")

    def to_json_dict(self) -> dict:
        return {
            "emotion": self.emotion.value,
            "index": self.index,
            "audio": self.audio.to_json_dict(),
            "duration": self.duration,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "VoiceSample":
        return cls(
            emotion=parse_mood(data["emotion"]),
            index=int(data["index"]),
            audio=BlobRef.from_json_dict(data["audio"]),
            duration=float(data["duration"]),
        )


@dataclass(frozen=True)
class UserProfile:
    profile_id: str
    display_name: str
    voices: Mapping[Mood, EmotionVoice] = field(default_factory=dict)
    default_context: ContextSetting = field(default_factory=ContextSetting)

    def __post_init__(self) -> None:
        object.__setattr__(self, "voices", dict(self.voices))
        for mood, voice in self.voices.items():
            if voice.emotion is not mood:
                raise ValidationError("voice map key must match the voice's emotion")

    def with_voice(self, voice: EmotionVoice) -> "UserProfile":
        voices = dict(self.voices)
        voices[voice.emotion] = voice
        return UserProfile(self.profile_id, self.display_name, voices, self.default_context)

    def to_json_dict(self) -> dict:
        return {
            "profile_id": self.profile_id,
            "display_name": self.display_name,
            "voices": {mood.value: v.to_json_dict() for mood, v in sorted(self.voices.items(), key=lambda kv: kv[0].value)},
            "default_context": self.default_context.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "UserProfile":
        return cls(
            profile_id=data["profile_id"],
            display_name=data["display_name"],
            voices={parse_mood(k): EmotionVoice.from_json_dict(v) for k, v in data.get("voices", {}).items()},
            default_context=ContextSetting.from_json_dict(data.get("default_context", {})),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UserProfile):
            return NotImplemented
        return self.to_json_dict() == other.to_json_dict()

    def __hash__(self) -> int:
        return hash(self.profile_id)


@dataclass(frozen=True)
class ConversationTurn:
    """The persisted record of one completed input -> speak round trip."""

    turn_id: str
    timestamp: datetime
    context: ContextSetting
    input: InputEvent
    interpretations: InterpretationSet
    selected_index: int
    spoken_text: str
    voice_used: Union[EmotionVoice, str]

    def __post_init__(self) -> None:
        if not 0 <= self.selected_index < INTERPRETATION_COUNT:
            raise ValidationError(f"selected_index must be 0..3, got {self.selected_index}")
        if self.spoken_text != self.interpretations.items[self.selected_index]:
            raise ValidationError("spoken_text must equal the selected interpretation")
        if isinstance(self.voice_used, str) and self.voice_used != FALLBACK_VOICE:
            raise ValidationError(f"voice_used string form must be {FALLBACK_VOICE!r}")

    def to_json_dict(self) -> dict:
        voice = (
            self.voice_used
            if isinstance(self.voice_used, str)
            else self.voice_used.to_json_dict()
        )
        return {
            "turn_id": self.turn_id,
            "timestamp": format_timestamp(self.timestamp),
            "context": self.context.to_json_dict(),
            "input": self.input.to_json_dict(),
            "interpretations": self.interpretations.to_json_dict(),
            "selected_index": self.selected_index,
            "spoken_text": self.spoken_text,
            "voice_used": voice,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "ConversationTurn":
        voice = data["voice_used"]
        return cls(
            turn_id=data["turn_id"],
            timestamp=parse_timestamp(data["timestamp"]),
            context=ContextSetting.from_json_dict(data["context"]),
            input=InputEvent.from_json_dict(data["input"]),
            interpretations=InterpretationSet.from_json_dict(data["interpretations"]),
            selected_index=int(data["selected_index"]),
            spoken_text=data["spoken_text"],
            voice_used=voice if isinstance(voice, str) else EmotionVoice.from_json_dict(voice),
        )


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def new_id() -> str:
    return uuid.uuid4().hex


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).isoformat()


def parse_timestamp(value: str) -> datetime:
    return datetime.fromisoformat(value)


def canonical_json(data: Any) -> str:
    """The one JSON text form used for hashing and on-disk records:
    sorted keys, no whitespace, ASCII-escaped."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
