"""Provider interfaces, configuration, and call observability.

ASR, LLM, and TTS backends all implement these small ABCs. Deterministic
mocks live in ``speakease.providers.mocks``; thin HTTP adapters for real
services in ``speakease.providers.http``. Retry policy belongs to callers
(the interpretation engine and the voicebank), not to providers.
"""

from __future__ import annotations

import hashlib
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from ..domain import ProsodyHints, Transcript, format_timestamp, utc_now
from ..errors import ValidationError

DEFAULT_TIMEOUT_MS = 30_000


@dataclass(frozen=True)
class ProviderConfig:
    """Connection settings for one provider.

    ``credential_env`` names the environment variable holding the secret;
    the secret itself is never stored, logged, or serialized.
    """

    endpoint: str = ""
    credential_env: str = ""
    timeout_ms: int = DEFAULT_TIMEOUT_MS
    max_retries: int = 0

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ValidationError("provider timeout must be positive")
        if self.max_retries < 0:
            raise ValidationError("max_retries must be non-negative")


@dataclass(frozen=True)
class CallRecord:
    """One observed provider call: redacted request summary plus outcome.

    Summaries never contain credential material or raw audio bytes; audio is
    always reduced to its SHA-256 and length.
    """

    provider: str  # "asr" | "llm" | "tts"
    operation: str
    summary: Dict[str, Any]
    timestamp: str
    outcome: str  # "ok" or a ProviderError kind

    def to_json_dict(self) -> dict:
        return {
            "provider": self.provider,
            "operation": self.operation,
            "summary": self.summary,
            "timestamp": self.timestamp,
            "outcome": self.outcome,
        }


class CallRecorder:
    """Thread-safe call log with exact counters."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._records: List[CallRecord] = []

    def record(self, provider: str, operation: str, summary: Dict[str, Any], outcome: str) -> None:
        rec = CallRecord(provider, operation, dict(summary), format_timestamp(utc_now()), outcome)
        with self._lock:
            self._records.append(rec)

    def records(self, operation: Optional[str] = None) -> List[CallRecord]:
        with self._lock:
            records = list(self._records)
        if operation is None:
            return records
        return [r for r in records if r.operation == operation]

    def count(self, operation: Optional[str] = None) -> int:
        return len(self.records(operation))

    def last(self, operation: Optional[str] = None) -> Optional[CallRecord]:
        records = self.records(operation)
        return records[-1] if records else None

    def reset(self) -> None:
        with self._lock:
            self._records.clear()


def audio_summary(audio: bytes) -> Dict[str, Any]:
    """Redacted form of an audio payload for logs and call records."""
    return {"audio_sha256": hashlib.sha256(audio).hexdigest(), "audio_bytes": len(audio)}


class ASRProvider(ABC):
    @abstractmethod
    def transcribe(self, audio: bytes) -> Transcript:
        """Transcribe an audio clip (WAV bytes) into a Transcript."""


class LLMProvider(ABC):
    @abstractmethod
    def complete(self, system: str, user: str) -> str:
        """Return the raw reply body for a system/user prompt pair."""


class TTSProvider(ABC):
    @abstractmethod
    def create_voice(self, samples: Sequence[bytes]) -> str:
        """Register a personalized voice from exactly five samples; returns
        the provider's opaque voice id."""

    @abstractmethod
    def synthesize(self, text: str, voice_id: str, prosody: ProsodyHints) -> bytes:
        """Synthesize speech (WAV bytes) for non-empty text."""
