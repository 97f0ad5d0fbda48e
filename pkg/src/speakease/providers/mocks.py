"""Deterministic mock providers driven by JSON manifests.

Mocks are closed-world: for a fixed manifest, every operation is a pure
function of its inputs. Every call (including failing ones) lands in the
shared CallRecorder, and failures can be scripted per call for tests:

    llm.push_failure("malformed")   # next call returns a non-JSON body
    asr.push_failure("delay", 500)  # next call is 500 ms late

A scripted delay at or beyond the configured timeout raises Timeout, which
is how the timeout contract is exercised without a network.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from collections import deque
from typing import Any, Dict, List, Optional, Sequence, Tuple

import regex

from ..domain import (
    MOOD_ORDER,
    Mood,
    ProsodyHints,
    Transcript,
    TranscriptSegment,
    canonical_json,
)
from ..errors import (
    MalformedResponse,
    ProviderRejection,
    ProviderTimeout,
    ProviderUnavailable,
    ValidationError,
)
from ..speech import load_prosody_table
from ..wavio import tone_wav
from .base import ASRProvider, CallRecorder, LLMProvider, ProviderConfig, TTSProvider, audio_summary

#: mock tone parameters: 200 Hz base + 50 Hz per mood index, 0.1 s per word
TONE_BASE_HZ = 200.0
TONE_STEP_HZ = 50.0
SECONDS_PER_WORD = 0.1


class _FailureScript:
    """Per-call failure directives, consumed FIFO."""

    def __init__(self) -> None:
        self._queue: deque = deque()
        self._lock = threading.Lock()

    def push(self, mode: str, *args: Any) -> None:
        with self._lock:
            self._queue.append((mode, args))

    def pop(self) -> Optional[Tuple[str, tuple]]:
        with self._lock:
            return self._queue.popleft() if self._queue else None


class _MockBase:
    provider_name = ""

    def __init__(self, config: Optional[ProviderConfig] = None,
                 recorder: Optional[CallRecorder] = None):
        self.config = config or ProviderConfig()
        self.recorder = recorder or CallRecorder()
        self._script = _FailureScript()

    def push_failure(self, mode: str, *args: Any) -> None:
        self._script.push(mode, *args)

    def _apply_script(self, operation: str, summary: Dict[str, Any]) -> Optional[str]:
        """Apply the next scripted directive, if any. Raises for failure
        directives after recording the call; returns a reply-shaping mode
        ("malformed", "short", "long") for the caller to honor."""
        directive = self._script.pop()
        if directive is None:
            return None
        mode, args = directive
        if mode == "delay":
            delay_ms = args[0] if args else 0
            if delay_ms >= self.config.timeout_ms:
                time.sleep(self.config.timeout_ms / 1000.0)
                self.recorder.record(self.provider_name, operation, summary, "Timeout")
                raise ProviderTimeout(f"mock delayed {delay_ms} ms > {self.config.timeout_ms} ms")
            time.sleep(delay_ms / 1000.0)
            return None
        if mode == "timeout":
            self.recorder.record(self.provider_name, operation, summary, "Timeout")
            raise ProviderTimeout("scripted timeout")
        if mode == "unavailable":
            self.recorder.record(self.provider_name, operation, summary, "Unavailable")
            raise ProviderUnavailable("scripted outage")
        if mode == "reject":
            self.recorder.record(self.provider_name, operation, summary, "Rejected")
            raise ProviderRejection("scripted rejection")
        if mode in ("malformed", "short", "long"):
            return mode
        raise ValueError(f"unknown mock failure mode: {mode}")


class MockASR(_MockBase, ASRProvider):
    """Resolves transcripts by audio SHA-256 against a manifest.

    Manifest: JSON array of {audio_sha256, text, segments[]} (optionally
    wrapped as {"capabilities": {...}, "entries": [...]}).
    """

    provider_name = "asr"

    def __init__(self, manifest: Any, config: Optional[ProviderConfig] = None,
                 recorder: Optional[CallRecorder] = None):
        super().__init__(config, recorder)
        if isinstance(manifest, dict):
            self.capabilities = manifest.get("capabilities", {})
            entries = manifest.get("entries", [])
        else:
            self.capabilities = {"diarization": True}
            entries = manifest
        self._by_sha = {e["audio_sha256"]: e for e in entries}

    @classmethod
    def from_file(cls, path, **kwargs) -> "MockASR":
        with open(path, encoding="utf-8") as f:
            return cls(json.load(f), **kwargs)

    def transcribe(self, audio: bytes) -> Transcript:
        summary = audio_summary(audio)
        mode = self._apply_script("transcribe", summary)
        entry = self._by_sha.get(summary["audio_sha256"])
        if mode == "malformed" or entry is None:
            self.recorder.record(self.provider_name, "transcribe", summary, "Malformed")
            raise MalformedResponse("unknown fixture")
        segments = tuple(
            TranscriptSegment(
                start=float(s["start"]),
                end=float(s["end"]),
                text=s["text"],
                speaker=s.get("speaker", "S0"),
            )
            for s in entry.get("segments", [])
        )
        transcript = Transcript(text=entry["text"], segments=segments)
        self.recorder.record(self.provider_name, "transcribe", summary, "ok")
        return transcript


_USER_MESSAGE_RE = regex.compile(
    r"^Patient is talking to (?P<receiver>.*) and is "
    r"(?P<mood>happy|scared|sad|angry|neutral|disgust): (?P<payload>.*)$",
    regex.DOTALL,
)


class MockLLM(_MockBase, LLMProvider):
    """Replies from a manifest keyed on (payload substring, mood, receiver);
    unmatched requests get the deterministic generic echo reply."""

    provider_name = "llm"

    def __init__(self, manifest: Optional[Sequence[dict]] = None,
                 config: Optional[ProviderConfig] = None,
                 recorder: Optional[CallRecorder] = None):
        super().__init__(config, recorder)
        self.manifest = list(manifest or [])

    @classmethod
    def from_file(cls, path, **kwargs) -> "MockLLM":
        with open(path, encoding="utf-8") as f:
            return cls(json.load(f), **kwargs)

    @staticmethod
    def parse_user_message(user: str) -> Dict[str, str]:
        """Split the templated first line into receiver/mood/payload; the
        payload keeps everything after the template colon, including any
        appended history block."""
        first_line, _, _ = user.partition("\n")
        match = _USER_MESSAGE_RE.match(first_line)
        if match is None:
            return {"receiver": "", "mood": "", "payload": user}
        return match.groupdict()

    @staticmethod
    def generic_reply(payload: str) -> str:
        items = [f"V{i}: {payload}" for i in range(1, 5)]
        return canonical_json({"interpretations": items})

    def complete(self, system: str, user: str) -> str:
        if not system or not user:
            raise ValidationError("system and user messages must be non-empty")
        parsed = self.parse_user_message(user)
        summary = {
            "system_sha256": hashlib.sha256(system.encode("utf-8")).hexdigest(),
            "user": user,
            "payload": parsed["payload"],
            "mood": parsed["mood"],
            "receiver": parsed["receiver"],
        }
        mode = self._apply_script("complete", summary)
        if mode == "malformed":
            self.recorder.record(self.provider_name, "complete", summary, "ok")
            return "not json"
        if mode == "short":
            self.recorder.record(self.provider_name, "complete", summary, "ok")
            return canonical_json({"interpretations": ["a", "b"]})
        if mode == "long":
            self.recorder.record(self.provider_name, "complete", summary, "ok")
            return canonical_json({"interpretations": ["a"] * 6})

        for entry in self.manifest:
            match = entry.get("match", {})
            substring = match.get("payload_substring")
            if substring is not None and substring not in parsed["payload"]:
                continue
            if match.get("mood") is not None and match["mood"] != parsed["mood"]:
                continue
            if match.get("receiver") is not None and match["receiver"] != parsed["receiver"]:
                continue
            self.recorder.record(self.provider_name, "complete", summary, "ok")
            return entry["reply_body"]

        self.recorder.record(self.provider_name, "complete", summary, "ok")
        return self.generic_reply(parsed["payload"])


class MockTTS(_MockBase, TTSProvider):
    """Deterministic voice registration and tone synthesis.

    create_voice ids are the first 12 hex chars of SHA-256 over the
    concatenated sample digests; synthesize emits a sine tone at
    200 Hz + 50 Hz * mood_index for 0.1 s per word, so outputs are
    byte-identical for identical requests.
    """

    provider_name = "tts"

    def __init__(self, manifest: Optional[dict] = None,
                 config: Optional[ProviderConfig] = None,
                 recorder: Optional[CallRecorder] = None):
        super().__init__(config, recorder)
        manifest = manifest or {}
        self.capabilities = manifest.get("capabilities", {})
        self.default_voice_id = manifest.get("default_voice_id", "default")
        # invert the shipped prosody table to recover the mood index; rows
        # that collide after editing the asset resolve to the first match
        self._mood_by_prosody = {}
        for mood, hints in load_prosody_table().items():
            key = (hints.pitch_shift, hints.rate, hints.volume)
            self._mood_by_prosody.setdefault(key, mood)

    @classmethod
    def from_file(cls, path, **kwargs) -> "MockTTS":
        with open(path, encoding="utf-8") as f:
            return cls(json.load(f), **kwargs)

    @staticmethod
    def voice_id_for(sample_hashes: Sequence[str]) -> str:
        return hashlib.sha256("".join(sample_hashes).encode("ascii")).hexdigest()[:12]

    def create_voice(self, samples: Sequence[bytes]) -> str:
        if len(samples) != 5:
            raise ValidationError(f"create_voice requires exactly 5 samples, got {len(samples)}")
        hashes = [hashlib.sha256(s).hexdigest() for s in samples]
        summary = {"sample_hashes": hashes, "sample_count": len(samples)}
        self._apply_script("create_voice", summary)
        voice_id = self.voice_id_for(hashes)
        self.recorder.record(self.provider_name, "create_voice", summary, "ok")
        return voice_id

    def _mood_index(self, prosody: ProsodyHints) -> int:
        mood = self._mood_by_prosody.get(
            (prosody.pitch_shift, prosody.rate, prosody.volume), Mood.NEUTRAL
        )
        return MOOD_ORDER.index(mood)

    def synthesize(self, text: str, voice_id: str, prosody: ProsodyHints) -> bytes:
        if not text:
            raise ValidationError("synthesize requires non-empty text")
        summary = {"text": text, "voice_id": voice_id, "prosody": prosody.to_json_dict()}
        self._apply_script("synthesize", summary)
        words = len(text.split())
        frequency = TONE_BASE_HZ + TONE_STEP_HZ * self._mood_index(prosody)
        wav = tone_wav(frequency, SECONDS_PER_WORD * words)
        self.recorder.record(self.provider_name, "synthesize", summary, "ok")
        return wav
