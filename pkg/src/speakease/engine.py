"""Pipeline orchestration: input -> interpretations -> human select -> speech.

This is the one place the full workflow is wired together; the HTTP service
and the CLI both drive it. Every successful select produces exactly one
conversation turn and exactly one audit record — a request_id can be
selected once, ever. Speech never happens without a recorded human choice.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple

from .domain import (
    ContextSetting,
    ConversationTurn,
    InputEvent,
    InterpretationSet,
    Mood,
    UserProfile,
    new_id,
    utc_now,
)
from .errors import StaleRequest, ValidationError
from .inputs import NormalizedInput, ingest_text, normalize_voice, transcribe
from .interpret import HISTORY_WINDOW, interpret_input
from .providers.base import ASRProvider, LLMProvider, TTSProvider
from .speech import AudioArtifact, SpeechService
from .storage import Store, sha256_text
from .voicebank import VoicebankService


@dataclass(frozen=True)
class PendingRequest:
    """An interpretation set waiting for its human selection."""

    request_id: str
    profile_id: str
    context: ContextSetting
    event: InputEvent
    interpretations: InterpretationSet


class SpeakEaseEngine:
    def __init__(
        self,
        store: Store,
        asr: ASRProvider,
        llm: LLMProvider,
        tts: TTSProvider,
        cache_speech: bool = True,
        user_speaker: str = "S0",
    ):
        self.store = store
        self.asr = asr
        self.llm = llm
        self.speech = SpeechService(store, tts, cache_enabled=cache_speech)
        self.voicebank = VoicebankService(store, tts)
        self.user_speaker = user_speaker
        self._pending: Dict[str, PendingRequest] = {}
        self._pending_lock = threading.Lock()

    # -- profiles -----------------------------------------------------------

    def create_profile(self, display_name: str, profile_id: Optional[str] = None) -> UserProfile:
        profile = UserProfile(profile_id=profile_id or new_id(), display_name=display_name)
        self.store.save_profile(profile)
        return profile

    # -- interpretation ----------------------------------------------------------

    def normalize_event(self, event: InputEvent) -> NormalizedInput:
        if event.kind == "voice":
            audio = self.store.blobs.get(event.audio.sha256)
            transcript = transcribe(audio, self.asr)
            return normalize_voice(transcript, user_speaker=self.user_speaker)
        return ingest_text(event.raw)

    def handle_input(
        self,
        profile_id: str,
        context: ContextSetting,
        event: InputEvent,
        attachments: Tuple[str, ...] = (),
    ) -> InterpretationSet:
        """Normalize, interpret, and park the result for selection."""
        profile = self.store.load_profile(profile_id)  # raises UnknownProfile

        normalized = self.normalize_event(event)
        history = tuple(self.store.query_history(profile_id, limit=HISTORY_WINDOW))
        interpretations = interpret_input(
            normalized,
            context,
            self.llm,
            history_window=history,
            attachments=attachments,
            source_event=event.event_id,
        )

        pending = PendingRequest(
            request_id=interpretations.request_id,
            profile_id=profile_id,
            context=context,
            event=event,
            interpretations=interpretations,
        )
        with self._pending_lock:
            self._pending[pending.request_id] = pending
        return interpretations

    # -- selection -> speech -> audit --------------------------------------------

    def select(self, request_id: str, index: int) -> Tuple[ConversationTurn, AudioArtifact]:
        """Speak interpretation ``index`` of a pending request.

        At most one select per request_id ever succeeds; the pending entry is
        consumed atomically before any synthesis happens and restored only if
        synthesis fails, so a provider fault doesn't burn the request.
        """
        if not isinstance(index, int) or not 0 <= index <= 3:
            raise ValidationError(f"selection index must be 0..3, got {index}")
        with self._pending_lock:
            pending = self._pending.pop(request_id, None)
        if pending is None:
            raise StaleRequest(f"request {request_id} is unknown or already selected")

        text = pending.interpretations.items[index]
        try:
            artifact = self.speech.synthesize(text, pending.context.mood, pending.profile_id)
        except Exception:
            with self._pending_lock:
                self._pending[request_id] = pending
            raise

        turn = ConversationTurn(
            turn_id=new_id(),
            timestamp=utc_now(),
            context=pending.context,
            input=pending.event,
            interpretations=pending.interpretations,
            selected_index=index,
            spoken_text=text,
            voice_used=artifact.voice_used,
        )
        self.store.append_turn(pending.profile_id, turn)
        self.store.ledger(pending.profile_id).append(
            turn_id=turn.turn_id,
            event_id=pending.event.event_id,
            request_id=request_id,
            selected_index=index,
            spoken_text_sha256=sha256_text(text),
            artifact_fingerprint=artifact.fingerprint,
        )
        return turn, artifact
