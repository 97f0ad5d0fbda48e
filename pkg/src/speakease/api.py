"""HTTP facade over the engine (documented in docs/api.md).

Sessions own the active conversation context, expire after an idle timeout,
and serialize their mutating requests through a per-session lock so two
concurrent inputs on one session can never interleave pipeline state.

Status mapping: 400 body-schema violations, 404 unknown ids, 409 state
conflicts (stale request_id, wrong session state), 422 domain errors,
502 provider faults (kind in the body), 504 provider timeouts.
"""

from __future__ import annotations

import base64
import binascii
import threading
import time
from typing import Optional

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, model_validator
from typing import Literal

from .domain import (
    ContextSetting,
    InputEvent,
    Mood,
    format_timestamp,
    new_id,
    parse_mood,
    parse_receiver,
    utc_now,
)
from .engine import SpeakEaseEngine
from .errors import (
    DomainError,
    DuplicateTurnId,
    IncompleteSession,
    ProviderError,
    SessionNotCollecting,
    StaleRequest,
    StorageUnavailable,
    UnknownProfile,
)
from .wavio import read_wav

DEFAULT_SESSION_IDLE_SECONDS = 30 * 60
MAX_VOICE_UPLOAD_BYTES = 10 * 1024 * 1024

_CONFLICT_ERRORS = (StaleRequest, SessionNotCollecting, IncompleteSession, DuplicateTurnId)


class UnknownSessionError(Exception):
    """Unknown or expired API session (maps to 404)."""

    def __init__(self, session_id: str):
        super().__init__(session_id)
        self.session_id = session_id


class ApiSession:
    def __init__(self, profile_id: str):
        self.session_id = new_id()
        self.profile_id = profile_id
        self.context = ContextSetting()
        self.created_at = utc_now()
        self.last_activity = time.monotonic()
        self.lock = threading.Lock()

    def to_json_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "profile_id": self.profile_id,
            "context": self.context.to_json_dict(),
            "created_at": format_timestamp(self.created_at),
        }


class SessionRegistry:
    """In-memory session table with idle expiry."""

    def __init__(self, idle_seconds: float = DEFAULT_SESSION_IDLE_SECONDS):
        self.idle_seconds = idle_seconds
        self._sessions: dict = {}
        self._lock = threading.Lock()

    def create(self, profile_id: str) -> ApiSession:
        session = ApiSession(profile_id)
        with self._lock:
            self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> Optional[ApiSession]:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                return None
            if time.monotonic() - session.last_activity > self.idle_seconds:
                del self._sessions[session_id]
                return None
            session.last_activity = time.monotonic()
            return session


# -- request bodies ----------------------------------------------------------

class CreateProfileBody(BaseModel):
    display_name: str = Field(min_length=1, max_length=128)


class CreateSessionBody(BaseModel):
    profile_id: str


class ContextBody(BaseModel):
    receiver: Optional[str] = None
    mood: Literal["happy", "scared", "sad", "angry", "neutral", "disgust"]


class InputBody(BaseModel):
    kind: Literal["text", "emoji", "voice"]
    text: Optional[str] = None
    audio_b64: Optional[str] = None

    @model_validator(mode="after")
    def _check_variant(self) -> "InputBody":
        if self.kind in ("text", "emoji"):
            if self.text is None:
                raise ValueError(f"{self.kind} input requires the text field")
            if self.audio_b64 is not None:
                raise ValueError(f"{self.kind} input must not carry audio")
        else:
            if self.audio_b64 is None:
                raise ValueError("voice input requires audio_b64")
            if self.text is not None:
                raise ValueError("voice input must not carry text")
            if len(self.audio_b64) > MAX_VOICE_UPLOAD_BYTES * 4 // 3 + 8:
                raise ValueError("audio exceeds the 10 MB upload cap")
        return self


class SelectBody(BaseModel):
    request_id: str
    index: int = Field(ge=0, le=3)


def _error_body(error: str, detail: str, **extra) -> dict:
    body = {"error": error, "detail": detail}
    body.update(extra)
    return body


def create_app(
    engine: SpeakEaseEngine,
    session_idle_seconds: float = DEFAULT_SESSION_IDLE_SECONDS,
    cors_origin: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="speakease", docs_url=None, redoc_url=None)
    sessions = SessionRegistry(idle_seconds=session_idle_seconds)
    app.state.engine = engine
    app.state.sessions = sessions

    if cors_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin] if cors_origin != "*" else ["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    # -- error mapping -----------------------------------------------------

    @app.exception_handler(RequestValidationError)
    def _schema_violation(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content=_error_body("SchemaViolation", str(exc.errors())))

    @app.exception_handler(ProviderError)
    def _provider_error(request: Request, exc: ProviderError):
        status = 504 if exc.kind == "Timeout" else 502
        return JSONResponse(
            status_code=status,
            content=_error_body("ProviderError", exc.detail, kind=exc.kind, retryable=exc.retryable),
        )

    @app.exception_handler(DomainError)
    def _domain_error(request: Request, exc: DomainError):
        if isinstance(exc, UnknownProfile):
            status = 404
        elif isinstance(exc, _CONFLICT_ERRORS):
            status = 409
        else:
            status = 422
        return JSONResponse(status_code=status, content=_error_body(type(exc).__name__, str(exc)))

    @app.exception_handler(StorageUnavailable)
    def _storage_error(request: Request, exc: StorageUnavailable):
        return JSONResponse(status_code=503, content=_error_body("StorageUnavailable", str(exc)))

    # -- helpers -------------------------------------------------------------

    def _session_or_404(session_id: str) -> ApiSession:
        session = sessions.get(session_id)
        if session is None:
            raise UnknownSessionError(session_id)
        return session

    @app.exception_handler(UnknownSessionError)
    def _unknown_session(request: Request, exc: UnknownSessionError):
        return JSONResponse(
            status_code=404,
            content=_error_body("UnknownSession", f"unknown or expired session: {exc.session_id}"),
        )

    # -- profiles ------------------------------------------------------------

    @app.post("/v1/profiles")
    def create_profile(body: CreateProfileBody):
        profile = engine.create_profile(body.display_name)
        return profile.to_json_dict()

    @app.get("/v1/profiles/{profile_id}")
    def get_profile(profile_id: str):
        return engine.store.load_profile(profile_id).to_json_dict()

    # -- sessions --------------------------------------------------------------

    @app.post("/v1/sessions")
    def create_session(body: CreateSessionBody):
        engine.store.load_profile(body.profile_id)  # 404 when unknown
        return sessions.create(body.profile_id).to_json_dict()

    @app.put("/v1/sessions/{session_id}/context")
    def set_context(session_id: str, body: ContextBody):
        session = _session_or_404(session_id)
        with session.lock:
            receiver = parse_receiver(body.receiver) if body.receiver else None
            session.context = ContextSetting(receiver=receiver, mood=parse_mood(body.mood))
            return session.to_json_dict()

    @app.post("/v1/sessions/{session_id}/input")
    def session_input(session_id: str, body: InputBody):
        session = _session_or_404(session_id)
        with session.lock:
            if body.kind == "voice":
                try:
                    audio = base64.b64decode(body.audio_b64, validate=True)
                except (binascii.Error, ValueError) as exc:
                    return JSONResponse(
                        status_code=400,
                        content=_error_body("SchemaViolation", f"bad base64 audio: {exc}"),
                    )
                _, rate, _ = read_wav(audio)
                blob = engine.store.blobs.put(audio, media_type="audio/wav")
                event = InputEvent.voice(blob, rate)
            elif body.kind == "emoji":
                event = InputEvent.emoji(body.text)
            else:
                event = InputEvent.text(body.text)
            interpretations = engine.handle_input(session.profile_id, session.context, event)
            return {
                "request_id": interpretations.request_id,
                "interpretations": list(interpretations.items),
            }

    @app.post("/v1/sessions/{session_id}/select")
    def session_select(session_id: str, body: SelectBody):
        session = _session_or_404(session_id)
        with session.lock:
            turn, artifact = engine.select(body.request_id, body.index)
            return {
                "audio_url": f"/v1/blobs/{artifact.audio.sha256}",
                "turn_id": turn.turn_id,
            }

    # -- voicebank ----------------------------------------------------------------

    @app.post("/v1/voicebank/{profile_id}/{mood}/start")
    def voicebank_start(profile_id: str, mood: str):
        session = engine.voicebank.start_session(profile_id, parse_mood(mood))
        return {"session": session.to_json_dict(), "script": list(session.script)}

    @app.post("/v1/voicebank/{profile_id}/{mood}/samples/{index}")
    async def voicebank_sample(profile_id: str, mood: str, index: int, request: Request):
        audio = await request.body()
        banking = engine.voicebank.get_session(profile_id, parse_mood(mood))
        if banking is None:
            raise SessionNotCollecting("no active banking session; call start first")
        session = engine.voicebank.submit_sample(banking, index, audio)
        return {"session": session.to_json_dict()}

    @app.post("/v1/voicebank/{profile_id}/{mood}/finalize")
    def voicebank_finalize(profile_id: str, mood: str):
        banking = engine.voicebank.get_session(profile_id, parse_mood(mood))
        if banking is None:
            raise SessionNotCollecting("no active banking session; call start first")
        voice = engine.voicebank.finalize_voice(banking)
        return {"voice": voice.to_json_dict()}

    @app.get("/v1/voicebank/{profile_id}/voices")
    def voicebank_voices(profile_id: str):
        voices = engine.voicebank.list_voices(profile_id)
        return {"voices": {mood.value: v.to_json_dict() for mood, v in sorted(voices.items(), key=lambda kv: kv[0].value)}}

    # -- history and audit ------------------------------------------------------

    @app.get("/v1/profiles/{profile_id}/history")
    def profile_history(
        profile_id: str,
        receiver: Optional[str] = Query(default=None),
        limit: int = Query(default=50, ge=0),
    ):
        turns = engine.store.query_history(profile_id, receiver=receiver, limit=limit)
        return {"turns": [t.to_json_dict() for t in turns]}

    @app.get("/v1/audit/{profile_id}/verify")
    def audit_verify(profile_id: str):
        ok, first_bad = engine.store.ledger(profile_id).verify()
        return {"ok": ok, "first_bad_seq": first_bad}

    # -- blobs ----------------------------------------------------------------------

    @app.get("/v1/blobs/{sha256}")
    def get_blob(sha256: str):
        try:
            data = engine.store.blobs.get(sha256)
        except (KeyError, DomainError):
            return JSONResponse(status_code=404, content=_error_body("UnknownBlob", sha256))
        media = "audio/wav" if data[:4] == b"RIFF" else "application/octet-stream"
        return Response(content=data, media_type=media)

    return app
