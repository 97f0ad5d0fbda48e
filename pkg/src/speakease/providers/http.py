"""Thin configuration-driven HTTP adapters for real ASR/LLM/TTS backends.

These are wire shells only: they move bytes, map transport failures onto the
ProviderError taxonomy, and nothing else. They are exercised by smoke tests
with an injected transport, never by the acceptance suite, and they read
credentials from the environment variable named in their config at call time
(the secret is never stored on the adapter).

Endpoints and credentials come from:
    SPEAKEASE_ASR_URL / SPEAKEASE_ASR_KEY
    SPEAKEASE_LLM_URL / SPEAKEASE_LLM_KEY
    SPEAKEASE_TTS_URL / SPEAKEASE_TTS_KEY
"""

from __future__ import annotations

import base64
import os
from typing import Optional, Sequence

import requests

from ..domain import ProsodyHints, Transcript
from ..errors import (
    MalformedResponse,
    ProviderError,
    ProviderRejection,
    ProviderTimeout,
    ProviderUnavailable,
)
from .base import ASRProvider, LLMProvider, ProviderConfig, TTSProvider

ENV_VARS = {
    "asr": ("SPEAKEASE_ASR_URL", "SPEAKEASE_ASR_KEY"),
    "llm": ("SPEAKEASE_LLM_URL", "SPEAKEASE_LLM_KEY"),
    "tts": ("SPEAKEASE_TTS_URL", "SPEAKEASE_TTS_KEY"),
}


def config_from_env(provider: str, timeout_ms: int = 30_000) -> ProviderConfig:
    url_var, key_var = ENV_VARS[provider]
    return ProviderConfig(
        endpoint=os.environ.get(url_var, ""),
        credential_env=key_var,
        timeout_ms=timeout_ms,
    )


class _HttpAdapter:
    def __init__(self, config: ProviderConfig, session: Optional[requests.Session] = None):
        self.config = config
        self.session = session or requests.Session()

    def _headers(self) -> dict:
        headers = {}
        secret = os.environ.get(self.config.credential_env, "")
        if secret:
            headers["Authorization"] = f"Bearer {secret}"
        return headers

    def _post(self, path: str, **kwargs):
        url = self.config.endpoint.rstrip("/") + path
        try:
            response = self.session.post(
                url,
                headers=self._headers(),
                timeout=self.config.timeout_ms / 1000.0,
                **kwargs,
            )
        except requests.Timeout as exc:
            raise ProviderTimeout(str(exc)) from exc
        except requests.ConnectionError as exc:
            raise ProviderUnavailable(str(exc)) from exc
        if response.status_code == 401 or response.status_code == 403:
            raise ProviderError("AuthFailure", f"HTTP {response.status_code}")
        if response.status_code == 429:
            raise ProviderError("RateLimited", "HTTP 429")
        if response.status_code >= 500:
            raise ProviderUnavailable(f"HTTP {response.status_code}")
        if response.status_code >= 400:
            raise ProviderRejection(f"HTTP {response.status_code}")
        return response


class HttpASRProvider(_HttpAdapter, ASRProvider):
    """POST /transcribe with WAV bytes; expects the Transcript JSON shape."""

    def transcribe(self, audio: bytes) -> Transcript:
        response = self._post("/transcribe", data=audio,
                              headers={**self._headers(), "Content-Type": "audio/wav"})
        try:
            return Transcript.from_json_dict(response.json())
        except (ValueError, KeyError) as exc:
            raise MalformedResponse(f"bad transcript body: {exc}") from exc


class HttpLLMProvider(_HttpAdapter, LLMProvider):
    """POST /complete with the prompt pair; returns the raw reply body."""

    def complete(self, system: str, user: str) -> str:
        response = self._post("/complete", json={"system": system, "user": user})
        return response.text


class HttpTTSProvider(_HttpAdapter, TTSProvider):
    """POST /voices with base64 samples; POST /synthesize returning WAV bytes."""

    def create_voice(self, samples: Sequence[bytes]) -> str:
        body = {"samples": [base64.b64encode(s).decode("ascii") for s in samples]}
        response = self._post("/voices", json=body)
        try:
            return response.json()["voice_id"]
        except (ValueError, KeyError) as exc:
            raise MalformedResponse(f"bad voice body: {exc}") from exc

    def synthesize(self, text: str, voice_id: str, prosody: ProsodyHints) -> bytes:
        response = self._post(
            "/synthesize",
            json={"text": text, "voice_id": voice_id, "prosody": prosody.to_json_dict()},
        )
        return response.content
