from .base import (
    ASRProvider,
    CallRecord,
    CallRecorder,
    LLMProvider,
    ProviderConfig,
    TTSProvider,
)
from .mocks import MockASR, MockLLM, MockTTS

__all__ = [
    "ASRProvider",
    "CallRecord",
    "CallRecorder",
    "LLMProvider",
    "MockASR",
    "MockLLM",
    "MockTTS",
    "ProviderConfig",
    "TTSProvider",
]
