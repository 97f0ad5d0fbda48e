"""Shared exception taxonomy.

Domain errors describe problems with the caller's data or state; provider
errors describe faults of an external ASR/LLM/TTS backend and carry a kind
plus a retryable flag. The HTTP layer maps these onto status codes, so new
error types should extend one of the two roots rather than Exception.
"""

from __future__ import annotations


class SpeakEaseError(Exception):
    """Root of all errors raised by this package."""


# ---------------------------------------------------------------------------
# Domain errors (caller data / state)
# ---------------------------------------------------------------------------

class DomainError(SpeakEaseError):
    pass


class ValidationError(DomainError):
    """A value fails its type invariants (bad mood name, bad receiver, ...)."""


class CardinalityError(DomainError):
    """An interpretation list does not contain exactly four items."""

    def __init__(self, actual_count: int):
        super().__init__(f"expected exactly 4 interpretations, got {actual_count}")
        self.actual_count = actual_count


class EncodingError(DomainError):
    """Input text is not valid Unicode (e.g. contains unpaired surrogates)."""


class EmptyInputError(DomainError):
    """An operation that requires non-empty input received an empty one."""


class EmptyTextError(DomainError):
    """Speech synthesis was asked to speak an empty string."""


class UnknownProfile(DomainError):
    def __init__(self, profile_id: str):
        super().__init__(f"unknown profile: {profile_id}")
        self.profile_id = profile_id


class DuplicateTurnId(DomainError):
    def __init__(self, turn_id: str):
        super().__init__(f"turn id already recorded: {turn_id}")
        self.turn_id = turn_id


class SampleTooShort(DomainError):
    def __init__(self, duration: float, minimum: float):
        super().__init__(f"sample is {duration:.3f}s, minimum is {minimum:.3f}s")
        self.duration = duration
        self.minimum = minimum


class InvalidIndex(DomainError):
    """A voice-sample index outside 1..5."""


class SessionNotCollecting(DomainError):
    """Sample submitted to a finalized, failed, or superseded banking session."""


class IncompleteSession(DomainError):
    """Finalize requested before all five samples are present."""


class StaleRequest(DomainError):
    """A selection referenced a request_id that was never issued or was
    already consumed by an earlier select."""


class UnsupportedAudioFormat(DomainError):
    pass


class EmptyAudio(DomainError):
    pass


# ---------------------------------------------------------------------------
# Storage errors
# ---------------------------------------------------------------------------

class StorageUnavailable(SpeakEaseError):
    pass


class ChainCorrupt(SpeakEaseError):
    """The audit hash chain fails verification."""

    def __init__(self, first_bad_seq: int, detail: str = ""):
        msg = f"audit chain corrupt at seq {first_bad_seq}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.first_bad_seq = first_bad_seq


# ---------------------------------------------------------------------------
# Provider errors
# ---------------------------------------------------------------------------

#: kinds whose failures are transient and may be retried by callers
RETRYABLE_KINDS = frozenset({"Timeout", "RateLimited", "Unavailable"})

PROVIDER_ERROR_KINDS = frozenset(
    {"Timeout", "RateLimited", "Malformed", "AuthFailure", "Unavailable", "Rejected"}
)


class ProviderError(SpeakEaseError):
    """Fault of an external provider call.

    `retryable` is derived from the kind and never set independently.
    """

    def __init__(self, kind: str, detail: str = ""):
        if kind not in PROVIDER_ERROR_KINDS:
            raise ValueError(f"unknown provider error kind: {kind}")
        super().__init__(f"{kind}: {detail}" if detail else kind)
        self.kind = kind
        self.detail = detail
        self.retryable = kind in RETRYABLE_KINDS


class ProviderTimeout(ProviderError):
    def __init__(self, detail: str = ""):
        super().__init__("Timeout", detail)


class ProviderUnavailable(ProviderError):
    def __init__(self, detail: str = ""):
        super().__init__("Unavailable", detail)


class ProviderRejection(ProviderError):
    def __init__(self, detail: str = ""):
        super().__init__("Rejected", detail)


class MalformedResponse(ProviderError):
    """Provider reply could not be parsed into the expected shape."""

    def __init__(self, detail: str = ""):
        super().__init__("Malformed", detail)
