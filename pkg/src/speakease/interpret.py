"""Interpretation engine: prompt construction, provider calls, reply parsing.

The system prompt is a versioned golden asset returned byte-for-byte; the
user message is the fixed template

    Patient is talking to <receiver> and is <mood>: <payload>

with the payload embedded verbatim (no escaping, no censoring). Replies must
be JSON carrying exactly four interpretations under the "interpretations"
key; malformed replies are retried, empty input never reaches the provider
at all.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import List, Optional, Sequence, Tuple, Union

from .domain import (
    ContextSetting,
    ConversationTurn,
    InterpretationSet,
    validate_interpretation_set,
)
from .errors import CardinalityError, MalformedResponse, ProviderError, ValidationError
from .graphemes import Token, emoji_short_name, tokenize
from .inputs import NormalizedInput
from .providers.base import LLMProvider

#: substituted when the context has no receiver
DEFAULT_RECEIVER = "someone"

#: most recent turns rendered into the prompt
HISTORY_WINDOW = 10

#: reparse attempts after a malformed reply (total calls <= 1 + RETRIES)
RETRIES = 2


@dataclass(frozen=True)
class PromptPair:
    system_text: str
    user_text: str


@dataclass(frozen=True)
class InterpretRequest:
    normalized: NormalizedInput
    context: ContextSetting
    history_window: Tuple[ConversationTurn, ...] = ()  # most recent first
    attachments: Tuple[str, ...] = ()
    source_event: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "history_window", tuple(self.history_window))
        object.__setattr__(self, "attachments", tuple(self.attachments))
        if len(self.history_window) > HISTORY_WINDOW:
            raise ValidationError(
                f"history window exceeds {HISTORY_WINDOW} turns"
            )


@lru_cache(maxsize=1)
def build_system_prompt() -> str:
    """The full system prompt, byte-identical to the committed golden asset."""
    return resources.files("speakease").joinpath("prompts/system_prompt.txt").read_text("utf-8")


def build_user_message(context: ContextSetting, payload_text: str) -> str:
    """Instantiate the user-message template; the payload is embedded
    byte-for-byte."""
    receiver = context.receiver.label if context.receiver else DEFAULT_RECEIVER
    return f"Patient is talking to {receiver} and is {context.mood.value}: {payload_text}"


def _turn_said_text(turn: ConversationTurn) -> str:
    # voice turns persist audio, not transcripts; render a placeholder
    if turn.input.kind == "voice":
        return "[voice]"
    return (turn.input.raw or "").strip()


def render_history(history_window: Sequence[ConversationTurn]) -> List[str]:
    """History block lines, oldest turn first."""
    lines = []
    for turn in reversed(list(history_window)):
        lines.append(f"Patient said: {_turn_said_text(turn)}")
        lines.append(f"Patient meant: {turn.spoken_text}")
    return lines


def build_prompt_pair(req: InterpretRequest) -> PromptPair:
    """Template line first, then history, then attachment notes."""
    lines = [build_user_message(req.context, req.normalized.payload_text)]
    lines.extend(render_history(req.history_window))
    lines.extend(f"Attachment: {note}" for note in req.attachments)
    return PromptPair(system_text=build_system_prompt(), user_text="\n".join(lines))


def parse_interpretations(payload: str, source_event: str = "") -> InterpretationSet:
    """Parse a raw reply body: a JSON object whose "interpretations" key
    holds exactly four strings. Unknown sibling keys are ignored."""
    try:
        data = json.loads(payload)
    except (json.JSONDecodeError, TypeError) as exc:
        raise MalformedResponse(f"reply is not JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedResponse("reply is not a JSON object")
    if "interpretations" not in data:
        raise MalformedResponse('reply lacks the "interpretations" key')
    items = data["interpretations"]
    if not isinstance(items, list):
        raise MalformedResponse('"interpretations" is not an array')
    try:
        return validate_interpretation_set(items, source_event=source_event)
    except TypeError as exc:
        raise MalformedResponse(str(exc)) from exc


def serialize_interpretations(interpretations: InterpretationSet) -> str:
    """The canonical reply JSON shape (inverse of parse_interpretations)."""
    return json.dumps({"interpretations": list(interpretations.items)},
                      separators=(",", ":"), ensure_ascii=False)


EMPTY_ITEMS = ("", "", "", "")


def interpret(req: InterpretRequest, llm: LLMProvider) -> InterpretationSet:
    """Produce the four candidate utterances for a request.

    Empty or whitespace-only payloads short-circuit to four empty strings
    without touching the provider. Malformed replies (bad JSON, wrong key,
    wrong cardinality, wrong types) are retried up to RETRIES times;
    timeouts and outages are not retried here.
    """
    payload = req.normalized.payload_text
    if not payload.strip():
        return InterpretationSet(EMPTY_ITEMS, source_event=req.source_event)

    pair = build_prompt_pair(req)
    last_error: Optional[Exception] = None
    for _ in range(1 + RETRIES):
        reply = llm.complete(pair.system_text, pair.user_text)
        try:
            return parse_interpretations(reply, source_event=req.source_event)
        except (MalformedResponse, CardinalityError) as exc:
            last_error = exc
    raise MalformedResponse(
        f"no well-formed reply after {1 + RETRIES} attempts: {last_error}"
    )


def render_emoji_payload(tokens: Sequence[Token]) -> str:
    """Text runs pass through verbatim; each emoji cluster becomes
    ":short_name:", with a single space between adjacent emoji tokens."""
    parts: List[str] = []
    previous_emoji = False
    for token in tokens:
        if token.is_emoji:
            if previous_emoji:
                parts.append(" ")
            parts.append(f":{emoji_short_name(token.text)}:")
            previous_emoji = True
        else:
            parts.append(token.text)
            previous_emoji = False
    return "".join(parts)


def expand_emoji(
    tokens: Sequence[Token],
    context: ContextSetting,
    llm: LLMProvider,
    history_window: Tuple[ConversationTurn, ...] = (),
    attachments: Tuple[str, ...] = (),
    source_event: str = "",
) -> InterpretationSet:
    """Expand emoji input into four candidate sentences via the normal
    interpretation path."""
    emoji_clusters = tuple(t.text for t in tokens if t.is_emoji)
    if not emoji_clusters:
        raise ValidationError("expand_emoji requires at least one emoji token")
    payload = render_emoji_payload(tokens)
    normalized = NormalizedInput(payload_text=payload, kind="emoji", emoji_tokens=emoji_clusters)
    req = InterpretRequest(
        normalized=normalized,
        context=context,
        history_window=history_window,
        attachments=attachments,
        source_event=source_event,
    )
    return interpret(req, llm)


def interpret_input(
    normalized: NormalizedInput,
    context: ContextSetting,
    llm: LLMProvider,
    history_window: Tuple[ConversationTurn, ...] = (),
    attachments: Tuple[str, ...] = (),
    source_event: str = "",
) -> InterpretationSet:
    """Route a normalized input through emoji expansion or plain
    interpretation, whichever applies."""
    if normalized.kind == "emoji":
        return expand_emoji(
            tokenize(normalized.payload_text),
            context,
            llm,
            history_window=history_window,
            attachments=attachments,
            source_event=source_event,
        )
    req = InterpretRequest(
        normalized=normalized,
        context=context,
        history_window=history_window,
        attachments=attachments,
        source_event=source_event,
    )
    return interpret(req, llm)
