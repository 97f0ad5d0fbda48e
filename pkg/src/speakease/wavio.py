"""Minimal WAV helpers for the canonical audio format: PCM 16-bit mono.

Everything stored or emitted by this package is re-wrapped through
``rewrap_wav`` so a given PCM payload always produces byte-identical files.
"""

from __future__ import annotations

import io
import math
import struct
import wave

from .errors import UnsupportedAudioFormat

CANONICAL_RATE = 16_000
SAMPLE_WIDTH = 2  # 16-bit


def write_wav(pcm: bytes, sample_rate: int = CANONICAL_RATE) -> bytes:
    """Wrap raw little-endian PCM16 mono samples in a WAV container."""
    buf = io.BytesIO()
    with wave.open(buf, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(SAMPLE_WIDTH)
        w.setframerate(sample_rate)
        w.writeframes(pcm)
    return buf.getvalue()


def read_wav(data: bytes):
    """Return (pcm_bytes, sample_rate, n_frames) for PCM16 mono input."""
    try:
        with wave.open(io.BytesIO(data), "rb") as w:
            if w.getcomptype() != "NONE":
                raise UnsupportedAudioFormat("compressed WAV is not supported")
            if w.getnchannels() != 1 or w.getsampwidth() != SAMPLE_WIDTH:
                raise UnsupportedAudioFormat("expected PCM 16-bit mono")
            frames = w.getnframes()
            return w.readframes(frames), w.getframerate(), frames
    except wave.Error as exc:
        raise UnsupportedAudioFormat(str(exc)) from exc


def wav_duration(data: bytes) -> float:
    """Duration in seconds, from the header."""
    _, rate, frames = read_wav(data)
    return frames / rate


def rewrap_wav(data: bytes) -> bytes:
    """Re-emit audio with the canonical header (strips extra chunks)."""
    pcm, rate, _ = read_wav(data)
    return write_wav(pcm, rate)


def tone_wav(frequency: float, duration: float, sample_rate: int = CANONICAL_RATE,
             amplitude: float = 0.3) -> bytes:
    """Deterministic sine-tone WAV used by mock synthesis and fixtures."""
    n = round(duration * sample_rate)
    peak = amplitude * 32767.0
    samples = (
        int(peak * math.sin(2.0 * math.pi * frequency * i / sample_rate))
        for i in range(n)
    )
    pcm = struct.pack(f"<{n}h", *samples)
    return write_wav(pcm, sample_rate)


def silence_wav(duration: float, sample_rate: int = CANONICAL_RATE) -> bytes:
    n = round(duration * sample_rate)
    return write_wav(b"\x00\x00" * n, sample_rate)
