#!/usr/bin/env python3
"""Generate the committed test fixtures under testdata/.

Deliberately self-contained: WAV files are emitted and re-parsed with local
struct code (not the package's audio helpers), durations and digests are
computed from raw bytes, and the expected mock voice id is derived here from
its documented hash rule. The values this script writes into
testdata/goldens.json are therefore an independent check on the package.

Run from the repository root:  python scripts/make_fixtures.py
"""

import hashlib
import json
import math
import struct
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
TESTDATA = ROOT / "testdata"
AUDIO = TESTDATA / "audio"

SAMPLE_RATE = 16_000


def wav_bytes(pcm: bytes, rate: int = SAMPLE_RATE) -> bytes:
    """Minimal RIFF/WAVE writer for PCM16 mono."""
    byte_rate = rate * 2
    header = b"RIFF" + struct.pack("<I", 36 + len(pcm)) + b"WAVE"
    fmt = b"fmt " + struct.pack("<IHHIIHH", 16, 1, 1, rate, byte_rate, 2, 16)
    data = b"data" + struct.pack("<I", len(pcm)) + pcm
    return header + fmt + data


def tone_pcm(freq: float, seconds: float, rate: int = SAMPLE_RATE, amp: float = 0.25) -> bytes:
    n = round(seconds * rate)
    return struct.pack(
        f"<{n}h",
        *(int(amp * 32767 * math.sin(2 * math.pi * freq * i / rate)) for i in range(n)),
    )


def parse_wav_duration(data: bytes) -> float:
    """Duration straight from the RIFF header fields."""
    assert data[:4] == b"RIFF" and data[8:12] == b"WAVE"
    offset = 12
    rate = None
    while offset + 8 <= len(data):
        chunk_id = data[offset:offset + 4]
        size = struct.unpack("<I", data[offset + 4:offset + 8])[0]
        if chunk_id == b"fmt ":
            _, channels, rate, _, block_align, bits = struct.unpack(
                "<HHIIHH", data[offset + 8:offset + 24]
            )
            assert channels == 1 and bits == 16
        elif chunk_id == b"data":
            assert rate is not None
            return (size // 2) / rate
        offset += 8 + size + (size % 2)
    raise ValueError("no data chunk")


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def main() -> None:
    AUDIO.mkdir(parents=True, exist_ok=True)

    files = {}

    def emit(name: str, data: bytes) -> str:
        (AUDIO / name).write_bytes(data)
        digest = sha256(data)
        files[name] = {"sha256": digest, "duration": parse_wav_duration(data)}
        return digest

    john_sha = emit("john_pizza_dysarthric.wav", wav_bytes(tone_pcm(123.0, 1.5)))
    silence_sha = emit("silence_1s.wav", wav_bytes(b"\x00\x00" * SAMPLE_RATE))
    two_speaker_sha = emit("two_speaker.wav", wav_bytes(tone_pcm(150.0, 2.0)))
    emit("short_clip.wav", wav_bytes(tone_pcm(200.0, 0.3)))

    bank_happy_shas = []
    for i in range(1, 6):
        digest = emit(f"bank_happy_{i}.wav", wav_bytes(tone_pcm(180.0 + 15 * i, 1.2)))
        bank_happy_shas.append(digest)
    bank_sad_shas = []
    for i in range(1, 6):
        digest = emit(f"bank_sad_{i}.wav", wav_bytes(tone_pcm(90.0 + 10 * i, 1.1)))
        bank_sad_shas.append(digest)

    # expected mock voice id: first 12 hex chars of sha256 over the
    # concatenated sample digests, in index order
    happy_voice_id = sha256("".join(bank_happy_shas).encode("ascii"))[:12]

    asr_manifest = [
        {
            "audio_sha256": john_sha,
            "text": "A wuand...a...izza.",
            "segments": [
                {"start": 0.0, "end": 1.5, "text": "A wuand...a...izza.", "speaker": "S0"}
            ],
        },
        {"audio_sha256": silence_sha, "text": "", "segments": []},
        {
            "audio_sha256": two_speaker_sha,
            "text": "Want some pizza John Yes please",
            "segments": [
                {"start": 0.0, "end": 0.9, "text": "Want some pizza John", "speaker": "S0"},
                {"start": 1.0, "end": 1.9, "text": "Yes please", "speaker": "S1"},
            ],
        },
    ]
    (TESTDATA / "mock_asr.json").write_text(json.dumps(asr_manifest, indent=2) + "\n", "utf-8")

    happy_pizza_reply = json.dumps({"interpretations": [
        "Mom, I'm so happy to eat pizza tonight!",
        "I can't wait to have some pizza, Mom.",
        "Mom, pizza tonight would make me so happy!",
        "I'm really excited to eat pizza tonight, Mom!",
    ]}, ensure_ascii=False)
    sad_pizza_reply = json.dumps({"interpretations": [
        "I feel down today, maybe pizza will help.",
        "Dude, I’m not feeling great, but pizza might cheer me up.",
        "I'm feeling low today, but pizza could lift my mood.",
        "Not my best day, though pizza might make it better.",
    ]}, ensure_ascii=False)
    emoji_combo_reply = json.dumps({"interpretations": [
        "I want to eat pizza.",
        "The boy wants to eat some pizza.",
        "Can I please have pizza to eat?",
        "I'm hungry for a slice of pizza.",
    ]}, ensure_ascii=False)

    llm_manifest = [
        {
            "match": {"payload_substring": "A wuand", "mood": "happy", "receiver": "mom"},
            "reply_body": happy_pizza_reply,
        },
        {
            "match": {"payload_substring": "pizza", "mood": "happy", "receiver": "mom"},
            "reply_body": happy_pizza_reply,
        },
        {
            "match": {"payload_substring": "pizza", "mood": "sad", "receiver": "friend"},
            "reply_body": sad_pizza_reply,
        },
        {
            "match": {"payload_substring": ":boy: :mouth: :pizza:"},
            "reply_body": emoji_combo_reply,
        },
    ]
    (TESTDATA / "mock_llm.json").write_text(
        json.dumps(llm_manifest, indent=2, ensure_ascii=False) + "\n", "utf-8"
    )

    tts_manifest = {
        "capabilities": {
            "voice_cloning": True,
            "synthesis": "tone: 200 Hz + 50 Hz per mood index, 0.1 s per word",
        },
        "default_voice_id": "default",
    }
    (TESTDATA / "mock_tts.json").write_text(json.dumps(tts_manifest, indent=2) + "\n", "utf-8")

    # hand-authored extended-grapheme-cluster expectations (UAX #29);
    # the tokenizer must reproduce these exactly
    oracle = [
        {"input": "👩🏽‍🚀", "clusters": ["👩🏽‍🚀"]},
        {"input": "👨‍👩‍👧‍👦", "clusters": ["👨‍👩‍👧‍👦"]},
        {"input": "👦👄🍕", "clusters": ["👦", "👄", "🍕"]},
        {"input": "🇨🇦🇺🇸", "clusters": ["🇨🇦", "🇺🇸"]},
        {"input": "🇦🇧🇨", "clusters": ["🇦🇧", "🇨"]},
        {"input": "🇦", "clusters": ["🇦"]},
        {"input": "1️⃣2️⃣", "clusters": ["1️⃣", "2️⃣"]},
        {"input": "#️⃣", "clusters": ["#️⃣"]},
        {"input": "é", "clusters": ["é"]},
        {"input": "é", "clusters": ["é"]},
        {"input": "한국", "clusters": ["한", "국"]},
        {"input": "각", "clusters": ["각"]},
        {"input": "a\r\nb", "clusters": ["a", "\r\n", "b"]},
        {"input": "🏳️‍🌈", "clusters": ["🏳️‍🌈"]},
        {"input": "🏴󠁧󠁢󠁥󠁮󠁧󠁿", "clusters": ["🏴󠁧󠁢󠁥󠁮󠁧󠁿"]},
        {"input": "👍🏻👍🏿", "clusters": ["👍🏻", "👍🏿"]},
        {"input": "🧑‍🤝‍🧑", "clusters": ["🧑‍🤝‍🧑"]},
        {"input": "a‍b", "clusters": ["a‍", "b"]},
        {"input": "🙂‍🙂", "clusters": ["🙂‍🙂"]},
        {"input": "hi🍕", "clusters": ["h", "i", "🍕"]},
    ]
    (TESTDATA / "grapheme_oracle.json").write_text(
        json.dumps(oracle, indent=2, ensure_ascii=False) + "\n", "utf-8"
    )

    goldens = {
        "system_prompt_sha256": "6de924e40af30e4455ddc4f7a9784497c0a0e49de8ff670725b187c4ee53cd82",
        "happy_voice_id": happy_voice_id,
        "audio": files,
    }
    (TESTDATA / "goldens.json").write_text(json.dumps(goldens, indent=2) + "\n", "utf-8")

    print(f"wrote {len(files)} audio fixtures; happy voice id {happy_voice_id}")


if __name__ == "__main__":
    main()
