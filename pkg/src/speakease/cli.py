"""Command-line driver: one-shot pipeline runs, voice banking, the HTTP
server, and batch evaluation.

Providers default to the deterministic mocks (hermetic by default); a TOML
config file can point at manifests, a different store root, or the real
HTTP adapters. Exit codes: 0 success, 2 usage/corpus errors, 3 domain or
provider errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .domain import ContextSetting, InputEvent, Mood, parse_mood, parse_receiver
from .engine import SpeakEaseEngine
from .errors import DomainError, ProviderError, SpeakEaseError
from .inputs import ingest_text
from .interpret import interpret_input
from .providers.base import ProviderConfig
from .providers.http import HttpASRProvider, HttpLLMProvider, HttpTTSProvider, config_from_env
from .providers.mocks import MockASR, MockLLM, MockTTS
from .storage import Store
from .wavio import read_wav

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ERROR = 3

MOOD_NAMES = [m.value for m in Mood]

DEFAULT_CONFIG = {
    "store": {"root": "data"},
    "providers": {
        "mode": "mock",
        "asr_manifest": "testdata/mock_asr.json",
        "llm_manifest": "testdata/mock_llm.json",
        "tts_manifest": "testdata/mock_tts.json",
        "timeout_ms": 30_000,
        "cache_speech": True,
    },
    "server": {
        "host": "127.0.0.1",
        "port": 8077,
        "cors_origin": "*",
        "session_idle_seconds": 1800,
    },
}


def load_config(path: Optional[str]) -> dict:
    config = json.loads(json.dumps(DEFAULT_CONFIG))  # deep copy
    if path:
        with open(path, "rb") as f:
            loaded = tomllib.load(f)
        for section, values in loaded.items():
            config.setdefault(section, {}).update(values)
    return config


def _load_manifest(path: str):
    p = Path(path)
    if not p.exists():
        return []
    with open(p, encoding="utf-8") as f:
        return json.load(f)


def build_engine(config: dict, store_root: Optional[str] = None) -> SpeakEaseEngine:
    providers = config["providers"]
    store = Store(Path(store_root or config["store"]["root"]))
    if providers["mode"] == "real":
        timeout = int(providers["timeout_ms"])
        asr = HttpASRProvider(config_from_env("asr", timeout))
        llm = HttpLLMProvider(config_from_env("llm", timeout))
        tts = HttpTTSProvider(config_from_env("tts", timeout))
    else:
        pconfig = ProviderConfig(timeout_ms=int(providers["timeout_ms"]))
        asr = MockASR(_load_manifest(providers["asr_manifest"]), config=pconfig)
        llm = MockLLM(_load_manifest(providers["llm_manifest"]), config=pconfig)
        tts_manifest = _load_manifest(providers["tts_manifest"])
        tts = MockTTS(tts_manifest if isinstance(tts_manifest, dict) else None, config=pconfig)
    return SpeakEaseEngine(store, asr, llm, tts, cache_speech=bool(providers["cache_speech"]))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="speakease")
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--store", help="override the store root directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p_profile = sub.add_parser("profile", help="manage user profiles")
    profile_sub = p_profile.add_subparsers(dest="profile_command", required=True)
    p_create = profile_sub.add_parser("create")
    p_create.add_argument("display_name")
    p_create.add_argument("--id", dest="profile_id")

    p_run = sub.add_parser("run", help="run the pipeline once")
    p_run.add_argument("--profile", required=True)
    group = p_run.add_mutually_exclusive_group(required=True)
    group.add_argument("--text")
    group.add_argument("--emoji")
    group.add_argument("--audio", help="WAV file to transcribe")
    p_run.add_argument("--receiver")
    p_run.add_argument("--mood", choices=MOOD_NAMES, default="neutral")
    p_run.add_argument("--select", type=int, choices=[1, 2, 3, 4],
                       help="speak this interpretation (displayed numbering)")
    p_run.add_argument("--out", help="WAV output path (required with --select)")

    p_bank = sub.add_parser("voicebank", help="record and register voices")
    bank_sub = p_bank.add_subparsers(dest="bank_command", required=True)
    for name in ("start", "record", "finalize"):
        p = bank_sub.add_parser(name)
        p.add_argument("--profile", required=True)
        p.add_argument("--mood", choices=MOOD_NAMES, required=True)
        if name == "record":
            p.add_argument("--index", type=int, choices=[1, 2, 3, 4, 5], required=True)
            p.add_argument("--audio", required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int)
    p_serve.add_argument("--host")

    p_eval = sub.add_parser("eval", help="batch-evaluate a JSONL corpus")
    p_eval.add_argument("corpus")
    p_eval.add_argument("--report", required=True)

    return parser


def _cmd_profile(engine: SpeakEaseEngine, args) -> int:
    profile = engine.create_profile(args.display_name, profile_id=args.profile_id)
    print(profile.profile_id)
    return EXIT_OK


def _cmd_run(engine: SpeakEaseEngine, args, parser) -> int:
    if args.select is not None and not args.out:
        parser.error("--select requires --out")

    receiver = parse_receiver(args.receiver) if args.receiver else None
    context = ContextSetting(receiver=receiver, mood=parse_mood(args.mood))

    if args.audio is not None:
        audio = Path(args.audio).read_bytes()
        _, rate, _ = read_wav(audio)
        blob = engine.store.blobs.put(audio, media_type="audio/wav")
        event = InputEvent.voice(blob, rate)
    elif args.emoji is not None:
        event = InputEvent.emoji(args.emoji)
    else:
        event = InputEvent.text(args.text)

    interpretations = engine.handle_input(args.profile, context, event)
    for number, item in enumerate(interpretations.items, start=1):
        print(f"{number}. {item}")

    if args.select is not None:
        turn, artifact = engine.select(interpretations.request_id, args.select - 1)
        Path(args.out).write_bytes(engine.store.blobs.get(artifact.audio.sha256))
        print(f"spoke {args.select}: {turn.spoken_text}")
        print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_voicebank(engine: SpeakEaseEngine, args) -> int:
    mood = parse_mood(args.mood)
    bank = engine.voicebank
    if args.bank_command == "start":
        session = bank.start_session(args.profile, mood)
        print(session.session_id)
        for number, sentence in enumerate(session.script, start=1):
            print(f"{number}. {sentence}")
        return EXIT_OK
    if args.bank_command == "record":
        session = bank.get_session(args.profile, mood)
        if session is None or session.state not in ("collecting",):
            session = bank.start_session(args.profile, mood)
        audio = Path(args.audio).read_bytes()
        session = bank.submit_sample(session, args.index, audio)
        print(f"recorded {len(session.samples)}/5 ({session.state})")
        return EXIT_OK
    session = bank.get_session(args.profile, mood)
    if session is None:
        raise DomainError("no banking session to finalize; record samples first")
    voice = bank.finalize_voice(session)
    print(voice.provider_voice_id)
    return EXIT_OK


def _cmd_serve(config: dict, engine: SpeakEaseEngine, args) -> int:
    import uvicorn

    from .api import create_app

    server = config["server"]
    app = create_app(
        engine,
        session_idle_seconds=float(server["session_idle_seconds"]),
        cors_origin=server.get("cors_origin"),
    )
    uvicorn.run(
        app,
        host=args.host or server["host"],
        port=args.port or int(server["port"]),
        log_level="warning",
    )
    return EXIT_OK


def _cmd_eval(engine: SpeakEaseEngine, args) -> int:
    lines = []
    try:
        with open(args.corpus, encoding="utf-8") as f:
            for raw in f:
                raw = raw.strip()
                if not raw:
                    continue
                record = json.loads(raw)
                if "input" not in record or "mood" not in record:
                    raise ValueError("corpus lines need at least input and mood")
                lines.append(record)
    except (OSError, ValueError) as exc:
        print(f"malformed corpus: {exc}", file=sys.stderr)
        return EXIT_USAGE

    valid = 0
    gold_lines = 0
    gold_hits = 0
    for record in lines:
        receiver = record.get("receiver")
        context = ContextSetting(
            receiver=parse_receiver(receiver) if receiver else None,
            mood=parse_mood(record["mood"]),
        )
        try:
            result = interpret_input(ingest_text(record["input"]), context, engine.llm)
        except SpeakEaseError:
            result = None
        if result is not None:
            valid += 1
        if "gold" in record:
            gold_lines += 1
            if result is not None and record["gold"] in result.items:
                gold_hits += 1

    report = {
        "lines": len(lines),
        "valid_lines": valid,
        "validity_rate": (valid / len(lines)) if lines else 1.0,
        "gold_lines": gold_lines,
        "gold_hits": gold_hits,
        "gold_hit_rate": (gold_hits / gold_lines) if gold_lines else None,
    }
    Path(args.report).write_text(json.dumps(report, indent=2) + "\n", "utf-8")
    print(f"lines={report['lines']} validity_rate={report['validity_rate']:.3f}"
          + (f" gold_hit_rate={report['gold_hit_rate']:.3f}" if gold_lines else ""))
    return EXIT_OK


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
        engine = build_engine(config, store_root=args.store)
        if args.command == "profile":
            return _cmd_profile(engine, args)
        if args.command == "run":
            return _cmd_run(engine, args, parser)
        if args.command == "voicebank":
            return _cmd_voicebank(engine, args)
        if args.command == "serve":
            return _cmd_serve(config, engine, args)
        if args.command == "eval":
            return _cmd_eval(engine, args)
        parser.error(f"unknown command {args.command}")
    except ProviderError as exc:
        print(f"provider error {exc.kind}: {exc.detail}", file=sys.stderr)
        return EXIT_ERROR
    except SpeakEaseError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except FileNotFoundError as exc:
        print(f"file not found: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
