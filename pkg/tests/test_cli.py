import json
import signal
import socket
import subprocess
import sys
import time
from pathlib import Path

import pytest

from speakease.cli import EXIT_ERROR, EXIT_OK, EXIT_USAGE, main

from .conftest import REPO_ROOT, TESTDATA


@pytest.fixture(autouse=True)
def run_from_repo_root(monkeypatch):
    # default config uses repo-relative manifest paths
    monkeypatch.chdir(REPO_ROOT)


@pytest.fixture
def store_dir(tmp_path):
    return str(tmp_path / "store")


@pytest.fixture
def john_store(store_dir, capsys):
    assert main(["--store", store_dir, "profile", "create", "John", "--id", "john"]) == EXIT_OK
    capsys.readouterr()
    return store_dir


def run_cli(store_dir, capsys, *args):
    code = main(["--store", store_dir, *args])
    return code, capsys.readouterr().out


def golden(name: str) -> str:
    return (TESTDATA / "cli" / name).read_text("utf-8")


class TestRun:
    def test_text_pizza_golden(self, john_store, capsys):
        code, out = run_cli(
            john_store, capsys,
            "run", "--profile", "john", "--text", "A wuand...a...izza.",
            "--receiver", "mom", "--mood", "happy",
        )
        assert code == EXIT_OK
        assert out == golden("run_text_pizza.golden.txt")
        assert "Mom, I'm so happy to eat pizza tonight!" in out

    def test_empty_text_golden(self, john_store, capsys):
        code, out = run_cli(john_store, capsys, "run", "--profile", "john", "--text", "")
        assert code == EXIT_OK
        assert out == golden("run_empty.golden.txt")
        assert out.splitlines() == ["1. ", "2. ", "3. ", "4. "]

    def test_emoji_golden(self, john_store, capsys):
        code, out = run_cli(
            john_store, capsys,
            "run", "--profile", "john", "--emoji", "👦👄🍕", "--mood", "neutral",
        )
        assert code == EXIT_OK
        assert out == golden("run_emoji.golden.txt")
        assert len(out.splitlines()) == 4

    def test_byte_stable_across_runs(self, john_store, capsys):
        args = ("run", "--profile", "john", "--text", "hello", "--mood", "neutral")
        _, first = run_cli(john_store, capsys, *args)
        _, second = run_cli(john_store, capsys, *args)
        assert first == second

    def test_select_writes_wav_and_audit(self, john_store, capsys, tmp_path):
        import wave

        from speakease.storage import AuditLedger

        for i in range(1, 6):
            run_cli(john_store, capsys, "voicebank", "record", "--profile", "john",
                    "--mood", "happy", "--index", str(i),
                    "--audio", str(TESTDATA / "audio" / f"bank_happy_{i}.wav"))
        code, out = run_cli(john_store, capsys, "voicebank", "finalize",
                            "--profile", "john", "--mood", "happy")
        assert code == EXIT_OK

        out_wav = tmp_path / "spoken.wav"
        code, out = run_cli(
            john_store, capsys,
            "run", "--profile", "john",
            "--audio", str(TESTDATA / "audio" / "john_pizza_dysarthric.wav"),
            "--receiver", "mom", "--mood", "happy",
            "--select", "1", "--out", str(out_wav),
        )
        assert code == EXIT_OK
        assert "spoke 1: Mom, I'm so happy to eat pizza tonight!" in out

        with wave.open(str(out_wav)) as w:
            duration = w.getnframes() / w.getframerate()
        assert abs(duration - 0.8) < 0.001  # 8 words at 0.1 s/word

        ledger = AuditLedger(Path(john_store) / "audit" / "john.log")
        assert len(ledger.records()) == 1
        assert ledger.verify() == (True, None)

    def test_unknown_profile_exit_3(self, store_dir, capsys):
        code, _ = run_cli(store_dir, capsys, "run", "--profile", "ghost", "--text", "hi")
        assert code == EXIT_ERROR

    def test_provider_error_exit_3_with_kind(self, john_store, capsys):
        # audio absent from the mock manifest -> provider Malformed fault
        code = main(["--store", john_store, "run", "--profile", "john",
                     "--audio", str(TESTDATA / "audio" / "bank_sad_1.wav")])
        captured = capsys.readouterr()
        assert code == EXIT_ERROR
        assert "Malformed" in captured.err

    def test_usage_errors_exit_2(self, john_store, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--store", john_store, "run", "--profile", "john"])  # no input flag
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["--store", john_store, "run", "--profile", "john",
                  "--text", "a", "--emoji", "b"])  # two input flags
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["--store", john_store, "run", "--profile", "john",
                  "--text", "a", "--mood", "grumpy"])  # unknown mood
        assert exc.value.code == 2

    def test_select_without_out_exit_2(self, john_store, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--store", john_store, "run", "--profile", "john",
                  "--text", "a", "--select", "1"])
        assert exc.value.code == 2


class TestVoicebankCli:
    def test_finalize_with_five_prints_voice_id(self, john_store, capsys, goldens):
        for i in range(1, 6):
            run_cli(john_store, capsys, "voicebank", "record", "--profile", "john",
                    "--mood", "happy", "--index", str(i),
                    "--audio", str(TESTDATA / "audio" / f"bank_happy_{i}.wav"))
        code, out = run_cli(john_store, capsys, "voicebank", "finalize",
                            "--profile", "john", "--mood", "happy")
        assert code == EXIT_OK
        assert out.strip() == goldens["happy_voice_id"]

    def test_finalize_with_four_exit_3(self, john_store, capsys):
        for i in range(1, 5):
            run_cli(john_store, capsys, "voicebank", "record", "--profile", "john",
                    "--mood", "happy", "--index", str(i),
                    "--audio", str(TESTDATA / "audio" / f"bank_happy_{i}.wav"))
        code = main(["--store", john_store, "voicebank", "finalize",
                     "--profile", "john", "--mood", "happy"])
        captured = capsys.readouterr()
        assert code == EXIT_ERROR
        assert "IncompleteSession" in captured.err

    def test_start_prints_script(self, john_store, capsys):
        code, out = run_cli(john_store, capsys, "voicebank", "start",
                            "--profile", "john", "--mood", "sad")
        assert code == EXIT_OK
        lines = out.splitlines()
        assert len(lines) == 6  # session id + 5 sentences
        assert all(line.startswith(f"{i}. ") for i, line in enumerate(lines[1:], start=1))


class TestEval:
    def make_corpus(self, tmp_path, lines):
        corpus = tmp_path / "corpus.jsonl"
        corpus.write_text("\n".join(json.dumps(line) for line in lines) + "\n", "utf-8")
        return str(corpus)

    def test_validity_and_gold_rates(self, john_store, capsys, tmp_path):
        corpus = self.make_corpus(tmp_path, [
            {"input": "I want to eat pizza", "receiver": "mom", "mood": "happy",
             "gold": "Mom, I'm so happy to eat pizza tonight!"},
            {"input": "I want to eat pizza", "receiver": "friend", "mood": "sad",
             "gold": "I feel down today, maybe pizza will help."},
            {"input": "anything else", "mood": "neutral"},
        ])
        report_path = tmp_path / "report.json"
        code, out = run_cli(john_store, capsys, "eval", corpus, "--report", str(report_path))
        assert code == EXIT_OK
        report = json.loads(report_path.read_text())
        assert report["validity_rate"] == 1.0
        assert report["gold_lines"] == 2 and report["gold_hit_rate"] == 1.0

    def test_empty_input_line_counts_valid(self, john_store, capsys, tmp_path):
        corpus = self.make_corpus(tmp_path, [
            {"input": "", "mood": "neutral"},
            {"input": "hello", "mood": "happy"},
        ])
        report_path = tmp_path / "report.json"
        code, _ = run_cli(john_store, capsys, "eval", corpus, "--report", str(report_path))
        assert code == EXIT_OK
        assert json.loads(report_path.read_text())["validity_rate"] == 1.0

    def test_malformed_corpus_exit_2(self, john_store, capsys, tmp_path):
        corpus = tmp_path / "bad.jsonl"
        corpus.write_text("this is not json\n", "utf-8")
        code = main(["--store", john_store, "eval", str(corpus),
                     "--report", str(tmp_path / "r.json")])
        assert code == EXIT_USAGE

    def test_missing_required_keys_exit_2(self, john_store, capsys, tmp_path):
        corpus = self.make_corpus(tmp_path, [{"mood": "happy"}])
        code = main(["--store", john_store, "eval", str(corpus),
                     "--report", str(tmp_path / "r.json")])
        assert code == EXIT_USAGE


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class TestServe:
    def test_serve_then_get_profile(self, tmp_path):
        import requests

        store = str(tmp_path / "store")
        subprocess.run(
            [sys.executable, "-m", "speakease.cli", "--store", store,
             "profile", "create", "John", "--id", "john"],
            cwd=REPO_ROOT, check=True, capture_output=True,
        )
        port = free_port()
        server = subprocess.Popen(
            [sys.executable, "-m", "speakease.cli", "--store", store,
             "serve", "--port", str(port)],
            cwd=REPO_ROOT, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
        )
        try:
            deadline = time.monotonic() + 15
            last_error = None
            while time.monotonic() < deadline:
                try:
                    response = requests.get(
                        f"http://127.0.0.1:{port}/v1/profiles/john", timeout=1
                    )
                    assert response.status_code == 200
                    assert response.json()["display_name"] == "John"
                    break
                except requests.ConnectionError as exc:
                    last_error = exc
                    time.sleep(0.2)
            else:
                pytest.fail(f"server never came up: {last_error}")
        finally:
            server.send_signal(signal.SIGINT)
            try:
                server.wait(timeout=10)
            except subprocess.TimeoutExpired:
                server.kill()
