import json
from pathlib import Path

import pytest

from speakease.domain import Mood
from speakease.engine import SpeakEaseEngine
from speakease.providers.base import CallRecorder, ProviderConfig
from speakease.providers.mocks import MockASR, MockLLM, MockTTS
from speakease.storage import Store

REPO_ROOT = Path(__file__).resolve().parent.parent
TESTDATA = REPO_ROOT / "testdata"


def load_json(name: str):
    return json.loads((TESTDATA / name).read_text("utf-8"))


def audio_bytes(name: str) -> bytes:
    return (TESTDATA / "audio" / name).read_bytes()


@pytest.fixture(scope="session")
def goldens():
    return load_json("goldens.json")


@pytest.fixture(scope="session")
def asr_manifest():
    return load_json("mock_asr.json")


@pytest.fixture(scope="session")
def llm_manifest():
    return load_json("mock_llm.json")


@pytest.fixture
def mock_asr(asr_manifest):
    return MockASR(asr_manifest, recorder=CallRecorder())


@pytest.fixture
def mock_llm(llm_manifest):
    return MockLLM(llm_manifest, recorder=CallRecorder())


@pytest.fixture
def mock_tts():
    return MockTTS(load_json("mock_tts.json"), recorder=CallRecorder())


@pytest.fixture
def store(tmp_path):
    return Store(tmp_path / "store")


@pytest.fixture
def engine(store, mock_asr, mock_llm, mock_tts):
    return SpeakEaseEngine(store, mock_asr, mock_llm, mock_tts)


@pytest.fixture
def john(engine):
    """A profile with no banked voices yet."""
    return engine.create_profile("John", profile_id="john")


def bank_voice(engine: SpeakEaseEngine, profile_id: str, mood: Mood, prefix: str = "bank_happy"):
    """Run the full banking flow with the committed fixtures."""
    session = engine.voicebank.start_session(profile_id, mood)
    for i in range(1, 6):
        session = engine.voicebank.submit_sample(session, i, audio_bytes(f"{prefix}_{i}.wav"))
    return engine.voicebank.finalize_voice(session)


@pytest.fixture
def john_with_happy_voice(engine, john):
    bank_voice(engine, john.profile_id, Mood.HAPPY, "bank_happy")
    return engine.store.load_profile(john.profile_id)
