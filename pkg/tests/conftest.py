from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"
CORPUS = ROOT / "corpus" / "conformance"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def scenarios():
    return SCENARIOS
