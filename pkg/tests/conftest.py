import json
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES = REPO_ROOT / "fixtures"
REFERENCE = REPO_ROOT / "reference"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def reference_dir() -> Path:
    return REFERENCE


@pytest.fixture(scope="session")
def spleeter_card_bytes() -> bytes:
    return (FIXTURES / "spleeter_card.json").read_bytes()


def load_json(path: Path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)
