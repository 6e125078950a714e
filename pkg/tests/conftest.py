import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from arann.bundle import load_bundle_file

FIXTURE_DIR = Path(__file__).parent.parent / "fixtures"
DATA_DIR = Path(__file__).parent / "data"


def fixture_names():
    return sorted(p.name for p in FIXTURE_DIR.glob("*.json"))


def load_fixture(name):
    return load_bundle_file(FIXTURE_DIR / name)


@pytest.fixture(scope="session")
def fixture_bundles():
    return [(name, load_fixture(name)) for name in fixture_names()]


@pytest.fixture()
def sample_bundle():
    return load_fixture("sample-article.json")
