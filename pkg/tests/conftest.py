from pathlib import Path

import numpy as np
import pytest

from simnet import fixtures
from simnet.settings import get_settings

PROJECT_ROOT = Path(__file__).resolve().parents[1]
FIXTURE_DIR = PROJECT_ROOT / "fixtures"


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached per process; tests that patch the environment need a clean slate."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture
def toy3():
    return fixtures.toy3_similarity()


@pytest.fixture
def toy3p():
    return fixtures.toy3p_similarity()


@pytest.fixture
def sb():
    return fixtures.sb_similarity()


@pytest.fixture
def sb_joint():
    return fixtures.sb_joint()


@pytest.fixture
def mc3_joint():
    return fixtures.mc3_joint()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
