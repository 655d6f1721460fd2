from pathlib import Path

import pytest

from gpdkit.config import get_settings
from gpdkit.core import examples

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    """Cada prueba parte de la configuración por defecto"""
    for key in ("GPDKIT_THREADS", "GPDKIT_LOG_LEVEL", "GPDKIT_REL_TOL", "GPDKIT_ABS_TOL", "GPDKIT_FLOAT_DIGITS"):
        monkeypatch.delenv(key, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def s4_decomposition():
    return examples.s4_decomposition()


@pytest.fixture(scope="session")
def s4_action():
    return examples.s4_action()


@pytest.fixture(scope="session")
def s4_fell_system():
    return examples.s4_fell_system()


@pytest.fixture(scope="session")
def semidirect():
    return examples.semidirect_pair()


@pytest.fixture(scope="session")
def cp_fixture():
    return examples.crossed_product_fixture()
