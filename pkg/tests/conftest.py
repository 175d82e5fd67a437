# ================================================================================================
# 🧪 SHARED FIXTURES
# ================================================================================================

from pathlib import Path

import numpy as np
import pytest

from funcint.core.config import get_settings
from funcint.domain.entities.mesh import build_interval_mesh
from funcint.domain.services.models.string import StringParams, build_string

SAMPLES_DIR = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test sees settings built from a clean environment."""
    for name in ("FUNCINT_LOG_LEVEL", "FUNCINT_LOG_FORMAT", "FUNCINT_MAX_WORKERS", "FUNCINT_DEFAULT_SEED"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def samples_dir() -> Path:
    return SAMPLES_DIR


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def two_element_mesh():
    """🕸️ [0, 0.5, 1] Line2 mesh."""
    return build_interval_mesh(1.0, [0.0, 0.5, 1.0])


@pytest.fixture
def loaded_string_form(two_element_mesh):
    """String L = sigma = 1, f = 1, both ends at 0: K = [4], b = [-0.5], c = 0."""
    return build_string(StringParams(L=1.0, sigma=1.0, f=1.0), two_element_mesh)
