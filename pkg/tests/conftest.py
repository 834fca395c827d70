import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from loguru import logger

from corpus.synth import synth_corpus
from database.models import FrontendConfig

settings.register_profile("fast", max_examples=25, deadline=None)
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))

np.seterr(all="warn")


@pytest.fixture(autouse=True)
def quiet_logger():
    """Только предупреждения и выше, чтобы не засорять вывод pytest"""
    logger.remove()
    logger.add(lambda message: None, level="WARNING")
    yield
    logger.remove()


@pytest.fixture
def frontend() -> FrontendConfig:
    return FrontendConfig()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    """3 диктора, 8 с обучения, 2 тестовые фразы по 1.5 с"""
    out_dir = tmp_path_factory.mktemp("small_corpus")
    manifest = synth_corpus(out_dir, n_speakers=3, train_s=8, n_test=2, test_s=1.5, seed=11)
    return out_dir, manifest


@pytest.fixture(scope="session")
def default_corpus(tmp_path_factory):
    """Корпус по умолчанию: 10 дикторов, 60 с обучения, 5 x 2 с теста"""
    out_dir = tmp_path_factory.mktemp("default_corpus")
    return out_dir, synth_corpus(out_dir)
