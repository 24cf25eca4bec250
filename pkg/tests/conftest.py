import json

import numpy as np
import pytest
from dfa_util import (EXPECTED_DIR, MODELS_DIR, get_test_seed,
                      random_model)

from gaussian_dfa.model import GaussianModel, load_model


def pytest_collection_modifyitems(config, items):
    """ Mark all tests in e2e directory"""
    for item in items:
        if "tests/e2e" in str(item.nodeid):
            item.add_marker(pytest.mark.e2e)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(get_test_seed())


@pytest.fixture()
def fixture_model():
    """
    Call fixture_model(name) to load tests/fixtures/models/<name>.json.
    """

    def _load(name: str) -> GaussianModel:
        return load_model(MODELS_DIR / f"{name}.json")

    return _load


@pytest.fixture()
def expected():
    """
    Call expected(name) to read tests/fixtures/expected/<name>.json.
    """

    def _read(name: str) -> dict:
        with open(EXPECTED_DIR / f"{name}.json", encoding="utf-8") as f:
            return json.load(f)

    return _read


@pytest.fixture()
def random_models(rng):
    """
    Call random_models(count, max_d) for seeded random valid models.
    """

    def _make(count: int, max_d: int = 4, hamiltonian: bool = True):
        models = []
        for _ in range(count):
            d = int(rng.integers(1, max_d + 1))
            m = int(rng.integers(1, 2 * d + 1))
            models.append(random_model(rng, d, m, hamiltonian))
        return models

    return _make


@pytest.fixture(autouse=True)
def quiet_perf_metrics(monkeypatch):
    # tests never write timing files unless they opt in
    monkeypatch.setenv("GAUSS_DFA_PERF_METRIC_LOGGING_ENABLED", "0")
