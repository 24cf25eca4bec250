import os
from pathlib import Path

import numpy as np
import pytest

from gaussian_dfa.model import GaussianModel

FIXTURES_DIR = Path(__file__).parent / "fixtures"
MODELS_DIR = FIXTURES_DIR / "models"
EXPECTED_DIR = FIXTURES_DIR / "expected"

TABLE_ONE = {
    "single_kraus_q_d3": (1, 0, 2),
    "single_kraus_q_iq_d3": (2, 0, 1),
    "single_kraus_a_d3": (0, 1, 2),
}


def _get_or_default(env: str, default: str) -> str:
    """Handle empty strings in env var"""
    val = os.environ.get(env, default)
    if not val:
        val = default
    return val


def get_test_seed() -> int:
    return int(_get_or_default("GAUSS_DFA_SEED", "0"))


def get_random_model_count(default: int = 200) -> int:
    return int(_get_or_default("GAUSS_DFA_TEST_RANDOM_MODELS", str(default)))


# get fixture names from env or default to every shipped fixture.
# Multiple fixtures can be given as a comma separated list in
# GAUSS_DFA_TEST_FIXTURE_LIST
def get_fixture_list(oracle_only: bool = False):
    shipped = sorted(p.stem for p in MODELS_DIR.glob("*.json"))
    user_list = _get_or_default("GAUSS_DFA_TEST_FIXTURE_LIST",
                                ",".join(shipped))

    fixtures = []
    for name in user_list.split(","):
        name = name.strip()
        marks = []
        if name.startswith("single_kraus"):
            marks = [pytest.mark.model]
        if oracle_only and name not in ORACLE_FIXTURES:
            continue
        fixtures.append(pytest.param(name, marks=marks, id=name))
    return fixtures


# fixtures small enough for the truncated Fock space oracle
ORACLE_FIXTURES = {
    "lossy_oscillator",
    "damped_rotating_oscillator",
    "position_coupled_pair",
    "two_boson_commuting",
}


def random_complex(rng: np.random.Generator, *shape: int) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_model(rng: np.random.Generator,
                 d: int,
                 m: int,
                 hamiltonian: bool = True,
                 sparsity: float = 0.0) -> GaussianModel:
    """Valid random model. With `sparsity` > 0 that fraction of the Kraus
    entries is zeroed, which produces nontrivial structure more often."""
    V = random_complex(rng, m, d)
    U = random_complex(rng, m, d)
    if sparsity > 0:
        V[rng.random((m, d)) < sparsity] = 0
        U[rng.random((m, d)) < sparsity] = 0
        # every Kraus operator stays nonzero
        for row in range(m):
            if not (np.any(V[row]) or np.any(U[row])):
                V[row, row % d] = 1.0
    if hamiltonian:
        A = random_complex(rng, d, d)
        omega = (A + A.conj().T) / 2
        K = random_complex(rng, d, d)
        kappa = (K + K.T) / 2
        zeta = random_complex(rng, d)
    else:
        omega = np.zeros((d, d))
        kappa = np.zeros((d, d))
        zeta = np.zeros(d)
    return GaussianModel(omega, kappa, zeta, V, U, name=f"random-d{d}-m{m}")


def get_random_model_list(max_d: int = 4, hamiltonian: bool = True):
    """Seeded random models as pytest params, sized by
    GAUSS_DFA_TEST_RANDOM_MODELS."""
    rng = np.random.default_rng(get_test_seed())
    params = []
    for k in range(get_random_model_count()):
        d = int(rng.integers(1, max_d + 1))
        m = int(rng.integers(1, 2 * d + 1))
        sparsity = 0.5 if k % 2 else 0.0
        model = random_model(rng, d, m, hamiltonian, sparsity)
        params.append(pytest.param(model, id=f"random{k}-d{d}-m{m}"))
    return params
