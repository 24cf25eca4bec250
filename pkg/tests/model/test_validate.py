import numpy as np
import pytest
from dfa_util import random_model

from gaussian_dfa.errors import ValidationFailed
from gaussian_dfa.model import (GaussianModel, check_minimality,
                                ensure_valid, lossy_oscillator,
                                minimal_representation, validate)


def _model(d, V, U, omega=None, kappa=None):
    omega = np.zeros((d, d)) if omega is None else omega
    kappa = np.zeros((d, d)) if kappa is None else kappa
    return GaussianModel(omega, kappa, np.zeros(d), V, U)


@pytest.mark.model
def test_lossy_oscillator_passes():
    report = validate(lossy_oscillator())
    assert report.passed
    assert report.failures() == []


@pytest.mark.model
def test_non_hermitian_omega_fails():
    model = _model(2, [[1, 0]], [[0, 0]], omega=np.array([[0, 1], [0, 0]]))
    report = validate(model)
    assert not report.passed
    assert [c.name for c in report.failures()] == ["omega_hermitian"]
    assert report.failures()[0].offending == [[0, 1]]


@pytest.mark.model
def test_non_symmetric_kappa_fails():
    model = _model(2, [[1, 0]], [[0, 0]], kappa=np.array([[0, 1j], [0, 0]]))
    assert [c.name for c in validate(model).failures()] == ["kappa_symmetric"]


@pytest.mark.model
def test_pure_hamiltonian_excluded():
    model = _model(1, [[0]], [[0]], omega=np.eye(1))
    report = validate(model)
    assert "kraus_nonzero" in [c.name for c in report.failures()]
    with pytest.raises(ValidationFailed) as excinfo:
        ensure_valid(model)
    assert excinfo.value.report is not None
    assert "kraus_nonzero" in str(excinfo.value)


@pytest.mark.model
def test_too_many_kraus_operators():
    model = _model(1, np.ones((3, 1)), np.zeros((3, 1)))
    assert "kraus_count" in [c.name for c in validate(model).failures()]
    assert not check_minimality(model)


@pytest.mark.model
def test_non_finite_entries():
    model = _model(1, [[np.nan]], [[0]])
    assert "finite" in [c.name for c in validate(model).failures()]


@pytest.mark.model
def test_minimality_examples():
    assert check_minimality(_model(2, [[1, 0]], [[0, 0]]))
    assert not check_minimality(_model(2, [[1, 0], [1, 0]], np.zeros((2, 2))))


@pytest.mark.model
def test_minimality_invariant_under_row_permutation(rng):
    for _ in range(20):
        d = int(rng.integers(1, 4))
        m = int(rng.integers(1, 2 * d + 1))
        model = random_model(rng, d, m)
        # repeat a row so some models are not minimal
        if m > 1 and rng.random() < 0.5:
            model.V[-1] = model.V[0]
            model.U[-1] = model.U[0]
        perm = rng.permutation(m)
        permuted = GaussianModel(model.omega, model.kappa, model.zeta,
                                 model.V[perm], model.U[perm])
        assert check_minimality(model) == check_minimality(permuted)


@pytest.mark.model
def test_minimal_representation_drops_redundant_rows():
    model = _model(2, [[1, 0], [1, 0]], np.zeros((2, 2)))
    reduced = minimal_representation(model)
    assert reduced.m == 1
    assert check_minimality(reduced)

    # sum_l L_l^* L_l and the cross terms only depend on the Gram matrix
    def gram(m):
        stacked = np.hstack([m.V.conj(), m.U])
        return stacked.conj().T @ stacked

    np.testing.assert_allclose(gram(reduced), gram(model), atol=1e-12)
