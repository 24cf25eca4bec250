import numpy as np
import pytest
from dfa_util import random_complex

from gaussian_dfa.real_linear import (RealLinearMap, RealSubspace,
                                      complex_structure, embed, intersect,
                                      orth_complement, real_span,
                                      real_symplectic_form,
                                      relative_complement, subspace_equal,
                                      subspace_sum, symplectic_complement,
                                      symplectic_form, symplectic_gram,
                                      unembed)

E1 = np.array([1, 0], dtype=complex)
E2 = np.array([0, 1], dtype=complex)


def _random_subspace(rng, n, k):
    return real_span(rng.standard_normal((2 * n, k)), n=n)


@pytest.mark.linalg
def test_embed_layout():
    np.testing.assert_array_equal(embed(E1), [1, 0, 0, 0])
    np.testing.assert_array_equal(embed(1j * E1), [0, 0, 1, 0])


@pytest.mark.linalg
def test_complex_structure_is_multiplication_by_i(rng):
    z = random_complex(rng, 3)
    J = complex_structure(3)
    np.testing.assert_allclose(J @ embed(z), embed(1j * z))
    np.testing.assert_allclose(unembed(embed(z)), z)


@pytest.mark.linalg
def test_real_span_dimensions(rng):
    assert real_span([embed(E1), embed(1j * E1), embed(E1 + 1j * E1)]).dim == 2
    assert real_span([embed(E1)]).dim == 1
    vectors = [embed(v) for v in random_complex(rng, 100, 2)]
    assert real_span(vectors).dim == 4
    assert real_span([], n=2).dim == 0
    assert real_span([np.zeros(4)]).dim == 0
    with pytest.raises(ValueError):
        real_span([])


@pytest.mark.linalg
@pytest.mark.parametrize("seed", range(5))
def test_real_span_ignores_input_order(seed):
    rng = np.random.default_rng(seed)
    independent = [embed(v) for v in random_complex(rng, 3, 3)]
    # repeats and a combination keep the set rank deficient
    vectors = independent + [independent[0], independent[1] - independent[2]]
    shuffled = [vectors[i] for i in rng.permutation(len(vectors))]
    forward = real_span(vectors, n=3)
    assert forward.dim == 3
    assert subspace_equal(forward, real_span(shuffled, n=3))
    assert subspace_equal(forward, real_span(vectors[::-1], n=3))


@pytest.mark.linalg
def test_real_span_basis_is_orthonormal(rng):
    S = _random_subspace(rng, 3, 4)
    np.testing.assert_allclose(S.basis.T @ S.basis, np.eye(4), atol=1e-12)


@pytest.mark.linalg
def test_orth_complement(rng):
    for k in range(7):
        S = _random_subspace(rng, 3, k)
        C = orth_complement(S)
        assert S.dim + C.dim == 6
        np.testing.assert_allclose(S.basis.T @ C.basis, 0, atol=1e-12)


@pytest.mark.linalg
def test_intersect_example():
    A = RealSubspace.from_complex([E1, 1j * E1])
    B = RealSubspace.from_complex([1j * E1, E2])
    meet = intersect(A, B)
    assert meet.dim == 1
    assert meet.contains(embed(1j * E1))
    assert subspace_equal(intersect(A, A), A)


@pytest.mark.linalg
def test_intersect_planted_vector(rng):
    v = rng.standard_normal(6)
    A = real_span(np.column_stack([v, rng.standard_normal((6, 2))]))
    B = real_span(np.column_stack([v, rng.standard_normal((6, 1))]))
    meet = intersect(A, B)
    assert meet.dim == 1
    assert meet.distance(v) < 1e-10 * np.linalg.norm(v)
    assert intersect(B, A).dim == meet.dim


@pytest.mark.linalg
def test_intersect_with_trivial_subspaces(rng):
    A = _random_subspace(rng, 2, 2)
    assert intersect(A, RealSubspace.zero(2)).dim == 0
    assert subspace_equal(intersect(A, RealSubspace.full(2)), A)


@pytest.mark.linalg
def test_subspace_sum_and_relative_complement(rng):
    A = _random_subspace(rng, 3, 2)
    B = _random_subspace(rng, 3, 2)
    total = subspace_sum(A, B)
    assert total.dim == 4
    rest = relative_complement(total, A)
    assert rest.dim == 2
    np.testing.assert_allclose(A.basis.T @ rest.basis, 0, atol=1e-10)
    assert subspace_equal(subspace_sum(A, rest), total)


@pytest.mark.linalg
def test_symplectic_form(rng):
    assert symplectic_form(E1, 1j * E1) == pytest.approx(1.0)
    assert symplectic_form(E1, E2) == 0.0
    z, w = random_complex(rng, 3), random_complex(rng, 3)
    assert symplectic_form(z, w) == pytest.approx(-symplectic_form(w, z))
    assert real_symplectic_form(embed(z), embed(w)) == pytest.approx(
        symplectic_form(z, w))
    J = complex_structure(3)
    assert (J @ embed(z)) @ embed(w) == pytest.approx(symplectic_form(z, w))


@pytest.mark.linalg
def test_symplectic_complement_examples():
    # a real line in C is Lagrangian
    line = RealSubspace.from_complex([np.array([1.0 + 0j])])
    assert subspace_equal(symplectic_complement(line), line)

    S = RealSubspace.from_complex([E1, 1j * E1])
    Sc = symplectic_complement(S)
    assert subspace_equal(Sc, RealSubspace.from_complex([E2, 1j * E2]))


@pytest.mark.linalg
def test_double_symplectic_complement(rng):
    for k in range(7):
        S = _random_subspace(rng, 3, k)
        Sc = symplectic_complement(S)
        assert S.dim + Sc.dim == 6
        np.testing.assert_allclose(
            (complex_structure(3) @ S.basis).T @ Sc.basis, 0, atol=1e-10)
        assert subspace_equal(symplectic_complement(Sc), S)


@pytest.mark.linalg
def test_symplectic_gram_is_antisymmetric(rng):
    S = _random_subspace(rng, 2, 3)
    gram = symplectic_gram(S)
    np.testing.assert_allclose(gram, -gram.T, atol=1e-12)


@pytest.mark.linalg
def test_subspace_equal(rng):
    S = _random_subspace(rng, 3, 3)
    rotation, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    assert subspace_equal(S, RealSubspace(3, S.basis @ rotation))
    assert not subspace_equal(S, _random_subspace(rng, 3, 3))
    assert not subspace_equal(S, _random_subspace(rng, 3, 2))
    assert subspace_equal(RealSubspace.zero(3), RealSubspace.zero(3))


@pytest.mark.linalg
def test_real_linear_map_from_complex_pair(rng):
    A = random_complex(rng, 3, 3)
    B = random_complex(rng, 3, 3)
    z = random_complex(rng, 3)
    op = RealLinearMap.from_complex_pair(A, B)
    np.testing.assert_allclose(op(z), A @ z + B @ z.conj(), atol=1e-12)
    with pytest.raises(ValueError):
        RealLinearMap(1, np.full((2, 2), np.inf))


@pytest.mark.linalg
def test_real_linear_map_image():
    # multiplication by i maps the real axis onto the imaginary axis
    op = RealLinearMap.from_complex_pair(1j * np.eye(1), np.zeros((1, 1)))
    image = op.image(RealSubspace.from_complex([np.array([1.0 + 0j])]))
    assert image.contains(embed(np.array([1j])))
