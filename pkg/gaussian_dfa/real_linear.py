"""Real-linear algebra on C^n viewed as R^2n.

Vectors are embedded as (Re z_1, ..., Re z_n, Im z_1, ..., Im z_n), so
multiplication by i is the constant matrix J = [[0, -I], [I, 0]].
"""
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.linalg

import gaussian_dfa.envs as envs

RealVectorRep = np.ndarray


def embed(z: np.ndarray) -> RealVectorRep:
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag], axis=0)


def unembed(r: RealVectorRep) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    n = r.shape[0] // 2
    return r[:n] + 1j * r[n:]


def complex_structure(n: int) -> np.ndarray:
    """The real 2n x 2n matrix of multiplication by i."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


def _span_tol(tol: Optional[float]) -> float:
    return envs.GAUSS_DFA_SPAN_TOL if tol is None else tol


@dataclass
class RealSubspace:
    n: int
    basis: np.ndarray
    tol: float = 1e-9

    def __post_init__(self):
        self.basis = np.asarray(self.basis, dtype=float).reshape(2 * self.n, -1)
        assert self.basis.shape[1] <= 2 * self.n

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def zero(cls, n: int, tol: float = 1e-9) -> "RealSubspace":
        return cls(n, np.zeros((2 * n, 0)), tol)

    @classmethod
    def full(cls, n: int, tol: float = 1e-9) -> "RealSubspace":
        return cls(n, np.eye(2 * n), tol)

    @classmethod
    def from_complex(cls,
                     vectors: Iterable[np.ndarray],
                     n: Optional[int] = None,
                     tol: Optional[float] = None) -> "RealSubspace":
        """Real span of complex vectors."""
        return real_span([embed(v) for v in vectors], tol=tol, n=n)

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def project(self, x: RealVectorRep) -> RealVectorRep:
        return self.basis @ (self.basis.T @ x)

    def distance(self, x: RealVectorRep) -> float:
        """Euclidean distance of x from the subspace."""
        return float(np.linalg.norm(x - self.project(x)))

    def contains(self, x: RealVectorRep, tol: Optional[float] = None) -> bool:
        tol = _span_tol(tol)
        return self.distance(x) <= tol * max(1.0, float(np.linalg.norm(x)))


@dataclass
class RealLinearMap:
    n: int
    mat: np.ndarray

    def __post_init__(self):
        self.mat = np.asarray(self.mat, dtype=float)
        assert self.mat.shape == (2 * self.n, 2 * self.n)
        if not np.all(np.isfinite(self.mat)):
            raise ValueError("real linear map has non-finite entries")

    @classmethod
    def from_complex_pair(cls, A: np.ndarray,
                          B: np.ndarray) -> "RealLinearMap":
        """The map z -> A z + B conj(z)."""
        A = np.asarray(A, dtype=complex)
        B = np.asarray(B, dtype=complex)
        mat = np.block([[A.real + B.real, -A.imag + B.imag],
                        [A.imag + B.imag, A.real - B.real]])
        return cls(A.shape[0], mat)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        """Apply to a complex vector."""
        return unembed(self.mat @ embed(z))

    def image(self, S: RealSubspace) -> RealSubspace:
        return real_span(self.mat @ S.basis, tol=S.tol, n=self.n)


def kernel(mat: np.ndarray, tol: float,
           scale: Optional[float] = None) -> np.ndarray:
    """Orthonormal basis of the null space of `mat`. Singular values up to
    tol * scale count as zero; `scale` defaults to the largest singular
    value."""
    mat = np.atleast_2d(mat)
    ncols = mat.shape[1]
    if mat.shape[0] == 0:
        return np.eye(ncols)
    _, svals, vh = scipy.linalg.svd(mat, full_matrices=True)
    if scale is None:
        scale = svals.max(initial=0.0)
    rank = int(np.sum(svals > tol * scale))
    return vh[rank:].conj().T


def real_span(vectors: Union[np.ndarray, Iterable[RealVectorRep]],
              tol: Optional[float] = None,
              n: Optional[int] = None) -> RealSubspace:
    """Orthonormal basis of the real span. Singular values at or below
    tol * sigma_max are dropped. An empty input gives the zero subspace of
    C^n."""
    tol = _span_tol(tol)
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        mat = vectors
    else:
        cols = [np.asarray(v, dtype=float) for v in vectors]
        if not cols:
            if n is None:
                raise ValueError("the dimension is needed to span nothing")
            return RealSubspace.zero(n, tol)
        mat = np.column_stack(cols)
    if n is None:
        n = mat.shape[0] // 2
    if mat.shape[0] != 2 * n:
        raise ValueError(f"expected vectors of length {2 * n}, got "
                         f"{mat.shape[0]}")
    if mat.shape[1] == 0 or not np.any(mat):
        return RealSubspace.zero(n, tol)
    return RealSubspace(n, scipy.linalg.orth(mat, rcond=tol), tol)


def subspace_sum(*subspaces: RealSubspace,
                 tol: Optional[float] = None) -> RealSubspace:
    n = subspaces[0].n
    return real_span(np.hstack([S.basis for S in subspaces]), tol=tol, n=n)


def orth_complement(S: RealSubspace) -> RealSubspace:
    if S.dim == 0:
        return RealSubspace.full(S.n, S.tol)
    if S.dim == 2 * S.n:
        return RealSubspace.zero(S.n, S.tol)
    return RealSubspace(S.n, kernel(S.basis.T, S.tol, scale=1.0), S.tol)


def relative_complement(within: RealSubspace,
                        sub: RealSubspace) -> RealSubspace:
    """Real-orthogonal complement of `sub` inside `within` (sub is assumed
    to be contained in within)."""
    if sub.dim == 0:
        return within
    residual = within.basis - sub.project(within.basis)
    result = real_span(residual, tol=within.tol, n=within.n)
    expected = within.dim - sub.dim
    if result.dim != expected:
        # fall back to the exact count of directions
        u, _, _ = scipy.linalg.svd(residual, full_matrices=False)
        result = RealSubspace(within.n, u[:, :max(expected, 0)], within.tol)
    return result


def intersect(A: RealSubspace,
              B: RealSubspace,
              tol: Optional[float] = None) -> RealSubspace:
    """Largest subspace contained in both A and B: the common null space of
    the complementary projectors I - P_A and I - P_B."""
    tol = _span_tol(tol)
    n = A.n
    if A.dim == 0 or B.dim == 0:
        return RealSubspace.zero(n, tol)
    if A.dim == 2 * n:
        return B
    if B.dim == 2 * n:
        return A
    eye = np.eye(2 * n)
    stacked = np.vstack([eye - A.projector(), eye - B.projector()])
    # projector singular values lie in [0, sqrt(2)], hence the fixed scale
    return RealSubspace(n, kernel(stacked, tol, scale=1.0), tol)


def symplectic_form(z: np.ndarray, w: np.ndarray) -> float:
    """Im<z, w>, conjugate linear in z."""
    return float(np.imag(np.vdot(z, w)))


def real_symplectic_form(x: RealVectorRep, y: RealVectorRep) -> float:
    """Im<z, w> in embedded coordinates: (J x) . y."""
    n = x.shape[0] // 2
    return float(x[:n] @ y[n:] - x[n:] @ y[:n])


def symplectic_gram(S: RealSubspace) -> np.ndarray:
    """Matrix of the symplectic form on the basis of S."""
    J = complex_structure(S.n)
    return (J @ S.basis).T @ S.basis


def symplectic_complement(S: RealSubspace) -> RealSubspace:
    """All z with Im<z, s> = 0 for every s in S."""
    J = complex_structure(S.n)
    return orth_complement(RealSubspace(S.n, J @ S.basis, S.tol))


def subspace_equal(A: RealSubspace,
                   B: RealSubspace,
                   tol: Optional[float] = None) -> bool:
    """Equal dimension and largest principal angle below tol."""
    tol = envs.GAUSS_DFA_SUBSPACE_TOL if tol is None else tol
    if A.n != B.n or A.dim != B.dim:
        return False
    if A.dim == 0:
        return True
    angles = scipy.linalg.subspace_angles(A.basis, B.basis)
    return bool(angles.max() < tol)
