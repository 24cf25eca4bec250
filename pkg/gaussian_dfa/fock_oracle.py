"""Brute-force truncated Fock space reference computations.

Operators act on the span of the occupation states e(n_1, ..., n_d) with
0 <= n_j < N_j, ordered lexicographically. Truncation breaks the CCR at the
cutoff, so every residual is measured on the low-occupation sector
{n_j <= sector for all j}.
"""
import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Union

import numpy as np
import scipy.integrate
import scipy.linalg
import scipy.sparse

import gaussian_dfa.envs as envs
from gaussian_dfa.errors import StepSizeUnderflow
from gaussian_dfa.logger import init_logger
from gaussian_dfa.model import GaussianModel
from gaussian_dfa.perf_metrics import create_perf_metric_logger
from gaussian_dfa.real_linear import symplectic_form
from gaussian_dfa.weyl_flow import evolve_weyl

logger = init_logger(__name__)

Cutoffs = tuple[int, ...]


@dataclass
class TruncatedOperator:
    cutoffs: Cutoffs
    mat: np.ndarray

    def __post_init__(self):
        self.cutoffs = tuple(int(n) for n in self.cutoffs)
        size = int(np.prod(self.cutoffs))
        self.mat = np.asarray(self.mat, dtype=complex)
        if self.mat.shape != (size, size):
            raise ValueError(f"expected a {size} x {size} matrix for cutoffs "
                             f"{self.cutoffs}, got {self.mat.shape}")

    @property
    def size(self) -> int:
        return self.mat.shape[0]

    def dag(self) -> "TruncatedOperator":
        return TruncatedOperator(self.cutoffs, self.mat.conj().T)

    def __matmul__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        return TruncatedOperator(self.cutoffs, self.mat @ other.mat)


def _check_cutoffs(d: int, cutoffs: Sequence[int]) -> Cutoffs:
    cutoffs = tuple(int(n) for n in cutoffs)
    if len(cutoffs) != d:
        raise ValueError(f"need {d} cutoffs, got {len(cutoffs)}")
    if min(cutoffs) < 2:
        raise ValueError(f"cutoffs must be at least 2, got {cutoffs}")
    return cutoffs


def default_sector(cutoffs: Sequence[int]) -> int:
    return min(cutoffs) // 3


def sector_indices(cutoffs: Sequence[int], sector: int) -> np.ndarray:
    """Flat indices of the states with every occupation <= sector."""
    ranges = [range(min(sector, n - 1) + 1) for n in cutoffs]
    flat = [
        np.ravel_multi_index(state, tuple(cutoffs))
        for state in itertools.product(*ranges)
    ]
    return np.array(sorted(flat), dtype=int)


def sector_norm(mat: np.ndarray, cutoffs: Sequence[int],
                sector: Optional[int]) -> float:
    """Spectral norm of the compression of `mat` to the sector."""
    sector = default_sector(cutoffs) if sector is None else sector
    idx = sector_indices(cutoffs, sector)
    return float(np.linalg.norm(mat[np.ix_(idx, idx)], 2))


def _sparse_ladder(d: int, cutoffs: Cutoffs) -> list[scipy.sparse.csr_array]:
    ops = []
    for j in range(d):
        factors = [
            scipy.sparse.identity(n, format="csr", dtype=complex)
            for n in cutoffs
        ]
        factors[j] = scipy.sparse.diags(np.sqrt(np.arange(1, cutoffs[j])),
                                        1,
                                        format="csr",
                                        dtype=complex)
        ops.append(
            scipy.sparse.csr_array(
                reduce(lambda a, b: scipy.sparse.kron(a, b, format="csr"),
                       factors)))
    return ops


def ladder(d: int, cutoffs: Sequence[int]) -> list[TruncatedOperator]:
    """Annihilation operators a_1, ..., a_d."""
    cutoffs = _check_cutoffs(d, cutoffs)
    return [
        TruncatedOperator(cutoffs, a.toarray())
        for a in _sparse_ladder(d, cutoffs)
    ]


@dataclass
class FockGenerator:
    """Truncated H, Kraus operators and G = -1/2 sum L*L - iH of a model."""
    cutoffs: Cutoffs
    H: scipy.sparse.csr_array
    L: list[scipy.sparse.csr_array]
    G: scipy.sparse.csr_array

    def __post_init__(self):
        self._LdL = sum((Lk.conj().T @ Lk for Lk in self.L),
                        start=scipy.sparse.csr_array(self.H.shape,
                                                     dtype=complex))

    @property
    def size(self) -> int:
        return self.H.shape[0]

    def lindblad(self, x: np.ndarray) -> np.ndarray:
        """i[H, x] - 1/2 sum (L*L x - 2 L* x L + x L*L), matrix free."""
        out = 1j * (self.H @ x - _right(x, self.H))
        out -= 0.5 * (self._LdL @ x + _right(x, self._LdL))
        for Lk in self.L:
            out += Lk.conj().T @ _right(x, Lk)
        return out


def _right(x: np.ndarray, op: scipy.sparse.csr_array) -> np.ndarray:
    """x @ op for dense x and sparse op."""
    return (op.T @ x.T).T


def assemble(model: GaussianModel, cutoffs: Sequence[int]) -> FockGenerator:
    cutoffs = _check_cutoffs(model.d, cutoffs)
    a = _sparse_ladder(model.d, cutoffs)
    ad = [op.conj().T for op in a]
    d = model.d
    size = int(np.prod(cutoffs))
    H = scipy.sparse.csr_array((size, size), dtype=complex)
    for j in range(d):
        H = H + model.zeta[j] / 2 * ad[j] + np.conj(model.zeta[j]) / 2 * a[j]
        for k in range(d):
            H = (H + model.omega[j, k] * (ad[j] @ a[k]) +
                 model.kappa[j, k] / 2 * (ad[j] @ ad[k]) +
                 np.conj(model.kappa[j, k]) / 2 * (a[j] @ a[k]))
    H = (H + H.conj().T) / 2

    L = []
    for v, u in model.kraus_rows():
        op = scipy.sparse.csr_array((size, size), dtype=complex)
        for k in range(d):
            op = op + np.conj(v[k]) * a[k] + u[k] * ad[k]
        L.append(scipy.sparse.csr_array(op))

    LdL = sum((Lk.conj().T @ Lk for Lk in L),
              start=scipy.sparse.csr_array((size, size), dtype=complex))
    G = -0.5 * LdL - 1j * H
    return FockGenerator(cutoffs, scipy.sparse.csr_array(H), L,
                         scipy.sparse.csr_array(G))


def _as_matrix(x: Union[TruncatedOperator, np.ndarray]) -> np.ndarray:
    return x.mat if isinstance(x, TruncatedOperator) else np.asarray(x)


def weyl_matrix(z: Sequence[complex],
                cutoffs: Sequence[int]) -> TruncatedOperator:
    """exp(sum_k z_k a_k^+ - conj(z_k) a_k), through the Hermitian
    eigendecomposition of i times the exponent, so the result is unitary to
    machine precision."""
    z = np.asarray(z, dtype=complex)
    cutoffs = _check_cutoffs(z.shape[0], cutoffs)
    a = _sparse_ladder(z.shape[0], cutoffs)
    size = int(np.prod(cutoffs))
    exponent = np.zeros((size, size), dtype=complex)
    for zk, ak in zip(z, a):
        exponent += (zk * ak.conj().T - np.conj(zk) * ak).toarray()
    evals, evecs = scipy.linalg.eigh(1j * exponent)
    mat = (evecs * np.exp(-1j * evals)) @ evecs.conj().T
    return TruncatedOperator(cutoffs, mat)


def lindblad_apply(model: Union[GaussianModel, FockGenerator],
                   x: TruncatedOperator) -> TruncatedOperator:
    generator = (model if isinstance(model, FockGenerator) else assemble(
        model, x.cutoffs))
    return TruncatedOperator(x.cutoffs, generator.lindblad(x.mat))


def heisenberg_evolve(model: Union[GaussianModel, FockGenerator],
                      x: TruncatedOperator,
                      t: float,
                      ode_tol: Optional[float] = None,
                      method: Optional[str] = None) -> TruncatedOperator:
    """Integrate dx/ds = L(x) on [0, t] with an explicit adaptive
    Runge-Kutta scheme."""
    ode_tol = envs.GAUSS_DFA_ODE_TOL if ode_tol is None else ode_tol
    method = envs.GAUSS_DFA_ODE_METHOD if method is None else method
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    if t == 0:
        return TruncatedOperator(x.cutoffs, x.mat.copy())
    logger.info_once("Heisenberg evolution uses %s with tolerance %g", method,
                     ode_tol)
    generator = (model if isinstance(model, FockGenerator) else assemble(
        model, x.cutoffs))
    shape = x.mat.shape

    def rhs(_s: float, y: np.ndarray) -> np.ndarray:
        return generator.lindblad(y.reshape(shape)).ravel()

    perf = create_perf_metric_logger("oracle")
    with perf.timed("heisenberg_evolve", size=generator.size, t=t):
        sol = scipy.integrate.solve_ivp(rhs, (0.0, t),
                                        x.mat.ravel(),
                                        method=method,
                                        t_eval=[t],
                                        rtol=ode_tol,
                                        atol=ode_tol)
    if not sol.success:
        if "step size" in sol.message.lower():
            raise StepSizeUnderflow(
                f"Heisenberg evolution to t={t} failed: {sol.message}; the "
                "cutoff is likely too small for this model")
        raise RuntimeError(f"Heisenberg evolution failed: {sol.message}")
    logger.debug("Heisenberg evolution of size %d to t=%g used %d "
                 "evaluations", generator.size, t, sol.nfev)
    return TruncatedOperator(x.cutoffs, sol.y[:, -1].reshape(shape))


def multiplicativity_residual(model: GaussianModel,
                              z: Sequence[complex],
                              t: float,
                              cutoffs: Sequence[int],
                              sector: Optional[int] = None,
                              ode_tol: Optional[float] = None,
                              method: Optional[str] = None) -> float:
    """Sector norm of T_t(W* W) - T_t(W*) T_t(W). T_t preserves adjoints,
    so T_t(W*) is taken as T_t(W)*."""
    generator = assemble(model, cutoffs)
    W = weyl_matrix(z, generator.cutoffs)
    evolved = heisenberg_evolve(generator, W, t, ode_tol, method)
    evolved_product = heisenberg_evolve(generator, W.dag() @ W, t, ode_tol,
                                        method)
    defect = evolved_product.mat - evolved.mat.conj().T @ evolved.mat
    return sector_norm(defect, generator.cutoffs, sector)


def verify_weyl_formula(model: GaussianModel,
                        z: Sequence[complex],
                        t: float,
                        cutoffs: Sequence[int],
                        sector: Optional[int] = None,
                        ode_tol: Optional[float] = None,
                        method: Optional[str] = None) -> float:
    """Sector norm of the difference between the Heisenberg evolution of
    W(z) and exp(-damping + i phase) W(e^{tZ} z)."""
    generator = assemble(model, cutoffs)
    evolution = evolve_weyl(model, z, t)
    evolved = heisenberg_evolve(generator,
                                weyl_matrix(z, generator.cutoffs), t, ode_tol,
                                method)
    predicted = evolution.prefactor * weyl_matrix(evolution.z_out,
                                                  generator.cutoffs).mat
    return sector_norm(evolved.mat - predicted, generator.cutoffs, sector)


def ladder_image(model: GaussianModel, k: int,
                 cutoffs: Sequence[int]) -> TruncatedOperator:
    """Closed form of L(a_k) (0-based k) as a first order polynomial:

        -i zeta_k / 2 + 1/2 sum_j (U^T V - V^T U - 2i kappa)_kj a_j^+
                      + 1/2 sum_j (U^T conj(U) - V^T conj(V) - 2i Omega)_kj a_j
    """
    cutoffs = _check_cutoffs(model.d, cutoffs)
    a = _sparse_ladder(model.d, cutoffs)
    U, V = model.U, model.V
    creation = (U.T @ V - V.T @ U - 2j * model.kappa) / 2
    annihilation = (U.T @ U.conj() - V.T @ V.conj() - 2j * model.omega) / 2
    size = int(np.prod(cutoffs))
    mat = -1j * model.zeta[k] / 2 * np.eye(size, dtype=complex)
    for j, aj in enumerate(a):
        mat += (creation[k, j] * aj.conj().T +
                annihilation[k, j] * aj).toarray()
    return TruncatedOperator(cutoffs, mat)


def _random_sector_operator(rng: np.random.Generator, cutoffs: Cutoffs,
                            sector: int) -> np.ndarray:
    size = int(np.prod(cutoffs))
    idx = sector_indices(cutoffs, sector)
    x = np.zeros((size, size), dtype=complex)
    block = (rng.standard_normal((idx.size, idx.size)) +
             1j * rng.standard_normal((idx.size, idx.size)))
    x[np.ix_(idx, idx)] = block
    return x


def verify_generator_on_ladder(model: GaussianModel,
                               cutoffs: Sequence[int],
                               sector: Optional[int] = None,
                               seed: Optional[int] = None,
                               samples: int = 3) -> float:
    """Largest sector residual of two generator identities:
    L(a_k) against its closed form for every mode, and

        L(x y) = x L(y) + L(x) y + sum_l [L_l, x*]* [L_l, y]

    for x = y = a_1 and random x, y supported on the sector."""
    generator = assemble(model, cutoffs)
    cutoffs = generator.cutoffs
    sector = default_sector(cutoffs) if sector is None else sector
    seed = envs.GAUSS_DFA_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    a = ladder(model.d, cutoffs)

    residual = 0.0
    for k in range(model.d):
        computed = generator.lindblad(a[k].mat)
        expected = ladder_image(model, k, cutoffs).mat
        residual = max(residual, sector_norm(computed - expected, cutoffs,
                                             sector))

    # random operators are scaled down so products stay O(1)
    pairs = [(a[0].mat, a[0].mat)]
    small = max(sector // 2, 1)
    for _ in range(samples):
        pairs.append((_random_sector_operator(rng, cutoffs, small),
                      _random_sector_operator(rng, cutoffs, small)))
    for x, y in pairs:
        lhs = generator.lindblad(x @ y)
        rhs = x @ generator.lindblad(y) + generator.lindblad(x) @ y
        for Lk in generator.L:
            comm_x = Lk @ x.conj().T - _right(x.conj().T, Lk)
            comm_y = Lk @ y - _right(y, Lk)
            rhs = rhs + comm_x.conj().T @ comm_y
        scale = max(1.0, float(np.abs(lhs).max()))
        residual = max(residual,
                       sector_norm(lhs - rhs, cutoffs, sector) / scale)
    logger.info("Generator identities hold to %.3e on the sector n <= %d",
                residual, sector)
    return residual


def weyl_ccr_residual(z: Sequence[complex],
                      w: Sequence[complex],
                      cutoffs: Sequence[int],
                      sector: Optional[int] = None) -> float:
    """Sector norm of W(z) W(w) - exp(-i Im<z, w>) W(z + w)."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    product = weyl_matrix(z, cutoffs) @ weyl_matrix(w, cutoffs)
    expected = (np.exp(-1j * symplectic_form(z, w)) *
                weyl_matrix(z + w, cutoffs).mat)
    return sector_norm(product.mat - expected, cutoffs, sector)


def vacuum_overlap(z: Sequence[complex], cutoffs: Sequence[int]) -> complex:
    """<e_0, W(z) e_0>, equal to exp(-|z|^2 / 2) without truncation."""
    return complex(weyl_matrix(z, cutoffs).mat[0, 0])


def identity_preservation_residual(model: GaussianModel,
                                   cutoffs: Sequence[int],
                                   sector: Optional[int] = None) -> float:
    generator = assemble(model, cutoffs)
    eye = np.eye(generator.size, dtype=complex)
    return sector_norm(generator.lindblad(eye), generator.cutoffs, sector)


def hermiticity_residual(model: GaussianModel,
                         x: TruncatedOperator,
                         sector: Optional[int] = None) -> float:
    """Sector norm of L(x)* - L(x*)."""
    generator = assemble(model, x.cutoffs)
    lhs = generator.lindblad(x.mat).conj().T
    rhs = generator.lindblad(x.mat.conj().T)
    return sector_norm(lhs - rhs, x.cutoffs, sector)
