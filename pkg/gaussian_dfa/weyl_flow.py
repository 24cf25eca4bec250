"""Explicit action of the semigroup on Weyl operators.

    T_t(W(z)) = exp(-damping + i phase) W(e^{tZ} z)

with damping = 1/2 int_0^t Re<e^{sZ} z, C e^{sZ} z> ds and
phase = int_0^t Re<zeta, e^{sZ} z> ds.
"""
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np
import scipy.integrate
import scipy.linalg

import gaussian_dfa.envs as envs
from gaussian_dfa.dfa_core import commutator_span, m_space
from gaussian_dfa.errors import QuadratureNotConverged
from gaussian_dfa.logger import init_logger
from gaussian_dfa.model import GaussianModel, encode_complex, ensure_valid
from gaussian_dfa.real_linear import (RealLinearMap, RealSubspace, embed,
                                      kernel, subspace_equal,
                                      symplectic_complement, unembed)

logger = init_logger(__name__)

# lower bound on the damping integrand, relative to its natural size
_NEGATIVE_INTEGRAND = 1e-12


@dataclass
class WeylEvolution:
    t: float
    z_in: np.ndarray
    z_out: np.ndarray
    damping: float
    phase: float

    @property
    def prefactor(self) -> complex:
        return complex(np.exp(-self.damping + 1j * self.phase))

    def to_dict(self) -> dict[str, Any]:
        return {
            "t": self.t,
            "z_in": encode_complex(self.z_in),
            "z_out": encode_complex(self.z_out),
            "damping": self.damping,
            "phase": self.phase,
        }


def build_Z(model: GaussianModel) -> RealLinearMap:
    U, V = model.U, model.V
    A = (U.conj().T @ U - V.conj().T @ V).conj() / 2 + 1j * model.omega
    B = (U.T @ V - V.T @ U) / 2 + 1j * model.kappa
    return RealLinearMap.from_complex_pair(A, B)


def build_C(model: GaussianModel) -> RealLinearMap:
    U, V = model.U, model.V
    A = (U.conj().T @ U + V.conj().T @ V).conj()
    B = U.T @ V + V.T @ U
    return RealLinearMap.from_complex_pair(A, B)


def _integrate(func: Callable[[float], float], t: float, tol: float,
               floor: float, limit: int, what: str) -> float:
    result = scipy.integrate.quad(func,
                                  0.0,
                                  t,
                                  epsabs=floor,
                                  epsrel=tol,
                                  limit=limit,
                                  full_output=1)
    # quad appends a message when it cannot certify the result
    if len(result) > 3:
        raise QuadratureNotConverged(
            f"{what} integral on [0, {t}] did not reach tolerance {tol:g}: "
            f"{result[3]}")
    value, abserr = result[0], result[1]
    logger.debug("%s integral on [0, %g] = %.12g (error estimate %.2e, %d "
                 "evaluations)", what, t, value, abserr, result[2]["neval"])
    return float(value)


def evolve_weyl(model: GaussianModel,
                z: Sequence[complex],
                t: float,
                quad_tol: Optional[float] = None,
                quad_limit: Optional[int] = None) -> WeylEvolution:
    """Drift, damping and phase of T_t(W(z)).

    The drift uses the Pade matrix exponential of the real matrix of Z; both
    integrals use adaptive Gauss-Kronrod quadrature.
    """
    quad_tol = envs.GAUSS_DFA_QUAD_TOL if quad_tol is None else quad_tol
    quad_limit = (envs.GAUSS_DFA_QUAD_LIMIT
                  if quad_limit is None else quad_limit)
    z = np.asarray(z, dtype=complex).reshape(model.d)
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    if t == 0:
        return WeylEvolution(0.0, z.copy(), z.copy(), 0.0, 0.0)

    Z = build_Z(model).mat
    C = build_C(model).mat
    C = (C + C.T) / 2
    x0 = embed(z)
    zeta = embed(model.zeta)

    def drift(s: float) -> np.ndarray:
        return scipy.linalg.expm(s * Z) @ x0

    x_t = drift(t)
    size = max(float(x0 @ x0), float(x_t @ x_t))
    damping_scale = 0.5 * float(np.linalg.norm(C, 2)) * size
    phase_scale = float(np.linalg.norm(zeta)) * np.sqrt(size)
    lowest = [np.inf]

    def damping_density(s: float) -> float:
        x = drift(s)
        value = 0.5 * float(x @ C @ x)
        lowest[0] = min(lowest[0], value)
        return value

    def phase_density(s: float) -> float:
        return float(zeta @ drift(s))

    tiny = np.finfo(float).tiny
    damping = _integrate(damping_density, t, quad_tol,
                         quad_tol * t * damping_scale + tiny, quad_limit,
                         "damping")
    if lowest[0] < -_NEGATIVE_INTEGRAND * max(damping_scale, 1.0):
        raise RuntimeError(
            f"damping integrand took the negative value {lowest[0]:.3e}; the "
            "dissipative form C is not positive semidefinite")
    damping = max(damping, 0.0)
    if phase_scale > 0:
        phase = _integrate(phase_density, t, quad_tol,
                           quad_tol * t * phase_scale, quad_limit, "phase")
    else:
        phase = 0.0
    return WeylEvolution(float(t), z, unembed(x_t), damping, phase)


def evolve_weyl_grid(model: GaussianModel,
                     z: Sequence[complex],
                     times: Sequence[float],
                     quad_tol: Optional[float] = None,
                     quad_limit: Optional[int] = None) -> list[WeylEvolution]:
    return [
        evolve_weyl(model, z, float(t), quad_tol, quad_limit) for t in times
    ]


def kerC_Z_invariant(model: GaussianModel,
                     tol: Optional[float] = None) -> RealSubspace:
    """Largest Z-invariant real subspace of ker C, from the decreasing
    iteration K_0 = ker C, K_{i+1} = {k in K_i : Z k in K_i}."""
    tol = envs.GAUSS_DFA_SPAN_TOL if tol is None else tol
    d = model.d
    Z = build_Z(model).mat
    C = build_C(model).mat
    z_scale = max(float(np.linalg.norm(Z, 2)), 1.0)

    K = kernel(C, tol, scale=max(float(np.linalg.norm(C, 2)), 1.0))
    for step in range(2 * d):
        if K.shape[1] == 0:
            break
        leak = Z @ K - K @ (K.T @ (Z @ K))
        coeffs = kernel(leak, tol, scale=z_scale)
        logger.debug("Z-invariance step %d: dim %d -> %d", step, K.shape[1],
                     coeffs.shape[1])
        if coeffs.shape[1] == K.shape[1]:
            break
        K = K @ coeffs
    return RealSubspace(d, K, tol)


def crosscheck_complement(model: GaussianModel,
                          tol: Optional[float] = None,
                          span_tol: Optional[float] = None) -> bool:
    """Compare the Z-invariant part of ker C with the symplectic complement
    of M. Both characterize the Weyl generators of the decoherence-free
    subalgebra."""
    ensure_valid(model)
    from_flow = kerC_Z_invariant(model, span_tol)
    from_commutators = symplectic_complement(
        m_space(commutator_span(model, tol=span_tol), span_tol))
    agree = subspace_equal(from_flow, from_commutators, tol)
    if agree:
        logger.info("Dual characterization agrees: dim M' = %d",
                    from_flow.dim)
    else:
        logger.warning(
            "Dual characterization disagrees: ker C / Z path gives dim %d, "
            "commutator path gives dim %d", from_flow.dim,
            from_commutators.dim)
    return agree
