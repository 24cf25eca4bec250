"""Symplectic Gram-Schmidt, Bogoliubov normal form and Kraus mode reduction.

All computations run in embedded coordinates with the symplectic form
omega(x, y) = Im<z, w> = (J x) . y.
"""
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
import scipy.linalg

import gaussian_dfa.envs as envs
from gaussian_dfa.dfa_core import Decomposition, build_bbH
from gaussian_dfa.errors import AssumptionViolated
from gaussian_dfa.logger import init_logger
from gaussian_dfa.model import GaussianModel
from gaussian_dfa.real_linear import (RealSubspace, complex_structure, embed,
                                      intersect, real_span,
                                      real_symplectic_form,
                                      relative_complement,
                                      symplectic_complement, symplectic_gram,
                                      unembed)

logger = init_logger(__name__)

ASSUMPTIONS = ("symplectic", "isotropic", "mixed")

# relative margin under which two candidate pivots count as equally long
_PIVOT_TIE = 1e-9


@dataclass
class SymplecticBasis:
    pairs: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    isotropic: list[np.ndarray] = field(default_factory=list)

    def vectors(self) -> list[np.ndarray]:
        out = [z for pair in self.pairs for z in pair]
        return out + list(self.isotropic)

    def span(self, n: int, tol: Optional[float] = None) -> RealSubspace:
        return real_span([embed(z) for z in self.vectors()], tol=tol, n=n)


@dataclass
class BogoliubovMap:
    B: np.ndarray
    # source vector mapped to each target mode, labelled r/c/f/x by origin
    mode_labels: list[str] = field(default_factory=list)

    @property
    def d(self) -> int:
        return self.B.shape[0] // 2

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return unembed(self.B @ embed(z))

    def symplectic_defect(self) -> float:
        J = complex_structure(self.d)
        return float(np.abs(self.B.T @ J @ self.B - J).max())

    def to_dict(self) -> dict[str, Any]:
        return {"B": self.B.tolist(), "modes": self.mode_labels}


def _canonical_projections(S: RealSubspace) -> list[np.ndarray]:
    """Projections of e_1, ..., e_n, i e_1, ..., i e_n onto S, dropping the
    ones that vanish."""
    P = S.projector()
    floor = S.tol * max(1.0, float(np.abs(P).max(initial=0.0)))
    return [P[:, j] for j in range(2 * S.n) if np.linalg.norm(P[:, j]) > floor]


def _check_symplectic(S: RealSubspace, tol: float) -> None:
    radical = intersect(S, symplectic_complement(S), tol)
    if radical.dim > 0:
        raise AssumptionViolated(
            f"subspace of dimension {S.dim} is not symplectic: its radical "
            f"has dimension {radical.dim}",
            witness=radical.basis[:, 0])


def _check_isotropic(S: RealSubspace, tol: float) -> None:
    if S.dim == 0:
        return
    gram = symplectic_gram(S)
    worst = np.unravel_index(np.abs(gram).argmax(), gram.shape)
    if abs(gram[worst]) > tol:
        raise AssumptionViolated(
            f"subspace is not isotropic: symplectic product "
            f"{gram[worst]:.3e} between basis vectors",
            witness=S.basis[:, worst[0]])


def _isotropic_frame(S: RealSubspace) -> list[np.ndarray]:
    """Unit vectors spanning S, from greedy Gram-Schmidt on the canonical
    projections."""
    frame: list[np.ndarray] = []
    for x in _canonical_projections(S):
        for f in frame:
            x = x - (f @ x) * f
        norm = np.linalg.norm(x)
        if norm > S.tol:
            frame.append(x / norm)
        if len(frame) == S.dim:
            break
    return frame


def _symplectic_pairs(S: RealSubspace,
                      tol: float) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairs (z1, z2) with omega(z1, z2) = 1 spanning the symplectic
    subspace S."""
    vecs = _canonical_projections(S)
    pairs: list[tuple[np.ndarray, np.ndarray]] = []
    while vecs:
        remaining = real_span(vecs, tol=tol, n=S.n).dim
        if remaining == 0:
            break
        if remaining == 1:
            raise AssumptionViolated(
                "a one dimensional remainder cannot be symplectic",
                witness=vecs[0])

        norms = np.array([np.linalg.norm(x) for x in vecs])
        first = int(np.flatnonzero(norms >= norms.max() * (1 - _PIVOT_TIE))[0])
        z1 = vecs[first]
        pairing = np.array(
            [real_symplectic_form(z1, x) if j != first else 0.0
             for j, x in enumerate(vecs)])
        partner = int(np.abs(pairing).argmax())
        if abs(pairing[partner]) <= tol * norms[first] * norms[partner]:
            raise AssumptionViolated(
                "symplectic form is degenerate on the subspace", witness=z1)
        z2 = vecs[partner] / pairing[partner]
        pairs.append((z1, z2))

        reduced = []
        for j, z in enumerate(vecs):
            if j in (first, partner):
                continue
            z = (z + real_symplectic_form(z, z1) * z2 -
                 real_symplectic_form(z, z2) * z1)
            reduced.append(z)
        if reduced:
            floor = tol * max(float(np.linalg.norm(x)) for x in reduced)
            floor = max(floor, tol * float(norms.max()))
            reduced = [z for z in reduced if np.linalg.norm(z) > floor]
        vecs = reduced

    if 2 * len(pairs) != S.dim:
        raise AssumptionViolated(
            f"found {len(pairs)} symplectic pairs for a subspace of "
            f"dimension {S.dim}")
    return pairs


def symplectic_gram_schmidt(S: RealSubspace,
                            assume: str = "symplectic",
                            tol: Optional[float] = None) -> SymplecticBasis:
    """Symplectic basis of S.

    "symplectic" gives pairs only, "isotropic" unit isotropic vectors only,
    and "mixed" splits off the radical S n S' as isotropic vectors and pairs
    up its real-orthogonal complement in S.
    """
    tol = S.tol if tol is None else tol
    if assume not in ASSUMPTIONS:
        raise ValueError(f"assume must be one of {ASSUMPTIONS}, got "
                         f"{assume!r}")
    if assume == "symplectic":
        _check_symplectic(S, tol)
        pairs = _symplectic_pairs(S, tol)
        return SymplecticBasis([(unembed(a), unembed(b)) for a, b in pairs])
    if assume == "isotropic":
        _check_isotropic(S, tol)
        return SymplecticBasis(
            isotropic=[unembed(x) for x in _isotropic_frame(S)])

    radical = intersect(S, symplectic_complement(S), tol)
    rest = relative_complement(S, radical)
    pairs = _symplectic_pairs(rest, tol)
    return SymplecticBasis([(unembed(a), unembed(b)) for a, b in pairs],
                           [unembed(x) for x in _isotropic_frame(radical)])


def decomposition_basis(dec: Decomposition,
                        tol: Optional[float] = None) -> SymplecticBasis:
    """Pairs spanning Mr then Mf, and isotropic vectors spanning Mc."""
    r = symplectic_gram_schmidt(dec.Mr, "symplectic", tol)
    f = symplectic_gram_schmidt(dec.Mf, "symplectic", tol)
    c = symplectic_gram_schmidt(dec.Mc, "isotropic", tol)
    return SymplecticBasis(r.pairs + f.pairs, c.isotropic)


def bogoliubov_matrix(dec: Decomposition,
                      tol: Optional[float] = None) -> BogoliubovMap:
    """Symplectomorphism B of C^d with

        Mr pairs -> (e_j, i e_j),  j = 1..d_r
        Mc basis -> e_j,           j = d_r+1..d_r+d_c
        Mf pairs -> (e_j, i e_j),  j = d_r+d_c+1..d_r+d_c+d_f

    and the remaining modes completed by a symplectic basis of what is
    left."""
    tol = dec.M.tol if tol is None else tol
    d = dec.d
    J = complex_structure(d)

    r_pairs = _symplectic_pairs(dec.Mr, tol) if dec.Mr.dim else []
    f_pairs = _symplectic_pairs(dec.Mf, tol) if dec.Mf.dim else []
    c_vecs = _isotropic_frame(dec.Mc)

    # Mc lies in the symplectic complement of the Mr and Mf pairs
    paired = real_span([x for pair in r_pairs + f_pairs for x in pair],
                       tol=tol,
                       n=d)
    Q = symplectic_complement(paired)
    c_pairs = []
    for k, c in enumerate(c_vecs):
        later = real_span(c_vecs[k + 1:], tol=tol, n=d)
        R = intersect(Q, symplectic_complement(later), tol)
        y = R.project(J @ c)
        y = y / real_symplectic_form(c, y)
        c_pairs.append((c, y))
        Q = intersect(Q,
                      symplectic_complement(real_span([c, y], tol=tol, n=d)),
                      tol)
    rest_pairs = _symplectic_pairs(Q, tol) if Q.dim else []

    ordered = r_pairs + c_pairs + f_pairs + rest_pairs
    labels = ([f"r{j + 1}" for j in range(len(r_pairs))] +
              [f"c{j + 1}" for j in range(len(c_pairs))] +
              [f"f{j + 1}" for j in range(len(f_pairs))] +
              [f"x{j + 1}" for j in range(len(rest_pairs))])
    if len(ordered) != d:
        raise AssumptionViolated(
            f"assembled {len(ordered)} symplectic pairs for {d} modes")

    S = np.empty((2 * d, 2 * d))
    for j, (first, second) in enumerate(ordered):
        S[:, j] = first
        S[:, d + j] = second
    B = scipy.linalg.solve(S, np.eye(2 * d))
    bmap = BogoliubovMap(B, labels)
    defect = bmap.symplectic_defect()
    if defect > 1e-8:
        logger.warning("Bogoliubov matrix departs from symplecticity by %.3e",
                       defect)
    logger.debug("Bogoliubov modes: %s", labels)
    return bmap


def coefficient_map(bmap: BogoliubovMap) -> np.ndarray:
    """Complex 2d x 2d matrix T acting on Kraus coefficient vectors
    [conj(v); u] as the Bogoliubov transformation acts on L."""
    d = bmap.d
    T = np.empty((2 * d, 2 * d), dtype=complex)
    for k in range(2 * d):
        coeffs = np.zeros(2 * d, dtype=complex)
        coeffs[k] = 1.0
        v, u = transform_kraus_row(bmap, coeffs[:d].conj(), coeffs[d:])
        T[:, k] = np.concatenate([v.conj(), u])
    return T


def transform_kraus_row(bmap: BogoliubovMap, v: np.ndarray,
                        u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """The row (v, u) determines L through the directions i(v + u) and
    v - u, which transform under B like Weyl arguments."""
    p = bmap(1j * (v + u))
    r = bmap(v - u)
    return (-1j * p + r) / 2, (-1j * p - r) / 2


def reduce_hamiltonian(
        model: GaussianModel,
        bmap: BogoliubovMap,
        tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(Omega, kappa, zeta) of the transformed Hamiltonian, read off the
    blocks of T HH T^-1."""
    d = model.d
    T = coefficient_map(bmap)
    bbH = T @ build_bbH(model) @ scipy.linalg.inv(T)
    omega = bbH[d:, d:]
    kappa = -bbH[d:, :d]
    scale = max(1.0, float(np.abs(bbH).max(initial=0.0)))
    block_error = max(
        float(np.abs(bbH[:d, :d] + omega.T).max()),
        float(np.abs(bbH[:d, d:] - kappa.conj()).max()))
    if block_error > tol * scale:
        logger.warning(
            "Transformed commutator matrix departs from the Hamiltonian "
            "block pattern by %.3e", block_error)
    omega = (omega + omega.conj().T) / 2
    kappa = (kappa + kappa.T) / 2
    linear = T @ np.concatenate([model.zeta.conj(), model.zeta]) / 2
    zeta = 2 * linear[d:]
    return omega, kappa, zeta


def reduce_kraus(model: GaussianModel,
                 bmap: BogoliubovMap,
                 tol: Optional[float] = None) -> GaussianModel:
    """Apply the Bogoliubov transformation to every Kraus operator and to the
    Hamiltonian. After the normal form map the Kraus rows are supported on
    the first d_r + d_c modes."""
    tol = envs.GAUSS_DFA_SPAN_TOL if tol is None else tol
    rows = [transform_kraus_row(bmap, v, u) for v, u in model.kraus_rows()]
    V = np.array([r[0] for r in rows])
    U = np.array([r[1] for r in rows])
    omega, kappa, zeta = reduce_hamiltonian(model, bmap, tol)
    support = np.flatnonzero(
        np.abs(np.vstack([V, U])).max(axis=0) >
        tol * max(1.0, float(np.abs(np.vstack([V, U])).max())))
    logger.debug("Reduced Kraus rows are supported on modes %s",
                 (support + 1).tolist())
    name = f"{model.name}-reduced" if model.name else None
    return GaussianModel(omega, kappa, zeta, V, U, name=name)
