"""Decoherence-free subalgebra structure of a Gaussian QMS.

The Weyl operators W(z) spanning the decoherence-free subalgebra are those
with z in the symplectic complement M' of

    M = Lin_R { i(v + u), v - u : [conj(v); u] in V },

where V is the real span of the iterated commutator coefficients
HH^n [conj(v_l); u_l], HH^n [conj(u_l); v_l], n = 0, ..., 2d - 1.
"""
import enum
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

import gaussian_dfa.envs as envs
from gaussian_dfa.errors import ParityViolation, Unsupported
from gaussian_dfa.logger import init_logger
from gaussian_dfa.model import (GaussianModel, check_minimality,
                                ensure_valid, model_from_dict)
from gaussian_dfa.perf_metrics import create_perf_metric_logger
from gaussian_dfa.real_linear import (RealSubspace, embed, intersect,
                                      real_span, relative_complement,
                                      symplectic_complement, unembed)

logger = init_logger(__name__)


@dataclass
class CommutatorSpan:
    generators: list[np.ndarray]
    span: RealSubspace
    iterations_used: int

    @property
    def d(self) -> int:
        return self.span.n // 2


@dataclass
class Decomposition:
    M: RealSubspace
    Mprime: RealSubspace
    Mc: RealSubspace
    Mr: RealSubspace
    Mf: RealSubspace

    @property
    def d(self) -> int:
        return self.M.n

    @property
    def d_c(self) -> int:
        return self.Mc.dim

    @property
    def d_r(self) -> int:
        return (self.M.dim - self.Mc.dim) // 2

    @property
    def d_f(self) -> int:
        return (self.Mprime.dim - self.Mc.dim) // 2

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.d_c, self.d_r, self.d_f

    @property
    def trivial(self) -> bool:
        """True when the algebra is C1, i.e. M' = {0}."""
        return self.Mprime.dim == 0

    def subspaces(self) -> dict[str, RealSubspace]:
        return {
            "M": self.M,
            "Mprime": self.Mprime,
            "Mc": self.Mc,
            "Mr": self.Mr,
            "Mf": self.Mf,
        }


def algebra_description(d_c: int, d_f: int) -> str:
    if d_c == 0 and d_f == 0:
        return "ℂ1"
    factors = []
    if d_c > 0:
        factors.append("L∞(ℝ)" if d_c == 1 else f"L∞(ℝ^{d_c})")
    if d_f > 0:
        factors.append("B(Γ(ℂ))" if d_f == 1 else f"B(Γ(ℂ^{d_f}))")
    return " ⊗̄ ".join(factors)


@dataclass
class StructureReport:
    model: GaussianModel
    minimal: bool
    decomposition: Decomposition
    iterations_used: int
    bogoliubov: Optional[np.ndarray] = None
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.decomposition.dims

    @property
    def algebra_description(self) -> str:
        return algebra_description(self.decomposition.d_c,
                                   self.decomposition.d_f)

    def to_dict(self) -> dict[str, Any]:
        dec = self.decomposition
        data: dict[str, Any] = {
            "model": self.model.to_dict(),
            "minimal": self.minimal,
            "d_c": dec.d_c,
            "d_r": dec.d_r,
            "d_f": dec.d_f,
            "algebra": self.algebra_description,
            "trivial": dec.trivial,
            "iterations_used": self.iterations_used,
            "subspaces": {
                # bases are stored row-major with one basis vector per row
                name: S.basis.T.tolist()
                for name, S in dec.subspaces().items()
            },
            "tol": dec.M.tol,
        }
        if self.bogoliubov is not None:
            data["bogoliubov"] = np.asarray(self.bogoliubov).tolist()
        data.update(self.extras)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "StructureReport":
        model = model_from_dict(data["model"])
        d = model.d
        tol = float(data.get("tol", envs.GAUSS_DFA_SPAN_TOL))
        subspaces = {
            name: RealSubspace(d,
                               np.array(rows, dtype=float).reshape(-1, 2 *
                                                                   d).T, tol)
            for name, rows in data["subspaces"].items()
        }
        bogoliubov = data.get("bogoliubov")
        return cls(model=model,
                   minimal=bool(data["minimal"]),
                   decomposition=Decomposition(**subspaces),
                   iterations_used=int(data["iterations_used"]),
                   bogoliubov=None
                   if bogoliubov is None else np.array(bogoliubov))


def build_bbH(model: GaussianModel) -> np.ndarray:
    """The 2d x 2d matrix [[-Omega^T, conj(kappa)], [-kappa, Omega]] of the
    commutator with H on coefficient vectors [conj(v); u]."""
    return np.block([[-model.omega.T, model.kappa.conj()],
                     [-model.kappa, model.omega]])


def _seeds(model: GaussianModel) -> list[np.ndarray]:
    seeds = []
    for v, u in model.kraus_rows():
        seeds.append(np.concatenate([v.conj(), u]))
        seeds.append(np.concatenate([u.conj(), v]))
    return seeds


def _normalized(vectors: list[np.ndarray],
                floor: float = 0.0) -> list[np.ndarray]:
    result = []
    for vec in vectors:
        norm = np.linalg.norm(vec)
        if norm > floor:
            result.append(vec / norm)
    return result


def commutator_span(model: GaussianModel,
                    max_order: Optional[int] = None,
                    tol: Optional[float] = None,
                    early_stop: bool = True) -> CommutatorSpan:
    """Real span of HH^n applied to both seed vectors of every Kraus row for
    n = 0, ..., max_order (default 2d - 1).

    With `early_stop` the sweep ends at the first order that adds no
    dimension, since the span is then invariant under HH.
    """
    tol = envs.GAUSS_DFA_SPAN_TOL if tol is None else tol
    d = model.d
    max_order = 2 * d - 1 if max_order is None else max_order
    if not 0 <= max_order <= 2 * d - 1:
        raise ValueError(f"max_order must lie in [0, {2 * d - 1}], got "
                         f"{max_order}")
    bbH = build_bbH(model)
    # images below this norm are rounding noise from an exact zero
    floor = tol * float(np.linalg.norm(bbH, 2))

    current = _normalized(_seeds(model))
    generators = list(current)
    span = real_span([embed(g) for g in current], tol=tol, n=2 * d)
    iterations_used = 0
    logger.debug("order 0: dim V = %d", span.dim)

    for order in range(1, max_order + 1):
        current = _normalized([bbH @ g for g in current], floor)
        if not current:
            break
        grown = real_span(np.hstack(
            [span.basis, np.column_stack([embed(g) for g in current])]),
                          tol=tol,
                          n=2 * d)
        logger.debug("order %d: dim V = %d", order, grown.dim)
        if grown.dim > span.dim:
            iterations_used = order
            span = grown
        elif early_stop:
            break
        generators.extend(current)

    return CommutatorSpan(generators, span, iterations_used)


def m_space(span: CommutatorSpan,
            tol: Optional[float] = None) -> RealSubspace:
    """M = Lin_R { i(v + u), v - u } over the coefficient vectors
    [conj(v); u] of V. The map is real linear, so a basis of V suffices."""
    tol = span.span.tol if tol is None else tol
    d = span.d
    images = []
    for col in span.span.basis.T:
        g = unembed(col)
        v, u = g[:d].conj(), g[d:]
        images.append(embed(1j * (v + u)))
        images.append(embed(v - u))
    return real_span(images, tol=tol, n=d)


def decompose(M: RealSubspace, tol: Optional[float] = None) -> Decomposition:
    """Split M and its symplectic complement M' into
    M = Mc + Mr and M' = Mc + Mf with Mc = M n M'."""
    tol = M.tol if tol is None else tol
    Mprime = symplectic_complement(M)
    Mc = intersect(M, Mprime, tol)
    for name, total in (("M", M.dim), ("M'", Mprime.dim)):
        if (total - Mc.dim) % 2 != 0:
            raise ParityViolation(
                f"dim {name} - dim Mc = {total} - {Mc.dim} is odd; the rank "
                f"tolerance {tol:g} is likely inadequate for this model")
    Mr = relative_complement(M, Mc)
    Mf = relative_complement(Mprime, Mc)
    return Decomposition(M, Mprime, Mc, Mr, Mf)


def structure_report(model: GaussianModel,
                     tol: Optional[float] = None,
                     tol_sym: Optional[float] = None,
                     tol_rank: Optional[float] = None) -> StructureReport:
    ensure_valid(model, tol_sym)
    minimal = check_minimality(model, tol_rank)
    if not minimal:
        logger.warning_once(
            "Model %s is not a minimal GKLS representation; analyzing it "
            "as given", model.name or "<unnamed>")

    perf = create_perf_metric_logger("analyze")
    with perf.timed("commutator_span", d=model.d, m=model.m):
        span = commutator_span(model, tol=tol)
    with perf.timed("decompose", d=model.d):
        dec = decompose(m_space(span, tol), tol)

    logger.info(
        "Model %s: dim V = %d after %d commutator orders, dim M = %d, "
        "(d_c, d_r, d_f) = %s", model.name or "<unnamed>", span.span.dim,
        span.iterations_used, dec.M.dim, dec.dims)
    return StructureReport(model=model,
                           minimal=minimal,
                           decomposition=dec,
                           iterations_used=span.iterations_used)


class KrausKind(enum.Enum):
    SELF_ADJOINT = "SelfAdjoint"
    NORMAL = "NormalNotSelfAdjoint"
    NON_NORMAL = "NonNormal"

    @property
    def case(self) -> int:
        return list(KrausKind).index(self) + 1

    @property
    def dims(self) -> tuple[int, int]:
        """(d_c, d_r) of the case."""
        return {
            KrausKind.SELF_ADJOINT: (1, 0),
            KrausKind.NORMAL: (2, 0),
            KrausKind.NON_NORMAL: (0, 1),
        }[self]


_ORDINALS = {1: "1st", 2: "2nd", 3: "3rd"}


@dataclass
class KrausClassification:
    kind: KrausKind
    # "annihilation-like" or "creation-like" for non-normal operators
    orientation: Optional[str] = None

    @property
    def case(self) -> int:
        return self.kind.case

    def describe(self) -> str:
        text = f"{self.kind.value} ({_ORDINALS[self.case]} case)"
        if self.orientation is not None:
            text += f", {self.orientation}"
        return text

    def to_dict(self) -> dict[str, Any]:
        d_c, d_r = self.kind.dims
        return {
            "kind": self.kind.value,
            "case": self.case,
            "orientation": self.orientation,
            "d_c": d_c,
            "d_r": d_r,
        }


def classify_single_kraus(model: GaussianModel,
                          tol: Optional[float] = None) -> KrausClassification:
    """Classify L = a(v) + a^+(u) for a model with one Kraus operator and
    H = 0.

    L is a unimodular multiple of a self-adjoint operator iff u = lambda v
    with |lambda| = 1, and normal iff ||v|| = ||u||.
    """
    tol = envs.GAUSS_DFA_SPAN_TOL if tol is None else tol
    ensure_valid(model)
    if model.m != 1:
        raise Unsupported(
            f"classification needs exactly one Kraus operator, got {model.m}")
    v, u = model.V[0], model.U[0]
    scale = max(np.linalg.norm(v), np.linalg.norm(u))
    h_size = max(
        np.abs(model.omega).max(initial=0.0),
        np.abs(model.kappa).max(initial=0.0),
        np.abs(model.zeta).max(initial=0.0))
    if h_size > envs.GAUSS_DFA_TOL_SYM * max(scale, 1.0):
        raise Unsupported("classification needs H = 0")

    nv2 = float(np.vdot(v, v).real)
    nu2 = float(np.vdot(u, u).real)
    if abs(nv2 - nu2) > tol * (nv2 + nu2):
        orientation = ("annihilation-like"
                       if nv2 > nu2 else "creation-like")
        return KrausClassification(KrausKind.NON_NORMAL, orientation)
    # sine of the angle between u and the complex line through v
    residual = u - (np.vdot(v, u) / nv2) * v
    if np.linalg.norm(residual) <= tol * np.sqrt(nu2):
        return KrausClassification(KrausKind.SELF_ADJOINT)
    return KrausClassification(KrausKind.NORMAL)
