"""Gaussian QMS model data, validation and builders.

A model is the finite data (Omega, kappa, zeta, V, U) of a GKLS generator on
the Fock space over C^d with Hamiltonian

    H = sum_jk Omega_jk a_j^+ a_k + kappa_jk/2 a_j^+ a_k^+ + conj(kappa_jk)/2
        a_j a_k + sum_j zeta_j/2 a_j^+ + conj(zeta_j)/2 a_j

and Kraus operators L_l = sum_k conj(V_lk) a_k + U_lk a_k^+.
"""
import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import scipy.linalg

import gaussian_dfa.envs as envs
from gaussian_dfa.errors import (ModelParseError, SelfAdjointnessViolated,
                                 ValidationFailed)
from gaussian_dfa.logger import init_logger

logger = init_logger(__name__)

QUADRATURE_KINDS = ("q", "p")
KRAUS_KINDS = ("q", "p", "a", "adag", "custom")

_SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass
class GaussianModel:
    omega: np.ndarray
    kappa: np.ndarray
    zeta: np.ndarray
    V: np.ndarray
    U: np.ndarray
    name: Optional[str] = None

    def __post_init__(self):
        self.V = np.atleast_2d(np.asarray(self.V, dtype=complex))
        self.U = np.atleast_2d(np.asarray(self.U, dtype=complex))
        if self.V.shape != self.U.shape:
            raise ValueError(f"V and U must have the same shape, got "
                             f"{self.V.shape} and {self.U.shape}")
        d = self.V.shape[1]
        self.omega = np.asarray(self.omega, dtype=complex).reshape(d, d)
        self.kappa = np.asarray(self.kappa, dtype=complex).reshape(d, d)
        self.zeta = np.asarray(self.zeta, dtype=complex).reshape(d)

    @property
    def d(self) -> int:
        return self.V.shape[1]

    @property
    def m(self) -> int:
        return self.V.shape[0]

    def kraus_rows(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return [(self.V[ell], self.U[ell]) for ell in range(self.m)]

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "d": self.d,
            "m": self.m,
            "omega": encode_complex(self.omega),
            "kappa": encode_complex(self.kappa),
            "zeta": encode_complex(self.zeta),
            "V": encode_complex(self.V),
            "U": encode_complex(self.U),
        }
        if self.name is not None:
            data["name"] = self.name
        return data


@dataclass(frozen=True)
class QuadraticTerm:
    """coeff * factor1 * factor2, or coeff * factor1 when factor2 is None.
    Factors are (kind, mode) with kind in {"q", "p"} and 1-based modes."""
    coeff: float
    factor1: tuple[str, int]
    factor2: Optional[tuple[str, int]] = None

    def factors(self) -> list[tuple[str, int]]:
        if self.factor2 is None:
            return [self.factor1]
        return [self.factor1, self.factor2]

    @classmethod
    def parse(cls, coeff: float, factors: Sequence[str]) -> "QuadraticTerm":
        """Build a term from labels such as ("q1", "p2")."""
        if not 1 <= len(factors) <= 2:
            raise ValueError("a quadrature term has one or two factors, got "
                             f"{list(factors)}")
        parsed = [_parse_factor(f) for f in factors]
        return cls(coeff, parsed[0], parsed[1] if len(parsed) == 2 else None)


def _parse_factor(label: str) -> tuple[str, int]:
    label = label.strip()
    kind, mode = label[:1], label[1:]
    if kind not in QUADRATURE_KINDS or not mode.isdigit():
        raise ValueError(f"invalid quadrature factor {label!r}, expected "
                         "q<mode> or p<mode>")
    return kind, int(mode)


@dataclass
class ValidationCheck:
    name: str
    passed: bool
    message: str = ""
    offending: list[Any] = field(default_factory=list)


@dataclass
class ValidationReport:
    checks: list[ValidationCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> list[ValidationCheck]:
        return [check for check in self.checks if not check.passed]

    def failure_messages(self) -> list[str]:
        return [f"{c.name}: {c.message}" for c in self.failures()]

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "checks": [{
                "name": c.name,
                "passed": c.passed,
                "message": c.message,
                "offending": c.offending,
            } for c in self.checks],
        }


def _asymmetry_check(name: str, mat: np.ndarray, partner: np.ndarray,
                     tol: float, what: str) -> ValidationCheck:
    scale = float(np.abs(mat).max(initial=0.0))
    diff = np.abs(mat - partner)
    bad = np.argwhere(diff > tol * scale)
    if bad.size == 0:
        return ValidationCheck(name, True)
    offending = [[int(j), int(k)] for j, k in bad if j <= k]
    return ValidationCheck(
        name, False, f"matrix is not {what} (max deviation "
        f"{diff.max():.3e}) at entries {offending}", offending)


def validate(model: GaussianModel,
             tol_sym: Optional[float] = None) -> ValidationReport:
    """Check the standing assumptions on a model. Failures are reported, not
    raised."""
    tol_sym = envs.GAUSS_DFA_TOL_SYM if tol_sym is None else tol_sym
    checks = []

    arrays = {
        "omega": model.omega,
        "kappa": model.kappa,
        "zeta": model.zeta,
        "V": model.V,
        "U": model.U,
    }
    not_finite = [k for k, a in arrays.items() if not np.all(np.isfinite(a))]
    checks.append(
        ValidationCheck("finite", not not_finite,
                        f"non-finite entries in {not_finite}" if not_finite
                        else "", not_finite))

    checks.append(
        _asymmetry_check("omega_hermitian", model.omega,
                         model.omega.conj().T, tol_sym, "Hermitian"))
    checks.append(
        _asymmetry_check("kappa_symmetric", model.kappa, model.kappa.T,
                         tol_sym, "symmetric"))

    dissipative = bool(np.any(model.V) or np.any(model.U))
    checks.append(
        ValidationCheck(
            "kraus_nonzero", dissipative, "" if dissipative else
            "V and U are both zero; pure Hamiltonian evolutions are "
            "excluded"))

    count_ok = 1 <= model.m <= 2 * model.d
    checks.append(
        ValidationCheck(
            "kraus_count", count_ok, "" if count_ok else
            f"number of Kraus operators m={model.m} must lie in "
            f"[1, 2d={2 * model.d}]"))

    report = ValidationReport(checks)
    if not report.passed:
        logger.debug("Validation failed: %s", report.failure_messages())
    return report


def ensure_valid(model: GaussianModel,
                 tol_sym: Optional[float] = None) -> None:
    report = validate(model, tol_sym)
    if not report.passed:
        raise ValidationFailed(report)


def _rank_tolerance(mat: np.ndarray, svals: np.ndarray,
                    tol_rank: Optional[float]) -> float:
    tol_rank = envs.GAUSS_DFA_TOL_RANK if tol_rank is None else tol_rank
    if tol_rank > 0:
        return tol_rank
    return max(mat.shape) * np.finfo(float).eps * svals.max(initial=0.0)


def check_minimality(model: GaussianModel,
                     tol_rank: Optional[float] = None) -> bool:
    """True iff ker(V*) and ker(U^T) intersect trivially, i.e. the m x 2d
    matrix [conj(V) | U] has full row rank."""
    stacked = np.hstack([model.V.conj(), model.U])
    if model.m > 2 * model.d:
        return False
    svals = scipy.linalg.svdvals(stacked)
    tol = _rank_tolerance(stacked, svals, tol_rank)
    return int(np.sum(svals > tol)) == model.m


def minimal_representation(model: GaussianModel,
                           tol_rank: Optional[float] = None) -> GaussianModel:
    """Equivalent model with the fewest Kraus operators.

    The Kraus operators are mixed by the unitary of left singular vectors of
    [conj(V) | U] and the operators that vanish are dropped. The generator is
    unchanged by unitary mixing.
    """
    stacked = np.hstack([model.V.conj(), model.U])
    W, svals, Xh = scipy.linalg.svd(stacked, full_matrices=False)
    tol = _rank_tolerance(stacked, svals, tol_rank)
    rank = int(np.sum(svals > tol))
    rows = svals[:rank, None] * Xh[:rank]
    if rank < model.m:
        logger.info("Reduced %d Kraus operators to %d", model.m, rank)
    d = model.d
    return GaussianModel(omega=model.omega.copy(),
                         kappa=model.kappa.copy(),
                         zeta=model.zeta.copy(),
                         V=rows[:, :d].conj(),
                         U=rows[:, d:],
                         name=model.name)


def _ladder_coefficients(kind: str, mode: int,
                         d: int) -> tuple[np.ndarray, np.ndarray]:
    """(alpha, beta) with factor = sum_k alpha_k a_k + beta_k a_k^+."""
    if not 1 <= mode <= d:
        raise ValueError(f"mode {mode} out of range 1..{d}")
    alpha = np.zeros(d, dtype=complex)
    beta = np.zeros(d, dtype=complex)
    if kind == "q":
        alpha[mode - 1] = _SQRT_HALF
        beta[mode - 1] = _SQRT_HALF
    elif kind == "p":
        alpha[mode - 1] = -1j * _SQRT_HALF
        beta[mode - 1] = 1j * _SQRT_HALF
    else:
        raise ValueError(f"unknown quadrature kind {kind!r}")
    return alpha, beta


def hamiltonian_from_quadratures(
        terms: Iterable[QuadraticTerm],
        d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Normal order a polynomial of degree <= 2 in the quadratures q_j, p_j
    and return (Omega, kappa, zeta). Additive constants are dropped."""
    N = np.zeros((d, d), dtype=complex)
    C = np.zeros((d, d), dtype=complex)
    beta_linear = np.zeros(d, dtype=complex)
    same_mode_products: dict[int, list[float]] = {}

    for term in terms:
        if np.iscomplexobj(term.coeff) and np.imag(term.coeff) != 0:
            raise SelfAdjointnessViolated(
                f"term {term} has a non-real coefficient")
        coeff = float(np.real(term.coeff))
        if term.factor2 is None:
            _, beta = _ladder_coefficients(*term.factor1, d)
            beta_linear += coeff * beta
            continue

        (kind1, mode1), (kind2, mode2) = term.factor1, term.factor2
        if mode1 == mode2 and kind1 != kind2:
            ordered = same_mode_products.setdefault(mode1, [0.0, 0.0])
            ordered[0 if kind1 == "q" else 1] += coeff

        alpha1, beta1 = _ladder_coefficients(kind1, mode1, d)
        alpha2, beta2 = _ladder_coefficients(kind2, mode2, d)
        # a_p a_q^+ = a_q^+ a_p + delta_pq; the constant is dropped
        N += coeff * (np.outer(beta1, alpha2) + np.outer(beta2, alpha1))
        C += coeff * np.outer(beta1, beta2)

    for mode, (qp, pq) in same_mode_products.items():
        if not math.isclose(qp, pq, rel_tol=1e-12, abs_tol=1e-15):
            raise SelfAdjointnessViolated(
                f"q{mode} p{mode} (coefficient {qp}) and p{mode} q{mode} "
                f"(coefficient {pq}) must appear symmetrized")

    omega = (N + N.conj().T) / 2
    kappa = C + C.T
    zeta = 2 * beta_linear
    return omega, kappa, zeta


def kraus_row_from_quadrature(
    kind: str,
    mode: int,
    d: int,
    scale: complex = 1.0,
    v: Optional[Sequence[complex]] = None,
    u: Optional[Sequence[complex]] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """(v, u) rows of the Kraus operator scale * X with X one of q_j, p_j,
    a_j, a_j^+, or the operator given by explicit (v, u) for "custom".

    v enters L conjugated, so a complex scale c multiplies u by c and v by
    conj(c).
    """
    if kind == "custom":
        if v is None or u is None:
            raise ValueError("custom Kraus rows need both v and u")
        v_row = np.asarray(v, dtype=complex).reshape(d)
        u_row = np.asarray(u, dtype=complex).reshape(d)
    else:
        if not 1 <= mode <= d:
            raise ValueError(f"mode {mode} out of range 1..{d}")
        v_row = np.zeros(d, dtype=complex)
        u_row = np.zeros(d, dtype=complex)
        j = mode - 1
        if kind == "q":
            v_row[j] = u_row[j] = _SQRT_HALF
        elif kind == "p":
            v_row[j] = u_row[j] = 1j * _SQRT_HALF
        elif kind == "a":
            v_row[j] = 1.0
        elif kind == "adag":
            u_row[j] = 1.0
        else:
            raise ValueError(f"unknown Kraus kind {kind!r}, expected one of "
                             f"{KRAUS_KINDS}")
    return np.conj(scale) * v_row, scale * u_row


def model_from_operators(d: int,
                         kraus: Sequence[tuple[np.ndarray, np.ndarray]],
                         terms: Iterable[QuadraticTerm] = (),
                         omega: Optional[np.ndarray] = None,
                         name: Optional[str] = None) -> GaussianModel:
    """Assemble a model from Kraus rows and a quadrature Hamiltonian. An
    explicit `omega` is added to the quadratic part."""
    h_omega, h_kappa, h_zeta = hamiltonian_from_quadratures(terms, d)
    if omega is not None:
        h_omega = h_omega + np.asarray(omega, dtype=complex)
    V = np.array([row[0] for row in kraus], dtype=complex).reshape(-1, d)
    U = np.array([row[1] for row in kraus], dtype=complex).reshape(-1, d)
    return GaussianModel(h_omega, h_kappa, h_zeta, V, U, name=name)


def lossy_oscillator(omega: float = 0.0) -> GaussianModel:
    """d = 1, L = a, H = omega a^+ a."""
    return model_from_operators(1, [kraus_row_from_quadrature("a", 1, 1)],
                                omega=np.array([[omega]]),
                                name="lossy-oscillator")


SINGLE_KRAUS_CASES = ("q", "q+iq", "a", "adag")


def single_kraus(case: str, d: int = 3) -> GaussianModel:
    """H = 0 with one Kraus operator: q_1, q_1 + i q_2, a_1 or a_1^+."""
    if case == "q+iq":
        if d < 2:
            raise ValueError("q_1 + i q_2 needs d >= 2")
        v1, u1 = kraus_row_from_quadrature("q", 1, d)
        v2, u2 = kraus_row_from_quadrature("q", 2, d, scale=1j)
        row = (v1 + v2, u1 + u2)
    elif case in ("q", "a", "adag"):
        row = kraus_row_from_quadrature(case, 1, d)
    else:
        raise ValueError(f"unknown single Kraus case {case!r}, expected one "
                         f"of {SINGLE_KRAUS_CASES}")
    return model_from_operators(d, [row], name=f"single-kraus-{case}-d{d}")


def number_hamiltonian_model(v: Sequence[complex],
                             u: Sequence[complex]) -> GaussianModel:
    """H = N = sum_j a_j^+ a_j with the single Kraus operator a(v) + a^+(u)."""
    v_row = np.asarray(v, dtype=complex)
    d = v_row.shape[0]
    return model_from_operators(d, [(v_row, np.asarray(u, dtype=complex))],
                                omega=np.eye(d),
                                name=f"number-hamiltonian-d{d}")


def sharp_commutator_chain(d: int) -> GaussianModel:
    """L = p_1, H = q_d^2 + sum_{j<d} p_{j+1} q_j. The iterated commutators
    need all 2d - 1 orders to reach a trivial algebra."""
    if d < 1:
        raise ValueError("d must be positive")
    terms = [QuadraticTerm(1.0, ("q", d), ("q", d))]
    terms += [
        QuadraticTerm(1.0, ("p", j + 1), ("q", j)) for j in range(1, d)
    ]
    return model_from_operators(d, [kraus_row_from_quadrature("p", 1, d)],
                                terms,
                                name=f"sharp-commutator-chain-d{d}")


def position_coupled_pair() -> GaussianModel:
    """d = 2, L = q_1, H = q_1 p_2."""
    return model_from_operators(2, [kraus_row_from_quadrature("q", 1, 2)],
                                [QuadraticTerm(1.0, ("q", 1), ("p", 2))],
                                name="position-coupled-pair")


def two_boson_bath(gamma_minus: np.ndarray,
                   gamma_plus: np.ndarray,
                   omega: Optional[np.ndarray] = None,
                   tol: float = 1e-12) -> GaussianModel:
    """Two modes coupled to a common bath with absorption and emission
    matrices gamma_minus, gamma_plus (positive semidefinite 2 x 2).

    Each strictly positive eigenpair (lambda, phi) of gamma_minus gives the
    Kraus operator sqrt(lambda) sum_k phi_k a_k, and each one of gamma_plus
    gives sqrt(lambda) sum_k phi_k a_k^+.
    """
    gamma_minus = np.asarray(gamma_minus, dtype=complex)
    gamma_plus = np.asarray(gamma_plus, dtype=complex)
    d = gamma_minus.shape[0]
    kraus = []
    for gamma, creation in ((gamma_minus, False), (gamma_plus, True)):
        if not np.allclose(gamma, gamma.conj().T):
            raise ValueError("bath matrices must be Hermitian")
        evals, evecs = scipy.linalg.eigh(gamma)
        if evals.min(initial=0.0) < -tol * max(1.0, evals.max(initial=0.0)):
            raise ValueError("bath matrices must be positive semidefinite")
        cutoff = tol * max(evals.max(initial=0.0), 1.0)
        for lam, phi in zip(evals, evecs.T):
            if lam <= cutoff:
                continue
            coeffs = math.sqrt(lam) * phi
            if creation:
                kraus.append((np.zeros(d, dtype=complex), coeffs))
            else:
                kraus.append((coeffs.conj(), np.zeros(d, dtype=complex)))
    if not kraus:
        raise ValueError("both bath matrices vanish")
    return model_from_operators(d, kraus, omega=omega, name="two-boson-bath")


def rank_one(psi: Sequence[complex], weight: float = 1.0) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return weight * np.outer(psi, psi.conj())


def encode_complex(arr: Union[np.ndarray, complex]) -> Any:
    """Nested lists with every complex entry as a [re, im] pair."""
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim == 0:
        return [float(arr.real), float(arr.imag)]
    return [encode_complex(x) for x in arr]


def decode_complex(data: Any, shape: tuple[int, ...], key: str) -> np.ndarray:
    """Inverse of encode_complex. Plain real numbers are accepted too."""

    def _decode(x):
        if isinstance(x, (int, float)):
            return complex(x)
        if (isinstance(x, list) and len(x) == 2
                and all(isinstance(c, (int, float)) for c in x)):
            return complex(x[0], x[1])
        raise ModelParseError(f"{key}: expected a number or [re, im] pair, "
                              f"got {x!r}")

    try:
        if len(shape) == 0:
            return np.asarray(_decode(data))
        if not isinstance(data, list) or len(data) != shape[0]:
            raise ModelParseError(f"{key}: expected a list of length "
                                  f"{shape[0]}, got {data!r}")
        return np.array(
            [decode_complex(row, shape[1:], key) for row in data],
            dtype=complex).reshape(shape)
    except (TypeError, ValueError) as e:
        if isinstance(e, ModelParseError):
            raise
        raise ModelParseError(f"{key}: {e}") from e


def _kraus_from_spec(entries: Any, d: int) -> list[tuple[np.ndarray,
                                                        np.ndarray]]:
    if not isinstance(entries, list) or not entries:
        raise ModelParseError("kraus must be a non-empty list")
    rows = []
    for entry in entries:
        if not isinstance(entry, dict):
            raise ModelParseError(f"invalid kraus entry {entry!r}")
        scale = complex(decode_complex(entry.get("scale", 1.0), (), "scale"))
        kind = entry.get("kind", "custom")
        try:
            if kind == "custom":
                rows.append(
                    kraus_row_from_quadrature(
                        "custom",
                        0,
                        d,
                        scale,
                        v=decode_complex(entry.get("v"), (d, ), "kraus.v"),
                        u=decode_complex(entry.get("u"), (d, ), "kraus.u")))
            else:
                rows.append(
                    kraus_row_from_quadrature(kind, int(entry["mode"]), d,
                                              scale))
        except (KeyError, ValueError) as e:
            if isinstance(e, ModelParseError):
                raise
            raise ModelParseError(f"invalid kraus entry {entry!r}: {e}") from e
    return rows


def _terms_from_spec(entries: Any) -> list[QuadraticTerm]:
    if not isinstance(entries, list):
        raise ModelParseError("terms must be a list")
    terms = []
    for entry in entries:
        try:
            terms.append(
                QuadraticTerm.parse(float(entry["coeff"]), entry["factors"]))
        except (KeyError, TypeError, ValueError) as e:
            raise ModelParseError(f"invalid term {entry!r}: {e}") from e
    return terms


def _kraus_count(data: dict) -> int:
    try:
        m = int(data["m"])
    except (KeyError, TypeError, ValueError) as e:
        raise ModelParseError("model needs a positive integer 'm'") from e
    if m < 1:
        raise ModelParseError("model needs a positive integer 'm'")
    return m


def model_from_dict(data: Any) -> GaussianModel:
    if not isinstance(data, dict):
        raise ModelParseError("a model must be a JSON object")
    try:
        d = int(data["d"])
    except (KeyError, TypeError, ValueError) as e:
        raise ModelParseError("model needs a positive integer 'd'") from e
    if d < 1:
        raise ModelParseError("model needs a positive integer 'd'")

    if "kraus" in data:
        rows = _kraus_from_spec(data["kraus"], d)
        V = np.array([r[0] for r in rows])
        U = np.array([r[1] for r in rows])
    else:
        if "m" not in data or "V" not in data or "U" not in data:
            raise ModelParseError("model needs 'm', 'V' and 'U' or 'kraus'")
        m = _kraus_count(data)
        V = decode_complex(data["V"], (m, d), "V")
        U = decode_complex(data["U"], (m, d), "U")
    if "m" in data and _kraus_count(data) != V.shape[0]:
        raise ModelParseError(f"m={data['m']} does not match the "
                              f"{V.shape[0]} Kraus rows given")

    omega = decode_complex(data.get("omega", np.zeros((d, d)).tolist()),
                           (d, d), "omega")
    kappa = decode_complex(data.get("kappa", np.zeros((d, d)).tolist()),
                           (d, d), "kappa")
    zeta = decode_complex(data.get("zeta", [0.0] * d), (d, ), "zeta")

    if "terms" in data:
        try:
            t_omega, t_kappa, t_zeta = hamiltonian_from_quadratures(
                _terms_from_spec(data["terms"]), d)
        except ValueError as e:
            if isinstance(e, (ModelParseError, SelfAdjointnessViolated)):
                raise
            raise ModelParseError(str(e)) from e
        omega, kappa, zeta = omega + t_omega, kappa + t_kappa, zeta + t_zeta

    return GaussianModel(omega, kappa, zeta, V, U, name=data.get("name"))


def load_model(path: Union[str, Path]) -> GaussianModel:
    """Read a model file. Raises FileNotFoundError or ModelParseError."""
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ModelParseError(f"{path}: invalid JSON: {e}") from e
        except UnicodeDecodeError as e:
            raise ModelParseError(f"{path}: not UTF-8 text: {e}") from e
    model = model_from_dict(data)
    if model.name is None:
        model.name = Path(path).stem
    return model


def dump_model(model: GaussianModel) -> str:
    return json.dumps(model.to_dict(), indent=2)
