"""Exceptions raised by gaussian-dfa operations.

Input problems derive from ValueError, numerical failures from RuntimeError.
"""
from typing import TYPE_CHECKING, Optional

import numpy as np

if TYPE_CHECKING:
    from gaussian_dfa.model import ValidationReport


class ValidationFailed(ValueError):
    """A model violates one of the standing assumptions."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("model validation failed: " +
                         "; ".join(report.failure_messages()))


class ModelParseError(ValueError):
    """A model file is not valid JSON or does not follow the model schema."""


class SelfAdjointnessViolated(ValueError):
    """A quadrature product cannot be part of a self-adjoint Hamiltonian."""


class Unsupported(ValueError):
    """The requested operation does not apply to this model."""


class AssumptionViolated(ValueError):
    """A declared subspace kind does not hold. `witness` is a real-embedded
    vector demonstrating the failure."""

    def __init__(self, message: str, witness: Optional[np.ndarray] = None):
        self.witness = witness
        super().__init__(message)


class ParityViolation(RuntimeError):
    """An odd symplectic dimension was found, which means a rank decision
    upstream went wrong."""


class QuadratureNotConverged(RuntimeError):
    pass


class StepSizeUnderflow(RuntimeError):
    pass
