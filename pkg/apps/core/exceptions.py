"""
Exception hierarchy shared by every indeftheta app.

Each error carries the process exit code the `theta` management command
maps it to.
"""

from typing import Any, Dict, Optional


class IndefThetaError(Exception):
    """Base class for all library errors."""

    exit_code = 2

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


# ── Invalid input ────────────────────────────────────────────────────────────

class SpecError(IndefThetaError, ValueError):
    """Malformed matrix, vector, polynomial or spec."""


class SignatureError(SpecError):
    """Quadratic form is singular or not of signature (n-1, 1)."""


class NotInConeError(SpecError):
    """Vector is neither an interior point nor a cusp of the chosen cone."""


class InadmissibleCharacteristicError(SpecError):
    """B(c, a) is an integer for a cusp c and no boundary override is set."""


class BoundaryOverrideViolation(SpecError):
    """A boundary lattice line contributes a non-zero term under override."""


class PoleError(IndefThetaError, ZeroDivisionError):
    """Evaluation point hits a pole of a closed-form expression."""


# ── Computation limits ───────────────────────────────────────────────────────

class EnumerationBoundError(IndefThetaError):
    """Lattice enumeration would exceed the configured point budget."""

    exit_code = 3


class ConvergenceNotAchieved(IndefThetaError):
    """Requested tolerance unreachable; carries the best error estimate."""

    exit_code = 3

    def __init__(self, message: str, estimate: float = float('inf'),
                 diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message, diagnostics)
        self.estimate = estimate


class VerificationFailed(IndefThetaError):
    """A verification report did not pass."""

    exit_code = 1
