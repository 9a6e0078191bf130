"""
Kernel Special Functions Tool
E(z) = 2 int_0^z exp(-pi u^2) du, its derivatives, and the incomplete
integrals beta(alpha; x) = int_x^oo u^(alpha-1) exp(-pi u) du used by the
completed theta kernels and the Eichler integral.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Union

import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate, special

from apps.core.conf import setting
from apps.core.exceptions import SpecError

logger = logging.getLogger(__name__)

Real = Union[float, np.ndarray]

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class Accuracy:
    """Absolute tolerance promised by the kernel functions."""
    abs_tol: float = field(default_factory=lambda: setting('SPECIAL_ABS_TOL'))

    def __post_init__(self):
        if not 0 < self.abs_tol < 1e-6:
            raise SpecError(f"abs_tol must lie in (0, 1e-6), got {self.abs_tol}")


# ============================================================================
# ERROR FUNCTION E AND ITS DERIVATIVES
# ============================================================================

def err_E(z: Real) -> Real:
    """E(z) = erf(sqrt(pi) z)."""
    return special.erf(SQRT_PI * np.asarray(z, dtype=float))[()]


@lru_cache(maxsize=None)
def derivative_factor(k: int) -> Polynomial:
    """h_{k-1} with E^(k)(z) = h_{k-1}(z) exp(-pi z^2): h_0 = 2, h_{j+1} = h_j' - 2 pi z h_j."""
    z = Polynomial([0.0, 1.0])
    h = Polynomial([2.0])
    for _ in range(k - 1):
        h = h.deriv() - 2 * math.pi * z * h
    return h


def err_E_deriv(k: int, z: Real) -> Real:
    """k-th derivative of E for k >= 1."""
    if k < 1:
        raise SpecError(f"derivative order must be >= 1, got {k}")
    z = np.asarray(z, dtype=float)
    return (derivative_factor(k)(z) * np.exp(-math.pi * z * z))[()]


# ============================================================================
# INCOMPLETE INTEGRALS
# ============================================================================

def beta_half(x: Real) -> Real:
    """beta(x) = beta(1/2; x) = erfc(sqrt(pi x)), decreasing from beta(0) = 1."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise SpecError("beta_half requires x >= 0")
    return special.erfc(np.sqrt(math.pi * x))[()]


def beta_gen(alpha: Any, x: Real) -> Real:
    """
    beta(alpha; x) for half-integral alpha.

    alpha = -1/2 uses the scaled complement, 2 e^{-pi x} (x^{-1/2} - pi erfcx(sqrt(pi x))),
    which stays accurate for large x. Positive alpha uses the regularized
    upper incomplete gamma function.
    """
    alpha = Fraction(alpha)
    if alpha.denominator != 2:
        raise SpecError(f"only half-integral alpha is supported, got {alpha}")
    x = np.asarray(x, dtype=float)
    if alpha == Fraction(1, 2):
        return beta_half(x)
    if alpha == Fraction(-1, 2):
        if np.any(x <= 0):
            raise SpecError("beta(-1/2; x) requires x > 0")
        root = np.sqrt(math.pi * x)
        return (2 * np.exp(-math.pi * x) * (1 / np.sqrt(x) - math.pi * special.erfcx(root)))[()]
    if alpha > 0:
        if np.any(x < 0):
            raise SpecError("beta(alpha; x) requires x >= 0")
        a = float(alpha)
        return (math.pi ** -a * special.gamma(a) * special.gammaincc(a, math.pi * x))[()]
    raise SpecError(f"alpha = {alpha} is not supported")


def beta_quadrature(alpha: Any, x: float, accuracy: Accuracy = None) -> float:
    """beta(alpha; x) by adaptive quadrature; independent of the closed forms above."""
    accuracy = accuracy or Accuracy()
    a = float(Fraction(alpha))
    value, _ = integrate.quad(lambda u: u ** (a - 1) * math.exp(-math.pi * u), x, np.inf,
                              epsabs=accuracy.abs_tol, epsrel=1e-13, limit=200)
    return value


# ============================================================================
# CROSS CHECKS
# ============================================================================

class KernelFunctionTool:
    """
    Kernel function identities checked against an Accuracy.

    Used by the verification suite; the closed forms themselves are the
    functions above.
    """

    def __init__(self, accuracy: Accuracy = None):
        self.accuracy = accuracy or Accuracy()

    def complement_residual(self, z: float) -> float:
        """|E(z) - sgn(z)(1 - beta(z^2))|."""
        return abs(err_E(z) - np.sign(z) * (1 - beta_half(z * z)))

    def recurrence_residual(self, x: float) -> float:
        """|beta(1/2; x) - e^{-pi x}/(pi sqrt x) + beta(-1/2; x)/(2 pi)|."""
        lhs = beta_gen(Fraction(1, 2), x)
        rhs = math.exp(-math.pi * x) / (math.pi * math.sqrt(x)) - beta_gen(Fraction(-1, 2), x) / (2 * math.pi)
        return abs(lhs - rhs)

    def quadrature_residual(self, z: float) -> float:
        """|E(z) - 2 int_0^z exp(-pi u^2) du| with the integral by quadrature."""
        value, _ = integrate.quad(lambda u: 2 * math.exp(-math.pi * u * u), 0, z,
                                  epsabs=self.accuracy.abs_tol, epsrel=1e-14)
        return abs(err_E(z) - value)

    def run(self, grid, tol: float = 1e-12) -> Dict[str, Any]:
        """Maximal residuals over `grid`; `passed` when all are within tol."""
        grid = [float(z) for z in grid]
        complement = max(self.complement_residual(z) for z in grid)
        recurrence = max(self.recurrence_residual(z) for z in grid if z > 0)
        quadrature = max(self.quadrature_residual(z) for z in grid)
        worst = max(complement, recurrence, quadrature)
        logger.debug(f"kernel residuals complement={complement:.2e} recurrence={recurrence:.2e} "
                     f"quadrature={quadrature:.2e}")
        return {
            'complement': complement,
            'recurrence': recurrence,
            'quadrature': quadrature,
            'passed': worst <= tol,
        }
