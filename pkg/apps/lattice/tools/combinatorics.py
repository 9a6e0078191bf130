"""
Bernoulli / Eulerian Combinatorics Tool
Exact Bernoulli numbers and polynomials, periodic Bernoulli functions,
Eulerian numbers with the closed form of sum m^k x^m, and the Bernoulli
generating identity for half-lattice exponential sums.
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Any, Tuple, Union

import sympy

from apps.core.exceptions import ConvergenceNotAchieved
from apps.lattice.tools.quadratic_form import as_fraction

logger = logging.getLogger(__name__)

Number = Union[Fraction, complex, float]

_X = sympy.Symbol('x')


# ============================================================================
# BERNOULLI
# ============================================================================

@lru_cache(maxsize=None)
def bernoulli_poly(k: int) -> Tuple[Fraction, ...]:
    """Coefficients of B_k(X), ascending powers."""
    if k < 0:
        raise ValueError("k must be non-negative")
    poly = sympy.Poly(sympy.bernoulli(k, _X), _X)
    coeffs = [Fraction(0)] * (k + 1)
    for (power,), c in poly.terms():
        coeffs[power] = as_fraction(sympy.Rational(c))
    return tuple(coeffs)


def bernoulli_poly_eval(k: int, x: Any) -> Any:
    """B_k(x) by Horner; exact for rational x."""
    result = 0
    for c in reversed(bernoulli_poly(k)):
        result = result * x + c
    return result


def bernoulli_number(k: int) -> Fraction:
    """B_k = B_k(0), so B_1 = -1/2."""
    return bernoulli_poly(k)[0]


def periodic_bernoulli(k: int, x: Any) -> Fraction:
    """B-bar_k(x) = B_k(x - floor(x))."""
    x = as_fraction(x)
    return bernoulli_poly_eval(k, x - math.floor(x))


# ============================================================================
# EULERIAN
# ============================================================================

@lru_cache(maxsize=None)
def eulerian(k: int, j: int) -> int:
    """Eulerian number E_{k,j}: permutations of k letters with j ascents."""
    if k == 0:
        return 1 if j == 0 else 0
    if j < 0 or j > k - 1:
        return 0
    return sum((-1) ** i * math.comb(k + 1, i) * (j + 1 - i) ** k for i in range(j + 1))


def power_geometric_closed_form(k: int, x: Number) -> Number:
    """
    x/(1-x)^{k+1} * sum_j E_{k,j} x^j.

    Equals sum_{m>=0} m^k x^m for |x| < 1 and -sum_{m<=-1} m^k x^m for
    |x| > 1. For k = 0 the sum is read with 0^0 = 1, giving 1/(1-x).
    """
    if abs(complex(x)) == 1:
        raise ValueError("closed form undefined on the unit circle")
    if k == 0:
        return 1 / (1 - x)
    return x * sum(eulerian(k, j) * x ** j for j in range(k)) / (1 - x) ** (k + 1)


# ============================================================================
# BERNOULLI TAIL IDENTITY
# ============================================================================

def bernoulli_tail_series(k: int, t: Any, z: complex, tol: float = 1e-15, max_terms: int = 400) -> complex:
    """
    sum_{m>=0} B_{m+k}(t)/(m+k) z^m/m!  for |z| < 2 pi.

    Regular part of the Bernoulli tail identity; defined at z = 0.
    """
    z = complex(z)
    if k < 1:
        raise ValueError("k must be at least 1")
    if abs(z) >= 2 * math.pi:
        raise ValueError("|z| must be below 2 pi")
    t = as_fraction(t)
    if z == 0:
        return complex(float(bernoulli_poly_eval(k, t)) / k)
    shift = abs(math.floor(t))
    spread = abs(float(t)) + 1.0
    r = abs(z)

    value = 0j
    for m in range(max_terms):
        n = m + k
        value += float(bernoulli_poly_eval(n, t)) / n * z ** m / math.factorial(m)
        if _tail_bound(k, m, r, shift, spread) < tol:
            return value
    raise ConvergenceNotAchieved("Bernoulli tail series did not converge",
                                 estimate=_tail_bound(k, max_terms - 1, r, shift, spread))


def bernoulli_tail_identity(k: int, alpha: Any, beta: Any, z: complex, tol: float = 1e-15,
                            max_terms: int = 400) -> complex:
    """
    (-1)^k (k-1)!/z^k - sum_{m>=0} B_{m+k}(t)/(m+k) z^m/m!,  t = alpha + beta - floor(beta).

    Equals sum_{n+beta>=0} (n+alpha+beta)^{k-1} e^{(n+alpha+beta) z} for Re z < 0 and
    the negated sum over n+beta < 0 for Re z > 0. The m-series is truncated
    once the remainder bound drops below tol.

    Args:
        k: order, k >= 1
        alpha, beta: rational shifts
        z: 0 < |z| < 2 pi, Re z != 0

    Returns:
        complex value of the identity
    """
    z = complex(z)
    if not 0 < abs(z) < 2 * math.pi:
        raise ValueError("|z| must lie in (0, 2 pi)")
    if z.real == 0:
        raise ValueError("Re z must be non-zero")
    beta = as_fraction(beta)
    t = as_fraction(alpha) + beta - math.floor(beta)
    regular = bernoulli_tail_series(k, t, z, tol=tol, max_terms=max_terms)
    return (-1) ** k * math.factorial(k - 1) / z ** k - regular


def _tail_bound(k: int, M: int, r: float, shift: int, spread: float) -> float:
    """
    Bound on sum_{m>M} |B_{m+k}(t)|/(m+k) r^m/m!.

    Uses |B_n(t0)| <= 4 n!/(2 pi)^n on [0, 1] and the shift rule
    B_n(t0 + j) = B_n(t0) + n sum (t0 + i)^{n-1}.
    """
    m = M + 1
    n = m + k
    log_first = math.log(4) + math.lgamma(n) - n * math.log(2 * math.pi) + m * math.log(r) - math.lgamma(m + 1)
    ratio = (m + k) * r / ((m + 1) * 2 * math.pi)
    bound = math.exp(log_first) / (1 - ratio) if ratio < 1 else math.inf
    if shift:
        w = spread * r
        bound += shift * spread ** (k - 1) * math.exp(m * math.log(w) - math.lgamma(m + 1) + w) if w > 0 else 0.0
    return bound
