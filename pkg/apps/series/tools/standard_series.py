"""
Standard Series Tool
Exact expansions of the Euler product, eta, the unary thetas and the
Humbert series, with tail bounds and direct numeric evaluators.
"""

import cmath
import logging
import math
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List

from apps.core.exceptions import SpecError
from apps.lattice.tools.quadratic_form import as_fraction
from apps.series.tools.qseries import EvalPoint, QSeries, TailBound

logger = logging.getLogger(__name__)


class SeriesKind(Enum):
    """Series available from standard_series"""
    ETA = "eta"
    EULER_PROD = "euler_prod"
    UNARY_THETA = "unary_theta"
    THETA2 = "theta2"
    HUMBERT = "humbert"
    GEOMETRIC = "geometric"


# Coefficient growth of each series, for evaluate_series.
TAIL_BOUNDS = {
    SeriesKind.ETA: TailBound(0, 1),
    SeriesKind.EULER_PROD: TailBound(0, 1),
    SeriesKind.UNARY_THETA: TailBound(0, 2),
    SeriesKind.THETA2: TailBound(0, 2),
    SeriesKind.HUMBERT: TailBound(2, 2),
    SeriesKind.GEOMETRIC: TailBound(0, 1),
}


def _check_order(N: Any) -> Fraction:
    N = as_fraction(N)
    if N <= 0:
        raise SpecError(f"order must be positive, got {N}")
    return N


def _integer_count(N: Fraction) -> int:
    """Number of integer exponents 0, 1, ... below N."""
    return max(math.ceil(N), 0)


# ============================================================================
# EXACT EXPANSIONS
# ============================================================================

def euler_prod(N: Any) -> QSeries:
    """(q; q)_oo = prod_{m>=1} (1 - q^m)."""
    N = _check_order(N)
    size = _integer_count(N)
    coeffs: List[int] = [0] * size
    coeffs[0] = 1
    for m in range(1, size):
        for e in range(size - 1, m - 1, -1):
            coeffs[e] -= coeffs[e - m]
    return QSeries.from_dict(1, dict(enumerate(coeffs)), N)


def eta(N: Any) -> QSeries:
    """eta = q^{1/24} (q; q)_oo, exponent denominator 24."""
    N = _check_order(N)
    shift = Fraction(1, 24)
    if N <= shift:
        return QSeries.zero(N, 24)
    return euler_prod(N - shift).shift_exponent(shift)


def unary_theta(N: Any) -> QSeries:
    """theta = sum_{n in Z} q^{n^2}."""
    N = _check_order(N)
    terms: Dict[int, int] = {}
    n = 0
    while n * n < N:
        terms[n * n] = 1 if n == 0 else 2
        n += 1
    return QSeries.from_dict(1, terms, N)


def theta2(N: Any) -> QSeries:
    """theta_2 = sum_{n in Z} q^{(2n+1)^2/8}, exponent denominator 8."""
    N = _check_order(N)
    terms: Dict[int, int] = {}
    m = 1
    while Fraction(m * m, 8) < N:
        terms[m * m] = 2
        m += 2
    return QSeries.from_dict(8, terms, N)


def humbert(N: Any) -> QSeries:
    """sum_{m>=1} (-1)^{m+1} m^2 q^{m(m+1)/2} / (1 + q^m)."""
    N = _check_order(N)
    size = _integer_count(N)
    coeffs = [0] * size
    m = 1
    while m * (m + 1) // 2 < size:
        sign = 1 if m % 2 else -1
        e, j = m * (m + 1) // 2, 0
        while e < size:
            coeffs[e] += sign * m * m * (-1) ** j
            e += m
            j += 1
        m += 1
    return QSeries.from_dict(1, dict(enumerate(coeffs)), N)


def geometric(N: Any) -> QSeries:
    """1 / (1 - q)."""
    N = _check_order(N)
    return QSeries.from_dict(1, {e: 1 for e in range(_integer_count(N))}, N)


_BUILDERS = {
    SeriesKind.ETA: eta,
    SeriesKind.EULER_PROD: euler_prod,
    SeriesKind.UNARY_THETA: unary_theta,
    SeriesKind.THETA2: theta2,
    SeriesKind.HUMBERT: humbert,
    SeriesKind.GEOMETRIC: geometric,
}


def standard_series(kind: Any, N: Any) -> QSeries:
    kind = SeriesKind(kind) if not isinstance(kind, SeriesKind) else kind
    return _BUILDERS[kind](N)


# ============================================================================
# NUMERIC EVALUATORS
# ============================================================================

def unary_theta_eval(pt: EvalPoint, a: Any = 0, b: Any = 0, tol: float = 1e-17) -> complex:
    """
    sum_{m in a + Z} q^{m^2} exp(4 pi i b m).

    Terms are summed outwards from the centre until the Gaussian tail
    sum_{|m| > M} exp(-2 pi y m^2) is below tol.
    """
    a0 = float(as_fraction(a)) if not isinstance(a, float) else a
    b0 = float(as_fraction(b)) if not isinstance(b, float) else b
    base = a0 - math.floor(a0)
    total = 0j
    decay = 2 * math.pi * pt.y
    k = 0
    while True:
        added = 0j
        for m in (base + k, base - k - 1):
            added += cmath.exp(2j * math.pi * pt.tau * m * m + 4j * math.pi * b0 * m)
        total += added
        nearest = min(abs(base + k + 1), abs(base - k - 2))
        remainder = 2 * math.exp(-decay * nearest * nearest) / (1 - math.exp(-decay * (2 * nearest + 1)))
        if remainder < tol:
            return total
        k += 1


def theta_eval(pt: EvalPoint) -> complex:
    return unary_theta_eval(pt)


def theta2_eval(pt: EvalPoint) -> complex:
    """theta_2(tau) = sum_{m in 1/2 + Z} exp(2 pi i m^2 tau/2)."""
    return unary_theta_eval(EvalPoint(pt.x / 2, pt.y / 2), Fraction(1, 2))


def eta_eval(pt: EvalPoint, tol: float = 1e-17) -> complex:
    """q^{1/24} prod (1 - q^m), stopping once |q|^m < tol."""
    q = pt.q
    r = abs(q)
    value = pt.qpow(Fraction(1, 24))
    m, qm = 1, q
    while r ** m >= tol:
        value *= 1 - qm
        m += 1
        qm *= q
    return value
