"""
Eisenstein Family Tool
G_k as a limit of the hyperbolic-plane theta series

    A = [[0, 1], [1, 0]],  f = v1^{k-1},  c1 = (0, 1),  c2 = (-1, 0)

whose sign weights are sign(l1) + sign(l2). For a1, a2 in (0, 1) the
lattice a + Z^2 splits into the bulk (n1, n2 != 0), the row n2 = 0 and the
column n1 = 0; each part has a closed form, and the pole of the row cancels
against f^G, so 1/4 Theta - 1/2 f^G is computed without cancellation and
extends continuously to a2 = 0 and to b = 0.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import sympy

from apps.core.conf import setting
from apps.core.exceptions import ConvergenceNotAchieved, PoleError, SpecError
from apps.core.reports import VerificationReport
from apps.lattice.tools.combinatorics import bernoulli_number, bernoulli_tail_series
from apps.lattice.tools.polynomials import HomPoly
from apps.lattice.tools.quadratic_form import as_vector
from apps.series.tools.qseries import EvalPoint, QSeries, TailBound, evaluate_to_tolerance
from apps.theta.tools.evaluation import almost_holo_eval
from apps.theta.tools.spec import ThetaSpec, build_spec

logger = logging.getLogger(__name__)

EISENSTEIN_MATRIX = ((0, 1), (1, 0))
EISENSTEIN_ANCHOR = (-1, 1)
EISENSTEIN_CUSPS = ((0, 1), (-1, 0))


def _check_weight(k: int) -> int:
    if not isinstance(k, int) or k < 2 or k % 2:
        raise SpecError(f"Eisenstein weight must be even and at least 2, got {k}")
    return k


def _parameter(t: Any) -> Fraction:
    return Fraction(str(t)) if isinstance(t, float) else Fraction(t)


# ============================================================================
# Q-EXPANSION
# ============================================================================

def G_series(k: int, N: Any) -> QSeries:
    """-B_k/2k + sum_{m >= 1} sigma_{k-1}(m) q^m to order N."""
    k = _check_weight(k)
    N = Fraction(N)
    if N <= 0:
        raise SpecError(f"order must be positive, got {N}")
    terms: Dict[int, Any] = {0: -bernoulli_number(k) / (2 * k)}
    for m in range(1, math.ceil(N)):
        terms[m] = int(sympy.divisor_sigma(m, k - 1))
    return QSeries.from_dict(1, terms, N)


def G_eval(k: int, pt: EvalPoint, tol: Optional[float] = None) -> complex:
    """G_k(tau) from its q-expansion; sigma_{k-1}(m) <= (1 + m)^k bounds the tail."""
    _check_weight(k)
    return evaluate_to_tolerance(lambda N: G_series(k, N), pt, TailBound(degree=k), tol).value


def eisenstein_spec(k: int, a: Sequence[Any], b: Sequence[Any]) -> ThetaSpec:
    k = _check_weight(k)
    f = HomPoly.variable(2, 0) ** (k - 1)
    return build_spec(EISENSTEIN_MATRIX, f, EISENSTEIN_ANCHOR, *EISENSTEIN_CUSPS, a, b)


# ============================================================================
# CORRECTION TERM
# ============================================================================

def f_G_eval(a: Sequence[Any], b: Sequence[Any], k: int, pt: EvalPoint) -> complex:
    """
    f^G_{a,b}(tau) = e^{2 pi i a2 b1} (k-1)! / (2 pi i (a2 tau + b2))^k.

    Raises:
        PoleError: a2 = b2 = 0.
    """
    a, b = as_vector(a), as_vector(b)
    if a[1] == 0 and b[1] == 0:
        raise PoleError("f^G has a pole at a2 = b2 = 0")
    z = 2j * math.pi * (float(a[1]) * pt.tau + float(b[1]))
    return cmath.exp(2j * math.pi * float(a[1] * b[0])) * math.factorial(k - 1) / z ** k


# ============================================================================
# LATTICE PARTS
# ============================================================================

@dataclass(frozen=True)
class LatticeParts:
    """Theta_{a,b} = bulk + row + column."""
    bulk: complex
    row: complex
    column: complex

    @property
    def total(self) -> complex:
        return self.bulk + self.row + self.column


@dataclass(frozen=True)
class _Pieces:
    bulk: complex
    column: complex
    phase: complex
    row_regular: complex
    z: complex


def _bulk(k: int, a1: float, a2: float, b1: float, b2: float, pt: EvalPoint, tol: float) -> complex:
    """
    2 sum_{n1 >= 1} l1^{k-1} e^{2 pi i l1 b2} e^{2 pi i w (a2 + 1)} / (1 - e^{2 pi i w})
    - 2 sum_{n1 <= -1} l1^{k-1} e^{2 pi i l1 b2} e^{2 pi i w (a2 - 1)} / (1 - e^{-2 pi i w}),
    w = l1 tau + b1.
    """
    tau, y = pt.tau, pt.y
    decay = 2 * math.pi * y * min(1 + a2, 1 - a2)
    peak = (k - 1) / decay
    total = 0j
    m = 1
    while True:
        lp, ln = a1 + m, a1 - m
        w = lp * tau + b1
        total += 2 * lp ** (k - 1) * cmath.exp(2j * math.pi * (lp * b2 + w * (a2 + 1))) \
            / (1 - cmath.exp(2j * math.pi * w))
        w = ln * tau + b1
        total -= 2 * ln ** (k - 1) * cmath.exp(2j * math.pi * (ln * b2 + w * (a2 - 1))) \
            / (1 - cmath.exp(-2j * math.pi * w))
        nearest = m + 1 - a1
        bound = 2 * (nearest + 1) ** (k - 1) * math.exp(-decay * nearest) / (1 - math.exp(-decay))
        if m > peak and bound < tol:
            return total
        m += 1
        if m > setting('MAX_ORDER'):
            raise ConvergenceNotAchieved("Eisenstein bulk sum did not converge", estimate=bound,
                                         diagnostics={'tau': str(tau), 'a2': a2})


def _pieces(k: int, a: Sequence[Any], b: Sequence[Any], pt: EvalPoint, tol: float) -> _Pieces:
    a, b = as_vector(a), as_vector(b)
    if len(a) != 2 or len(b) != 2:
        raise SpecError("Eisenstein characteristics are 2-vectors")
    if not all(0 <= x < 1 for x in a):
        raise SpecError(f"line sums need 0 <= a1, a2 < 1, got {a}")
    a1, a2 = a
    b1, b2 = (float(x) for x in b)
    if a1 == 0 and b[0].denominator == 1:
        raise PoleError("the column sum has a pole at a1 = 0 with integral b1")
    z = 2j * math.pi * (float(a2) * pt.tau + b2)
    if abs(z) >= 2 * math.pi:
        raise SpecError(f"the row sum needs |a2 tau + b2| < 1, got {abs(z) / (2 * math.pi):.3g}")

    fa1, fa2 = float(a1), float(a2)
    bulk = _bulk(k, fa1, fa2, b1, b2, pt, tol)
    if a1 == 0:
        column = 0j
    else:
        column = 2 * fa1 ** (k - 1) * pt.qpow(a1 * a2) * cmath.exp(2j * math.pi * (fa1 * b2 + fa2 * b1)) \
            / (1 - pt.qpow(a1) * cmath.exp(2j * math.pi * b1))
    phase = cmath.exp(2j * math.pi * float(a2 * b[0]))
    row_regular = bernoulli_tail_series(k, a1, z, tol=tol / 10) + fa1 ** (k - 1) * cmath.exp(fa1 * z)
    return _Pieces(bulk, column, phase, row_regular, z)


def lattice_parts(k: int, a: Sequence[Any], b: Sequence[Any], pt: EvalPoint,
                  tol: Optional[float] = None) -> LatticeParts:
    """
    The three closed-form parts of Theta[v1^{k-1}]_{a,b} for 0 < a1, a2 < 1.

    The row is 2 e^{2 pi i a2 b1} sum_{n1 >= 1} l1^{k-1} e^{l1 z}, z = 2 pi i (a2 tau + b2),
    summed by the Bernoulli tail identity; the column is the geometric sum
    2 a1^{k-1} q^{a1 a2} e^{2 pi i (a1 b2 + a2 b1)} / (1 - q^{a1} e^{2 pi i b1}).
    """
    k = _check_weight(k)
    tol = setting('DEFAULT_TOLERANCE') if tol is None else tol
    a = as_vector(a)
    if any(x == 0 for x in a):
        raise SpecError("the partition needs a1, a2 off the integers")
    p = _pieces(k, a, b, pt, tol)
    row = 2 * p.phase * (math.factorial(k - 1) / p.z ** k - p.row_regular)
    return LatticeParts(p.bulk, row, p.column)


def regularized(k: int, a: Sequence[Any], b: Sequence[Any], pt: EvalPoint,
                tol: Optional[float] = None) -> complex:
    """
    1/4 Theta_{a,b} - 1/2 f^G_{a,b}, with the row pole cancelled in closed form:

        1/4 bulk + 1/4 column - 1/2 e^{2 pi i a2 b1} (tail(k, a1, z) + a1^{k-1} e^{a1 z})

    Defined for 0 <= a1, a2 < 1 and |a2 tau + b2| < 1.
    """
    k = _check_weight(k)
    tol = setting('DEFAULT_TOLERANCE') if tol is None else tol
    p = _pieces(k, a, b, pt, tol)
    return p.bulk / 4 + p.column / 4 - p.phase * p.row_regular / 2


# ============================================================================
# EXTRAPOLATION
# ============================================================================

def richardson(ts: Sequence[Any], values: Sequence[complex], powers: Sequence[float]) -> complex:
    """
    Value at t = 0 of the least-squares fit v(t) = c0 + sum_j c_j t^{p_j}.

    With len(ts) = len(powers) + 1 the fit is exact interpolation.
    """
    if len(ts) != len(values) or len(ts) < len(powers) + 1:
        raise SpecError("Richardson extrapolation needs one more point than powers")
    t = np.array([float(x) for x in ts], dtype=float)
    V = np.column_stack([np.ones_like(t)] + [t ** p for p in powers]).astype(complex)
    coeffs, *_ = np.linalg.lstsq(V, np.array(values, dtype=complex), rcond=None)
    return complex(coeffs[0])


def _extrapolate(values: Sequence[complex], ts: Sequence[Fraction], first_power: int) -> complex:
    powers = list(range(first_power, first_power + len(ts) - 1))
    return richardson(ts, values, powers)


# ============================================================================
# CHECKS
# ============================================================================

def eisenstein_limit_check(k: int, pt: EvalPoint, ts: Sequence[Any],
                           tol: float = 1e-5) -> VerificationReport:
    """
    G_k as lim_{a, b -> 0} (1/4 Theta - 1/2 f^G).

    k >= 4: a = b = (t, t) with errors O(t^2), extrapolated in t^2, t^3, ...
    k = 2: the two ordered limits along a = (t, t), b = (s, s),
      a first (b fixed, then b -> 0) gives G_2
      b first (a fixed, then a -> 0) gives G_2 - 1/(4 pi i tau)
    """
    k = _check_weight(k)
    params = [_parameter(t) for t in ts]
    if len(params) < 2 or any(t <= 0 for t in params) or any(t2 >= t1 for t1, t2 in zip(params, params[1:])):
        raise SpecError("limit parameters must be positive and strictly decreasing")
    eval_tol = min(1e-13, tol / 1000)
    target = G_eval(k, pt, eval_tol)

    if k >= 4:
        values = [regularized(k, (t, t), (t, t), pt, eval_tol) for t in params]
        errors = [abs(v - target) for v in values]
        limit = _extrapolate(values, params, 2)
        residual = abs(limit - target)
        decreasing = all(e2 < e1 for e1, e2 in zip(errors, errors[1:]))
        passed = decreasing and residual <= tol
        rows = [{'t': t, 'value': v, 'error': e} for t, v, e in zip(params, values, errors)]
        logger.info(f"G_{k} limit at {pt.tau}: extrapolation residual {residual:.3e}")
        return VerificationReport(f"eisenstein_limit:k={k}", limit, target, residual, passed,
                                  {'k': k, 'tau': pt.tau, 'tol': tol, 'decreasing': decreasing}, rows)

    anomaly = 1 / (4j * math.pi * pt.tau)
    a_first_values = [regularized(2, (0, 0), (s, s), pt, eval_tol) for s in params]
    b_first_values = [regularized(2, (t, t), (0, 0), pt, eval_tol) for t in params]
    a_first = _extrapolate(a_first_values, params, 1)
    b_first = _extrapolate(b_first_values, params, 1)
    residuals = {
        'a_first': abs(a_first - target),
        'b_first': abs(b_first - (target - anomaly)),
        'difference': abs((a_first - b_first) - anomaly),
    }
    rows: List[Dict[str, Any]] = [
        {'t': t, 'a_first': va, 'b_first': vb}
        for t, va, vb in zip(params, a_first_values, b_first_values)
    ]
    residual = max(residuals.values())
    logger.info(f"G_2 ordered limits at {pt.tau}: difference {a_first - b_first:.6g}, residual {residual:.3e}")
    return VerificationReport("eisenstein_limit:k=2", a_first - b_first, anomaly, residual, residual <= tol,
                              {'k': 2, 'tau': pt.tau, 'tol': tol, 'a_first': a_first, 'b_first': b_first,
                               **{f"residual_{key}": value for key, value in residuals.items()}}, rows)


def partition_check(k: int, a: Sequence[Any], b: Sequence[Any], pt: EvalPoint,
                    tol: float = 1e-9) -> VerificationReport:
    """bulk + row + column against the direct theta summation."""
    parts = lattice_parts(k, a, b, pt, tol / 100)
    direct = almost_holo_eval(eisenstein_spec(k, a, b), pt, tol / 100).value
    report = VerificationReport.compare("eisenstein_partition", parts.total, direct, tol,
                                        {'k': k, 'a': as_vector(a), 'b': as_vector(b), 'tau': pt.tau})
    report.rows = [{'part': name, 'value': value}
                   for name, value in (('bulk', parts.bulk), ('row', parts.row), ('column', parts.column))]
    return report


def f_G_law_check(a: Sequence[Any], b: Sequence[Any], k: int, pt: EvalPoint,
                  tol: float = 1e-12) -> VerificationReport:
    """
    f^G under the theta laws at the weight of the spec:

        f^G_{a,b}(tau + 1) = e^{-2 pi i Q(a)} f^G_{a, a+b}(tau)
        f^G_{a,b}(-1/tau) = tau^k e^{2 pi i B(a, b)} f^G_{b, -a}(tau)
    """
    a, b = as_vector(a), as_vector(b)
    q_a = a[0] * a[1]
    shifted = EvalPoint.from_tau(pt.tau + 1)
    t_lhs = f_G_eval(a, b, k, shifted)
    t_rhs = cmath.exp(-2j * math.pi * float(q_a)) * f_G_eval(a, tuple(x + y for x, y in zip(a, b)), k, pt)

    inverted = EvalPoint.from_tau(-1 / pt.tau)
    bilinear = a[0] * b[1] + a[1] * b[0]
    s_lhs = f_G_eval(a, b, k, inverted)
    s_rhs = (pt.tau ** k * cmath.exp(2j * math.pi * float(bilinear))
             * f_G_eval(b, tuple(-x for x in a), k, pt))

    t_report = VerificationReport.compare("f_G:T", t_lhs, t_rhs, tol, {'tau': pt.tau})
    s_report = VerificationReport.compare("f_G:S", s_lhs, s_rhs, tol, {'tau': pt.tau})
    residual = max(t_report.residual, s_report.residual)
    return VerificationReport("f_G_laws", None, None, residual, t_report.passed and s_report.passed,
                              {'k': k, 'a': a, 'b': b, 'tau': pt.tau, 'tol': tol},
                              [t_report.to_dict(), s_report.to_dict()])


def g2_anomaly_check(pt: EvalPoint, tol: float = 1e-10) -> VerificationReport:
    """tau^{-2} G_2(-1/tau) - G_2(tau) = -1/(4 pi i tau)."""
    eval_tol = tol / 100
    inverted = EvalPoint.from_tau(-1 / pt.tau)
    lhs = G_eval(2, inverted, eval_tol) / pt.tau ** 2 - G_eval(2, pt, eval_tol)
    rhs = -1 / (4j * math.pi * pt.tau)
    report = VerificationReport.compare("g2_anomaly", lhs, rhs, tol, {'tau': pt.tau})
    logger.info(f"G_2 anomaly at {pt.tau}: residual {report.residual:.3e}")
    return report


def coefficient_table(k: int, N: int) -> List[Dict[str, Any]]:
    return [{'n': e, 'coefficient': c.rational_value()} for e, c in G_series(k, N).items()]
