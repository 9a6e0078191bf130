"""
Quadratic Polynomial Family Tool
Generating functions of sums of (ax^2 + bx + c)^{k-1} over integral binary
forms of discriminant D = b^2 - 4ac:

    S_x = sum_D P_{k,D}(x) q^D     over a > 0 > c
    T_x = sum_D F_{k,D}(x) q^D     over ax^2 + bx + c > 0 > a

both of weight k + 1/2 on Gamma0(4). They are limits of the theta series
of Q(n) = n2^2 - 4 n1 n3 with f(n) = (n1 x^2 + n2 x + n3)^{k-1} once the
boundary-line poles are removed by the correction functions f_{(a,b)}.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import sympy

from apps.core.conf import setting
from apps.core.exceptions import ConvergenceNotAchieved, PoleError, SpecError
from apps.core.reports import VerificationReport, combine
from apps.families.tools.eisenstein import richardson
from apps.families.tools.modular_group import (
    GAMMA0_4_GENERATORS,
    CharacteristicMap,
    MapDirection,
    ModularSubstitution,
)
from apps.lattice.tools.combinatorics import bernoulli_number, bernoulli_poly, bernoulli_poly_eval, periodic_bernoulli
from apps.lattice.tools.polynomials import HomPoly
from apps.lattice.tools.quadratic_form import QuadraticForm, as_fraction, as_vector
from apps.series.tools.qseries import EvalPoint, QSeries, TailBound, evaluate_to_tolerance, tail_estimate
from apps.series.tools.standard_series import theta_eval, unary_theta_eval
from apps.theta.tools.evaluation import almost_holo_eval
from apps.theta.tools.spec import ThetaSpec, build_spec

logger = logging.getLogger(__name__)

ZAGIER_MATRIX = ((0, 0, -4), (0, 2, 0), (-4, 0, 0))
ZAGIER_ANCHOR = (-1, 0, -1)
ZAGIER_FORM = QuadraticForm(ZAGIER_MATRIX)

Real = Union[Fraction, float]
RationalPoly = Tuple[Fraction, ...]
Form = Tuple[int, int, int]

_X = sympy.Symbol('x')


class FormCone(Enum):
    """a > 0 > c, or ax^2 + bx + c > 0 > a"""
    FIRST = "first"
    SECOND = "second"


class SeriesKind(Enum):
    S = "S"
    T = "T"


def _real(x: Any) -> Real:
    return x if isinstance(x, float) else as_fraction(x)


def _check_weight(k: int) -> int:
    if not isinstance(k, int) or k < 2 or k % 2:
        raise SpecError(f"k must be even and at least 2, got {k}")
    return k


def kappa(x: Any) -> Fraction:
    """1/s^2 for x = r/s in lowest terms."""
    return Fraction(1, as_fraction(x).denominator ** 2)


def _square_root(D: int) -> Optional[int]:
    m = math.isqrt(D)
    return m if m * m == D else None


# ============================================================================
# FORM ENUMERATION
# ============================================================================

@dataclass(frozen=True)
class FormEnumeration:
    """Forms found in one cone; `exact` when nothing was truncated."""
    D: int
    cone: FormCone
    forms: Tuple[Form, ...]
    exact: bool = True
    a_min: Optional[int] = None

    def __iter__(self):
        return iter(self.forms)

    def __len__(self) -> int:
        return len(self.forms)


def _first_cone(D: int) -> Tuple[Form, ...]:
    forms = []
    b_max = math.isqrt(D)
    for b in range(-b_max, b_max + 1):
        if (D - b * b) % 4 or b * b >= D:
            continue
        product = (D - b * b) // 4
        for a in sympy.divisors(product):
            forms.append((int(a), b, -(product // int(a))))
    return tuple(sorted(forms))


def _second_cone(D: int, x: Real, a_min: int) -> Tuple[Form, ...]:
    """a_min <= a <= -1 with (2ax + b)^2 < D and c integral."""
    forms = []
    if isinstance(x, Fraction):
        r, s = x.numerator, x.denominator
        for a in range(-1, a_min - 1, -1):
            # |2ar + bs| < s sqrt(D)
            centre = Fraction(-2 * a * r, s)
            width = math.isqrt(D) + 1
            for b in range(math.floor(centre) - width, math.ceil(centre) + width + 1):
                if (2 * a * r + b * s) ** 2 >= D * s * s or (b * b - D) % (4 * a):
                    continue
                forms.append((a, b, (b * b - D) // (4 * a)))
    else:
        root = math.sqrt(D)
        for a in range(-1, a_min - 1, -1):
            centre = -2 * a * x
            for b in range(math.floor(centre - root), math.ceil(centre + root) + 1):
                if (2 * a * x + b) ** 2 >= D or (b * b - D) % (4 * a):
                    continue
                forms.append((a, b, (b * b - D) // (4 * a)))
    return tuple(sorted(forms))


def enumerate_forms(D: int, cone: Any = FormCone.FIRST, x: Any = None,
                    a_min: Optional[int] = None) -> FormEnumeration:
    """
    Integral forms (a, b, c) with b^2 - 4ac = D in one cone.

    The first cone is finite: ac < 0 forces b^2 < D. In the second cone a
    rational x = r/s gives ax^2 + bx + c >= 1/s^2 and hence |a| <= D s^2 / 4,
    so the enumeration is complete; a real x needs the truncation depth a_min.

    Raises:
        SpecError: D <= 0, or a real x without a_min.
    """
    if not isinstance(D, int) or D <= 0:
        raise SpecError(f"discriminant must be a positive integer, got {D}")
    cone = FormCone(cone)
    if cone is FormCone.FIRST:
        return FormEnumeration(D, cone, _first_cone(D))
    if x is None:
        raise SpecError("the second cone depends on x")
    x = _real(x)
    if isinstance(x, Fraction):
        bound = -(D * x.denominator ** 2 // 4)
        depth = bound if a_min is None else max(a_min, bound)
        forms = _cached_second_cone(D, x, depth)
        return FormEnumeration(D, cone, forms, exact=depth == bound, a_min=depth)
    if a_min is None or a_min >= 0:
        raise SpecError("a real x needs a negative truncation depth a_min")
    return FormEnumeration(D, cone, _second_cone(D, x, a_min), exact=False, a_min=a_min)


@lru_cache(maxsize=4096)
def _cached_second_cone(D: int, x: Fraction, a_min: int) -> Tuple[Form, ...]:
    return _second_cone(D, x, a_min)


def tail_bound(D: int, k: int, a_min: int) -> float:
    """
    Bound on the omitted second-cone terms with a < a_min:
    at most 2 sqrt(D) + 1 values of b per a, each with 0 < ax^2 + bx + c <= D/(4|a|).
    """
    if k < 4:
        return math.inf
    A = abs(a_min)
    return (2 * math.sqrt(D) + 1) * (D / 4) ** (k - 1) * A ** (2 - k) / (k - 2)


# ============================================================================
# POLYNOMIALS
# ============================================================================

def _to_tuple(poly: sympy.Poly, length: int) -> RationalPoly:
    coeffs = [Fraction(0)] * length
    for (power,), c in poly.terms():
        coeffs[power] = as_fraction(sympy.Rational(c))
    return tuple(coeffs)


def poly_eval(coeffs: Sequence[Any], x: Any) -> Any:
    result = 0
    for c in reversed(coeffs):
        result = result * x + c
    return result


@lru_cache(maxsize=None)
def P_kD(k: int, D: int) -> RationalPoly:
    """
    P_{k,D}(x), ascending coefficients up to x^{2k-2}.

    D = m^2 adds (1/k)(B_k(mx) - x^{2k-2} B_k(m/x)); D = 0 is (1 - x^{2k-2}) B_k/2k.
    """
    k = _check_weight(k)
    if not isinstance(D, int) or D < 0:
        raise SpecError(f"discriminant must be a non-negative integer, got {D}")
    length = 2 * k - 1
    if D == 0:
        constant = bernoulli_number(k) / (2 * k)
        coeffs = [Fraction(0)] * length
        coeffs[0] += constant
        coeffs[-1] -= constant
        return tuple(coeffs)

    total = sympy.Poly(0, _X, domain='QQ')
    for a, b, c in enumerate_forms(D, FormCone.FIRST):
        total += sympy.Poly(a * _X ** 2 + b * _X + c, _X, domain='QQ') ** (k - 1)
    coeffs = list(_to_tuple(total, length))

    m = _square_root(D)
    if m is not None:
        # B_k(mx) and x^{2k-2} B_k(m/x) expanded term by term
        for j, beta in enumerate(bernoulli_poly(k)):
            coeffs[j] += beta * m ** j / k
            coeffs[2 * k - 2 - j] -= beta * m ** j / k
    return tuple(coeffs)


def P_kD_value(k: int, D: int, x: Any) -> Real:
    return poly_eval(P_kD(k, D), _real(x))


def F_kD(k: int, D: int, x: Any, tol: Optional[float] = None) -> Real:
    """
    F_{k,D}(x): exact for rational x, a truncated sum with certified tail for real x (k >= 4).

    D = m^2 subtracts (1/k) B-bar_k(mx) and adds m^2 kappa(x)/2 when k = 2;
    D = 0 is -B_k/2k.

    Raises:
        SpecError: k = 2 at a real x, where the sum converges only conditionally.
    """
    k = _check_weight(k)
    if not isinstance(D, int) or D < 0:
        raise SpecError(f"discriminant must be a non-negative integer, got {D}")
    x = _real(x)
    if D == 0:
        value = -bernoulli_number(k) / (2 * k)
        return value if isinstance(x, Fraction) else float(value)

    if isinstance(x, Fraction):
        forms = enumerate_forms(D, FormCone.SECOND, x)
        total: Real = sum(((a * x * x + b * x + c) ** (k - 1) for a, b, c in forms), Fraction(0))
    else:
        if k < 4:
            raise SpecError("F_{2,D} at a real x converges only conditionally; use a rational x")
        tol = setting('DEFAULT_TOLERANCE') if tol is None else tol
        scale = (2 * math.sqrt(D) + 1) * (D / 4) ** (k - 1) / ((k - 2) * tol)
        a_min = -max(1, math.ceil(scale ** (1 / (k - 2))))
        if abs(a_min) > setting('MAX_POINTS'):
            raise SpecError(f"truncation depth {a_min} for D = {D} exceeds the point budget")
        forms = enumerate_forms(D, FormCone.SECOND, x, a_min)
        total = math.fsum((a * x * x + b * x + c) ** (k - 1) for a, b, c in forms)
        logger.debug(f"F_{k},{D}({x}): {len(forms)} forms, depth {a_min}, tail {tail_bound(D, k, a_min):.2e}")

    m = _square_root(D)
    if m is not None:
        if isinstance(x, Fraction):
            total -= periodic_bernoulli(k, m * x) / k
            if k == 2:
                total += m * m * kappa(x) / 2
        else:
            t = m * x
            total -= float(bernoulli_poly_eval(k, t - math.floor(t))) / k
    return total


# ============================================================================
# GENERATING SERIES
# ============================================================================

def S_series(k: int, x: Any, N: Any) -> QSeries:
    """sum_{D < N} P_{k,D}(x) q^D for rational x."""
    k = _check_weight(k)
    x, N = as_fraction(x), as_fraction(N)
    return QSeries.from_dict(1, {D: P_kD_value(k, D, x) for D in range(math.ceil(N))}, N)


def T_series(k: int, x: Any, N: Any) -> QSeries:
    """sum_{D < N} F_{k,D}(x) q^D for rational x."""
    k = _check_weight(k)
    x, N = as_fraction(x), as_fraction(N)
    return QSeries.from_dict(1, {D: F_kD(k, D, x) for D in range(math.ceil(N))}, N)


def _series_tail(kind: SeriesKind, k: int, x: Real) -> TailBound:
    """
    Coefficient growth: P_{k,D}(x) <= 3 (1 + |x|)^{2k-2} D^{k+1/2}; F_{k,D}(x) <= (s^2 + 1) D^{k+1/2}.
    """
    if kind is SeriesKind.S:
        return TailBound(degree=k + 0.5, constant=3 * (1 + abs(float(x))) ** (2 * k - 2) + 1)
    s = x.denominator if isinstance(x, Fraction) else 1
    return TailBound(degree=k + 0.5, constant=s * s + 1)


def series_eval(kind: Any, k: int, x: Any, pt: EvalPoint, tol: Optional[float] = None) -> complex:
    """
    S_x(tau) or T_x(tau) from the coefficients, doubling the order until the tail meets tol.

    S also accepts a real x, summed in floating point from the exact polynomials.
    """
    kind = SeriesKind(kind)
    k = _check_weight(k)
    x = _real(x)
    tail = _series_tail(kind, k, x)
    if isinstance(x, Fraction):
        build: Callable[[Any, Any, Any], QSeries] = S_series if kind is SeriesKind.S else T_series
        return evaluate_to_tolerance(lambda N: build(k, x, N), pt, tail, tol).value
    if kind is SeriesKind.T:
        raise SpecError("T_x is only evaluated at rational x")

    tol = setting('DEFAULT_TOLERANCE') if tol is None else tol
    N = 8
    while True:
        estimate = tail_estimate(QSeries.zero(N), pt, tail)
        if estimate <= tol:
            return sum(P_kD_value(k, D, x) * pt.qpow(D) for D in range(N))
        if 2 * N > setting('MAX_ORDER'):
            raise ConvergenceNotAchieved(f"S_x tail {estimate:.2e} above {tol:.1e}", estimate=estimate,
                                         diagnostics={'order': N, 'tau': str(pt.tau)})
        N *= 2


def theta_derivative(pt: EvalPoint, tol: float = 1e-16) -> complex:
    """theta'(tau) = 2 pi i sum_{m in Z} m^2 q^{m^2}."""
    total = 0j
    m = 1
    while True:
        term = 2 * m * m * pt.qpow(m * m)
        total += term
        if abs(term) < tol and m * m * 4 * math.pi * pt.y > 2:
            return 2j * math.pi * total
        m += 1


def coefficient_table(kind: Any, k: int, x: Any, N: int) -> List[Dict[str, Any]]:
    """One row per D < N: the value at x, and for S the coefficients of P_{k,D}."""
    kind = SeriesKind(kind)
    x = as_fraction(x)
    rows = []
    for D in range(N):
        if kind is SeriesKind.S:
            coeffs = P_kD(k, D)
            rows.append({'D': D, 'value': poly_eval(coeffs, x), **{f"x^{j}": c for j, c in enumerate(coeffs)}})
        else:
            rows.append({'D': D, 'value': F_kD(k, D, x)})
    return rows


# ============================================================================
# CORRECTION FUNCTIONS AND AUTOMORPHY FACTOR
# ============================================================================

def f_ab_eval(a: Sequence[Any], b: Sequence[Any], k: int, pt: EvalPoint) -> complex:
    """
    f_{(a,b)}(tau) = -(k-1)!/(8 pi i)^k (a1 tau + b1)^{-k} e^{-8 pi i a1 b3}
                     sum_{m in a2 + Z} q^{m^2} e^{4 pi i b2 m}

    Raises:
        PoleError: a1 = b1 = 0.
    """
    a, b = as_vector(a), as_vector(b)
    if a[0] == 0 and b[0] == 0:
        raise PoleError("f_(a,b) has a pole at a1 = b1 = 0")
    z1 = float(a[0]) * pt.tau + float(b[0])
    theta = unary_theta_eval(pt, a[1], b[1])
    return (-math.factorial(k - 1) / (8j * math.pi) ** k / z1 ** k
            * cmath.exp(-8j * math.pi * float(a[0] * b[2])) * theta)


def _require_gamma04(gamma: ModularSubstitution):
    if not gamma.in_gamma0(4):
        raise SpecError(f"{gamma.label()} is not in Gamma0(4)")


def j_factor(gamma: ModularSubstitution, pt: EvalPoint) -> complex:
    """theta(gamma tau) / theta(tau)."""
    _require_gamma04(gamma)
    return theta_eval(gamma.act(pt)) / theta_eval(pt)


def _char_phase(a, b, a_new, b_new) -> complex:
    """e^{pi i B(a, b) - pi i B(a', b')}."""
    return cmath.exp(1j * math.pi * float(ZAGIER_FORM.B(a, b) - ZAGIER_FORM.B(a_new, b_new)))


def f_ab_covariance(a: Sequence[Any], b: Sequence[Any], k: int, gamma: ModularSubstitution,
                    pt: EvalPoint, tol: float = 1e-10) -> VerificationReport:
    """f_{(a,b)}(gamma tau) = j^{2k+1} e^{pi i B(a,b) - pi i B(a',b')} f_{(a',b')}(tau)."""
    _require_gamma04(gamma)
    a, b = as_vector(a), as_vector(b)
    a_new, b_new = gamma.act_chars(a, b)
    lhs = f_ab_eval(a, b, k, gamma.act(pt))
    rhs = j_factor(gamma, pt) ** (2 * k + 1) * _char_phase(a, b, a_new, b_new) * f_ab_eval(a_new, b_new, k, pt)
    return VerificationReport.compare(f"f_ab:{gamma.label()}", lhs, rhs, tol,
                                      {'k': k, 'gamma': gamma.label(), 'tau': pt.tau})


# ============================================================================
# THETA SPECS
# ============================================================================

def zagier_cusps(kind: Any, x: Any = None) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
    """(0, 0, -1), (-1, 0, 0) for S; -(s^2, -2rs, r^2), (0, 0, -1) for T at x = r/s."""
    kind = SeriesKind(kind)
    if kind is SeriesKind.S:
        return as_vector((0, 0, -1)), as_vector((-1, 0, 0))
    x = as_fraction(x)
    r, s = x.numerator, x.denominator
    return as_vector((-s * s, 2 * r * s, -r * r)), as_vector((0, 0, -1))


def zagier_polynomial(k: int, x: Any) -> HomPoly:
    """(n1 x^2 + n2 x + n3)^{k-1}, spherical for Q."""
    x = as_fraction(x)
    return HomPoly.linear((x * x, x, 1)) ** (k - 1)


def zagier_spec(kind: Any, k: int, x: Any, a: Sequence[Any], b: Sequence[Any]) -> ThetaSpec:
    k = _check_weight(k)
    c1, c2 = zagier_cusps(kind, x)
    return build_spec(ZAGIER_MATRIX, zagier_polynomial(k, x), ZAGIER_ANCHOR, c1, c2, a, b)


def theta_covariance(spec: ThetaSpec, gamma: ModularSubstitution, pt: EvalPoint,
                     tol: float = 1e-8) -> VerificationReport:
    """Theta_{a,b}(gamma tau) = j^{2k+1} e^{pi i B(a,b) - pi i B(a',b')} Theta_{a',b'}(tau)."""
    _require_gamma04(gamma)
    a_new, b_new = gamma.act_chars(spec.a, spec.b)
    moved = spec.with_chars(a_new, b_new)
    eval_tol = tol / 100
    lhs = almost_holo_eval(spec, gamma.act(pt), eval_tol).value
    power = int(2 * spec.weight)
    rhs = (j_factor(gamma, pt) ** power * _char_phase(spec.a, spec.b, a_new, b_new)
           * almost_holo_eval(moved, pt, eval_tol).value)
    return VerificationReport.compare(f"theta_gamma04:{gamma.label()}", lhs, rhs, tol,
                                      {'gamma': gamma.label(), 'tau': pt.tau})


# ============================================================================
# COVARIANCE OF S_x AND T_x
# ============================================================================

def verify_SxTx(kind: Any, k: int, x: Any, gamma: ModularSubstitution, pt: EvalPoint,
                tol: float = 1e-5) -> VerificationReport:
    """
    |F(gamma tau) - j(gamma, tau)^{2k+1} F(tau)| <= tol (1 + |F(tau)|) for F = S_x or T_x.
    """
    kind = SeriesKind(kind)
    k = _check_weight(k)
    _require_gamma04(gamma)
    if kind is SeriesKind.T and isinstance(x, float):
        raise SpecError("T_x is only defined here for rational x")
    eval_tol = tol / 100
    moved = gamma.act(pt)
    lhs = series_eval(kind, k, x, moved, eval_tol)
    value = series_eval(kind, k, x, pt, eval_tol)
    rhs = j_factor(gamma, pt) ** (2 * k + 1) * value
    residual = abs(lhs - rhs)
    passed = residual <= tol * (1 + abs(value))
    logger.info(f"{kind.value}_x k={k} x={x} under {gamma.label()}: residual {residual:.3e}")
    return VerificationReport(f"{kind.value}_x:{gamma.label()}", lhs, rhs, residual, passed,
                              {'k': k, 'x': x, 'gamma': gamma.label(), 'tau': pt.tau, 'tol': tol})


def verify_gamma04(kind: Any, k: int, x: Any, pt: EvalPoint, tol: float = 1e-5) -> VerificationReport:
    """verify_SxTx for each generator -I, T, gamma' of Gamma0(4)."""
    reports = [verify_SxTx(kind, k, x, g, pt, tol) for g in GAMMA0_4_GENERATORS]
    return combine(f"gamma04:{SeriesKind(kind).value}", reports, {'k': k, 'x': x, 'tau': pt.tau})


def cusp_growth_check(kind: Any, k: int, x: Any, gamma: ModularSubstitution, x0: float = 0.0,
                      ys: Sequence[float] = (1.0, 2.0, 3.0, 4.0), tol: float = 1e-8) -> VerificationReport:
    """
    Boundedness of (F|gamma)(x0 + iy) = (c tau + d)^{-(k+1/2)} F(gamma tau) as y grows.

    The cusp gamma(oo) is only probed numerically: the increments between
    equally spaced heights must not grow. No cusp expansion is certified.
    """
    kind = SeriesKind(kind)
    k = _check_weight(k)
    if len(ys) < 3 or any(b - a <= 0 for a, b in zip(ys, ys[1:])):
        raise SpecError(f"need at least three increasing heights, got {list(ys)}")
    values = []
    for y in ys:
        pt = EvalPoint(x0, y)
        automorphy = gamma.cocycle(pt) ** -(k + 0.5)
        values.append(automorphy * series_eval(kind, k, x, gamma.act(pt), tol / 100))
    increments = [abs(b - a) for a, b in zip(values, values[1:])]
    residual = max(0.0, max(b - a for a, b in zip(increments, increments[1:])))
    rows = [{'y': y, 'value': v, 'increment': d}
            for y, v, d in zip(ys, values, [None] + increments)]
    logger.info(f"{kind.value}_x at cusp {gamma.label()}(oo): increments {[f'{d:.2e}' for d in increments]}")
    return VerificationReport(f"cusp_growth:{kind.value}:{gamma.label()}", values[0], values[-1], residual,
                              residual <= tol, {'k': k, 'x': x, 'gamma': gamma.label(), 'x0': x0, 'tol': tol},
                              rows)


# ============================================================================
# THETA ROUTES
# ============================================================================

ROUTE_DIRECTION = (1, 0, 1)
DEFAULT_ROUTE_TS = (Fraction(1, 11), Fraction(1, 22), Fraction(1, 44))


@dataclass(frozen=True)
class ThetaRoute:
    """Finite-characteristic values and their extrapolation to (a, b) = 0."""
    value: complex
    ts: Tuple[Fraction, ...]
    values: Tuple[complex, ...]


def _route_term(kind: SeriesKind, k: int, x: Fraction, a, b, pt: EvalPoint, tol: float) -> complex:
    """1/2 (1/2 Theta - f_tilde + x^{2k-2} f_hat) for S, 1/2 (1/2 Theta + f_tilde) for T."""
    theta = almost_holo_eval(zagier_spec(kind, k, x, a, b), pt, tol).value
    f_tilde = f_ab_eval(*CharacteristicMap(x).pair(a, b), k, pt)
    if kind is SeriesKind.T:
        return (theta / 2 + f_tilde) / 2
    f_hat = 0j
    if x != 0:
        f_hat = f_ab_eval(*CharacteristicMap(x, MapDirection.HAT).pair(a, b), k, pt)
    return (theta / 2 - f_tilde + float(x) ** (2 * k - 2) * f_hat) / 2


def _scaled(t: Fraction) -> Tuple[Fraction, ...]:
    return tuple(t * c for c in as_vector(ROUTE_DIRECTION))


def _route_ts(ts: Optional[Sequence[Any]]) -> Tuple[Fraction, ...]:
    params = tuple(Fraction(str(t)) if isinstance(t, float) else as_fraction(t)
                   for t in (ts or DEFAULT_ROUTE_TS))
    if len(params) < 2 or any(t2 >= t1 for t1, t2 in zip(params, params[1:])) or params[-1] <= 0:
        raise SpecError("route parameters must be positive and strictly decreasing")
    return params


def S_theta_route(k: int, x: Any, pt: EvalPoint, ts: Optional[Sequence[Any]] = None,
                  tol: float = 1e-10) -> ThetaRoute:
    """S_x(tau) as the joint limit a = b = t (1, 0, 1) -> 0, extrapolated in t."""
    k, x, params = _check_weight(k), as_fraction(x), _route_ts(ts)
    values = tuple(_route_term(SeriesKind.S, k, x, _scaled(t), _scaled(t), pt, tol) for t in params)
    powers = list(range(1, len(params)))
    return ThetaRoute(richardson(params, values, powers), params, values)


def T_theta_route(k: int, x: Any, pt: EvalPoint, ts: Optional[Sequence[Any]] = None,
                  tol: float = 1e-10) -> ThetaRoute:
    """
    T_x(tau) from the theta series.

    k >= 4: the joint limit a = b = t (1, 0, 1) -> 0.
    k = 2: lim_b lim_a with a = t (1, 0, 1) at each fixed b = s (1, 0, 1), plus
    kappa(x)/(8 pi i) theta'(tau).
    """
    k, x, params = _check_weight(k), as_fraction(x), _route_ts(ts)
    powers = list(range(1, len(params)))
    if k >= 4:
        values = tuple(_route_term(SeriesKind.T, k, x, _scaled(t), _scaled(t), pt, tol) for t in params)
        return ThetaRoute(richardson(params, values, powers), params, values)

    inner = []
    for s in params:
        b = _scaled(s)
        # a -> 0 well below the b scale
        a_values = [_route_term(SeriesKind.T, k, x, _scaled(t * s), b, pt, tol) for t in params]
        inner.append(richardson([t * s for t in params], a_values, powers))
    limit = richardson(params, inner, powers)
    correction = float(kappa(x)) / (8j * math.pi) * theta_derivative(pt)
    return ThetaRoute(limit + correction, params, tuple(inner))


def theta_route_check(kind: Any, k: int, x: Any, pt: EvalPoint, ts: Optional[Sequence[Any]] = None,
                      tol: float = 1e-3) -> VerificationReport:
    """Extrapolated theta route against the series value."""
    kind = SeriesKind(kind)
    route = (S_theta_route if kind is SeriesKind.S else T_theta_route)(k, x, pt, ts)
    target = series_eval(kind, k, x, pt, 1e-12)
    report = VerificationReport.compare(f"theta_route:{kind.value}", route.value, target, tol,
                                        {'k': k, 'x': as_fraction(x), 'tau': pt.tau})
    report.rows = [{'t': t, 'value': v} for t, v in zip(route.ts, route.values)]
    return report
