"""
Hurwitz Family Tool
The class number generating function H(8n+7) as the holomorphic part of a
theta series on

    A = [[1, 1], [1, 0]],  f = v1^2,  a = (0, 1/2),  b = (1/2, 0),
    c1 = (0, 1),  c2 = sqrt(2) (-1, 1)

completed to F = (i/4) theta-hat / eta^3, whose shadow is a multiple of
theta_2. F is evaluated both through the theta engine and through the
beta(-1/2; x) formula for its non-holomorphic part.
"""

import cmath
import logging
import math
from enum import Enum
from fractions import Fraction
from typing import Callable, List, Optional

from scipy import integrate

from apps.core.conf import setting
from apps.core.exceptions import ConvergenceNotAchieved, SpecError
from apps.core.reports import VerificationReport, combine
from apps.families.tools.modular_group import GAMMA0_2_LOWER, T, ModularSubstitution
from apps.lattice.tools.polynomials import HomPoly
from apps.series.tools.cyclotomic import CycNum
from apps.series.tools.qseries import EvalPoint, QSeries
from apps.series.tools.standard_series import eta, eta_eval, euler_prod, humbert, theta2_eval
from apps.special.tools.error_functions import beta_gen, beta_quadrature
from apps.theta.tools.evaluation import nonholo_eval
from apps.theta.tools.expansion import holomorphic_expansion
from apps.theta.tools.spec import ThetaSpec, build_spec

logger = logging.getLogger(__name__)

HURWITZ_MATRIX = ((1, 1), (1, 0))
HURWITZ_ANCHOR = (-1, 1)
HURWITZ_CUSP = (0, 1)
HURWITZ_INTERIOR = (-1, 1)
HURWITZ_CHARS = ((0, Fraction(1, 2)), (Fraction(1, 2), 0))

MIN_HEIGHT = 0.2


class MaassRoute(Enum):
    THETA = "theta"
    BETA_FORMULA = "beta_formula"


# ============================================================================
# CLASS NUMBERS
# ============================================================================

def hurwitz_H(n: int) -> Fraction:
    """
    Hurwitz class number H(n), counted over reduced forms [a, b, c] with
    b^2 - 4ac = -n, |b| <= a <= c and b >= 0 when |b| = a or a = c.

    Forms of the shape [a, 0, a] weigh 1/2 and [a, a, a] weigh 1/3.
    H(0) = -1/12; impossible discriminants give 0.
    """
    if n == 0:
        return Fraction(-1, 12)
    if n < 0 or n % 4 in (1, 2):
        return Fraction(0)
    total = Fraction(0)
    b = n % 2
    while 3 * b * b <= n:
        a = max(b, 1)
        while 4 * a * a <= b * b + n:
            if (b * b + n) % (4 * a) == 0:
                c = (b * b + n) // (4 * a)
                if c >= a:
                    if a == b == c:
                        total += Fraction(1, 3)
                    elif b == 0 and a == c:
                        total += Fraction(1, 2)
                    elif b == 0 or b == a or a == c:
                        total += 1
                    else:
                        total += 2
            a += 1
        b += 2
    return total


def class_number_series(N: int) -> QSeries:
    """H_{8,7}(q) = humbert(q) / (q (q)^3_oo) to order N, from the Humbert identity."""
    if N < 1:
        raise SpecError(f"order must be positive, got {N}")
    return humbert(N + 1).shift_exponent(-1) * euler_prod(N) ** -3


def humbert_check(N: int = 100) -> VerificationReport:
    """Coefficient n of the Humbert series against H(8n + 7) for every n < N."""
    series = class_number_series(N)
    rows = []
    failures = 0
    for n in range(N):
        coefficient = series.coefficient(n).rational_value()
        expected = hurwitz_H(8 * n + 7)
        rows.append({'n': n, 'coefficient': coefficient, 'H(8n+7)': expected})
        failures += coefficient != expected
    logger.info(f"humbert check to order {N}: {failures} mismatches")
    return VerificationReport('humbert', residual=float(failures), passed=failures == 0,
                              params={'N': N}, rows=rows)


# ============================================================================
# THETA SPEC AND THE HOLOMORPHIC BRIDGE
# ============================================================================

def hurwitz_theta_spec() -> ThetaSpec:
    """The Hurwitz spec; (-1, 1) stands for sqrt(2) (-1, 1) in the exact engine."""
    root2 = math.sqrt(2)
    return build_spec(HURWITZ_MATRIX, HomPoly.variable(2, 0) ** 2, HURWITZ_ANCHOR,
                      HURWITZ_CUSP, HURWITZ_INTERIOR, *HURWITZ_CHARS,
                      boundary_override=True,
                      c2_real=(root2 * HURWITZ_INTERIOR[0], root2 * HURWITZ_INTERIOR[1]))


def theta_bridge_check(N: int = 20) -> VerificationReport:
    """
    Two exact identities on q-expansions:

        Theta-expansion of the Hurwitz spec = -4i humbert(q)
        q^{7/8} H_{8,7}(q) = (i/4) Theta / eta^3
    """
    theta = holomorphic_expansion(hurwitz_theta_spec(), N + 1)
    humbert_side = humbert(N + 1).scale(CycNum.gaussian(0, -4))
    lhs = class_number_series(N).shift_exponent(Fraction(7, 8))
    rhs = theta.scale(CycNum.gaussian(0, Fraction(1, 4))) * eta(N + 1) ** -3
    order = min(lhs.order, rhs.order)
    parts = [
        VerificationReport('theta_equals_humbert', residual=0.0 if theta == humbert_side else 1.0,
                           passed=theta == humbert_side, params={'N': N + 1}),
        VerificationReport('class_series_over_eta', residual=0.0 if lhs.truncate(order) == rhs.truncate(order) else 1.0,
                           passed=lhs.truncate(order) == rhs.truncate(order), params={'order': order}),
    ]
    return combine('hurwitz_bridge', parts, {'N': N})


# ============================================================================
# THE COMPLETION F
# ============================================================================

def _check_height(pt: EvalPoint):
    if pt.y < MIN_HEIGHT:
        raise SpecError(f"Hurwitz evaluation needs y >= {MIN_HEIGHT}, got {pt.y}")


def _humbert_value(pt: EvalPoint, tol: float) -> complex:
    """sum (-1)^{m+1} m^2 q^{m(m+1)/2} / (1 + q^m) summed directly."""
    q, r = pt.q, abs(pt.q)
    total = 0j
    for m in range(1, setting('MAX_ORDER') + 1):
        e = m * (m + 1) // 2
        total += (-1) ** (m + 1) * m * m * q ** e / (1 + q ** m)
        if m * m * r ** e / (1 - r ** m) < tol:
            return total
    raise ConvergenceNotAchieved(f"Humbert sum did not settle at tau={pt.tau}")


def holomorphic_part(pt: EvalPoint, tol: Optional[float] = None) -> complex:
    """q^{7/8} H_{8,7}(q) = humbert(q) / eta(tau)^3."""
    tol = setting('DEFAULT_TOLERANCE') if tol is None else tol
    _check_height(pt)
    return _humbert_value(pt, tol * 1e-2) / eta_eval(pt) ** 3


def nonholomorphic_part(pt: EvalPoint, tol: Optional[float] = None) -> complex:
    """
    (1/8 pi) sum_{n in Z} |2n+1| beta(-1/2; 2(n+1/2)^2 y) q^{-(n+1/2)^2/2}

    The summand is even under n -> -1 - n, so only n >= 0 is summed.
    """
    tol = setting('DEFAULT_TOLERANCE') if tol is None else tol
    _check_height(pt)
    total = 0j
    for n in range(setting('MAX_ORDER')):
        m2 = (n + 0.5) ** 2
        term = (2 * n + 1) * beta_gen(Fraction(-1, 2), 2 * m2 * pt.y) * cmath.exp(-1j * math.pi * pt.tau * m2)
        total += 2 * term
        if abs(term) < tol * 1e-2:
            return total / (8 * math.pi)
    raise ConvergenceNotAchieved(f"beta sum did not settle at tau={pt.tau}")


def F_maass_eval(pt: EvalPoint, tol: Optional[float] = None, route: str = MaassRoute.THETA.value) -> complex:
    """
    The completed Hurwitz generating function F(tau).

    Args:
        route: 'theta' evaluates (i/4) theta-hat / eta^3 with the non-holomorphic
            engine; 'beta_formula' adds the holomorphic part to the beta sum.

    Raises:
        SpecError: y below 0.2 or an unknown route.
        ConvergenceNotAchieved: either route ran out of terms.
    """
    tol = setting('DEFAULT_TOLERANCE') if tol is None else tol
    route = MaassRoute(route)
    _check_height(pt)
    if route is MaassRoute.THETA:
        theta = nonholo_eval(hurwitz_theta_spec(), pt, tol / 4).value
        return 0.25j * theta / eta_eval(pt) ** 3
    return holomorphic_part(pt, tol / 2) + nonholomorphic_part(pt, tol / 2)


def maass_routes_check(pt: EvalPoint, tol: float = 1e-8) -> VerificationReport:
    theta_route = F_maass_eval(pt, tol / 10, MaassRoute.THETA.value)
    beta_route = F_maass_eval(pt, tol / 10, MaassRoute.BETA_FORMULA.value)
    return VerificationReport.compare('maass_routes', theta_route, beta_route, tol, {'tau': pt.tau})


# ── Eichler integral ──

def eichler_nonholomorphic(pt: EvalPoint, tol: float = 1e-12) -> complex:
    """(1/4 pi) int_0^oo theta_2(-x + i(y + t)) (2y + t)^{-3/2} dt by quadrature."""
    _check_height(pt)

    def integrand(t: float) -> complex:
        return theta2_eval(EvalPoint(-pt.x, pt.y + t)) * (2 * pt.y + t) ** -1.5

    real, _ = integrate.quad(lambda t: integrand(t).real, 0, math.inf, epsabs=tol, limit=200)
    imag, _ = integrate.quad(lambda t: integrand(t).imag, 0, math.inf, epsabs=tol, limit=200)
    return (real + 1j * imag) / (4 * math.pi)


def eichler_check(pt: EvalPoint, tol: float = 1e-8) -> VerificationReport:
    """
    The beta sum against the Eichler quadrature, and its n = 0 term
    beta(-1/2; y/2) against 2 int_{2y}^oo u^{-3/2} exp(-pi u/4) du.
    """
    y = pt.y
    term, _ = integrate.quad(lambda u: u ** -1.5 * math.exp(-math.pi * u / 4), 2 * y, math.inf,
                             epsabs=tol * 1e-2, epsrel=1e-13, limit=200)
    parts = [
        VerificationReport.compare('eichler_sum', nonholomorphic_part(pt, tol / 10),
                                   eichler_nonholomorphic(pt, tol / 10), tol, {'tau': pt.tau}),
        VerificationReport.compare('eichler_term0', complex(beta_gen(Fraction(-1, 2), y / 2)),
                                   complex(2 * term), tol, {'y': y}),
        VerificationReport.compare('beta_quadrature', complex(beta_gen(Fraction(-1, 2), y / 2)),
                                   complex(beta_quadrature(Fraction(-1, 2), y / 2)), tol, {'y': y}),
    ]
    return combine('eichler', parts, {'tau': pt.tau})


# ── shadow ──

def xi_operator(fn: Callable[[EvalPoint], complex], pt: EvalPoint, h: float = 1e-4,
                weight: float = 1.5) -> complex:
    """2i y^k conj(dF/d tau-bar), with dF/d tau-bar = (F_x + i F_y)/2 by central differences."""
    if not 1e-5 <= h <= 1e-3:
        raise SpecError(f"step must lie in [1e-5, 1e-3], got {h}")
    fx = (fn(EvalPoint(pt.x + h, pt.y)) - fn(EvalPoint(pt.x - h, pt.y))) / (2 * h)
    fy = (fn(EvalPoint(pt.x, pt.y + h)) - fn(EvalPoint(pt.x, pt.y - h))) / (2 * h)
    return 2j * pt.y ** weight * ((fx + 1j * fy) / 2).conjugate()


def xi_check(pt: EvalPoint, h: float = 1e-4, tol: float = 1e-4) -> VerificationReport:
    """xi_{3/2} F against the shadow -theta_2 / (4 pi sqrt 2)."""
    xi = xi_operator(lambda p: F_maass_eval(p, 1e-13, MaassRoute.BETA_FORMULA.value), pt, h)
    shadow = -theta2_eval(pt) / (4 * math.pi * math.sqrt(2))
    return VerificationReport.compare('xi', xi, shadow, tol, {'tau': pt.tau, 'h': h}, relative=False)


# ============================================================================
# TRANSFORMATION LAWS
# ============================================================================

def eta_theta2_laws(pt: EvalPoint, tol: float = 1e-10) -> VerificationReport:
    """
    eta(tau + 1) = e^{pi i/12} eta,  eta(-1/tau) = sqrt(-i tau) eta,
    theta_2(tau + 1) = e^{pi i/4} theta_2,
    (theta_2/eta^3)(tau/(2tau + 1)) = i/(2tau + 1) (theta_2/eta^3)(tau).
    """
    tau = pt.tau
    eta_tau, theta_tau = eta_eval(pt), theta2_eval(pt)
    lowered = GAMMA0_2_LOWER.act(pt)
    parts = [
        VerificationReport.compare('eta_T', eta_eval(T.act(pt)), cmath.exp(1j * math.pi / 12) * eta_tau, tol),
        VerificationReport.compare('eta_S', eta_eval(EvalPoint.from_tau(-1 / tau)),
                                   cmath.sqrt(-1j * tau) * eta_tau, tol),
        VerificationReport.compare('theta2_T', theta2_eval(T.act(pt)), cmath.exp(1j * math.pi / 4) * theta_tau, tol),
        VerificationReport.compare('theta2_over_eta3', theta2_eval(lowered) / eta_eval(lowered) ** 3,
                                   1j / GAMMA0_2_LOWER.cocycle(pt) * theta_tau / eta_tau ** 3, tol),
    ]
    return combine('eta_theta2_laws', parts, {'tau': tau})


def theta_hat_gamma02_law(pt: EvalPoint, tol: float = 1e-8) -> VerificationReport:
    """theta-hat(tau/(2tau + 1)) = -i (2tau + 1)^3 theta-hat(tau) for the Hurwitz spec."""
    spec = hurwitz_theta_spec()
    lhs = nonholo_eval(spec, GAMMA0_2_LOWER.act(pt), tol / 10).value
    rhs = -1j * GAMMA0_2_LOWER.cocycle(pt) ** 3 * nonholo_eval(spec, pt, tol / 10).value
    return VerificationReport.compare('theta_hat_gamma02', lhs, rhs, tol, {'tau': pt.tau})


def weight2_check(pt: EvalPoint, gamma: ModularSubstitution = GAMMA0_2_LOWER, tol: float = 1e-6,
                  route: str = MaassRoute.BETA_FORMULA.value) -> VerificationReport:
    """(theta_2 F)(gamma tau) = (c tau + d)^2 (theta_2 F)(tau) for gamma in Gamma0(2)."""
    if not gamma.in_gamma0(2):
        raise SpecError(f"{gamma.label()} is not in Gamma0(2)")
    moved = gamma.act(pt)
    lhs = theta2_eval(moved) * F_maass_eval(moved, tol / 10, route)
    rhs = gamma.cocycle(pt) ** 2 * theta2_eval(pt) * F_maass_eval(pt, tol / 10, route)
    return VerificationReport.compare('weight2', lhs, rhs, tol, {'tau': pt.tau, 'gamma': gamma.label()})


def verify_gamma02(pt: EvalPoint, tol: float = 1e-6) -> VerificationReport:
    """theta_2 F on the generators T and [[1,0],[2,1]] of Gamma0(2) (-I acts trivially in weight 2)."""
    parts: List[VerificationReport] = [weight2_check(pt, gamma, tol) for gamma in (T, GAMMA0_2_LOWER)]
    return combine('gamma02', parts, {'tau': pt.tau})
