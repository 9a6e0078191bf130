"""
Theta Evaluation Tool
Floating evaluation of the completed series theta-hat and its almost
holomorphic part at a point of the upper half plane.

theta-hat splits into
  - a sign part, y^{-d/2} sum_l rho(l) f-hat(l sqrt(y)) q^{Q(l)} e^{2 pi i B(l, b)},
    summed over the finite supports below doubling orders N
  - one correction per interior cone vector, decaying like
    exp(-2 pi y M_c(l)) and summed over doubling majorant ellipsoids
Each part stops when the last doubling changed it by less than its share of
the tolerance.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from apps.core.conf import setting
from apps.core.exceptions import ConvergenceNotAchieved
from apps.lattice.tools.cone import ConeVector, majorant_array
from apps.lattice.tools.enumeration import ellipsoid_points
from apps.series.tools.qseries import EvalPoint
from apps.theta.tools.kernel import KernelPlan
from apps.theta.tools.spec import ThetaSpec
from apps.theta.tools.support import support_arrays, theta_support

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThetaValue:
    """A floating value with the estimate of its truncation error."""
    value: complex
    estimate: float
    diagnostics: Dict[str, Any] = field(default_factory=dict, compare=False)


def _start(tol: float, y: float) -> float:
    """Level whose doubled value puts exp(-2 pi y level) near tol."""
    return max(1.0, -math.log(tol) / (4 * math.pi * y))


# ============================================================================
# SIGN PART
# ============================================================================

def _sign_part(spec: ThetaSpec, pt: EvalPoint, tol: float) -> Tuple[complex, float, Dict[str, Any]]:
    N = Fraction(math.ceil(_start(tol, pt.y)))
    cap = setting('MAX_ORDER')
    Qf = spec.Qf
    while True:
        points = theta_support(spec, 2 * N)
        ells, weights, exps = support_arrays(points, spec.n)
        phases = np.array([float(Qf.B(p.ell, spec.b) % 1) for p in points], dtype=float)
        values = (weights * spec.fhat.scaled_evaluate_many(ells, pt.y)
                  * np.exp(2j * math.pi * (pt.tau * exps + phases)))
        full = complex(np.sum(values))
        inner = complex(np.sum(values[exps < float(N)]))
        estimate = abs(full - inner) + math.exp(-4 * math.pi * pt.y * float(N))
        logger.debug(f"sign part N={2 * N}: {len(points)} points, change {estimate:.3e}")
        if estimate <= tol:
            return full, estimate, {'sign_order': str(2 * N), 'sign_points': len(points)}
        if 4 * N > cap:
            raise ConvergenceNotAchieved(
                f"sign part did not reach {tol:.1e} below order {cap}",
                estimate=estimate,
                diagnostics={'order': str(2 * N), 'tau': str(pt.tau), 'value': str(full)},
            )
        N *= 2


# ============================================================================
# INTERIOR CORRECTIONS
# ============================================================================

def _correction(spec: ThetaSpec, c: ConeVector, pt: EvalPoint, tol: float) -> Tuple[complex, float, Dict[str, Any]]:
    """sum_l y^{-d/2} (p^c - sgn f-hat)(l sqrt(y)) q^{Q(l)} e^{2 pi i B(l, b)}."""
    plan = KernelPlan(spec.Qf, c, spec.fhat)
    gram = majorant_array(spec.Qf, c)
    A = spec.Qf.array
    a = np.array([float(x) for x in spec.a])
    Ab = A @ np.array([float(x) for x in spec.b])
    level = _start(tol, 1.0)
    cap = setting('MAX_ORDER')
    while True:
        zs = list(ellipsoid_points(gram, a, 2 * (2 * level) / pt.y))
        ells = np.array(zs, dtype=float).reshape(-1, spec.n) + a
        exps = 0.5 * np.einsum('pi,ij,pj->p', ells, A, ells)
        major = 0.5 * np.einsum('pi,ij,pj->p', ells, gram, ells)
        values = plan.damped_correction(ells, pt.y, exps) * np.exp(2j * math.pi * (pt.x * exps + ells @ Ab))
        full = complex(np.sum(values))
        inner = complex(np.sum(values[pt.y * major <= level]))
        estimate = abs(full - inner) + math.exp(-4 * math.pi * level)
        logger.debug(f"correction level={2 * level:.3g}: {len(zs)} points, change {estimate:.3e}")
        if estimate <= tol:
            return full, estimate, {'correction_level': 2 * level, 'correction_points': len(zs)}
        if 4 * level > cap:
            raise ConvergenceNotAchieved(
                f"interior correction did not reach {tol:.1e} below level {cap}",
                estimate=estimate,
                diagnostics={'level': 2 * level, 'tau': str(pt.tau), 'value': str(full)},
            )
        level *= 2


# ============================================================================
# ENTRY POINTS
# ============================================================================

def almost_holo_eval(spec: ThetaSpec, pt: EvalPoint, tol: Optional[float] = None) -> ThetaValue:
    """
    The sign part alone: every interior kernel replaced by its sign limit.

    Agrees with nonholo_eval when both cone vectors are cusps.
    """
    tol = setting('DEFAULT_TOLERANCE') if tol is None else tol
    if spec.is_trivial:
        return ThetaValue(0j, 0.0)
    value, estimate, diag = _sign_part(spec, pt, tol)
    return ThetaValue(value, estimate, diag)


def nonholo_eval(spec: ThetaSpec, pt: EvalPoint, tol: Optional[float] = None) -> ThetaValue:
    """
    theta-hat[f]^{c1,c2}_{a,b}(tau) to within tol.

    Raises:
        ConvergenceNotAchieved: the order or level cap was reached first.
    """
    tol = setting('DEFAULT_TOLERANCE') if tol is None else tol
    if spec.is_trivial:
        return ThetaValue(0j, 0.0)
    interiors: List[Tuple[int, ConeVector]] = [
        (sign, c) for sign, c in ((1, spec.c1), (-1, spec.c2)) if c.is_interior
    ]
    share = tol / (1 + len(interiors))
    value, estimate, diagnostics = _sign_part(spec, pt, share)
    for sign, c in interiors:
        part, part_estimate, diag = _correction(spec, c, pt, share)
        value += sign * part
        estimate += part_estimate
        diagnostics[f"c{1 if sign > 0 else 2}"] = diag
    logger.debug(f"theta-hat at {pt.tau}: {value} (+/- {estimate:.2e})")
    return ThetaValue(value, estimate, diagnostics)
