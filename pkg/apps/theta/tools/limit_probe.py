"""
Limit Probe Tool
Approach of an interior cone vector c(t) = c2 + t c3 to a cusp c2: the
completed series for (c1, c(t)) tends to the one for (c1, c2).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from apps.core.conf import setting
from apps.core.exceptions import SpecError
from apps.lattice.tools.cone import Characteristics, ConeVector, require_cone_vector
from apps.lattice.tools.polynomials import HomPoly
from apps.lattice.tools.quadratic_form import QuadraticForm
from apps.series.tools.qseries import EvalPoint
from apps.theta.tools.evaluation import nonholo_eval
from apps.theta.tools.spec import ThetaSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LimitReport:
    ts: List[Fraction]
    errors: List[float]
    limit_value: complex
    passed: bool
    diagnostics: Dict[str, Any] = field(default_factory=dict)


def _as_parameter(t: Any) -> Fraction:
    """Floats are read through their decimal form so 0.1 becomes 1/10."""
    return Fraction(str(t)) if isinstance(t, float) else Fraction(t)


def limit_probe(Qf: QuadraticForm, f: HomPoly, c1: ConeVector, c2: ConeVector, c3: ConeVector,
                chars: Characteristics, pt: EvalPoint, ts: Sequence[Any],
                tol: Optional[float] = None, boundary_override: bool = False) -> LimitReport:
    """
    |theta-hat^{c1, c2 + t c3}(tau) - theta-hat^{c1, c2}(tau)| for each t.

    c2 must be a cusp with a in R(c2) and c3 interior with
    B(c2, c3) < 0. Passes when the errors strictly decrease along ts and
    the last one is within tol.
    """
    tol = setting('DEFAULT_TOLERANCE') if tol is None else tol
    if not c2.is_cusp:
        raise SpecError("the limit vector c2 must be a cusp")
    if not c3.is_interior or not Qf.B(c2.c, c3.require_exact()) < 0:
        raise SpecError("c3 must be interior with B(c2, c3) < 0")
    spec = ThetaSpec(Qf, f, c1, c2, chars, boundary_override)

    eval_tol = min(1e-12, tol / 100)
    limit_value = nonholo_eval(spec, pt, eval_tol).value
    params = [_as_parameter(t) for t in ts]
    errors = []
    for t in params:
        if t <= 0:
            raise SpecError(f"limit parameters must be positive, got {t}")
        ct = require_cone_vector(Qf, c2.anchor, tuple(x + t * y for x, y in zip(c2.c, c3.c)))
        value = nonholo_eval(spec.with_cones(spec.c1, ct), pt, eval_tol).value
        errors.append(abs(value - limit_value))
        logger.debug(f"limit t={t}: error {errors[-1]:.3e}")

    decreasing = all(e2 < e1 for e1, e2 in zip(errors, errors[1:]))
    passed = decreasing and bool(errors) and errors[-1] <= tol
    logger.info(f"limit probe over {len(params)} parameters: {'passed' if passed else 'failed'}")
    return LimitReport(params, errors, limit_value, passed, {'decreasing': decreasing})
