"""
Holomorphic Expansion Tool
Exact q-expansion of Theta[f]^{c1,c2}_{a,b} = sum_l rho(l) f(l) e^{2 pi i B(l, b)} q^{Q(l)}.
"""

import logging
import math
from fractions import Fraction
from typing import Any, Dict, List

from apps.core.exceptions import SpecError
from apps.lattice.tools.quadratic_form import as_fraction, denominator_lcm
from apps.series.tools.cyclotomic import CycNum
from apps.series.tools.qseries import QSeries
from apps.theta.tools.spec import ThetaSpec
from apps.theta.tools.support import theta_support

logger = logging.getLogger(__name__)


def exponent_denominator(spec: ThetaSpec) -> int:
    """
    D with Q(a + Z^n) in (1/D)Z: Q(a + z) = Q(a) + (Aa).z + Q(z) and
    Q(z) is integral exactly when A is even.
    """
    Qf = spec.Qf
    parts = [Qf.Q(spec.a)] + list(Qf.apply(spec.a))
    base = denominator_lcm(as_fraction(x) for x in parts)
    return base if Qf.is_even else math.lcm(base, 2)


def phase_order(spec: ThetaSpec) -> int:
    """M with every e^{2 pi i B(l, b)} and the coefficients of f in Q(zeta_M)."""
    Qf = spec.Qf
    parts = [Qf.B(spec.a, spec.b)] + list(Qf.apply(spec.b))
    M = denominator_lcm(as_fraction(x) for x in parts)
    return M if spec.f.is_real else math.lcm(M, 4)


def holomorphic_expansion(spec: ThetaSpec, N: Any) -> QSeries:
    """
    Every coefficient with exponent below N, exactly.

    Raises:
        SpecError: a cone vector has no rational representative, or N <= 0.
        BoundaryOverrideViolation: from the support enumeration.
    """
    N = as_fraction(N)
    if N <= 0:
        raise SpecError(f"order must be positive, got {N}")
    for c in (spec.c1, spec.c2):
        c.require_exact()

    D = exponent_denominator(spec)
    M = phase_order(spec)
    quarter = M // 4
    rows: Dict[int, List[Fraction]] = {}
    count = 0
    for point in theta_support(spec, N):
        re, im = spec.f.evaluate_parts(point.ell)
        if re == 0 and im == 0:
            continue
        r = spec.Qf.B(point.ell, spec.b) * M
        if r.denominator != 1:
            raise ArithmeticError(f"phase {r / M} is not in (1/{M})Z")
        j = int(r) % M
        e = point.exponent * D
        if e.denominator != 1:
            raise ArithmeticError(f"exponent {point.exponent} is not in (1/{D})Z")
        row = rows.setdefault(int(e), [Fraction(0)] * M)
        row[j] += point.weight * re
        if im:
            row[(j + quarter) % M] += point.weight * im
        count += 1

    terms = {e: CycNum(M, tuple(row)) for e, row in rows.items()}
    series = QSeries.from_dict(D, terms, N)
    logger.info(f"holomorphic expansion to q^{N}: {count} lattice points, {len(series.terms)} exponents")
    return series
