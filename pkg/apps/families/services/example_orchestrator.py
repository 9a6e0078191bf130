"""
Example Orchestrator
Runs the Eisenstein, Zagier and Hurwitz suites: a coefficient table and one
combined report per family. Each check runs at its own acceptance tolerance.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import partial
from typing import Any, Callable, Dict, List, Optional, Sequence

from apps.core.conf import setting
from apps.core.exceptions import SpecError
from apps.core.reports import VerificationReport, combine
from apps.families.tools import eisenstein, hurwitz, zagier
from apps.families.tools.modular_group import GAMMA_PRIME, S, T
from apps.series.tools.qseries import EvalPoint

logger = logging.getLogger(__name__)


class Family(Enum):
    EISENSTEIN = "eisenstein"
    ZAGIER = "zagier"
    HURWITZ = "hurwitz"


DEFAULT_POINTS = {
    Family.EISENSTEIN: EvalPoint(0.0, 1.0),
    Family.ZAGIER: EvalPoint(-0.25, 0.25),
    Family.HURWITZ: EvalPoint(0.0, 1.0),
}


def run_checks(checks: Sequence[Callable[[], VerificationReport]]) -> List[VerificationReport]:
    """
    Run independent checks on at most THREADS workers; reports keep their order.

    Threads overlap only where a check releases the GIL (numpy, scipy
    quadrature). The exact q-series checks stay serial in effect.
    """
    workers = max(1, min(int(setting('THREADS')), len(checks)))
    if workers == 1:
        return [check() for check in checks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda check: check(), checks))


@dataclass
class ExampleResult:
    family: Family
    table: List[Dict[str, Any]]
    report: VerificationReport
    params: Dict[str, Any] = field(default_factory=dict)


class ExampleOrchestrator:
    """
    Example Orchestrator - one staticmethod per family
    """

    @staticmethod
    def run(family: Any, order: int = 20, pt: Optional[EvalPoint] = None, full: bool = False,
            **options) -> ExampleResult:
        """
        Run one family suite.

        Args:
            family: 'eisenstein', 'zagier' or 'hurwitz'
            order: number of coefficients in the table
            pt: evaluation point; each family has its own default
            full: also run the extrapolated limit checks
        """
        try:
            family = Family(family)
        except ValueError as exc:
            raise SpecError(f"unknown example family '{family}'") from exc
        if order < 1:
            raise SpecError(f"order must be positive, got {order}")
        pt = pt or DEFAULT_POINTS[family]
        runner = {
            Family.EISENSTEIN: ExampleOrchestrator.eisenstein,
            Family.ZAGIER: ExampleOrchestrator.zagier,
            Family.HURWITZ: ExampleOrchestrator.hurwitz,
        }[family]
        logger.info(f"example {family.value}: order={order} tau={pt.tau} full={full}")
        result = runner(order, pt, full, **options)
        logger.info(f"example {family.value}: {'pass' if result.report.passed else 'fail'}")
        return result

    @staticmethod
    def eisenstein(order: int, pt: EvalPoint, full: bool = False, k: int = 4) -> ExampleResult:
        seventh = (Fraction(1, 7), Fraction(1, 7))

        # ====================================================================
        # STEP 1: q-expansion of G_k
        # ====================================================================
        table = eisenstein.coefficient_table(k, order)

        # ====================================================================
        # STEP 2: correction term laws, lattice partition, G_2 anomaly
        # ====================================================================
        checks = [
            partial(eisenstein.f_G_law_check, seventh, seventh, k, pt),
            partial(eisenstein.partition_check, k, (Fraction(1, 3), Fraction(1, 5)),
                    (Fraction(1, 7), Fraction(2, 7)), pt),
            partial(eisenstein.g2_anomaly_check, pt),
        ]

        # ====================================================================
        # STEP 3: the limit a, b -> 0
        # ====================================================================
        if full:
            ts = (Fraction(1, 100), Fraction(1, 200))
            checks.append(partial(eisenstein.eisenstein_limit_check, k, pt, ts))
            checks.append(partial(eisenstein.eisenstein_limit_check, 2, pt, ts, tol=1e-4))

        reports = run_checks(checks)
        params = {'k': k, 'order': order, 'tau': pt.tau, 'full': full}
        return ExampleResult(Family.EISENSTEIN, table, combine("example:eisenstein", reports, params), params)

    @staticmethod
    def zagier(order: int, pt: EvalPoint, full: bool = False, k: int = 4,
               x: Any = Fraction(1, 2)) -> ExampleResult:
        x = Fraction(x)

        # ====================================================================
        # STEP 1: coefficients of S_x
        # ====================================================================
        table = zagier.coefficient_table(zagier.SeriesKind.S, k, x, order)

        # ====================================================================
        # STEP 2: Gamma0(4) covariance of S_x and T_x, and of f_(a,b)
        # ====================================================================
        a = (Fraction(1, 5), Fraction(1, 7), Fraction(1, 3))
        b = (Fraction(2, 9), Fraction(1, 4), Fraction(1, 3))
        at_i = EvalPoint(0.0, 1.0)
        checks = [
            partial(zagier.verify_gamma04, zagier.SeriesKind.S, k, x, pt),
            partial(zagier.verify_gamma04, zagier.SeriesKind.T, k, x, pt),
            partial(zagier.f_ab_covariance, a, b, k, GAMMA_PRIME, at_i),
            partial(zagier.f_ab_covariance, a, b, k, T, at_i),
        ]

        # ====================================================================
        # STEP 3: the theta routes and growth at the cusp 0
        # ====================================================================
        if full:
            checks.append(partial(zagier.theta_route_check, zagier.SeriesKind.S, k, x, at_i))
            checks.append(partial(zagier.theta_route_check, zagier.SeriesKind.T, k, x, at_i))
            checks.append(partial(zagier.cusp_growth_check, zagier.SeriesKind.S, k, x, S))

        reports = run_checks(checks)
        params = {'k': k, 'x': x, 'order': order, 'tau': pt.tau, 'full': full}
        return ExampleResult(Family.ZAGIER, table, combine("example:zagier", reports, params), params)

    @staticmethod
    def hurwitz(order: int, pt: EvalPoint, full: bool = False) -> ExampleResult:

        # ====================================================================
        # STEP 1: Humbert identity against reduced-form class numbers
        # ====================================================================
        humbert = hurwitz.humbert_check(order)
        table = humbert.rows

        # ====================================================================
        # STEP 2: exact bridge to the theta expansion
        # ====================================================================
        checks = [partial(hurwitz.theta_bridge_check, min(order, 20))]

        # ====================================================================
        # STEP 3: the completion, its shadow and its transformation laws
        # ====================================================================
        checks += [
            partial(hurwitz.maass_routes_check, pt),
            partial(hurwitz.eta_theta2_laws, pt),
            partial(hurwitz.xi_check, pt),
        ]
        if full:
            checks += [
                partial(hurwitz.eichler_check, pt),
                partial(hurwitz.weight2_check, EvalPoint(-0.5, 0.5)),
                partial(hurwitz.theta_hat_gamma02_law, pt),
            ]

        reports = [humbert] + run_checks(checks)
        params = {'order': order, 'tau': pt.tau, 'full': full}
        return ExampleResult(Family.HURWITZ, table, combine("example:hurwitz", reports, params), params)


def run_example(family: Any, order: int = 20, pt: Optional[EvalPoint] = None,
                full: bool = False) -> ExampleResult:
    return ExampleOrchestrator.run(family, order, pt, full)
