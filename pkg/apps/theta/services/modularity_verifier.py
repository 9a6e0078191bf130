"""
Modularity Verifier
Checks the transformation laws of a spec numerically through nonholo_eval,
and exactly on q-expansions for the laws that fix tau up to translation.
"""

import logging
from fractions import Fraction
from typing import Any, Optional, Sequence

from apps.core.conf import setting
from apps.core.exceptions import SpecError
from apps.core.reports import VerificationReport
from apps.lattice.tools.cone import ConeVector
from apps.series.tools.qseries import EvalPoint, QSeries
from apps.theta.tools.evaluation import nonholo_eval
from apps.theta.tools.expansion import holomorphic_expansion
from apps.theta.tools.limit_probe import limit_probe
from apps.theta.tools.spec import ThetaSpec
from apps.theta.tools.transformation import Move, MoveKind, transform

logger = logging.getLogger(__name__)


class ModularityVerifier:
    """
    Two-path checks of theta-hat_{spec}(g tau) = prefactor * sum_j w_j theta-hat_{spec_j}(tau)
    """

    @staticmethod
    def verify_modularity(spec: ThetaSpec, move: Move, pt: EvalPoint,
                          tol: Optional[float] = None) -> VerificationReport:
        """
        Evaluate both sides with nonholo_eval.

        Passes when the residual is within tol (1 + |lhs|).
        """
        tol = setting('DEFAULT_TOLERANCE') if tol is None else tol
        eval_tol = max(1e-12, tol / 100)
        result = transform(spec, move)

        # ====================================================================
        # STEP 1: left side at g tau
        # ====================================================================
        moved = pt.act(move.gamma)
        lhs = nonholo_eval(spec, moved, eval_tol).value

        # ====================================================================
        # STEP 2: right side at tau
        # ====================================================================
        rhs = result.combine(pt, lambda s, p: nonholo_eval(s, p, eval_tol).value)

        report = VerificationReport.compare(
            f"modularity:{move.label()}", lhs, rhs, tol,
            {'tau': pt.tau, 'move': move.label(), 'terms': len(result.specs)},
        )
        logger.info(f"modularity {move.label()} at {pt.tau}: residual {report.residual:.3e} "
                    f"({'pass' if report.passed else 'fail'})")
        return report

    @staticmethod
    def verify_exact(spec: ThetaSpec, move: Move, N: Any = 10) -> VerificationReport:
        """
        Coefficientwise check of the shift, negation and T laws on holomorphic
        expansions to order N.
        """
        if move.kind is MoveKind.S:
            raise SpecError("the S-law moves tau off the q-expansion; use verify_modularity")
        N = Fraction(N)
        result = transform(spec, move)
        lhs = holomorphic_expansion(spec, N)
        if move.kind is MoveKind.T:
            lhs = lhs.shift_tau(1)
        rhs = QSeries.zero(N)
        for weight, moved in result.specs:
            rhs = rhs + holomorphic_expansion(moved, N).scale(weight)
        passed = lhs == rhs
        logger.info(f"exact {move.label()} to q^{N}: {'pass' if passed else 'fail'}")
        return VerificationReport(
            f"exact:{move.label()}", lhs.to_json(), rhs.to_json(), 0.0 if passed else 1.0, passed,
            {'order': N, 'move': move.label()},
        )

    @staticmethod
    def verify_limit(spec: ThetaSpec, c3: ConeVector, pt: EvalPoint, ts: Sequence[Any],
                     tol: float = 1e-3) -> VerificationReport:
        """limit_probe for (spec.c1, spec.c2 + t c3) as a report with one row per t."""
        probe = limit_probe(spec.Qf, spec.f, spec.c1, spec.c2, c3, spec.chars, pt, ts,
                            tol=tol, boundary_override=spec.boundary_override)
        rows = [{'t': t, 'error': e} for t, e in zip(probe.ts, probe.errors)]
        return VerificationReport(
            "limit", probe.limit_value, None, probe.errors[-1] if probe.errors else 0.0,
            probe.passed, {'tau': pt.tau, 'tol': tol, **probe.diagnostics}, rows,
        )


def verify_modularity(spec: ThetaSpec, move: Move, pt: EvalPoint,
                      tol: Optional[float] = None) -> VerificationReport:
    return ModularityVerifier.verify_modularity(spec, move, pt, tol)
