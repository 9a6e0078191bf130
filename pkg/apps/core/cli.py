"""
Command Line Front End
The run configuration and the subcommand runners behind `manage.py theta`,
plus dispatch(argv) for in-process use. Exit codes: 0 pass, 1 verification
failed, 2 usage error, 3 convergence not achieved.
"""

import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import indeftheta
from apps.core.conf import setting
from apps.core.exceptions import SpecError, VerificationFailed
from apps.core.parsing import parse_complex, parse_rational, parse_vector
from apps.core.reports import RENDERERS, VerificationReport, plain
from apps.families.services.example_orchestrator import ExampleOrchestrator
from apps.families.tools import hurwitz, zagier
from apps.families.tools.modular_group import ModularSubstitution
from apps.lattice.tools.cone import require_cone_vector
from apps.series.tools.qseries import EvalPoint
from apps.theta.serializers import load_spec
from apps.theta.services.modularity_verifier import ModularityVerifier
from apps.theta.tools.evaluation import nonholo_eval
from apps.theta.tools.expansion import holomorphic_expansion
from apps.theta.tools.transformation import Move

logger = logging.getLogger(__name__)

VERIFY_TARGETS = ('modularity', 'limit', 'gamma04', 'gamma02')
EXAMPLE_FAMILIES = ('eisenstein', 'zagier', 'hurwitz')
DEFAULT_TS = '1/10,1/20,1/40'


# ============================================================================
# RUN CONFIGURATION
# ============================================================================

@dataclass(frozen=True)
class RunConfig:
    """Inputs shared by every subcommand; embedded in each report."""
    tolerance: float
    order: Fraction
    tau: Tuple[Fraction, Fraction]
    seed: int = 0
    out: Optional[str] = None
    output_format: str = 'json'

    def __post_init__(self):
        if not 1e-12 <= self.tolerance <= 1e-2:
            raise SpecError(f"tolerance must lie in [1e-12, 1e-2], got {self.tolerance}")
        if self.order <= 0:
            raise SpecError(f"order must be positive, got {self.order}")
        if self.tau[1] <= 0:
            raise SpecError(f"Im(tau) must be positive, got {self.tau[1]}")
        if self.output_format not in RENDERERS:
            raise SpecError(f"unknown format '{self.output_format}'")

    @classmethod
    def from_options(cls, options: Mapping[str, Any]) -> "RunConfig":
        tol = options.get('tol')
        return cls(
            tolerance=setting('DEFAULT_TOLERANCE') if tol is None else float(tol),
            order=parse_rational(options.get('order') or '10'),
            tau=parse_complex(options.get('tau') or 'i'),
            seed=int(options.get('seed') or 0),
            out=options.get('out'),
            output_format=options.get('format') or 'json',
        )

    @property
    def point(self) -> EvalPoint:
        return EvalPoint(float(self.tau[0]), float(self.tau[1]))

    def to_dict(self) -> Dict[str, Any]:
        re, im = self.tau
        return {
            'tolerance': self.tolerance,
            'order': self.order,
            'tau': f"{re}{'+' if im >= 0 else '-'}{abs(im)}i",
            'seed': self.seed,
            'format': self.output_format,
        }


# ============================================================================
# RUNNERS
# ============================================================================

def _load_spec(path: Optional[str]):
    if not path:
        raise SpecError("--spec is required")
    try:
        with open(path, encoding='utf-8') as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read spec file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec file {path} is not valid JSON: {exc}") from exc
    return load_spec(data)


def run_expand(config: RunConfig, options: Mapping[str, Any]) -> str:
    """The holomorphic q-expansion; as JSON it is a series file."""
    spec = _load_spec(options.get('spec'))
    series = holomorphic_expansion(spec, config.order)
    if config.output_format == 'json':
        payload = dict(series.to_json())
        payload['version'] = indeftheta.__version__
        payload['config'] = plain(config.to_dict())
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    report = VerificationReport('expand', params={'order': config.order},
                                rows=[{'exponent': e, 'coefficient': c.to_complex()} for e, c in series.items()])
    return RENDERERS[config.output_format](report, config.to_dict())


def run_eval(config: RunConfig, options: Mapping[str, Any]) -> VerificationReport:
    spec = _load_spec(options.get('spec'))
    value = nonholo_eval(spec, config.point, config.tolerance)
    return VerificationReport('eval', value.value, None, value.estimate, True,
                              {'tau': config.point.tau, 'estimate': value.estimate})


def run_verify(config: RunConfig, options: Mapping[str, Any]) -> VerificationReport:
    target = options.get('target')
    pt, tol = config.point, config.tolerance
    gamma = ModularSubstitution.parse(options['gamma']) if options.get('gamma') else None

    if target == 'modularity':
        spec = _load_spec(options.get('spec'))
        return ModularityVerifier.verify_modularity(spec, Move.parse(options.get('move') or 'T'), pt, tol)
    if target == 'limit':
        spec = _load_spec(options.get('spec'))
        if not options.get('c3'):
            raise SpecError("verify limit needs --c3")
        c3 = require_cone_vector(spec.Qf, spec.c1.anchor, parse_vector(options['c3']))
        ts = parse_vector(options.get('ts') or DEFAULT_TS)
        return ModularityVerifier.verify_limit(spec, c3, pt, ts, tol)
    if target == 'gamma04':
        kind, k = options.get('kind') or 'S', int(options.get('k') or 4)
        x = parse_rational(options.get('x') or '1/2')
        if gamma is not None:
            return zagier.verify_SxTx(kind, k, x, gamma, pt, tol)
        return zagier.verify_gamma04(kind, k, x, pt, tol)
    if target == 'gamma02':
        if gamma is not None:
            return hurwitz.weight2_check(pt, gamma, tol)
        return hurwitz.verify_gamma02(pt, tol)
    raise SpecError(f"unknown verification target '{target}'")


def run_example(config: RunConfig, options: Mapping[str, Any]) -> VerificationReport:
    """The family table as rows; the checks go into the parameters."""
    pt = config.point if options.get('tau') else None
    result = ExampleOrchestrator.run(options.get('family'), int(config.order), pt, bool(options.get('full')))
    return VerificationReport(result.report.check, None, None, result.report.residual, result.report.passed,
                              dict(result.params, checks=result.report.rows), result.table)


# ============================================================================
# EXECUTION
# ============================================================================

def _emit(text: str, config: RunConfig, stdout):
    if config.out:
        with open(config.out, 'w', encoding='utf-8') as fh:
            fh.write(text)
        logger.info(f"wrote {config.out}")
    else:
        stdout.write(text)


def execute(options: Mapping[str, Any], stdout) -> int:
    """
    Run one subcommand and write its output.

    Raises:
        IndefThetaError: invalid input or convergence failure.
        VerificationFailed: the report was written but did not pass.
    """
    config = RunConfig.from_options(options)
    subcommand = options.get('subcommand')
    logger.debug(f"theta {subcommand} with {config.to_dict()}")
    if subcommand == 'expand':
        _emit(run_expand(config, options), config, stdout)
        return 0
    runners = {'eval': run_eval, 'verify': run_verify, 'example': run_example}
    if subcommand not in runners:
        raise SpecError(f"unknown subcommand '{subcommand}'")
    report = runners[subcommand](config, options)
    _emit(RENDERERS[config.output_format](report, config.to_dict()), config, stdout)
    if not report.passed:
        raise VerificationFailed(f"{report.check} failed with residual {report.residual:.3e}")
    return 0


def dispatch(argv: Sequence[str], stdout=None, stderr=None) -> int:
    """Parse argv as `manage.py theta` would and return the exit code."""
    from django.core.management.base import CommandError

    from apps.core.management.commands.theta import Command

    command = Command(stdout=stdout or sys.stdout, stderr=stderr or sys.stderr)
    parser = command.create_parser('manage.py', 'theta')
    try:
        options = vars(parser.parse_args(list(argv)))
    except CommandError as exc:
        command.stderr.write(str(exc))
        return 2
    except SystemExit as exc:
        return 2 if exc.code else 0
    args = options.pop('args', ())
    try:
        command.execute(*args, **options)
    except CommandError as exc:
        command.stderr.write(f"CommandError: {exc}")
        return exc.returncode
    return 0
