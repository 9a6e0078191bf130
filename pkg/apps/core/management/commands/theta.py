"""
Django management command for expansion, evaluation, verification and the
example suites: `python manage.py theta <subcommand> ...`
"""

import json

from django.core.management.base import BaseCommand, CommandError

from apps.core import cli
from apps.core.exceptions import IndefThetaError
from apps.core.reports import RENDERERS, plain


class Command(BaseCommand):
    help = 'Expand, evaluate and verify indefinite theta series'

    requires_system_checks = []

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest='subcommand', required=True)

        expand = subparsers.add_parser('expand', help='Spec file to q-series file')
        evaluate = subparsers.add_parser('eval', help='Non-holomorphic value at tau')
        verify = subparsers.add_parser('verify', help='Residual report for a transformation law')
        verify.add_argument('target', choices=cli.VERIFY_TARGETS)
        example = subparsers.add_parser('example', help='Table and report for one family')
        example.add_argument('family', choices=cli.EXAMPLE_FAMILIES)
        example.add_argument('--full', action='store_true', help='Also run the extrapolated limit checks')

        for sub in (expand, evaluate, verify, example):
            sub.add_argument('--spec', help='Spec JSON file')
            sub.add_argument('--order', help='Truncation order N, "p/q" allowed')
            sub.add_argument('--tau', help='Evaluation point "x+yi" (default i)')
            sub.add_argument('--tol', type=float, help='Tolerance in [1e-12, 1e-2]')
            sub.add_argument('--move', help='S, T, negate, shift_a:v or shift_b:v')
            sub.add_argument('--gamma', help='Substitution "a,b;c,d"')
            sub.add_argument('--c3', help='Interior direction for verify limit, "p/q,..."')
            sub.add_argument('--ts', help='Decreasing limit parameters, "p/q,..."')
            sub.add_argument('--kind', choices=('S', 'T'), help='Zagier series for verify gamma04')
            sub.add_argument('--k', type=int, help='Weight parameter k for verify gamma04')
            sub.add_argument('--x', help='Rational x for verify gamma04')
            sub.add_argument('--out', help='Output file (default standard output)')
            sub.add_argument('--format', choices=sorted(RENDERERS), default='json')
            sub.add_argument('--seed', type=int, default=0)

    def handle(self, *args, **options):
        try:
            cli.execute(options, self.stdout)
        except IndefThetaError as e:
            message = str(e)
            if e.diagnostics:
                message += ' ' + json.dumps(plain(e.diagnostics), sort_keys=True)
            raise CommandError(message, returncode=e.exit_code) from e
        except (ValueError, ZeroDivisionError) as e:
            raise CommandError(str(e), returncode=2) from e
