"""
Core Tests
Parsing, run configuration, report rendering and the `theta` command exit codes
"""

import io
import json
from fractions import Fraction

import pytest

from apps.core import cli
from apps.core.conf import DEFAULTS, setting
from apps.core.exceptions import (
    ConvergenceNotAchieved,
    EnumerationBoundError,
    PoleError,
    SpecError,
    VerificationFailed,
)
from apps.core.parsing import parse_complex, parse_matrix, parse_rational, parse_vector
from apps.core.reports import VerificationReport, combine, plain, render_csv, render_json, render_text
from apps.lattice.tools.polynomials import HomPoly
from apps.theta.serializers import dump_spec, load_series
from apps.theta.tools.expansion import holomorphic_expansion
from apps.theta.tools.spec import build_spec

F = Fraction


def eisenstein_spec():
    return build_spec(((0, 1), (1, 0)), HomPoly.from_dict(2, {(3, 0): 1}), (-1, 1), (0, 1), (-1, 0),
                      (F(1, 5), F(1, 5)), (F(1, 5), F(1, 5)))


@pytest.fixture
def spec_file(tmp_path):
    path = tmp_path / 'eisenstein.json'
    path.write_text(json.dumps(dump_spec(eisenstein_spec())))
    return str(path)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.dispatch(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class TestParsing:
    """Command-line scalars"""

    def test_rationals(self):
        assert parse_rational('3') == 3
        assert parse_rational('-1/4') == F(-1, 4)
        assert parse_rational('0.25') == F(1, 4)
        for bad in ('x', '1/0', '', '1//2'):
            with pytest.raises(SpecError):
                parse_rational(bad)

    @pytest.mark.parametrize('text, expected', [
        ('i', (0, 1)),
        ('-i', (0, -1)),
        ('2i', (0, 2)),
        ('1/3+1/2i', (F(1, 3), F(1, 2))),
        ('-0.25+0.25i', (F(-1, 4), F(1, 4))),
        ('0.5', (F(1, 2), 0)),
    ])
    def test_complex(self, text, expected):
        assert parse_complex(text) == expected

    def test_vectors_and_matrices(self):
        assert parse_vector('1/2, 0,-1') == (F(1, 2), 0, -1)
        assert parse_matrix('1,0;4,1') == ((1, 0), (4, 1))
        with pytest.raises(SpecError):
            parse_vector(',')
        with pytest.raises(SpecError):
            parse_matrix('1,0;4')
        with pytest.raises(SpecError):
            parse_matrix('1,a;0,1')


class TestConfiguration:
    """INDEFTHETA settings and RunConfig"""

    def test_setting_reads_django_settings(self, settings):
        settings.INDEFTHETA = dict(settings.INDEFTHETA, MAX_ORDER=7)
        assert setting('MAX_ORDER') == 7
        settings.INDEFTHETA = {}
        assert setting('THREADS') == DEFAULTS['THREADS']

    def test_defaults(self):
        config = cli.RunConfig.from_options({})
        assert config.tolerance == setting('DEFAULT_TOLERANCE')
        assert config.order == 10
        assert config.point.tau == 1j
        assert config.to_dict()['tau'] == '0+1i'

    @pytest.mark.parametrize('options', [
        {'tol': 1.0},
        {'tol': 1e-13},
        {'order': '0'},
        {'tau': '1-i'},
        {'format': 'xml'},
    ])
    def test_rejects(self, options):
        with pytest.raises(SpecError):
            cli.RunConfig.from_options(options)


class TestReports:
    """Residual reports and their renderings"""

    def test_compare(self):
        assert VerificationReport.compare('c', 100.0, 100.0 + 1e-7, 1e-8).passed
        assert not VerificationReport.compare('c', 100.0, 100.0 + 1e-7, 1e-8, relative=False).passed

    def test_combine(self):
        good = VerificationReport('a', residual=1e-9)
        bad = VerificationReport('b', residual=1e-3, passed=False)
        report = combine('both', [good, bad], {'k': 4})
        assert not report.passed and report.residual == 1e-3
        assert [row['check'] for row in report.rows] == ['a', 'b']

    def test_plain(self):
        assert plain({'z': 1 + 2j, 'q': F(1, 3), 'v': (1, 2.5)}) == \
            {'z': {'re': 1.0, 'im': 2.0}, 'q': '1/3', 'v': [1, 2.5]}
        assert plain(float('inf')) == 'inf'

    def test_renderings_are_deterministic(self):
        report = VerificationReport.compare('law', 1 + 1j, 1 + 1j, 1e-10, {'tau': 1j})
        config = {'tolerance': 1e-10, 'seed': 0}
        for render in (render_json, render_csv, render_text):
            assert render(report, config) == render(report, config)
        payload = json.loads(render_json(report, config))
        assert payload['report']['passed'] is True
        assert payload['config'] == config
        assert render_csv(report, config).splitlines()[0] == 'check,lhs.im,lhs.re,passed,residual,rhs.im,rhs.re'
        assert render_text(report, config).splitlines()[1] == 'check: law'


class TestExitCodes:
    """Exit codes of the theta management command"""

    def test_exception_codes(self):
        assert SpecError('x').exit_code == 2
        assert PoleError('x').exit_code == 2
        assert EnumerationBoundError('x').exit_code == 3
        assert ConvergenceNotAchieved('x', 1e-3).estimate == 1e-3
        assert VerificationFailed('x').exit_code == 1

    def test_modularity_passes(self, spec_file):
        code, out, _ = run('verify', 'modularity', '--spec', spec_file, '--move', 'T', '--tau', 'i',
                           '--tol', '1e-9')
        assert code == 0
        assert json.loads(out)['report']['passed'] is True

    def test_usage_errors(self, spec_file, tmp_path):
        broken = tmp_path / 'broken.json'
        broken.write_text('{')
        assert run('verify', 'modularity', '--spec', str(broken))[0] == 2
        assert run('verify', 'modularity', '--spec', str(tmp_path / 'missing.json'))[0] == 2
        assert run('verify', 'modularity')[0] == 2
        assert run()[0] == 2
        assert run('verify', 'modularity', '--spec', spec_file, '--tol', '0.5')[0] == 2
        assert run('verify', 'modularity', '--spec', spec_file, '--move', 'R')[0] == 2

    def test_malformed_spec(self, tmp_path):
        path = tmp_path / 'spec.json'
        path.write_text(json.dumps({'matrix': [[1]]}))
        code, _, err = run('eval', '--spec', str(path))
        assert code == 2
        assert 'invalid spec file' in err

    def test_failed_verification(self, spec_file, monkeypatch):
        monkeypatch.setattr(cli, 'run_verify',
                            lambda config, options: VerificationReport('fake', 1.0, 2.0, 1.0, False))
        code, out, _ = run('verify', 'modularity', '--spec', spec_file)
        assert code == 1
        assert json.loads(out)['report']['passed'] is False

    def test_convergence_failure(self, spec_file, monkeypatch):
        def give_up(config, options):
            raise ConvergenceNotAchieved("budget exhausted", 1e-4)

        monkeypatch.setattr(cli, 'run_eval', give_up)
        assert run('eval', '--spec', spec_file)[0] == 3

    @pytest.mark.slow
    def test_hurwitz_example(self):
        code, out, _ = run('example', 'hurwitz', '--order', '40', '--format', 'csv')
        assert code == 0
        assert 'H(8n+7)' in out.splitlines()[0]


class TestExpand:
    """expand writes a series file"""

    def test_series_file(self, spec_file, tmp_path):
        target = tmp_path / 'series.json'
        assert run('expand', '--spec', spec_file, '--order', '6', '--out', str(target))[0] == 0
        data = json.loads(target.read_text())
        assert data['config']['order'] == '6'
        assert load_series(data) == holomorphic_expansion(eisenstein_spec(), 6)

    def test_identical_runs(self, spec_file):
        first = run('expand', '--spec', spec_file, '--order', '5', '--format', 'text')
        second = run('expand', '--spec', spec_file, '--order', '5', '--format', 'text')
        assert first[0] == 0 and first[1] == second[1]
