"""
Family Tests
Modular substitutions, the Eisenstein, Zagier and Hurwitz families and the
example orchestrator
"""

import cmath
import math
import random
from fractions import Fraction

import pytest
import sympy

from apps.core.exceptions import PoleError, SpecError
from apps.core.reports import VerificationReport
from apps.families.services.example_orchestrator import ExampleOrchestrator, Family, run_checks, run_example
from apps.families.tools import eisenstein, hurwitz, zagier
from apps.families.tools.modular_group import (
    GAMMA0_2_LOWER,
    GAMMA_PRIME,
    IDENTITY,
    MINUS_I,
    S,
    T,
    CharacteristicMap,
    MapDirection,
    ModularSubstitution,
)
from apps.lattice.tools.cone import classify_real
from apps.series.tools.qseries import EvalPoint

F = Fraction
I_PT = EvalPoint(0.0, 1.0)
ZAGIER_PT = EvalPoint(-0.25, 0.25)
HURWITZ_LOWER_PT = EvalPoint(-0.5, 0.5)
SEVENTH = (F(1, 7), F(1, 7))


def random_vector(rng, n=3):
    return tuple(F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n))


class TestModularGroup:
    """Substitutions, level tags and the action on characteristics"""

    def test_determinant_checked(self):
        with pytest.raises(SpecError):
            ModularSubstitution.of(1, 1, 1, 1)
        with pytest.raises(SpecError):
            ModularSubstitution.parse("1,0;4")

    def test_parse_and_levels(self):
        assert ModularSubstitution.parse("1,0;4,1") == GAMMA_PRIME
        assert GAMMA_PRIME.levels == ("Gamma0(2)", "Gamma0(4)", "Gamma1(4)")
        assert GAMMA0_2_LOWER.in_gamma0(2) and not GAMMA0_2_LOWER.in_gamma0(4)
        assert not S.in_gamma0(2)

    def test_group_law(self):
        for g in (T, S, GAMMA_PRIME, GAMMA0_2_LOWER):
            assert g @ g.inverse() == IDENTITY
        assert S @ S == MINUS_I

    def test_action_on_tau(self):
        moved = GAMMA_PRIME.act(ZAGIER_PT)
        assert moved.x == pytest.approx(0.25) and moved.y == pytest.approx(0.25)
        assert GAMMA_PRIME.cocycle(ZAGIER_PT) == pytest.approx(1j)

    def test_action_on_characteristics(self):
        a, b = (F(1, 3), F(1, 4)), (F(1, 5), F(2, 7))
        assert T.act_chars(a, b) == (a, (F(8, 15), F(15, 28)))
        assert IDENTITY.act_chars(a, b) == (a, b)


class TestCharacteristicMap:
    """tilde and hat maps"""

    def test_maps_preserve_the_form(self):
        rng = random.Random(7)
        for _ in range(20):
            v, x = random_vector(rng), F(rng.randint(-5, 5), rng.randint(1, 5)) or F(1, 2)
            for direction in MapDirection:
                w = CharacteristicMap(x, direction).apply(v)
                assert zagier.ZAGIER_FORM.Q(w) == zagier.ZAGIER_FORM.Q(v)

    def test_commutes_with_substitutions(self):
        rng = random.Random(11)
        for _ in range(20):
            a, b = random_vector(rng), random_vector(rng)
            x = F(rng.randint(1, 7), rng.randint(1, 7))
            tilde = CharacteristicMap(x)
            for gamma in (T, GAMMA_PRIME):
                assert tilde.pair(*gamma.act_chars(a, b)) == gamma.act_chars(*tilde.pair(a, b))
                a_new, b_new = gamma.act_chars(a, b)
                assert zagier.ZAGIER_FORM.B(*tilde.pair(a_new, b_new)) == zagier.ZAGIER_FORM.B(a_new, b_new)

    def test_hat_needs_nonzero_x(self):
        with pytest.raises(SpecError):
            CharacteristicMap(0, MapDirection.HAT)
        assert CharacteristicMap(F(1, 2), "hat").apply((1, 0, 0)) == (0, 0, 1)


class TestEisenstein:
    """G_k, the correction term f^G and the limits a, b -> 0"""

    def test_series_coefficients(self):
        g4 = eisenstein.G_series(4, 3)
        assert g4.coefficient(0).rational_value() == F(1, 240)
        assert g4.coefficient(1).rational_value() == 1
        assert g4.coefficient(2).rational_value() == 9
        assert eisenstein.G_series(2, 2).coefficient(0).rational_value() == F(-1, 24)

    def test_prime_coefficients(self):
        g6 = eisenstein.G_series(6, 12)
        for p in (2, 3, 5, 7, 11):
            assert g6.coefficient(p).rational_value() == 1 + p ** 5

    def test_odd_weight_rejected(self):
        with pytest.raises(SpecError):
            eisenstein.G_series(3, 5)

    def test_eval_matches_direct_sum(self):
        direct = 1 / 240 + sum(int(sympy.divisor_sigma(n, 3)) * math.exp(-2 * math.pi * n) for n in range(1, 40))
        assert abs(eisenstein.G_eval(4, I_PT, 1e-14) - direct) < 1e-12

    @pytest.mark.parametrize('k', [2, 4])
    def test_correction_laws(self, k):
        assert eisenstein.f_G_law_check(SEVENTH, SEVENTH, k, I_PT).passed

    def test_correction_pole(self):
        with pytest.raises(PoleError):
            eisenstein.f_G_eval((F(1, 3), 0), (F(1, 5), 0), 4, I_PT)
        assert cmath.isfinite(eisenstein.f_G_eval((F(1, 3), 0), (F(1, 5), F(1, 3)), 2, I_PT))

    @pytest.mark.parametrize('k', [2, 4])
    @pytest.mark.parametrize('pt', [I_PT, EvalPoint(0.1, 0.8)])
    def test_lattice_partition(self, k, pt):
        report = eisenstein.partition_check(k, (F(1, 3), F(1, 5)), (F(1, 7), F(2, 7)), pt)
        assert report.passed
        assert [row['part'] for row in report.rows] == ['bulk', 'row', 'column']

    def test_g2_anomaly(self):
        assert eisenstein.g2_anomaly_check(EvalPoint(0.1, 1.1)).passed

    def test_limit_parameters_validated(self):
        with pytest.raises(SpecError):
            eisenstein.eisenstein_limit_check(4, I_PT, [F(1, 100), F(1, 50)])

    @pytest.mark.slow
    def test_g4_limit(self):
        report = eisenstein.eisenstein_limit_check(4, I_PT, [F(1, 50), F(1, 100), F(1, 200)])
        assert report.passed
        assert report.residual <= 1e-5

    @pytest.mark.slow
    def test_g2_ordered_limits(self):
        report = eisenstein.eisenstein_limit_check(2, I_PT, [F(1, 50), F(1, 100), F(1, 200)], tol=1e-4)
        assert report.passed
        assert abs(report.lhs - 1 / (4j * math.pi)) <= 1e-4

    def test_coefficient_table(self):
        rows = eisenstein.coefficient_table(4, 3)
        assert rows[0] == {'n': 0, 'coefficient': F(1, 240)}
        assert rows[-1] == {'n': 2, 'coefficient': 9}


class TestZagierPolynomials:
    """Form enumeration, P_{k,D}, F_{k,D} and kappa"""

    def test_first_cone(self):
        assert set(zagier.enumerate_forms(5)) == {(1, 1, -1), (1, -1, -1)}
        assert set(zagier.enumerate_forms(4)) == {(1, 0, -1)}
        assert len(zagier.enumerate_forms(1)) == 0
        with pytest.raises(SpecError):
            zagier.enumerate_forms(0)

    def test_second_cone(self):
        x = F(1, 2)
        forms = zagier.enumerate_forms(5, zagier.FormCone.SECOND, x)
        assert forms.exact and len(forms) > 0
        for a, b, c in forms:
            assert a < 0 < a * x * x + b * x + c
            assert (2 * a * x + b) ** 2 < 5
            assert b * b - 4 * a * c == 5

    def test_second_cone_real_needs_depth(self):
        with pytest.raises(SpecError):
            zagier.enumerate_forms(5, zagier.FormCone.SECOND, 0.5)
        assert not zagier.enumerate_forms(5, zagier.FormCone.SECOND, 0.5, a_min=-10).exact

    def test_P_examples(self):
        assert zagier.P_kD(2, 5) == (-2, 0, 2)
        assert zagier.P_kD(2, 1) == (F(-5, 12), 0, F(5, 12))
        assert zagier.P_kD(4, 0) == (F(-1, 240), 0, 0, 0, 0, 0, F(1, 240))

    @pytest.mark.parametrize('D', [5, 8, 12, 13])
    def test_P_even(self, D):
        assert all(c == 0 for c in zagier.P_kD(4, D)[1::2])

    def test_kappa(self):
        assert zagier.kappa(F(3, 4)) == F(1, 16)
        assert zagier.kappa(2) == 1

    def test_F_examples(self):
        assert zagier.F_kD(4, 0, F(1, 2)) == F(1, 240)
        with pytest.raises(SpecError):
            zagier.F_kD(2, 5, 0.5)

    def test_F_real_matches_exact(self):
        exact = zagier.F_kD(4, 5, F(1, 2))
        assert zagier.F_kD(4, 5, 0.5, tol=1e-8) == pytest.approx(float(exact), abs=1e-7)


class TestZagierSeries:
    """S_x, T_x and their Gamma0(4) covariance"""

    def test_coefficients(self):
        x = F(1, 2)
        series = zagier.S_series(4, x, 6)
        assert series.coefficient(5).rational_value() == zagier.poly_eval(zagier.P_kD(4, 5), x)
        assert series.coefficient(0).rational_value() == zagier.poly_eval(zagier.P_kD(4, 0), x)
        assert series.shift_tau(1) == series

    def test_j_factor(self):
        assert zagier.j_factor(GAMMA_PRIME, I_PT) ** 2 == pytest.approx(4j + 1, abs=1e-10)
        assert zagier.j_factor(T, ZAGIER_PT) == pytest.approx(1, abs=1e-12)
        assert zagier.j_factor(MINUS_I, ZAGIER_PT) == pytest.approx(1, abs=1e-12)
        with pytest.raises(SpecError):
            zagier.j_factor(S, I_PT)

    @pytest.mark.parametrize('gamma', [T, GAMMA_PRIME])
    def test_correction_covariance(self, gamma):
        a, b = (F(1, 5), F(1, 7), F(1, 3)), (F(2, 9), F(1, 4), F(1, 3))
        assert zagier.f_ab_covariance(a, b, 4, gamma, I_PT).passed

    def test_correction_even(self):
        a, b = (F(1, 5), F(1, 7), F(1, 3)), (F(2, 9), F(1, 4), F(1, 3))
        minus = tuple(-v for v in a), tuple(-v for v in b)
        assert abs(zagier.f_ab_eval(*minus, 4, I_PT) - zagier.f_ab_eval(a, b, 4, I_PT)) < 1e-14
        with pytest.raises(PoleError):
            zagier.f_ab_eval((0, F(1, 3), 0), (0, 0, 0), 2, I_PT)

    def test_S_covariance(self):
        assert zagier.verify_SxTx('S', 4, F(1, 2), GAMMA_PRIME, ZAGIER_PT, 1e-5).passed

    def test_T_covariance_weight_two(self):
        assert zagier.verify_SxTx('T', 2, F(1, 3), GAMMA_PRIME, ZAGIER_PT, 1e-4).passed

    def test_generators(self):
        assert zagier.verify_gamma04('S', 4, F(1, 2), ZAGIER_PT).passed

    def test_rejects_level_two(self):
        with pytest.raises(SpecError):
            zagier.verify_SxTx('S', 4, F(1, 2), GAMMA0_2_LOWER, ZAGIER_PT)

    def test_real_x(self):
        exact = zagier.series_eval('S', 4, F(1, 2), I_PT, 1e-12)
        assert abs(zagier.series_eval('S', 4, 0.5, I_PT, 1e-12) - exact) < 1e-10
        with pytest.raises(SpecError):
            zagier.series_eval('T', 4, 0.5, I_PT)

    def test_bounded_at_infinity(self):
        report = zagier.cusp_growth_check('S', 4, F(1, 2), IDENTITY)
        assert report.passed
        assert [row['y'] for row in report.rows] == [1.0, 2.0, 3.0, 4.0]
        with pytest.raises(SpecError):
            zagier.cusp_growth_check('S', 4, F(1, 2), IDENTITY, ys=(1.0, 2.0))

    @pytest.mark.slow
    def test_bounded_at_zero(self):
        assert zagier.cusp_growth_check('S', 4, F(1, 2), S).passed

    @pytest.mark.slow
    def test_S_theta_route(self):
        assert zagier.theta_route_check('S', 4, F(1, 2), I_PT).passed

    @pytest.mark.slow
    def test_T_theta_route_weight_two(self):
        assert zagier.theta_route_check('T', 2, F(1, 3), I_PT).passed


class TestHurwitz:
    """Class numbers, the Humbert identity and the completion F"""

    def test_class_numbers(self):
        expected = {0: F(-1, 12), 1: 0, 2: 0, 3: F(1, 3), 4: F(1, 2), 7: 1, 8: 1,
                    11: 1, 12: F(4, 3), 15: 2, 23: 3, 39: 4}
        for n, value in expected.items():
            assert hurwitz.hurwitz_H(n) == value

    def test_humbert_identity(self):
        report = hurwitz.humbert_check(100)
        assert report.passed
        assert [row['coefficient'] for row in report.rows[:3]] == [1, 2, 3]

    def test_theta_bridge(self):
        assert hurwitz.theta_bridge_check(20).passed

    def test_spec(self):
        spec = hurwitz.hurwitz_theta_spec()
        assert spec.weight == 3
        assert spec.boundary_override

    def test_height_checked(self):
        with pytest.raises(SpecError):
            hurwitz.F_maass_eval(EvalPoint(0.0, 0.1))
        with pytest.raises(ValueError):
            hurwitz.F_maass_eval(I_PT, route='quadrature')

    @pytest.mark.slow
    @pytest.mark.parametrize('pt', [I_PT, EvalPoint(1 / 3, 0.5)])
    def test_routes_agree(self, pt):
        assert hurwitz.maass_routes_check(pt, 1e-8).passed

    def test_eichler_integral(self):
        assert hurwitz.eichler_check(I_PT).passed

    def test_shadow(self):
        assert hurwitz.xi_check(I_PT, 1e-4).passed

    def test_xi_annihilates_holomorphic_part(self):
        xi = hurwitz.xi_operator(lambda p: hurwitz.holomorphic_part(p, 1e-14), I_PT, 1e-4)
        assert abs(xi) < 1e-6
        with pytest.raises(SpecError):
            hurwitz.xi_operator(hurwitz.holomorphic_part, I_PT, 1e-2)

    def test_eta_theta2_laws(self):
        assert hurwitz.eta_theta2_laws(EvalPoint(0.1, 0.9)).passed

    def test_weight_two(self):
        assert GAMMA0_2_LOWER.cocycle(HURWITZ_LOWER_PT) == pytest.approx(1j)
        assert hurwitz.weight2_check(HURWITZ_LOWER_PT, tol=1e-6).passed
        assert hurwitz.verify_gamma02(HURWITZ_LOWER_PT).passed

    @pytest.mark.slow
    def test_theta_hat_gamma02(self):
        assert hurwitz.theta_hat_gamma02_law(HURWITZ_LOWER_PT).passed


def family_specs():
    a = (F(1, 5), F(1, 7), F(1, 3))
    b = (F(2, 9), F(1, 4), F(1, 3))
    return {
        'eisenstein': eisenstein.eisenstein_spec(4, SEVENTH, SEVENTH),
        'zagier-S': zagier.zagier_spec(zagier.SeriesKind.S, 4, F(1, 2), a, b),
        'zagier-T': zagier.zagier_spec(zagier.SeriesKind.T, 4, F(1, 2), a, b),
        'hurwitz': hurwitz.hurwitz_theta_spec(),
    }


class TestFamilySpecs:
    """Every family spec sits on the closure of its cone"""

    @pytest.mark.parametrize('name', ['eisenstein', 'zagier-S', 'zagier-T', 'hurwitz'])
    def test_cone_vectors(self, name):
        spec = family_specs()[name]
        for cv in (spec.c1, spec.c2):
            if cv.is_interior:
                assert classify_real(spec.Qf, cv.anchor, cv.real) is not None
                assert spec.Qf.Q(cv.c) < 0
            else:
                assert spec.Qf.Q(cv.c) == 0
                assert spec.Qf.B(cv.c, cv.anchor) < 0

    def test_hurwitz_real_interior(self):
        c2 = hurwitz.hurwitz_theta_spec().c2
        assert c2.real == pytest.approx((-math.sqrt(2), math.sqrt(2)))
        assert c2.c == (-1, 1)


class TestExampleOrchestrator:
    """Family suites"""

    def test_eisenstein(self):
        result = ExampleOrchestrator.run('eisenstein', order=5)
        assert result.family is Family.EISENSTEIN
        assert result.report.passed
        assert result.table[0]['coefficient'] == F(1, 240)

    def test_zagier(self):
        result = ExampleOrchestrator.run('zagier', order=6)
        assert result.report.passed
        assert result.table[5]['value'] == zagier.poly_eval(zagier.P_kD(4, 5), F(1, 2))

    @pytest.mark.slow
    def test_hurwitz(self):
        result = run_example('hurwitz', order=40)
        assert result.report.passed
        assert result.table[0] == {'n': 0, 'coefficient': 1, 'H(8n+7)': 1}

    def test_unknown_family(self):
        with pytest.raises(SpecError):
            ExampleOrchestrator.run('ramanujan')

    @pytest.mark.parametrize('threads', [1, 3])
    def test_checks_keep_their_order(self, settings, threads):
        settings.INDEFTHETA = dict(settings.INDEFTHETA, THREADS=threads)
        checks = [lambda i=i: VerificationReport(f"check{i}", residual=float(i)) for i in range(5)]
        assert [r.check for r in run_checks(checks)] == [f"check{i}" for i in range(5)]

    def test_eisenstein_with_threads(self, settings):
        settings.INDEFTHETA = dict(settings.INDEFTHETA, THREADS=2)
        assert ExampleOrchestrator.run('eisenstein', order=3).report.passed
