"""
Series Tests
Cyclotomic coefficients, q-series arithmetic and the standard expansions
"""

import math
import random
from fractions import Fraction

import pytest

from apps.core.exceptions import ConvergenceNotAchieved, SpecError
from apps.series.tools.cyclotomic import CycNum, cyclotomic_coefficients
from apps.series.tools.qseries import EvalPoint, QSeries, TailBound, evaluate_series, evaluate_to_tolerance
from apps.series.tools.standard_series import (
    TAIL_BOUNDS,
    SeriesKind,
    eta,
    eta_eval,
    euler_prod,
    geometric,
    humbert,
    standard_series,
    theta2,
    theta2_eval,
    theta_eval,
    unary_theta,
    unary_theta_eval,
)


def random_cyc(rng, M):
    return CycNum.from_dict(M, {j: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for j in range(M)})


def random_series(rng, D, order):
    terms = {0: 1}
    for e in range(1, int(order * D)):
        if rng.random() < 0.5:
            terms[e] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return QSeries.from_dict(D, terms, order)


class TestCycNum:
    """Group ring arithmetic and canonical reduction"""

    def test_reduction(self):
        assert (CycNum.one(2) + CycNum.root(1, 2)).is_zero
        for M in (1, 3, 4, 6, 8, 12):
            assert CycNum.root(M, M) == 1
            phi = cyclotomic_coefficients(M)
            assert CycNum.from_dict(M, dict(enumerate(phi))).is_zero

    def test_mixed_orders(self):
        assert CycNum.root(1, 4) * CycNum.root(1, 6) == CycNum.root(5, 12)
        assert CycNum.exp2pi(Fraction(-1, 3)) == CycNum.root(2, 3)
        assert CycNum.gaussian(0, 1) * CycNum.gaussian(0, 1) == -1

    def test_matches_float_evaluation(self):
        rng = random.Random(7)
        for _ in range(20):
            M1, M2 = rng.choice([3, 4, 5, 8, 12]), rng.choice([2, 3, 6, 10])
            a, b = random_cyc(rng, M1), random_cyc(rng, M2)
            assert abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-12
            assert abs((a + b).to_complex() - a.to_complex() - b.to_complex()) < 1e-12
            assert (a * b == b * a)

    def test_inverse_unit(self):
        u = CycNum.root(2, 5) * 3
        assert u * u.inv_unit() == 1
        assert (CycNum.rational(-2, 6)).inv_unit() == Fraction(-1, 2)
        with pytest.raises(SpecError):
            (CycNum.rational(2, 3) + CycNum.root(1, 3)).inv_unit()

    def test_json_round_trip(self):
        x = CycNum.from_dict(12, {0: Fraction(1, 3), 5: -2, 7: Fraction(3, 4)})
        assert CycNum.from_json(x.to_json()) == x


class TestQSeries:
    """Exact arithmetic with tracked order"""

    def test_inverse_contract(self):
        one_minus_q = QSeries.from_dict(1, {0: 1, 1: -1}, 12)
        assert one_minus_q * one_minus_q.inv_unit() == QSeries.constant(1, 12)

    def test_inverse_with_fractional_valuation(self):
        s = eta(10)
        product = s * s.inv_unit()
        assert product == QSeries.constant(1, product.order)

    def test_euler_cube(self):
        cube = euler_prod(10) ** 3
        expected = {0: 1, 1: -3, 2: 0, 3: 5, 4: 0, 5: 0, 6: -7}
        for e, c in expected.items():
            assert cube.coefficient(e) == c

    def test_eta_cube_leading_term(self):
        cube = eta(10) ** 3
        assert cube.valuation == Fraction(1, 8)
        assert cube.coefficient(Fraction(1, 8)) == 1
        assert cube.coefficient(Fraction(9, 8)) == -3

    def test_denominator_merge(self):
        assert (theta2(5) * eta(5)).exp_den == 24

    def test_ring_axioms(self):
        rng = random.Random(11)
        for _ in range(5):
            a = random_series(rng, 2, Fraction(6))
            b = random_series(rng, 3, Fraction(5))
            c = random_series(rng, 1, Fraction(7))
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + b == b + a

    def test_q_derivative(self):
        d = unary_theta(10).q_derivative()
        assert d == QSeries.from_dict(1, {1: 2, 4: 8, 9: 18}, 10)
        assert QSeries.constant(5, 4).q_derivative().is_zero
        assert theta2(2).q_derivative().coefficient(Fraction(1, 8)) == Fraction(1, 4)

    def test_shift_tau_laws(self):
        assert theta2(6).shift_tau(1) == theta2(6).scale(CycNum.root(1, 8))
        assert eta(6).shift_tau(1) == eta(6).scale(CycNum.root(1, 24))
        assert unary_theta(9).shift_tau(1) == unary_theta(9)

    def test_json_round_trip(self):
        s = theta2(4).scale(CycNum.gaussian(Fraction(1, 2), -3)) + eta(4)
        assert QSeries.from_json(s.to_json()) == s

    def test_coefficient_beyond_order(self):
        with pytest.raises(SpecError):
            unary_theta(5).coefficient(5)


class TestStandardSeries:
    """Closed expansions"""

    def test_theta(self):
        assert unary_theta(10) == QSeries.from_dict(1, {0: 1, 1: 2, 4: 2, 9: 2}, 10)

    def test_theta2_leading(self):
        s = theta2(3)
        assert s.exp_den == 8
        assert s.valuation == Fraction(1, 8)
        assert s.coefficient(Fraction(1, 8)) == 2
        assert s.coefficient(Fraction(9, 8)) == 2

    def test_humbert(self):
        assert humbert(4) == QSeries.from_dict(1, {1: 1, 2: -1, 3: -3}, 4)

    def test_euler_pentagonal(self):
        s = euler_prod(16)
        signs = {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1, 15: -1}
        for e in range(16):
            assert s.coefficient(e) == signs.get(e, 0)

    def test_dispatch(self):
        assert standard_series('theta2', 3) == theta2(3)
        assert standard_series(SeriesKind.HUMBERT, 4) == humbert(4)
        with pytest.raises(SpecError):
            standard_series('eta', 0)


class TestEvaluation:
    """Floating evaluation with tail estimates"""

    def test_theta_at_i(self):
        pt = EvalPoint(0, 1)
        value = evaluate_series(unary_theta(40), pt, TAIL_BOUNDS[SeriesKind.UNARY_THETA], tol=1e-12)
        oracle = 1 + 2 * sum(math.exp(-2 * math.pi * n * n) for n in range(1, 10))
        assert value.value == pytest.approx(oracle, abs=1e-12)
        assert theta_eval(pt) == pytest.approx(oracle, abs=1e-14)

    def test_geometric_closed_form(self):
        pt = EvalPoint(0, 1)
        value = evaluate_series(geometric(30), pt, TAIL_BOUNDS[SeriesKind.GEOMETRIC], tol=1e-12)
        assert value.value == pytest.approx(1 / (1 - math.exp(-2 * math.pi)), abs=1e-12)

    def test_low_point_fails(self):
        with pytest.raises(ConvergenceNotAchieved) as exc:
            evaluate_series(geometric(20), EvalPoint(0, 0.05), TailBound(0, 1))
        assert exc.value.estimate > 1e-10
        assert exc.value.exit_code == 3

    @pytest.mark.parametrize('tau', [1j, 0.3 + 0.8j, -0.2 + 0.5j])
    @pytest.mark.parametrize('kind', [SeriesKind.UNARY_THETA, SeriesKind.ETA])
    def test_estimates_are_sound(self, tau, kind):
        pt = EvalPoint.from_tau(tau)
        build = lambda N: standard_series(kind, N)
        coarse = evaluate_to_tolerance(build, pt, TAIL_BOUNDS[kind], tol=1e-6)
        fine = evaluate_to_tolerance(build, pt, TAIL_BOUNDS[kind], tol=1e-12)
        assert abs(coarse.value - fine.value) <= coarse.estimate + 1e-15

    @pytest.mark.parametrize('tau', [1j, 1 / 3 + 0.5j, -0.5 + 0.5j])
    def test_direct_evaluators(self, tau):
        pt = EvalPoint.from_tau(tau)
        for kind, direct in ((SeriesKind.ETA, eta_eval), (SeriesKind.THETA2, theta2_eval)):
            series = evaluate_to_tolerance(lambda N: standard_series(kind, N), pt, TAIL_BOUNDS[kind], tol=1e-13)
            assert abs(series.value - direct(pt)) < 1e-12

    def test_unary_theta_characteristics(self):
        pt = EvalPoint(0.1, 0.7)
        a, b = Fraction(1, 3), Fraction(1, 5)
        direct = sum(pt.qpow((n + a) ** 2) * complex(math.cos(4 * math.pi * float(b * (n + a))),
                                                      math.sin(4 * math.pi * float(b * (n + a))))
                     for n in range(-30, 30))
        assert abs(unary_theta_eval(pt, a, b) - direct) < 1e-13

    def test_eval_point(self):
        with pytest.raises(SpecError):
            EvalPoint(0, 0)
        pt = EvalPoint(0, 1).act(((0, -1), (1, 0)))
        assert pt.tau == pytest.approx(1j)
