"""
Theta Tests
Support enumeration, exact expansions, kernels, completed evaluation,
transformation laws and the limit probe
"""

import cmath
import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from apps.core.exceptions import (
    BoundaryOverrideViolation,
    EnumerationBoundError,
    InadmissibleCharacteristicError,
    SpecError,
)
from apps.lattice.tools.cone import Characteristics, require_cone_vector
from apps.lattice.tools.polynomials import HomPoly, hat
from apps.lattice.tools.quadratic_form import QuadraticForm
from apps.series.tools.cyclotomic import CycNum
from apps.series.tools.qseries import EvalPoint, QSeries
from apps.special.tools.error_functions import err_E
from apps.theta.serializers import dump_spec, load_spec
from apps.theta.services.modularity_verifier import ModularityVerifier, verify_modularity
from apps.theta.tools.evaluation import almost_holo_eval, nonholo_eval
from apps.theta.tools.expansion import exponent_denominator, holomorphic_expansion
from apps.theta.tools.kernel import KernelPlan, p_c_eval
from apps.theta.tools.limit_probe import limit_probe
from apps.theta.tools.spec import build_spec
from apps.theta.tools.support import theta_support
from apps.theta.tools.transformation import Move, MoveKind, transform

HYPERBOLIC = ((0, 1), (1, 0))
HURWITZ = ((1, 1), (1, 0))
ZAGIER = ((0, 0, -4), (0, 2, 0), (-4, 0, 0))
HYP_ANCHOR = (-1, 1)
ZAG_ANCHOR = (-1, 0, -1)

F = Fraction


def monomial(n, exps, coeff=1):
    return HomPoly.from_dict(n, {tuple(exps): coeff})


def eisenstein_spec(k=4, a=(F(1, 5), F(1, 5)), b=(F(1, 5), F(1, 5))):
    return build_spec(HYPERBOLIC, monomial(2, (k - 1, 0)), HYP_ANCHOR, (0, 1), (-1, 0), a, b)


def zagier_spec():
    return build_spec(ZAGIER, HomPoly.variable(3, 1), ZAG_ANCHOR, (-1, 0, -1), (0, 0, -1),
                      (F(1, 3), F(1, 4), F(1, 5)), (F(1, 3), F(1, 3), F(1, 4)))


def hurwitz_like_spec():
    return build_spec(HURWITZ, monomial(2, (2, 0)), (-1, 1), (0, 1), (-1, 1),
                      (0, F(1, 2)), (F(1, 2), 0), boundary_override=True)


def _sign(x):
    return int(x > 0) - int(x < 0)


def box_oracle(spec, N, box):
    """Brute-force expansion over a + [-box, box]^n."""
    Qf = spec.Qf
    D = exponent_denominator(spec)
    terms = {}
    for z in itertools.product(range(-box, box + 1), repeat=spec.n):
        ell = tuple(x + k for x, k in zip(spec.a, z))
        w = _sign(Qf.B(spec.c1.c, ell)) - _sign(Qf.B(spec.c2.c, ell))
        q = Qf.Q(ell)
        if w == 0 or q >= N:
            continue
        value = CycNum.exp2pi(Qf.B(ell, spec.b)) * (w * spec.f.evaluate(ell))
        e = int(q * D)
        terms[e] = terms[e] + value if e in terms else value
    return QSeries.from_dict(D, terms, N)


def series_value(series, pt):
    return sum(c.to_complex() * pt.qpow(e) for e, c in series.items())


class TestSupport:
    """Finite support enumeration"""

    def test_matches_box_oracle(self):
        spec = eisenstein_spec()
        points = theta_support(spec, 3)
        assert max(abs(x - a) for p in points for x, a in zip(p.ell, spec.a)) < 60
        assert holomorphic_expansion(spec, 3) == box_oracle(spec, 3, 60)

    def test_double_interior_matches_box_oracle(self):
        spec = build_spec(HYPERBOLIC, monomial(2, (1, 1)), HYP_ANCHOR, (-1, 3), (-2, 1),
                          (F(1, 3), F(1, 7)), (F(1, 2), 0))
        assert holomorphic_expansion(spec, 6) == box_oracle(spec, 6, 25)

    def test_support_is_sorted(self):
        points = theta_support(eisenstein_spec(), 4)
        keys = [(p.exponent, p.ell) for p in points]
        assert keys == sorted(keys)
        assert all(p.weight in (-2, -1, 1, 2) for p in points)

    def test_weights_between_cusps(self):
        spec = eisenstein_spec()
        for p in theta_support(spec, 5):
            assert p.weight == _sign(p.ell[0]) + _sign(p.ell[1])

    def test_point_cap(self, settings):
        settings.INDEFTHETA = dict(settings.INDEFTHETA, MAX_POINTS=20)
        with pytest.raises(EnumerationBoundError):
            holomorphic_expansion(eisenstein_spec(), 40)


class TestHolomorphicExpansion:
    """Exact identities of the holomorphic series"""

    HYP_CONES = [(0, 1), (-1, 0), (-1, 1), (-1, 2), (-2, 1), (-1, 3)]
    ZAG_CONES = [(-1, 0, 0), (0, 0, -1), (-1, -2, -1), (-1, 2, -1), (-1, 0, -1), (-2, 1, -1), (-1, 1, -2)]

    def _random_triple(self, rng, A, anchor, cones, f):
        Qf = QuadraticForm(A)
        triple = [require_cone_vector(Qf, anchor, c) for c in rng.sample(cones, 3)]
        while True:
            a = tuple(F(rng.randint(1, 6), rng.choice([5, 6, 7])) for _ in range(Qf.n))
            if all(c.is_interior or Qf.B(c.c, a).denominator != 1 for c in triple):
                break
        b = tuple(F(rng.randint(0, 3), 4) for _ in range(Qf.n))
        specs = []
        for c1, c2 in ((0, 1), (1, 2), (2, 0)):
            specs.append(build_spec(A, f, anchor, triple[c1].c, triple[c2].c, a, b))
        return specs

    def _check_cocycle(self, count, seed):
        rng = random.Random(seed)
        for _ in range(count):
            for A, anchor, cones, f in (
                (HYPERBOLIC, HYP_ANCHOR, self.HYP_CONES, monomial(2, (2, 1))),
                (ZAGIER, ZAG_ANCHOR, self.ZAG_CONES, HomPoly.linear((1, 0, 2))),
            ):
                specs = self._random_triple(rng, A, anchor, cones, f)
                total = QSeries.zero(10)
                for spec in specs:
                    total = total + holomorphic_expansion(spec, 10)
                assert total.is_zero

    def test_cocycle(self):
        self._check_cocycle(3, seed=2)

    @pytest.mark.slow
    def test_cocycle_suite(self):
        self._check_cocycle(20, seed=20)

    def test_same_ray_is_zero(self):
        spec = build_spec(HYPERBOLIC, monomial(2, (1, 0)), HYP_ANCHOR, (-1, 2), (-2, 4),
                          (F(1, 3), F(1, 3)), (0, 0))
        assert spec.is_trivial
        assert holomorphic_expansion(spec, 8).is_zero

    def test_scaling_invariance(self):
        a, b = (F(1, 3), F(2, 5)), (F(1, 4), 0)
        f = monomial(2, (1, 2))
        one = build_spec(HYPERBOLIC, f, HYP_ANCHOR, (0, 1), (-1, 2), a, b)
        three = build_spec(HYPERBOLIC, f, HYP_ANCHOR, (0, 1), (-3, 6), a, b)
        assert holomorphic_expansion(one, 8) == holomorphic_expansion(three, 8)

    def test_complex_polynomial(self):
        spec = eisenstein_spec()
        f_i = HomPoly.from_dict(2, {}, {(3, 0): 1}, d=3)
        twisted = build_spec(HYPERBOLIC, f_i, HYP_ANCHOR, (0, 1), (-1, 0), spec.a, spec.b)
        assert holomorphic_expansion(twisted, 4) == holomorphic_expansion(spec, 4).scale(CycNum.gaussian(0, 1))

    def test_rejects_bad_order(self):
        with pytest.raises(SpecError):
            holomorphic_expansion(eisenstein_spec(), 0)

    def test_inadmissible(self):
        with pytest.raises(InadmissibleCharacteristicError):
            build_spec(HYPERBOLIC, monomial(2, (1, 0)), HYP_ANCHOR, (0, 1), (-1, 0), (0, F(1, 3)), (0, 0))

    def test_boundary_override(self):
        a, b = (0, F(1, 3)), (F(1, 5), 0)
        vanishing = build_spec(HYPERBOLIC, monomial(2, (1, 0)), HYP_ANCHOR, (0, 1), (-1, 1), a, b,
                               boundary_override=True)
        assert not holomorphic_expansion(vanishing, 6).is_zero
        constant = build_spec(HYPERBOLIC, HomPoly.constant(2), HYP_ANCHOR, (0, 1), (-1, 1), a, b,
                              boundary_override=True)
        with pytest.raises(BoundaryOverrideViolation):
            holomorphic_expansion(constant, 6)


class TestKernel:
    """p^c kernels"""

    def test_constant_interior(self):
        Qf = QuadraticForm(HYPERBOLIC)
        c = require_cone_vector(Qf, HYP_ANCHOR, (-1, 2))
        fhat = hat(Qf, HomPoly.constant(2))
        for v in ((0.3, -1.2), (2.0, 0.5), (-0.7, -0.1)):
            z = float(Qf.B(c.real, v)) / math.sqrt(-float(c.qc))
            assert p_c_eval(Qf, c, fhat, v) == pytest.approx(err_E(z), abs=1e-15)

    def test_parity(self):
        rng = np.random.default_rng(4)
        Qf = QuadraticForm(ZAGIER)
        f = HomPoly.from_dict(3, {(2, 1, 0): 1, (0, 1, 2): -3, (1, 1, 1): F(1, 2)})
        fhat = hat(Qf, f)
        for c in ((-1, 1, -2), (0, 0, -1)):
            cv = require_cone_vector(Qf, ZAG_ANCHOR, c)
            for _ in range(10):
                v = rng.normal(size=3)
                assert p_c_eval(Qf, cv, fhat, -v) == pytest.approx((-1) ** (f.d + 1) * p_c_eval(Qf, cv, fhat, v),
                                                                    rel=1e-12, abs=1e-12)

    def test_cusp_is_sign_times_hat(self):
        Qf = QuadraticForm(HYPERBOLIC)
        c = require_cone_vector(Qf, HYP_ANCHOR, (0, 1))
        fhat = hat(Qf, monomial(2, (1, 1)))
        v = (0.8, 0.3)
        assert p_c_eval(Qf, c, fhat, v) == pytest.approx(0.24 - 1 / (4 * math.pi))

    def test_ray_invariance(self):
        Qf = QuadraticForm(HYPERBOLIC)
        fhat = hat(Qf, monomial(2, (2, 1)))
        c = require_cone_vector(Qf, HYP_ANCHOR, (-1, 2))
        c3 = require_cone_vector(Qf, HYP_ANCHOR, (-3, 6))
        v = (0.4, -1.1)
        assert p_c_eval(Qf, c, fhat, v) == pytest.approx(p_c_eval(Qf, c3, fhat, v), rel=1e-12)

    def test_damped_correction_matches_pointwise(self):
        Qf = QuadraticForm(HYPERBOLIC)
        f = monomial(2, (2, 1))
        fhat = hat(Qf, f)
        c = require_cone_vector(Qf, HYP_ANCHOR, (-1, 2))
        plan = KernelPlan(Qf, c, fhat)
        ell, y = np.array([0.4, 1.3]), 0.7
        q = 0.5 * ell @ Qf.array @ ell
        v = ell * math.sqrt(y)
        expected = (plan.evaluate(v) - np.sign(ell @ Qf.array @ np.array(c.real)) * fhat.evaluate(v))
        expected *= y ** (-f.d / 2) * math.exp(-2 * math.pi * y * q)
        got = plan.damped_correction(ell.reshape(1, 2), y, np.array([q]))[0]
        assert got == pytest.approx(expected, rel=1e-10, abs=1e-14)


class TestEvaluation:
    """Completed and almost holomorphic evaluation"""

    def test_three_way_agreement(self):
        spec = eisenstein_spec()
        pt = EvalPoint(0, 1)
        series = series_value(holomorphic_expansion(spec, 12), pt)
        full = nonholo_eval(spec, pt, 1e-12)
        almost = almost_holo_eval(spec, pt, 1e-12)
        assert abs(full.value - series) < 1e-10
        assert abs(almost.value - series) < 1e-10

    def test_non_spherical_layer(self):
        a, b = (F(1, 3), F(2, 5)), (F(1, 6), F(1, 2))
        spec = build_spec(HYPERBOLIC, monomial(2, (1, 1)), HYP_ANCHOR, (0, 1), (-1, 0), a, b)
        flat = build_spec(HYPERBOLIC, HomPoly.constant(2), HYP_ANCHOR, (0, 1), (-1, 0), a, b)
        pt = EvalPoint(0, 1)
        almost = almost_holo_eval(spec, pt, 1e-12).value
        holo = series_value(holomorphic_expansion(spec, 12), pt)
        layer = series_value(holomorphic_expansion(flat, 12), pt)
        assert abs(almost - holo + layer / (4 * math.pi)) < 1e-10

    def test_negation_symmetry(self):
        spec = build_spec(HYPERBOLIC, monomial(2, (2, 1)), HYP_ANCHOR, (-1, 2), (0, 1),
                          (F(1, 3), F(1, 4)), (F(1, 5), F(2, 3)))
        flipped = spec.with_chars(tuple(-x for x in spec.a), tuple(-x for x in spec.b))
        pt = EvalPoint(0.1, 0.8)
        assert abs(nonholo_eval(flipped, pt).value - nonholo_eval(spec, pt).value) < 1e-9

    @pytest.mark.parametrize('tau', [1j, 0.1 + 0.3j])
    def test_shell_doubling_is_sound(self, tau):
        spec = build_spec(HYPERBOLIC, monomial(2, (1, 0)), HYP_ANCHOR, (-1, 2), (0, 1),
                          (F(1, 3), F(1, 4)), (F(1, 2), 0))
        pt = EvalPoint.from_tau(tau)
        coarse = nonholo_eval(spec, pt, 1e-6)
        fine = nonholo_eval(spec, pt, 1e-12)
        assert coarse.estimate <= 1e-6
        assert abs(coarse.value - fine.value) <= 1e-6

    def test_cusps_constant_polynomial(self):
        spec = build_spec(HYPERBOLIC, HomPoly.constant(2), HYP_ANCHOR, (0, 1), (-1, 0),
                          (F(1, 2), F(1, 3)), (0, F(1, 4)))
        pt = EvalPoint(0.2, 0.9)
        assert abs(nonholo_eval(spec, pt).value - almost_holo_eval(spec, pt).value) < 1e-9


class TestTransformation:
    """Exact and numeric transformation laws"""

    def test_even_translation_law(self):
        spec = eisenstein_spec()
        result = transform(spec, Move(MoveKind.T))
        (weight, moved), = result.specs
        assert weight == CycNum.exp2pi(-spec.Qf.Q(spec.a))
        assert moved.b == tuple(x + y for x, y in zip(spec.a, spec.b))

    def test_inversion_cosets(self):
        spec = hurwitz_like_spec()
        result = transform(spec, Move(MoveKind.S))
        assert len(result.specs) == 1
        assert result.specs[0][1].a == (F(1, 2), 0)
        assert result.specs[0][1].b == (0, F(-1, 2))
        assert result.prefactor.evaluate(1j) == pytest.approx(1)
        assert result.prefactor.evaluate(2j) == pytest.approx(8)

    def test_zagier_cosets(self):
        spec = zagier_spec()
        result = transform(spec, Move(MoveKind.S))
        assert len(result.specs) == 32
        assert abs(result.prefactor.evaluate(1j)) == pytest.approx(1 / (4 * math.sqrt(2)))

    def test_parse(self):
        assert Move.parse('T').kind is MoveKind.T
        assert Move.parse('shift_b:1/2,0').vector == (F(1, 2), 0)
        with pytest.raises(SpecError):
            Move.parse('R')
        with pytest.raises(SpecError):
            Move.parse('shift_a')

    def test_invalid_shifts(self):
        with pytest.raises(SpecError):
            transform(eisenstein_spec(), Move.shift_a((F(1, 2), 0)))
        with pytest.raises(SpecError):
            transform(zagier_spec(), Move.shift_b((F(1, 8), 0, 0)))

    @pytest.mark.parametrize('build, moves', [
        (eisenstein_spec, [Move.shift_a((1, -2)), Move.shift_b((1, 0)), Move(MoveKind.NEGATE), Move(MoveKind.T)]),
        (zagier_spec, [Move.shift_a((0, 1, 1)), Move.shift_b((F(1, 4), F(1, 2), 0)),
                       Move(MoveKind.NEGATE), Move(MoveKind.T)]),
        (hurwitz_like_spec, [Move.shift_a((1, 0)), Move.shift_b((0, 1)), Move(MoveKind.NEGATE),
                             Move(MoveKind.T)]),
    ])
    def test_exact_laws(self, build, moves):
        spec = build()
        for move in moves:
            report = ModularityVerifier.verify_exact(spec, move, 10)
            assert report.passed, move.label()

    def test_exact_rejects_inversion(self):
        with pytest.raises(SpecError):
            ModularityVerifier.verify_exact(eisenstein_spec(), Move(MoveKind.S))

    def test_numeric_translation(self):
        report = verify_modularity(eisenstein_spec(), Move(MoveKind.T), EvalPoint(0, 1), 1e-9)
        assert report.passed

    def test_numeric_inversion(self):
        report = verify_modularity(eisenstein_spec(), Move(MoveKind.S), EvalPoint(0, 1), 1e-8)
        assert report.passed

    def test_numeric_inversion_with_interior_vector(self):
        spec = build_spec(HYPERBOLIC, monomial(2, (1, 0)), HYP_ANCHOR, (-1, 2), (0, 1),
                          (F(1, 3), F(1, 4)), (F(1, 2), F(1, 5)))
        report = verify_modularity(spec, Move(MoveKind.S), EvalPoint(0.1, 1.1), 1e-8)
        assert report.passed


class TestLimitProbe:
    """Interior vectors tending to a cusp"""

    def _cones(self):
        Qf = QuadraticForm(HYPERBOLIC)
        cone = lambda v: require_cone_vector(Qf, HYP_ANCHOR, v)
        return Qf, cone((-1, 0)), cone((0, 1)), cone((-1, 1))

    def test_errors_decrease(self):
        Qf, c1, c2, c3 = self._cones()
        chars = Characteristics.of((F(1, 2), F(1, 3)), (F(1, 7), 0))
        report = limit_probe(Qf, HomPoly.constant(2), c1, c2, c3, chars, EvalPoint(0, 1),
                             [0.4, 0.2, 0.1, 0.05], tol=1e-3)
        assert report.passed
        assert report.ts[-1] == F(1, 20)

    def test_degenerate_pair(self):
        Qf, _, c2, c3 = self._cones()
        chars = Characteristics.of((F(1, 2), F(1, 3)), (0, 0))
        report = limit_probe(Qf, HomPoly.constant(2), c2, c2, c3, chars, EvalPoint(0, 1),
                             [0.4, 0.2, 0.1], tol=1e-2)
        assert report.limit_value == 0
        assert report.diagnostics['decreasing']

    def test_rejects_zero_parameter(self):
        Qf, c1, c2, c3 = self._cones()
        chars = Characteristics.of((F(1, 2), F(1, 3)), (0, 0))
        with pytest.raises(SpecError):
            limit_probe(Qf, HomPoly.constant(2), c1, c2, c3, chars, EvalPoint(0, 1), [0.1, 0])

    def test_verifier_report(self):
        Qf, c1, c2, c3 = self._cones()
        spec = build_spec(HYPERBOLIC, HomPoly.constant(2), HYP_ANCHOR, (-1, 0), (0, 1),
                          (F(1, 2), F(1, 3)), (0, 0))
        report = ModularityVerifier.verify_limit(spec, c3, EvalPoint(0, 1), [0.2, 0.1, 0.05])
        assert report.passed
        assert len(report.rows) == 3


class TestSerializers:
    """Spec file schema"""

    def test_round_trip(self):
        for spec in (eisenstein_spec(), zagier_spec(), hurwitz_like_spec()):
            assert load_spec(dump_spec(spec)) == spec

    def test_irrational_interior(self):
        data = dump_spec(hurwitz_like_spec())
        data['c2']['real'] = [-math.sqrt(2), math.sqrt(2)]
        spec = load_spec(data)
        assert spec.c2.c == (-1, 1)
        assert spec.c2.real[0] == pytest.approx(-math.sqrt(2))
        assert load_spec(dump_spec(spec)) == spec

    def test_malformed(self):
        with pytest.raises(SpecError):
            load_spec({'matrix': [[1]]})
        data = dump_spec(eisenstein_spec())
        data['a'] = ['1/2', 'x']
        with pytest.raises(SpecError):
            load_spec(data)
        data = dump_spec(eisenstein_spec())
        data['c1'] = {'vector': ['1', '1']}
        with pytest.raises(SpecError):
            load_spec(data)


def test_prefactor_branch():
    """(-i tau)^{3/2} uses the principal branch"""
    result = transform(build_spec(((1, 0, 0), (0, 1, 0), (0, 0, -1)), HomPoly.constant(3), (0, 0, 1),
                                  (0, 0, 1), (1, 0, 1), (0, 0, F(1, 3)), (0, 0, F(1, 2))), Move(MoveKind.S))
    tau = -0.5 + 0.1j
    assert result.prefactor.power == F(3, 2)
    expected = cmath.exp(1.5 * cmath.log(-1j * tau)) * 1j * cmath.exp(-1j * math.pi / 3)
    assert result.prefactor.evaluate(tau) == pytest.approx(expected)
