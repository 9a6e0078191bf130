"""
Lattice Tests
Quadratic forms, cone classification, polynomials, combinatorics and enumeration
"""

import cmath
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy

from apps.core.exceptions import (
    ConvergenceNotAchieved,
    EnumerationBoundError,
    NotInConeError,
    SignatureError,
    SpecError,
)
from apps.lattice.tools.combinatorics import (
    bernoulli_number,
    bernoulli_poly,
    bernoulli_poly_eval,
    bernoulli_tail_identity,
    bernoulli_tail_series,
    eulerian,
    periodic_bernoulli,
    power_geometric_closed_form,
)
from apps.lattice.tools.cone import (
    characteristic_admissible,
    classify_real,
    classify_vector,
    interior_between,
    majorant,
    require_cone_vector,
)
from apps.lattice.tools.enumeration import ellipsoid_points, min_ratio_on_sign_region
from apps.lattice.tools.polynomials import HomPoly, directional, hat, is_spherical, laplacian
from apps.lattice.tools.quadratic_form import QuadraticForm, as_fraction, coset_reps, signature

HYPERBOLIC = ((0, 1), (1, 0))
HURWITZ = ((1, 1), (1, 0))
ZAGIER = ((0, 0, -4), (0, 2, 0), (-4, 0, 0))


class TestQuadraticForm:
    """Evaluation, signature and construction checks"""

    def test_signatures(self):
        assert signature(HYPERBOLIC) == (1, 1)
        assert signature(ZAGIER) == (2, 1)
        assert signature(((1, 0, 0), (0, 1, 0), (0, 0, 1))) == (3, 0)

    def test_constructor_rejects_definite(self):
        with pytest.raises(SignatureError):
            QuadraticForm(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def test_constructor_rejects_singular_and_asymmetric(self):
        with pytest.raises(SignatureError):
            QuadraticForm(((1, 1), (1, 1)))
        with pytest.raises(SpecError):
            QuadraticForm(((0, 1), (2, 0)))

    def test_evaluate_examples(self):
        Qf = QuadraticForm(HYPERBOLIC)
        q, b = Qf.evaluate((1, 1), (1, 1))
        assert q == 1 and b == 2

        assert QuadraticForm(HURWITZ).Q((3, 2)) == Fraction(21, 2)
        assert QuadraticForm(ZAGIER).Q((1, 2, 3)) == -8

    def test_polarization(self):
        """B(u, v) = Q(u + v) - Q(u) - Q(v) exactly"""
        Qf = QuadraticForm(ZAGIER)
        u = (Fraction(1, 3), Fraction(-2), Fraction(5, 7))
        v = (Fraction(4), Fraction(1, 2), Fraction(-3, 5))
        s = tuple(x + y for x, y in zip(u, v))
        assert Qf.B(u, v) == Qf.Q(s) - Qf.Q(u) - Qf.Q(v)

    def test_inverse_is_exact(self):
        Qf = QuadraticForm(HURWITZ)
        assert Qf.A_inv == ((0, 1), (1, -1))
        assert Qf.det == -1
        assert not Qf.is_even
        assert QuadraticForm(HYPERBOLIC).is_even

    def test_dimension_mismatch(self):
        with pytest.raises(SpecError):
            QuadraticForm(HYPERBOLIC).Q((1, 2, 3))

    def test_as_fraction_rejects_float(self):
        assert as_fraction("3/4") == Fraction(3, 4)
        assert as_fraction(sympy.Rational(2, 5)) == Fraction(2, 5)
        with pytest.raises(SpecError):
            as_fraction(0.5)


class TestCosetReps:
    """Dual lattice representatives"""

    def test_unimodular(self):
        assert coset_reps(QuadraticForm(HURWITZ)) == [(0, 0)]
        assert coset_reps(QuadraticForm(HYPERBOLIC)) == [(0, 0)]

    def test_diagonal(self):
        reps = coset_reps(QuadraticForm(((2, 0), (0, -2))))
        half = Fraction(1, 2)
        assert sorted(reps) == [(0, 0), (0, half), (half, 0), (half, half)]

    def test_zagier_count(self):
        reps = coset_reps(QuadraticForm(ZAGIER))
        assert len(reps) == 32
        assert len(set(reps)) == 32


class TestCone:
    """Classification, admissibility and majorants"""

    anchor = (-1, 1)

    def test_cusps_in_one_component(self):
        Qf = QuadraticForm(HYPERBOLIC)
        c1 = classify_vector(Qf, self.anchor, (0, 1))
        c2 = classify_vector(Qf, self.anchor, (-1, 0))
        assert c1.is_cusp and c2.is_cusp
        assert Qf.B(c1.c, c2.c) == -1

    def test_opposite_orientation(self):
        Qf = QuadraticForm(HYPERBOLIC)
        assert classify_vector(Qf, self.anchor, (0, -1)) is None
        with pytest.raises(NotInConeError):
            require_cone_vector(Qf, self.anchor, (0, -1))

    def test_cusp_primitive_scaling(self):
        Qf = QuadraticForm(HYPERBOLIC)
        c = classify_vector(Qf, self.anchor, (0, Fraction(6, 5)))
        assert c.c == (0, 1)

    def test_irrational_interior(self):
        Qf = QuadraticForm(HURWITZ)
        r2 = math.sqrt(2)
        c = classify_real(Qf, self.anchor, (-r2, r2), representative=(-1, 1))
        assert c.is_interior
        assert c.c == (-1, 1)
        assert c.qc == pytest.approx(-1.0)

    def test_admissible(self):
        Qf = QuadraticForm(HYPERBOLIC)
        c = classify_vector(Qf, self.anchor, (0, 1))
        assert characteristic_admissible(Qf, c, (Fraction(1, 3), Fraction(1, 5)))
        assert not characteristic_admissible(Qf, c, (1, Fraction(1, 5)))

        Hf = QuadraticForm(HURWITZ)
        c1 = classify_vector(Hf, self.anchor, (0, 1))
        assert not characteristic_admissible(Hf, c1, (0, Fraction(1, 2)))

    def test_interior_between(self):
        Qf = QuadraticForm(HYPERBOLIC)
        c1 = classify_vector(Qf, self.anchor, (0, 1))
        c2 = classify_vector(Qf, self.anchor, (-1, 0))
        c = interior_between(Qf, c1, c2)
        assert c.c == (-1, 1)
        assert c.qc == -1 == Qf.B(c1.c, c2.c)

    def test_majorant(self):
        Qf = QuadraticForm(HYPERBOLIC)
        c = classify_vector(Qf, self.anchor, (-1, 1))
        M = majorant(Qf, c)
        assert M == ((1, 0), (0, 1))
        # M(c) = -Q(c)
        assert Fraction(1, 2) * sum(M[i][j] * c.c[i] * c.c[j] for i in range(2) for j in range(2)) == -c.qc

    def test_majorant_rejects_cusp(self):
        Qf = QuadraticForm(HYPERBOLIC)
        with pytest.raises(SpecError):
            majorant(Qf, classify_vector(Qf, self.anchor, (0, 1)))


class TestPolynomials:
    """Laplacian, hat operator and directional derivatives"""

    def test_laplacian_examples(self):
        hyper = QuadraticForm(HYPERBOLIC)
        assert laplacian(hyper, HomPoly.variable(2, 0) ** 3).is_zero
        v1v2 = HomPoly.variable(2, 0) * HomPoly.variable(2, 1)
        assert laplacian(hyper, v1v2) == HomPoly.constant(2, 2)
        assert is_spherical(QuadraticForm(HURWITZ), HomPoly.variable(2, 0) ** 2)
        assert not is_spherical(hyper, v1v2)

    def test_hat_layers(self):
        hyper = QuadraticForm(HYPERBOLIC)
        v1v2 = HomPoly.variable(2, 0) * HomPoly.variable(2, 1)
        fhat = hat(hyper, v1v2)
        assert fhat.layers == ((0, v1v2), (1, HomPoly.constant(2, Fraction(-1, 4))))
        assert hat(hyper, HomPoly.variable(2, 0)).layers == ((0, HomPoly.variable(2, 0)),)

    def test_hat_commutes_with_laplacian(self):
        Qf = QuadraticForm(ZAGIER)
        x, y, z = (HomPoly.variable(3, i) for i in range(3))
        f = (x * y * z * z) + (y ** 4).scale(3) - (x * x * z * z).scale(Fraction(1, 2))
        rhs = dict(hat(Qf, laplacian(Qf, f)).layers)
        for k, p in hat(Qf, f).layers:
            lhs = laplacian(Qf, p)
            if k in rhs:
                assert lhs == rhs[k]
            else:
                assert lhs.is_zero

    def test_laplacian_against_sympy(self):
        Qf = QuadraticForm(HURWITZ)
        v1, v2 = sympy.symbols('v1 v2')
        x, y = HomPoly.variable(2, 0), HomPoly.variable(2, 1)
        f = (x ** 3 * y).scale(2) + (y ** 4).scale(Fraction(1, 3))
        expr = 2 * v1 ** 3 * v2 + sympy.Rational(1, 3) * v2 ** 4
        symbols = (v1, v2)
        expected = sum(sympy.Rational(int(Qf.A_inv[i][j].numerator), int(Qf.A_inv[i][j].denominator))
                       * sympy.diff(expr, symbols[i], symbols[j]) for i in range(2) for j in range(2))
        got = laplacian(Qf, f)
        for point in [(1, 2), (Fraction(1, 3), -2), (5, 7)]:
            at = {v1: sympy.Rational(str(point[0])), v2: sympy.Rational(str(point[1]))}
            assert got.evaluate(point) == as_fraction(expected.subs(at))

    def test_directional(self):
        x, y = HomPoly.variable(2, 0), HomPoly.variable(2, 1)
        assert directional((1, 0), x ** 3, 2) == x.scale(6)
        assert directional((1, 1), x * y, 1) == x + y
        assert directional((1, 1), x * y, 3).is_zero

    def test_records_round_trip(self):
        x, y = HomPoly.variable(2, 0), HomPoly.variable(2, 1)
        f = (x * y).scale(Fraction(2, 3), 1)
        assert HomPoly.from_records(2, f.to_records()) == f


class TestCombinatorics:
    """Bernoulli and Eulerian numbers"""

    def test_bernoulli_numbers(self):
        assert bernoulli_number(2) == Fraction(1, 6)
        assert bernoulli_number(4) == Fraction(-1, 30)
        assert bernoulli_poly(1) == (Fraction(-1, 2), Fraction(1))

    def test_periodic_bernoulli(self):
        for x in (Fraction(1, 3), Fraction(-7, 5), Fraction(2)):
            assert periodic_bernoulli(4, x + 1) == periodic_bernoulli(4, x)

    def test_eulerian(self):
        assert eulerian(2, 0) == 1 and eulerian(2, 1) == 1
        for k in range(1, 8):
            assert sum(eulerian(k, j) for j in range(k)) == math.factorial(k)
            for j in range(k):
                assert eulerian(k, j) == eulerian(k, k - 1 - j)

    def test_closed_form(self):
        assert power_geometric_closed_form(0, Fraction(1, 2)) == 2
        for k in range(1, 7):
            x = Fraction(1, 3)
            partial = sum(m ** k * x ** m for m in range(200))
            assert float(power_geometric_closed_form(k, x)) == pytest.approx(float(partial), rel=1e-12)
            big = Fraction(3)
            negative = -sum(m ** k * big ** m for m in range(-200, 0))
            assert float(power_geometric_closed_form(k, big)) == pytest.approx(float(negative), rel=1e-12)
        with pytest.raises(ValueError):
            power_geometric_closed_form(2, 1)

    @pytest.mark.parametrize('k', [2, 4])
    @pytest.mark.parametrize('alpha', [Fraction(0), Fraction(1, 3), Fraction(1, 2)])
    @pytest.mark.parametrize('beta', [Fraction(0), Fraction(1, 3), Fraction(1, 2)])
    @pytest.mark.parametrize('z', [-1.0, -0.5, 0.5])
    def test_tail_identity(self, k, alpha, beta, z):
        value = bernoulli_tail_identity(k, alpha, beta, z)
        shift = alpha + beta
        if z < 0:
            start = -math.floor(beta)
            oracle = sum(float(n + shift) ** (k - 1) * math.exp(float(n + shift) * z)
                         for n in range(start, start + 400))
        else:
            stop = -math.floor(beta)
            oracle = -sum(float(n + shift) ** (k - 1) * math.exp(float(n + shift) * z)
                          for n in range(stop - 400, stop))
        assert value.real == pytest.approx(oracle, abs=1e-10)
        assert abs(value.imag) < 1e-15

    def test_tail_identity_beta_shift(self):
        a = bernoulli_tail_identity(2, Fraction(1, 3), Fraction(1, 2), -0.7)
        b = bernoulli_tail_identity(2, Fraction(1, 3), Fraction(3, 2), -0.7)
        assert a == b

    @pytest.mark.parametrize('z', [0.7, -1.2 + 0.5j, 3j])
    def test_tail_series_generating_function(self, z):
        """k = 1 sums to e^{tz}/(e^z - 1) - 1/z."""
        t = Fraction(1, 3)
        expected = cmath.exp(float(t) * z) / (cmath.exp(z) - 1) - 1 / z
        assert abs(bernoulli_tail_series(1, t, z) - expected) < 1e-13

    def test_tail_series_at_zero(self):
        for k in (1, 2, 4):
            expected = float(bernoulli_poly_eval(k, Fraction(2, 5))) / k
            assert bernoulli_tail_series(k, Fraction(2, 5), 0) == pytest.approx(expected, abs=1e-15)
        with pytest.raises(ValueError):
            bernoulli_tail_series(2, 0, 6.5)
        with pytest.raises(ValueError):
            bernoulli_tail_series(0, 0, 0.5)

    def test_tail_identity_domain(self):
        with pytest.raises(ValueError):
            bernoulli_tail_identity(2, 0, 0, 7.0)
        with pytest.raises(ValueError):
            bernoulli_tail_identity(2, 0, 0, 1j)
        with pytest.raises(ConvergenceNotAchieved):
            bernoulli_tail_identity(2, 0, 0, -6.0, max_terms=5)


class TestEnumeration:
    """Fincke-Pohst traversal"""

    def test_disc(self):
        points = set(ellipsoid_points(np.eye(2), (0, 0), 2))
        assert points == {(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)}

    def test_matches_box_oracle(self):
        G = np.array([[2.0, 0.7, 0.1], [0.7, 1.5, -0.3], [0.1, -0.3, 1.2]])
        offset = (0.25, -1 / 3, 0.5)
        radius = 9.0
        found = set(ellipsoid_points(G, offset, radius))
        for z in itertools.product(range(-6, 7), repeat=3):
            x = np.array(z) + np.array(offset)
            if x @ G @ x <= radius:
                assert z in found

    def test_shifted(self):
        assert set(ellipsoid_points(np.eye(2), (0.5, 0), 1)) == {(-1, 0), (0, 0)}

    def test_point_cap(self):
        with pytest.raises(EnumerationBoundError):
            list(ellipsoid_points(np.eye(2), (0, 0), 100, max_points=3))

    def test_sign_region_ratio(self):
        A = np.array(HYPERBOLIC, dtype=float)
        M = np.eye(2)
        c1, c2 = np.array([-1.0, 2.0]), np.array([-2.0, 1.0])
        u1, u2 = A @ c1, A @ c2
        eps = min_ratio_on_sign_region(A, M, u1, u2)
        assert eps > 0
        for angle in np.linspace(0, 2 * np.pi, 721):
            v = np.array([np.cos(angle), np.sin(angle)])
            if (u1 @ v) * (u2 @ v) <= 0:
                assert v @ A @ v >= eps * (v @ M @ v) - 1e-12
