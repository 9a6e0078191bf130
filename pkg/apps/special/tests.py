"""
Special Function Tests
E, its derivatives and the incomplete integrals beta(alpha; x)
"""

import math

import numpy as np
import pytest
from scipy import integrate

from apps.core.exceptions import SpecError
from apps.special.tools.error_functions import (
    Accuracy,
    KernelFunctionTool,
    beta_gen,
    beta_half,
    beta_quadrature,
    err_E,
    err_E_deriv,
)


class TestErrorFunction:
    """E(z) = 2 int_0^z exp(-pi u^2) du"""

    def test_zero_and_odd(self):
        assert err_E(0) == 0
        for z in (0.3, 1.7):
            assert err_E(-z) == -err_E(z)
            assert abs(err_E(z)) < 1

    def test_against_quadrature(self):
        value, _ = integrate.quad(lambda u: 2 * math.exp(-math.pi * u * u), 0, 1, epsabs=1e-15)
        assert err_E(1.0) == pytest.approx(value, abs=1e-12)

    def test_vectorized(self):
        z = np.linspace(-2, 2, 9)
        assert np.allclose(err_E(z), [err_E(float(x)) for x in z], atol=1e-16, rtol=0)

    def test_finite_far_out(self):
        for k in range(1, 6):
            assert np.isfinite(err_E_deriv(k, 40.0))
        assert err_E(40.0) == 1.0


class TestDerivatives:
    """E^(k) = h_{k-1} exp(-pi z^2)"""

    def test_low_orders(self):
        assert err_E_deriv(1, 0.0) == 2
        assert err_E_deriv(3, 0.0) == pytest.approx(-4 * math.pi, abs=1e-14)
        z = 0.8
        assert err_E_deriv(1, z) == pytest.approx(2 * math.exp(-math.pi * z * z), abs=1e-15)
        assert err_E_deriv(2, 1.0) == pytest.approx(-4 * math.pi * math.exp(-math.pi), abs=1e-14)

    def test_second_derivative_finite_difference(self):
        h = 1e-4
        fd = (err_E(1 + h) - 2 * err_E(1.0) + err_E(1 - h)) / (h * h)
        assert err_E_deriv(2, 1.0) == pytest.approx(fd, abs=1e-6)

    @pytest.mark.parametrize('k', [2, 3, 4])
    def test_recurrence_against_differences(self, k):
        h = 1e-4
        grid = np.linspace(-3, 3, 61)
        exact = err_E_deriv(k, grid)
        fd = (err_E_deriv(k - 1, grid + h) - err_E_deriv(k - 1, grid - h)) / (2 * h)
        scale = max(1.0, float(np.max(np.abs(exact))))
        assert np.max(np.abs(exact - fd)) <= 1e-6 * scale

    def test_rejects_order_zero(self):
        with pytest.raises(SpecError):
            err_E_deriv(0, 1.0)


class TestBeta:
    """Incomplete integrals"""

    def test_beta_half_values(self):
        assert beta_half(0.0) == 1
        assert beta_half(1.0) == pytest.approx(1 - err_E(1.0), abs=1e-15)
        assert beta_half(2.0) < beta_half(1.0)
        with pytest.raises(SpecError):
            beta_half(-0.1)

    def test_complement_identity(self):
        tool = KernelFunctionTool()
        for z in np.geomspace(1e-3, 6, 50):
            assert tool.complement_residual(z) <= 1e-12
            assert tool.complement_residual(-z) <= 1e-12

    @pytest.mark.parametrize('x', [0.1, 1.0, 5.0])
    def test_recurrence(self, x):
        assert KernelFunctionTool().recurrence_residual(x) <= 1e-12

    def test_minus_half(self):
        assert beta_gen(-0.5, 4.0) < beta_gen(-0.5, 1.0)
        assert beta_gen(-0.5, 1.0) == pytest.approx(beta_quadrature(-0.5, 1.0), abs=1e-10)
        with pytest.raises(SpecError):
            beta_gen(-0.5, 0.0)

    def test_positive_half_integers(self):
        for alpha in ('3/2', '5/2'):
            assert beta_gen(alpha, 0.7) == pytest.approx(beta_quadrature(alpha, 0.7), abs=1e-12)

    def test_unsupported_alpha(self):
        with pytest.raises(SpecError):
            beta_gen(1, 1.0)
        with pytest.raises(SpecError):
            beta_gen(-1.5, 1.0)


class TestKernelFunctionTool:
    """Aggregated residual report"""

    def test_run_passes(self):
        report = KernelFunctionTool().run(np.geomspace(1e-3, 6, 50))
        assert report['passed'], report

    def test_accuracy_range(self):
        assert Accuracy().abs_tol == 1e-14
        with pytest.raises(SpecError):
            Accuracy(1e-3)
