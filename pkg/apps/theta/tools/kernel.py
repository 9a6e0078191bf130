"""
Completion Kernel Tool
The kernels p^c[f] replacing sgn B(c, v) f(v) in the completed theta series:
sgn B(c, v) f-hat(v) for a cusp, and for interior c

    p^c[f](v) = sum_k (-1)^k / ((4 pi)^k k!) E^(k)(B(c, v)/sqrt(-Q(c))) (d_c^k f-hat)(v)

with d_c = (-Q(c))^{-1/2} c . grad.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import special

from apps.lattice.tools.cone import ConeVector
from apps.lattice.tools.polynomials import HatPoly, HomPoly, directional
from apps.lattice.tools.quadratic_form import QuadraticForm
from apps.special.tools.error_functions import SQRT_PI, derivative_factor, err_E

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DerivativeTerm:
    """(-1)^k / ((4 pi)^k k!) (-Q(c))^{-k/2} times the layers (j, (c . grad)^k p_j)."""
    k: int
    coefficient: float
    layers: Tuple[Tuple[int, HomPoly], ...]


class KernelPlan:
    """
    Precomputed kernel of one cone vector for repeated evaluation.

    The vectorized methods work with the y-rescaled kernel
    y^{-d/2} p^c(l sqrt(y)), which is what the completed series needs.
    """

    def __init__(self, Qf: QuadraticForm, c: ConeVector, fhat: HatPoly):
        self.Qf = Qf
        self.cone = c
        self.fhat = fhat
        self.direction = np.array(c.real, dtype=float)
        self.Ac = Qf.array @ self.direction
        self.neg_qc = -0.5 * float(self.direction @ self.Ac)
        self.terms: List[DerivativeTerm] = []
        if c.is_interior:
            self._build_terms()

    def _build_terms(self):
        c = [float(x) for x in self.cone.real]
        for k in range(1, self.fhat.degree + 1):
            layers = []
            for j, p in self.fhat.layers:
                if p.d >= k:
                    dp = directional(c, p, k)
                    if not dp.is_zero:
                        layers.append((j, dp))
            if layers:
                coefficient = (-1) ** k / ((4 * math.pi) ** k * math.factorial(k)) * self.neg_qc ** (-k / 2)
                self.terms.append(DerivativeTerm(k, coefficient, tuple(layers)))

    # ── pointwise ──

    def evaluate(self, v: Sequence[float]) -> complex:
        """p^c[f](v)."""
        v = np.asarray(v, dtype=float)
        bcv = float(self.Ac @ v)
        base = self.fhat.evaluate(v)
        if self.cone.is_cusp:
            return np.sign(bcv) * base
        z = bcv / math.sqrt(self.neg_qc)
        total = err_E(z) * base
        for term in self.terms:
            value = sum(math.pi ** (-j) * p.evaluate(list(v)) for j, p in term.layers)
            total += term.coefficient * derivative_factor(term.k)(z) * math.exp(-math.pi * z * z) * value
        return complex(total)

    # ── vectorized, y-rescaled ──

    def arguments(self, points: np.ndarray, y: float) -> np.ndarray:
        """z = sqrt(y) B(c, l) / sqrt(-Q(c)) for each row l."""
        return math.sqrt(y) * (points @ self.Ac) / math.sqrt(self.neg_qc)

    def damped_correction(self, points: np.ndarray, y: float, exponents: np.ndarray) -> np.ndarray:
        """
        y^{-d/2} (p^c - sgn B(c, .) f-hat)(l sqrt(y)) |q|^{Q(l)} for interior c.

        Every term carries exp(-pi z^2), merged with |q|^{Q(l)} into
        exp(-2 pi y M_c(l)) so that neither factor overflows.
        """
        z = self.arguments(points, y)
        base = self.fhat.scaled_evaluate_many(points, y)
        total = -np.sign(z) * special.erfcx(SQRT_PI * np.abs(z)) * base
        for term in self.terms:
            scaled = sum((math.pi * y) ** (-j) * p.evaluate_many(points) for j, p in term.layers)
            total = total + term.coefficient * y ** (-term.k / 2) * derivative_factor(term.k)(z) * scaled
        return total * np.exp(-math.pi * z * z - 2 * math.pi * y * exponents)


def p_c_eval(Qf: QuadraticForm, c: ConeVector, fhat: HatPoly, v: Sequence[float]) -> complex:
    return KernelPlan(Qf, c, fhat).evaluate(v)
