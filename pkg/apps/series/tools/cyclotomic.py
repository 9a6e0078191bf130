"""
Cyclotomic Number Tool
Exact elements of Q(zeta_M) stored in the group-ring basis zeta_M^j, with
canonical reduction modulo the M-th cyclotomic polynomial for equality and
serialization.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Dict, List, Tuple

import numpy as np
import sympy

from apps.core.exceptions import SpecError
from apps.lattice.tools.quadratic_form import as_fraction

logger = logging.getLogger(__name__)

_X = sympy.Symbol('x')


@lru_cache(maxsize=None)
def cyclotomic_coefficients(M: int) -> Tuple[int, ...]:
    """Coefficients of Phi_M, ascending powers; Phi_M is monic of degree phi(M)."""
    poly = sympy.Poly(sympy.cyclotomic_poly(M, _X), _X)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def _roots(M: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(M) / M)


@dataclass(frozen=True, eq=False)
class CycNum:
    """
    sum_j coeffs[j] * zeta_M^j with zeta_M = exp(2 pi i / M).

    Arithmetic happens in the group ring Q[Z/M]; two elements are equal when
    their reductions modulo Phi_M agree.
    """
    order: int
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 1 or len(self.coeffs) != self.order:
            raise SpecError(f"CycNum of order {self.order} needs {self.order} coefficients")

    # ── construction ──

    @classmethod
    def from_dict(cls, M: int, entries: Dict[int, Any]) -> "CycNum":
        coeffs = [Fraction(0)] * M
        for j, c in entries.items():
            coeffs[j % M] += as_fraction(c)
        return cls(M, tuple(coeffs))

    @classmethod
    def rational(cls, value: Any, M: int = 1) -> "CycNum":
        return cls.from_dict(M, {0: value})

    @classmethod
    def zero(cls, M: int = 1) -> "CycNum":
        return cls.rational(0, M)

    @classmethod
    def one(cls, M: int = 1) -> "CycNum":
        return cls.rational(1, M)

    @classmethod
    def root(cls, j: int, M: int) -> "CycNum":
        """zeta_M^j."""
        return cls.from_dict(M, {j: 1})

    @classmethod
    def exp2pi(cls, r: Any) -> "CycNum":
        """exp(2 pi i r) for rational r."""
        r = as_fraction(r)
        return cls.root(r.numerator, r.denominator)

    @classmethod
    def gaussian(cls, re: Any, im: Any) -> "CycNum":
        """re + i*im in Q(zeta_4)."""
        return cls.from_dict(4, {0: re, 1: im})

    # ── order changes ──

    def lift(self, M: int) -> "CycNum":
        if M == self.order:
            return self
        if M % self.order:
            raise SpecError(f"cannot lift order {self.order} to {M}")
        step = M // self.order
        coeffs = [Fraction(0)] * M
        for j, c in enumerate(self.coeffs):
            coeffs[j * step] = c
        return CycNum(M, tuple(coeffs))

    def _aligned(self, other: "CycNum") -> Tuple["CycNum", "CycNum"]:
        M = math.lcm(self.order, other.order)
        return self.lift(M), other.lift(M)

    # ── arithmetic ──

    def __add__(self, other: Any) -> "CycNum":
        if not isinstance(other, CycNum):
            other = CycNum.rational(other, self.order)
        a, b = self._aligned(other)
        return CycNum(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CycNum":
        return CycNum(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other: Any) -> "CycNum":
        return self + (-other)

    def __rsub__(self, other: Any) -> "CycNum":
        return (-self) + other

    def __mul__(self, other: Any) -> "CycNum":
        if not isinstance(other, CycNum):
            factor = as_fraction(other)
            return CycNum(self.order, tuple(c * factor for c in self.coeffs))
        a, b = self._aligned(other)
        M = a.order
        out = [Fraction(0)] * M
        right = [(j, c) for j, c in enumerate(b.coeffs) if c]
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in right:
                    out[(i + j) % M] += x * y
        return CycNum(M, tuple(out))

    __rmul__ = __mul__

    def conjugate(self) -> "CycNum":
        M = self.order
        return CycNum(M, tuple(self.coeffs[(-j) % M] for j in range(M)))

    def inv_unit(self) -> "CycNum":
        """Inverse of r * zeta_M^j with r rational and non-zero."""
        M = self.order
        for j in range(M):
            rotated = (self * CycNum.root(-j, M)).canonical
            if rotated[0] != 0 and not any(rotated[1:]):
                return CycNum.root(-j, M) * (1 / rotated[0])
        raise SpecError(f"{self.to_complex()} is not a rational multiple of a root of unity")

    # ── canonical form ──

    @cached_property
    def canonical(self) -> Tuple[Fraction, ...]:
        """Remainder modulo Phi_M, as phi(M) coefficients."""
        phi = cyclotomic_coefficients(self.order)
        deg = len(phi) - 1
        work: List[Fraction] = list(self.coeffs)
        for i in range(self.order - 1, deg - 1, -1):
            t = work[i]
            if t:
                for k, p in enumerate(phi):
                    work[i - deg + k] -= t * p
        return tuple(work[:deg])

    @property
    def is_zero(self) -> bool:
        return not any(self.canonical)

    def rational_value(self) -> Fraction:
        """The value when it is rational; raises otherwise."""
        can = self.canonical
        if any(can[1:]):
            raise SpecError("cyclotomic number is not rational")
        return can[0] if can else Fraction(0)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, CycNum):
            try:
                other = CycNum.rational(other)
            except SpecError:
                return NotImplemented
        a, b = self._aligned(other)
        return a.canonical == b.canonical

    __hash__ = None

    # ── numeric ──

    def to_complex(self) -> complex:
        total = 0j
        roots = _roots(self.order)
        for j, c in enumerate(self.coeffs):
            if c:
                total += float(c) * complex(roots[j])
        return total

    def __complex__(self) -> complex:
        return self.to_complex()

    def __repr__(self) -> str:
        return f"CycNum({self.order}, {self.to_complex():.12g})"

    # ── serialization ──

    def to_json(self) -> Dict[str, Any]:
        can = self.canonical
        padded = list(can) + [Fraction(0)] * (self.order - len(can))
        return {'order': self.order, 'coeffs': [str(c) for c in padded]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "CycNum":
        M = int(data['order'])
        coeffs = tuple(as_fraction(c) for c in data['coeffs'])
        return cls(M, coeffs)


def phase(r: Any) -> complex:
    """Floating exp(2 pi i r)."""
    return cmath.exp(2j * math.pi * float(r))
