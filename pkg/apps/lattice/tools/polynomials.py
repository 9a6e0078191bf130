"""
Homogeneous Polynomial Tool
Sparse homogeneous polynomials with rational (or Gaussian-rational)
coefficients, the Laplacian of a quadratic form, the hat operator
f -> exp(-Delta/8pi) f and iterated directional derivatives.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from apps.core.exceptions import SpecError
from apps.lattice.tools.quadratic_form import QuadraticForm, as_fraction

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Scalar = Union[Fraction, float]


def _clean(coeffs: Mapping[Monomial, Scalar]) -> Tuple[Tuple[Monomial, Scalar], ...]:
    return tuple(sorted((tuple(m), c) for m, c in coeffs.items() if c != 0))


@dataclass(frozen=True)
class HomPoly:
    """
    Homogeneous polynomial of degree d in n variables.

    `terms` holds the real parts and `imag` the imaginary parts of the
    coefficients, both as sorted (exponent tuple, coefficient) pairs.
    """
    n: int
    d: int
    terms: Tuple[Tuple[Monomial, Scalar], ...] = ()
    imag: Tuple[Tuple[Monomial, Scalar], ...] = ()

    def __post_init__(self):
        for mono, _ in self.terms + self.imag:
            if len(mono) != self.n:
                raise SpecError(f"monomial {mono} has wrong length for n={self.n}")
            if sum(mono) != self.d or min(mono) < 0:
                raise SpecError(f"monomial {mono} is not of degree {self.d}")

    # ── construction ──

    @classmethod
    def from_dict(cls, n: int, coeffs: Mapping[Monomial, Any],
                  imag: Optional[Mapping[Monomial, Any]] = None, d: Optional[int] = None) -> "HomPoly":
        conv = {tuple(m): _scalar(c) for m, c in coeffs.items()}
        conv_im = {tuple(m): _scalar(c) for m, c in (imag or {}).items()}
        monos = [m for m, c in list(conv.items()) + list(conv_im.items()) if c != 0]
        if d is None:
            if not monos:
                raise SpecError("degree of the zero polynomial must be given")
            d = sum(monos[0])
        return cls(n, d, _clean(conv), _clean(conv_im))

    @classmethod
    def zero(cls, n: int, d: int = 0) -> "HomPoly":
        return cls(n, d)

    @classmethod
    def constant(cls, n: int, value: Any = 1) -> "HomPoly":
        return cls.from_dict(n, {(0,) * n: value}, d=0)

    @classmethod
    def variable(cls, n: int, i: int) -> "HomPoly":
        mono = tuple(1 if j == i else 0 for j in range(n))
        return cls.from_dict(n, {mono: 1})

    @classmethod
    def linear(cls, coeffs: Sequence[Any]) -> "HomPoly":
        n = len(coeffs)
        return cls.from_dict(n, {tuple(1 if j == i else 0 for j in range(n)): c
                                 for i, c in enumerate(coeffs)}, d=1)

    # ── views ──

    @cached_property
    def real_dict(self) -> Dict[Monomial, Scalar]:
        return dict(self.terms)

    @cached_property
    def imag_dict(self) -> Dict[Monomial, Scalar]:
        return dict(self.imag)

    @property
    def is_zero(self) -> bool:
        return not self.terms and not self.imag

    @property
    def is_real(self) -> bool:
        return not self.imag

    def coefficient(self, mono: Monomial) -> complex:
        return complex(self.real_dict.get(tuple(mono), 0), self.imag_dict.get(tuple(mono), 0))

    # ── arithmetic ──

    def _combine(self, other: "HomPoly", sign: int) -> "HomPoly":
        if other.n != self.n:
            raise SpecError("dimension mismatch")
        if self.is_zero:
            return other if sign > 0 else -other
        if other.is_zero:
            return self
        if other.d != self.d:
            raise SpecError(f"cannot add polynomials of degrees {self.d} and {other.d}")
        re, im = dict(self.terms), dict(self.imag)
        for m, c in other.terms:
            re[m] = re.get(m, 0) + sign * c
        for m, c in other.imag:
            im[m] = im.get(m, 0) + sign * c
        return HomPoly(self.n, self.d, _clean(re), _clean(im))

    def __add__(self, other: "HomPoly") -> "HomPoly":
        return self._combine(other, 1)

    def __sub__(self, other: "HomPoly") -> "HomPoly":
        return self._combine(other, -1)

    def __neg__(self) -> "HomPoly":
        return self.scale(-1)

    def scale(self, factor: Any, factor_imag: Any = 0) -> "HomPoly":
        """Multiply by the scalar factor + i*factor_imag."""
        re: Dict[Monomial, Scalar] = {}
        im: Dict[Monomial, Scalar] = {}
        for m, c in self.terms:
            re[m] = re.get(m, 0) + c * factor
            im[m] = im.get(m, 0) + c * factor_imag
        for m, c in self.imag:
            re[m] = re.get(m, 0) - c * factor_imag
            im[m] = im.get(m, 0) + c * factor
        return HomPoly(self.n, self.d, _clean(re), _clean(im))

    def __mul__(self, other: Union["HomPoly", int, Fraction, float]) -> "HomPoly":
        if not isinstance(other, HomPoly):
            return self.scale(other)
        if other.n != self.n:
            raise SpecError("dimension mismatch")
        re: Dict[Monomial, Scalar] = {}
        im: Dict[Monomial, Scalar] = {}
        mine = [(m, c, 0) for m, c in self.terms] + [(m, 0, c) for m, c in self.imag]
        theirs = [(m, c, 0) for m, c in other.terms] + [(m, 0, c) for m, c in other.imag]
        for m1, r1, i1 in mine:
            for m2, r2, i2 in theirs:
                mono = tuple(x + y for x, y in zip(m1, m2))
                re[mono] = re.get(mono, 0) + r1 * r2 - i1 * i2
                im[mono] = im.get(mono, 0) + r1 * i2 + i1 * r2
        return HomPoly(self.n, self.d + other.d, _clean(re), _clean(im))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HomPoly":
        result = HomPoly.constant(self.n)
        for _ in range(k):
            result = result * self
        return result

    # ── calculus ──

    def derivative(self, i: int) -> "HomPoly":
        if self.d == 0:
            return HomPoly.zero(self.n, 0)

        def diff(items):
            out = {}
            for m, c in items:
                if m[i]:
                    mono = tuple(e - 1 if j == i else e for j, e in enumerate(m))
                    out[mono] = out.get(mono, 0) + c * m[i]
            return out

        return HomPoly(self.n, self.d - 1, _clean(diff(self.terms)), _clean(diff(self.imag)))

    # ── evaluation ──

    def evaluate_parts(self, v: Sequence[Any]) -> Tuple[Scalar, Scalar]:
        """(real part, imaginary part) of the coefficients evaluated at v, exact for rational v."""
        return _eval_items(self.terms, v), _eval_items(self.imag, v)

    def evaluate(self, v: Sequence[Any]):
        re, im = self.evaluate_parts(v)
        return re if self.is_real else complex(re, im)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an (P, n) float array."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(points.shape[0], dtype=complex if self.imag else float)
        for m, c in self.terms:
            out += float(c) * np.prod(points ** np.array(m), axis=1)
        for m, c in self.imag:
            out += 1j * float(c) * np.prod(points ** np.array(m), axis=1)
        return out

    # ── serialization ──

    def to_records(self) -> List[Dict[str, Any]]:
        monos = sorted(set(self.real_dict) | set(self.imag_dict))
        records = []
        for m in monos:
            re, im = self.real_dict.get(m, 0), self.imag_dict.get(m, 0)
            coeff = str(Fraction(re)) if im == 0 else [str(Fraction(re)), str(Fraction(im))]
            records.append({'exponents': list(m), 'coeff': coeff})
        return records

    @classmethod
    def from_records(cls, n: int, records: Iterable[Mapping[str, Any]], d: Optional[int] = None) -> "HomPoly":
        re: Dict[Monomial, Fraction] = {}
        im: Dict[Monomial, Fraction] = {}
        for rec in records:
            mono = tuple(int(e) for e in rec['exponents'])
            coeff = rec['coeff']
            if isinstance(coeff, (list, tuple)):
                re[mono] = re.get(mono, 0) + as_fraction(coeff[0])
                im[mono] = im.get(mono, 0) + as_fraction(coeff[1])
            else:
                re[mono] = re.get(mono, 0) + as_fraction(coeff)
        return cls.from_dict(n, re, im, d=d)


def _scalar(c: Any) -> Scalar:
    return float(c) if isinstance(c, float) else as_fraction(c)


def _eval_items(items, v) -> Scalar:
    total = 0
    for m, c in items:
        term = c
        for x, e in zip(v, m):
            if e:
                term = term * x ** e
        total += term
    return total


# ============================================================================
# LAPLACIAN AND HAT OPERATOR
# ============================================================================

def laplacian(Qf: QuadraticForm, f: HomPoly) -> HomPoly:
    """Delta f = sum_ij (A^{-1})_ij d_i d_j f."""
    if f.n != Qf.n:
        raise SpecError(f"polynomial in {f.n} variables, form of dimension {Qf.n}")
    if f.d < 2:
        return HomPoly.zero(f.n, max(f.d - 2, 0))
    result = HomPoly.zero(f.n, f.d - 2)
    for i in range(f.n):
        df = f.derivative(i)
        for j in range(f.n):
            w = Qf.A_inv[i][j]
            if w:
                result = result + df.derivative(j).scale(w)
    return result


def is_spherical(Qf: QuadraticForm, f: HomPoly) -> bool:
    return laplacian(Qf, f).is_zero


@dataclass(frozen=True)
class HatPoly:
    """
    f-hat = exp(-Delta/8pi) f as pi-graded layers: f-hat(v) = sum_k pi^{-k} p_k(v)
    with p_k = (-1)^k / (8^k k!) Delta^k f.
    """
    layers: Tuple[Tuple[int, HomPoly], ...]

    @property
    def f(self) -> HomPoly:
        return self.layers[0][1]

    @property
    def degree(self) -> int:
        return self.f.d

    def evaluate(self, v: Sequence[float]) -> complex:
        return sum(math.pi ** (-k) * p.evaluate([float(x) for x in v]) for k, p in self.layers)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        return sum(math.pi ** (-k) * p.evaluate_many(points) for k, p in self.layers)

    def scaled_evaluate_many(self, points: np.ndarray, y: float) -> np.ndarray:
        """y^{-d/2} f-hat(v sqrt(y)) = sum_k (pi y)^{-k} p_k(v), by homogeneity."""
        return sum((math.pi * y) ** (-k) * p.evaluate_many(points) for k, p in self.layers)


def hat(Qf: QuadraticForm, f: HomPoly) -> HatPoly:
    layers: List[Tuple[int, HomPoly]] = [(0, f)]
    current = f
    for k in range(1, f.d // 2 + 1):
        current = laplacian(Qf, current)
        if current.is_zero:
            break
        layers.append((k, current.scale(Fraction((-1) ** k, 8 ** k * math.factorial(k)))))
    return HatPoly(tuple(layers))


def directional(c: Sequence[Any], p: HomPoly, k: int) -> HomPoly:
    """(c . grad)^k p, unnormalized; coefficients are floats when c is."""
    if len(c) != p.n:
        raise SpecError("direction and polynomial dimensions differ")
    if k > p.d:
        return HomPoly.zero(p.n, 0)
    result = p
    for _ in range(k):
        step = HomPoly.zero(p.n, result.d - 1) if result.d else HomPoly.zero(p.n, 0)
        for i, ci in enumerate(c):
            if ci:
                step = step + result.derivative(i).scale(ci)
        result = step
    return result
