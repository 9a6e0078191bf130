"""
Q-Series Tool
Truncated q-series with exponents in (1/D)Z and cyclotomic coefficients,
exact ring operations with tracked completeness order, and floating
evaluation with a geometric tail estimate.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Tuple

from apps.core.conf import setting
from apps.core.exceptions import ConvergenceNotAchieved, SpecError
from apps.lattice.tools.quadratic_form import as_fraction
from apps.series.tools.cyclotomic import CycNum

logger = logging.getLogger(__name__)


# ============================================================================
# EVALUATION POINT
# ============================================================================

@dataclass(frozen=True)
class EvalPoint:
    """tau = x + iy in the upper half plane."""
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise SpecError(f"Im(tau) must be positive, got {self.y}")

    @classmethod
    def from_tau(cls, tau: complex) -> "EvalPoint":
        tau = complex(tau)
        return cls(tau.real, tau.imag)

    @property
    def tau(self) -> complex:
        return complex(self.x, self.y)

    @property
    def q(self) -> complex:
        return cmath.exp(2j * math.pi * self.tau)

    def qpow(self, r: Any) -> complex:
        """q^r = exp(2 pi i tau r), never computed as a power of q."""
        return cmath.exp(2j * math.pi * self.tau * float(r))

    def act(self, gamma: Tuple[Tuple[int, int], Tuple[int, int]]) -> "EvalPoint":
        """Moebius action of an integer matrix of determinant 1."""
        (a, b), (c, d) = gamma
        return EvalPoint.from_tau((a * self.tau + b) / (c * self.tau + d))


# ============================================================================
# SERIES
# ============================================================================

@dataclass(frozen=True)
class TailBound:
    """
    Coefficient growth beyond the known order: |a_{j/D}| <= constant * (1 + j/D)^degree.
    """
    degree: float = 0
    constant: float = 1


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    estimate: float
    terms: int = 0


@dataclass(frozen=True, eq=False)
class QSeries:
    """
    sum_e terms[e] q^{e/D} + O(q^order).

    Every exponent below `order` is complete; stored exponents are always
    below it.
    """
    exp_den: int
    order: Fraction
    terms: Tuple[Tuple[int, CycNum], ...] = ()

    def __post_init__(self):
        if self.exp_den < 1:
            raise SpecError("exponent denominator must be positive")
        object.__setattr__(self, 'order', as_fraction(self.order))

    # ── construction ──

    @classmethod
    def from_dict(cls, D: int, terms: Mapping[int, Any], order: Any) -> "QSeries":
        order = as_fraction(order)
        cleaned = []
        for e in sorted(terms):
            c = terms[e]
            if not isinstance(c, CycNum):
                c = CycNum.rational(c)
            if Fraction(e, D) < order and not c.is_zero:
                cleaned.append((int(e), c))
        return cls(D, order, tuple(cleaned))

    @classmethod
    def zero(cls, order: Any, D: int = 1) -> "QSeries":
        return cls(D, as_fraction(order))

    @classmethod
    def constant(cls, value: Any, order: Any) -> "QSeries":
        return cls.from_dict(1, {0: value}, order)

    @classmethod
    def monomial(cls, exponent: Any, coeff: Any, order: Any) -> "QSeries":
        r = as_fraction(exponent)
        return cls.from_dict(r.denominator, {r.numerator: coeff}, order)

    # ── views ──

    @property
    def term_dict(self) -> Dict[int, CycNum]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def exponents(self) -> List[Fraction]:
        return [Fraction(e, self.exp_den) for e, _ in self.terms]

    def items(self) -> Iterator[Tuple[Fraction, CycNum]]:
        for e, c in self.terms:
            yield Fraction(e, self.exp_den), c

    def coefficient(self, exponent: Any) -> CycNum:
        r = as_fraction(exponent)
        if r >= self.order:
            raise SpecError(f"exponent {r} is beyond the known order {self.order}")
        if (r * self.exp_den).denominator != 1:
            return CycNum.zero()
        return self.term_dict.get(int(r * self.exp_den), CycNum.zero())

    @property
    def valuation(self) -> Fraction:
        """Leading exponent, or the order for a series known to be O(q^order)."""
        return Fraction(self.terms[0][0], self.exp_den) if self.terms else self.order

    def rescale(self, D: int) -> "QSeries":
        if D % self.exp_den:
            raise SpecError(f"cannot rescale denominator {self.exp_den} to {D}")
        step = D // self.exp_den
        return QSeries(D, self.order, tuple((e * step, c) for e, c in self.terms))

    def truncate(self, order: Any) -> "QSeries":
        order = min(as_fraction(order), self.order)
        return QSeries.from_dict(self.exp_den, self.term_dict, order)

    # ── arithmetic ──

    def _aligned(self, other: "QSeries") -> Tuple["QSeries", "QSeries"]:
        D = math.lcm(self.exp_den, other.exp_den)
        return self.rescale(D), other.rescale(D)

    def __add__(self, other: "QSeries") -> "QSeries":
        a, b = self._aligned(other)
        out: Dict[int, CycNum] = dict(a.terms)
        for e, c in b.terms:
            out[e] = out[e] + c if e in out else c
        return QSeries.from_dict(a.exp_den, out, min(a.order, b.order))

    def __neg__(self) -> "QSeries":
        return QSeries(self.exp_den, self.order, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def scale(self, factor: Any) -> "QSeries":
        """Multiply every coefficient by a rational or cyclotomic factor."""
        return QSeries.from_dict(self.exp_den, {e: c * factor for e, c in self.terms}, self.order)

    def __mul__(self, other: Any) -> "QSeries":
        if not isinstance(other, QSeries):
            return self.scale(other)
        a, b = self._aligned(other)
        D = a.exp_den
        order = min(a.order + b.valuation, b.order + a.valuation)
        limit = order * D
        out: Dict[int, CycNum] = {}
        for e1, c1 in a.terms:
            if e1 + (b.terms[0][0] if b.terms else 0) >= limit:
                break
            for e2, c2 in b.terms:
                e = e1 + e2
                if e >= limit:
                    break
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return QSeries.from_dict(D, out, order)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QSeries":
        if k < 0:
            return self.inv_unit() ** (-k)
        if k == 0:
            return QSeries.constant(1, self.order - self.valuation)
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def shift_exponent(self, r: Any) -> "QSeries":
        """Multiply by q^r."""
        r = as_fraction(r)
        D = math.lcm(self.exp_den, r.denominator)
        s = self.rescale(D)
        step = int(r * D)
        return QSeries(D, s.order + r, tuple((e + step, c) for e, c in s.terms))

    def inv_unit(self) -> "QSeries":
        """
        1 / (c q^v (1 + u)) with u of positive valuation; c must be a unit.

        Known to order (order - 2v).
        """
        if self.is_zero:
            raise SpecError("cannot invert a series with no known leading term")
        D = self.exp_den
        v_e, lead = self.terms[0]
        lead_inv = lead.inv_unit()
        rel = {e - v_e: c * lead_inv for e, c in self.terms[1:]}
        span = int(math.ceil((self.order * D) - v_e))
        inv: Dict[int, CycNum] = {0: CycNum.one()}
        rel_items = sorted(rel.items())
        for e in range(1, span):
            acc = None
            for e1, c1 in rel_items:
                if e1 > e:
                    break
                prev = inv.get(e - e1)
                if prev is not None:
                    term = c1 * prev
                    acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero:
                inv[e] = -acc
        base = QSeries.from_dict(D, inv, self.order - self.valuation)
        return base.scale(lead_inv).shift_exponent(-self.valuation)

    def q_derivative(self) -> "QSeries":
        """q d/dq, termwise multiplication by the exponent."""
        return QSeries.from_dict(
            self.exp_den,
            {e: c * Fraction(e, self.exp_den) for e, c in self.terms},
            self.order,
        )

    def shift_tau(self, h: Any) -> "QSeries":
        """Series of F(tau + h) for rational h: coefficients times exp(2 pi i h e/D)."""
        h = as_fraction(h)
        return QSeries.from_dict(
            self.exp_den,
            {e: c * CycNum.exp2pi(h * Fraction(e, self.exp_den)) for e, c in self.terms},
            self.order,
        )

    def map_coefficients(self, fn: Callable[[CycNum], CycNum]) -> "QSeries":
        return QSeries.from_dict(self.exp_den, {e: fn(c) for e, c in self.terms}, self.order)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.order != other.order:
            return False
        a, b = self._aligned(other)
        da, db = a.term_dict, b.term_dict
        return all(da.get(e, CycNum.zero()) == db.get(e, CycNum.zero()) for e in set(da) | set(db))

    __hash__ = None

    def __repr__(self) -> str:
        shown = ', '.join(f"{Fraction(e, self.exp_den)}: {c.to_complex():.6g}" for e, c in self.terms[:6])
        return f"QSeries({{{shown}{', ...' if len(self.terms) > 6 else ''}}} + O(q^{self.order}))"

    # ── serialization ──

    def to_json(self) -> Dict[str, Any]:
        return {
            'exp_den': self.exp_den,
            'order': str(self.order),
            'terms': [{'e': e, 'coeff': c.to_json()} for e, c in self.terms],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "QSeries":
        D = int(data['exp_den'])
        terms = {int(t['e']): CycNum.from_json(t['coeff']) for t in data['terms']}
        return cls.from_dict(D, terms, as_fraction(data['order']))


# ============================================================================
# EVALUATION
# ============================================================================

def tail_estimate(s: QSeries, pt: EvalPoint, tail: TailBound) -> float:
    """
    Bound on sum_{j >= ceil(order D)} C (1 + j/D)^p |q|^{j/D}.

    Successive term ratios decrease in j, so the first ratio gives a
    geometric majorant. Infinite when that ratio is not below 1.
    """
    D = s.exp_den
    j0 = max(math.ceil(s.order * D), 0)
    r = math.exp(-2 * math.pi * pt.y)
    step = r ** (1 / D)
    ratio = ((1 + (j0 + 1) / D) / (1 + j0 / D)) ** tail.degree * step
    if ratio >= 1:
        return math.inf
    first = tail.constant * (1 + j0 / D) ** tail.degree * r ** (j0 / D)
    return first / (1 - ratio)


def evaluate_series(s: QSeries, pt: EvalPoint, tail: Optional[TailBound] = None,
                    tol: Optional[float] = None) -> SeriesValue:
    """
    Sum the known terms in ascending exponent order and attach a tail estimate.

    Raises:
        ConvergenceNotAchieved: if the estimate exceeds tol.
    """
    tol = setting('DEFAULT_TOLERANCE') if tol is None else tol
    total = 0j
    for r, c in s.items():
        total += c.to_complex() * pt.qpow(r)
    estimate = tail_estimate(s, pt, tail or TailBound())
    if estimate > tol:
        raise ConvergenceNotAchieved(
            f"tail estimate {estimate:.3e} exceeds tolerance {tol:.1e} at order {s.order}",
            estimate=estimate,
            diagnostics={'order': str(s.order), 'tau': str(pt.tau), 'value': str(total)},
        )
    return SeriesValue(total, estimate, len(s.terms))


def evaluate_to_tolerance(build: Callable[[Fraction], QSeries], pt: EvalPoint, tail: TailBound,
                          tol: Optional[float] = None, start: int = 8) -> SeriesValue:
    """Rebuild the series at doubling orders until the tail estimate meets tol."""
    tol = setting('DEFAULT_TOLERANCE') if tol is None else tol
    N = start
    while True:
        try:
            return evaluate_series(build(Fraction(N)), pt, tail, tol)
        except ConvergenceNotAchieved:
            if 2 * N > setting('MAX_ORDER'):
                raise
            N *= 2
