"""
Modular Transformation Tool
Elliptic transformation laws of the completed theta series, each returned as

    theta-hat_{spec}(g tau) = prefactor(tau) * sum_j w_j theta-hat_{spec_j}(tau)

with g the identity for the shifts and negation, tau + 1 for T and -1/tau
for S.
"""

import cmath
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence, Tuple

from apps.core.exceptions import InadmissibleCharacteristicError, SpecError
from apps.lattice.tools.cone import characteristic_admissible
from apps.lattice.tools.quadratic_form import Vector, as_fraction, as_vector, coset_reps
from apps.series.tools.cyclotomic import CycNum
from apps.series.tools.qseries import EvalPoint
from apps.theta.tools.spec import ThetaSpec

logger = logging.getLogger(__name__)

Gamma = Tuple[Tuple[int, int], Tuple[int, int]]


class MoveKind(Enum):
    """Transformation laws"""
    SHIFT_A = "shift_a"
    SHIFT_B = "shift_b"
    NEGATE = "negate"
    T = "T"
    S = "S"


_GAMMAS = {
    MoveKind.T: ((1, 1), (0, 1)),
    MoveKind.S: ((0, -1), (1, 0)),
}
_IDENTITY: Gamma = ((1, 0), (0, 1))


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    vector: Optional[Vector] = None

    @classmethod
    def shift_a(cls, lam: Sequence[Any]) -> "Move":
        return cls(MoveKind.SHIFT_A, as_vector(lam))

    @classmethod
    def shift_b(cls, mu: Sequence[Any]) -> "Move":
        return cls(MoveKind.SHIFT_B, as_vector(mu))

    @classmethod
    def parse(cls, text: str) -> "Move":
        """'S', 'T', 'negate', 'shift_a:1,0' or 'shift_b:1/2,0'."""
        name, _, rest = text.strip().partition(':')
        try:
            kind = MoveKind(name)
        except ValueError:
            raise SpecError(f"unknown move {name!r}")
        if kind in (MoveKind.SHIFT_A, MoveKind.SHIFT_B):
            if not rest:
                raise SpecError(f"move {name} needs a vector")
            return cls(kind, as_vector(x for x in rest.split(',')))
        return cls(kind)

    @property
    def gamma(self) -> Gamma:
        return _GAMMAS.get(self.kind, _IDENTITY)

    def label(self) -> str:
        if self.vector is None:
            return self.kind.value
        return f"{self.kind.value}:{','.join(str(x) for x in self.vector)}"


@dataclass(frozen=True)
class Prefactor:
    """(-i tau)^power * constant / sqrt|det|, principal branch."""
    power: Fraction = Fraction(0)
    constant: CycNum = field(default_factory=CycNum.one)
    det: int = 1

    def evaluate(self, tau: complex) -> complex:
        value = self.constant.to_complex() / abs(self.det) ** 0.5
        if self.power:
            value *= cmath.exp(float(self.power) * cmath.log(-1j * complex(tau)))
        return value


@dataclass(frozen=True)
class TransformResult:
    move: Move
    prefactor: Prefactor
    specs: Tuple[Tuple[CycNum, ThetaSpec], ...]

    def combine(self, pt: EvalPoint, evaluate: Callable[[ThetaSpec, EvalPoint], complex]) -> complex:
        """prefactor(tau) * sum_j w_j evaluate(spec_j, tau)."""
        total = sum(w.to_complex() * evaluate(s, pt) for w, s in self.specs)
        return self.prefactor.evaluate(pt.tau) * total


# ============================================================================
# LAWS
# ============================================================================

def _shift_a(spec: ThetaSpec, lam: Vector) -> TransformResult:
    if any(x.denominator != 1 for x in lam):
        raise SpecError(f"shift {lam} is not integral")
    moved = spec.with_chars(tuple(x + y for x, y in zip(spec.a, lam)), spec.b)
    return TransformResult(Move.shift_a(lam), Prefactor(), ((CycNum.one(), moved),))


def _shift_b(spec: ThetaSpec, mu: Vector) -> TransformResult:
    if any(as_fraction(x).denominator != 1 for x in spec.Qf.apply(mu)):
        raise SpecError(f"shift {mu} is not in A^-1 Z^n")
    moved = spec.with_chars(spec.a, tuple(x + y for x, y in zip(spec.b, mu)))
    weight = CycNum.exp2pi(-spec.Qf.B(spec.a, mu))
    return TransformResult(Move.shift_b(mu), Prefactor(), ((weight, moved),))


def _negate(spec: ThetaSpec) -> TransformResult:
    moved = spec.with_chars(tuple(-x for x in spec.a), tuple(-x for x in spec.b))
    weight = CycNum.rational((-1) ** (spec.d + 1))
    return TransformResult(Move(MoveKind.NEGATE), Prefactor(), ((weight, moved),))


def _translate(spec: ThetaSpec) -> TransformResult:
    """tau -> tau + 1: b -> a + b + A^{-1}A*/2."""
    Qf, a = spec.Qf, spec.a
    if Qf.is_even:
        b_new = tuple(x + y for x, y in zip(a, spec.b))
        r = -Qf.Q(a)
    else:
        half = tuple(x / 2 for x in Qf.apply_inverse(Qf.diag_vec))
        b_new = tuple(x + y + h for x, y, h in zip(a, spec.b, half))
        r = -Qf.Q(a) - sum(Fraction(d, 2) * x for d, x in zip(Qf.diag_vec, a))
    moved = spec.with_chars(a, b_new)
    return TransformResult(Move(MoveKind.T), Prefactor(), ((CycNum.exp2pi(r), moved),))


def _invert(spec: ThetaSpec) -> TransformResult:
    """tau -> -1/tau: a sum over A^{-1}Z^n / Z^n of specs (b + p, -a)."""
    Qf = spec.Qf
    if not spec.boundary_override:
        for c in (spec.c1, spec.c2):
            if not characteristic_admissible(Qf, c, spec.b):
                raise InadmissibleCharacteristicError(
                    f"b = {spec.b} is not admissible for the cusp {c.c}; the S-law needs a, b in R(c1) ∩ R(c2)"
                )
    minus_a = tuple(-x for x in spec.a)
    specs = tuple(
        (CycNum.one(), spec.with_chars(tuple(x + y for x, y in zip(spec.b, p)), minus_a))
        for p in coset_reps(Qf)
    )
    constant = CycNum.root(spec.d + 1, 4) * CycNum.exp2pi(Qf.B(spec.a, spec.b))
    prefactor = Prefactor(spec.weight, constant, Qf.det)
    return TransformResult(Move(MoveKind.S), prefactor, specs)


def transform(spec: ThetaSpec, move: Move) -> TransformResult:
    """
    Apply one transformation law.

    Raises:
        SpecError: the shift vector is outside its lattice.
        InadmissibleCharacteristicError: S-law on b outside R(c1) ∩ R(c2).
    """
    if move.kind is MoveKind.SHIFT_A:
        result = _shift_a(spec, move.vector)
    elif move.kind is MoveKind.SHIFT_B:
        result = _shift_b(spec, move.vector)
    elif move.kind is MoveKind.NEGATE:
        result = _negate(spec)
    elif move.kind is MoveKind.T:
        result = _translate(spec)
    else:
        result = _invert(spec)
    logger.debug(f"transform {move.label()}: {len(result.specs)} terms, weight {result.prefactor.power}")
    return result
