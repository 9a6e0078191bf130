"""
Modular Group Tool
Integer substitutions of determinant 1, their level predicates, their action
on tau and on characteristic pairs, and the quadratic-polynomial
characteristic maps.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Sequence, Tuple

from apps.core.exceptions import SpecError
from apps.core.parsing import parse_matrix
from apps.lattice.tools.quadratic_form import Vector, as_fraction, as_vector
from apps.series.tools.qseries import EvalPoint

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[int, int], Tuple[int, int]]


# ============================================================================
# SUBSTITUTIONS
# ============================================================================

@dataclass(frozen=True)
class ModularSubstitution:
    """gamma = [[a, b], [c, d]] with ad - bc = 1."""
    matrix: Matrix

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        if any(not isinstance(x, int) for x in (a, b, c, d)):
            raise SpecError(f"substitution entries must be integers, got {self.matrix}")
        if a * d - b * c != 1:
            raise SpecError(f"determinant of {self.matrix} is {a * d - b * c}, not 1")

    @classmethod
    def of(cls, a: int, b: int, c: int, d: int) -> "ModularSubstitution":
        return cls(((a, b), (c, d)))

    @classmethod
    def parse(cls, text: str) -> "ModularSubstitution":
        """'a,b;c,d'"""
        return cls(parse_matrix(text))

    # ── entries ──

    @property
    def a(self) -> int:
        return self.matrix[0][0]

    @property
    def b(self) -> int:
        return self.matrix[0][1]

    @property
    def c(self) -> int:
        return self.matrix[1][0]

    @property
    def d(self) -> int:
        return self.matrix[1][1]

    # ── level tags ──

    def in_gamma0(self, N: int) -> bool:
        return self.c % N == 0

    def in_gamma1(self, N: int) -> bool:
        return self.c % N == 0 and self.a % N == 1 % N and self.d % N == 1 % N

    @property
    def levels(self) -> Tuple[str, ...]:
        tags = [f"Gamma0({N})" for N in (2, 4) if self.in_gamma0(N)]
        if self.in_gamma1(4):
            tags.append("Gamma1(4)")
        return tuple(tags)

    # ── group law ──

    def __matmul__(self, other: "ModularSubstitution") -> "ModularSubstitution":
        (a, b), (c, d) = self.matrix
        (e, f), (g, h) = other.matrix
        return ModularSubstitution(((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)))

    def inverse(self) -> "ModularSubstitution":
        (a, b), (c, d) = self.matrix
        return ModularSubstitution(((d, -b), (-c, a)))

    # ── actions ──

    def act(self, pt: EvalPoint) -> EvalPoint:
        return pt.act(self.matrix)

    def cocycle(self, pt: EvalPoint) -> complex:
        """c tau + d."""
        return self.c * pt.tau + self.d

    def act_chars(self, a: Sequence[Any], b: Sequence[Any]) -> Tuple[Vector, Vector]:
        """(a, b) gamma = (gamma11 a + gamma21 b, gamma12 a + gamma22 b)."""
        a, b = as_vector(a), as_vector(b)
        if len(a) != len(b):
            raise SpecError("characteristics disagree on the dimension")
        a_new = tuple(self.a * x + self.c * y for x, y in zip(a, b))
        b_new = tuple(self.b * x + self.d * y for x, y in zip(a, b))
        return a_new, b_new

    def label(self) -> str:
        (a, b), (c, d) = self.matrix
        return f"{a},{b};{c},{d}"


IDENTITY = ModularSubstitution.of(1, 0, 0, 1)
MINUS_I = ModularSubstitution.of(-1, 0, 0, -1)
T = ModularSubstitution.of(1, 1, 0, 1)
S = ModularSubstitution.of(0, -1, 1, 0)
GAMMA_PRIME = ModularSubstitution.of(1, 0, 4, 1)
GAMMA0_2_LOWER = ModularSubstitution.of(1, 0, 2, 1)

GAMMA0_2_GENERATORS = (MINUS_I, T, GAMMA0_2_LOWER)
GAMMA0_4_GENERATORS = (MINUS_I, T, GAMMA_PRIME)


# ============================================================================
# CHARACTERISTIC MAPS
# ============================================================================

class MapDirection(Enum):
    TILDE = "tilde"
    HAT = "hat"


@dataclass(frozen=True)
class CharacteristicMap:
    """
    Linear maps carrying characteristics to the cusp at x (tilde) and at 1/x (hat):

        tilde(v) = (v1, 2 v1 x + v2, v1 x^2 + v2 x + v3)
        hat(v)   = (v3, 2 v3/x + v2, v3/x^2 + v2/x + v1)

    Both preserve Q(v) = v2^2 - 4 v1 v3.
    """
    x: Fraction
    direction: MapDirection = MapDirection.TILDE

    def __post_init__(self):
        object.__setattr__(self, 'x', as_fraction(self.x))
        object.__setattr__(self, 'direction', MapDirection(self.direction))
        if self.direction is MapDirection.HAT and self.x == 0:
            raise SpecError("the hat map needs x != 0")

    def apply(self, v: Sequence[Any]) -> Vector:
        v = as_vector(v)
        if len(v) != 3:
            raise SpecError("characteristic maps act on 3-vectors")
        v1, v2, v3 = v
        if self.direction is MapDirection.TILDE:
            x = self.x
            return v1, 2 * v1 * x + v2, v1 * x * x + v2 * x + v3
        y = 1 / self.x
        return v3, 2 * v3 * y + v2, v3 * y * y + v2 * y + v1

    def pair(self, a: Sequence[Any], b: Sequence[Any]) -> Tuple[Vector, Vector]:
        return self.apply(a), self.apply(b)
