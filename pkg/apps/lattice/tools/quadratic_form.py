"""
Quadratic Form Tool
Integer symmetric matrices of signature (n-1, 1): evaluation of Q and B,
exact signature, exact inverse and the dual-lattice coset representatives.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Any, Iterable, List, Sequence, Tuple

import numpy as np
import sympy
from sympy.matrices.normalforms import hermite_normal_form

from apps.core.exceptions import SignatureError, SpecError

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]
RationalMatrix = Tuple[Tuple[Fraction, ...], ...]


# ============================================================================
# SCALAR / VECTOR COERCION
# ============================================================================

def as_fraction(value: Any) -> Fraction:
    """
    Coerce an int, Fraction, sympy Rational or "p/q" string to Fraction.

    Floats are rejected: exact paths never accept them silently.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise SpecError(f"boolean is not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"cannot parse rational {value!r}") from exc
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise SpecError(f"expected a rational number, got {type(value).__name__}: {value!r}")


def as_vector(values: Iterable[Any]) -> Vector:
    return tuple(as_fraction(v) for v in values)


def denominator_lcm(values: Iterable[Fraction]) -> int:
    return lcm(1, *(Fraction(v).denominator for v in values))


def primitive_integer_vector(v: Sequence[Fraction]) -> Tuple[int, ...]:
    """Positive rescaling of a non-zero rational vector to a primitive integer vector."""
    scale = denominator_lcm(v)
    ints = [int(x * scale) for x in v]
    g = gcd(*ints)
    if g == 0:
        raise SpecError("zero vector has no primitive representative")
    return tuple(x // int(g) for x in ints)


# ============================================================================
# SIGNATURE
# ============================================================================

def signature(matrix: Sequence[Sequence[Any]]) -> Tuple[int, int]:
    """
    Exact (positive, negative) inertia of a symmetric rational matrix.

    Congruence diagonalization over Q with symmetric pivoting: a non-zero
    diagonal entry is used directly, otherwise row/column j is added to
    row/column i, which puts 2*a_ij on the diagonal.

    Raises:
        SignatureError: if the matrix is singular.
    """
    work = [[as_fraction(x) for x in row] for row in matrix]
    positive = negative = 0
    while work:
        m = len(work)
        pivot = next((i for i in range(m) if work[i][i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in range(m) for j in range(i + 1, m) if work[i][j] != 0), None)
            if pair is None:
                raise SignatureError("matrix is singular")
            i, j = pair
            for k in range(m):
                work[i][k] += work[j][k]
            for k in range(m):
                work[k][i] += work[k][j]
            pivot = i
        d = work[pivot][pivot]
        if d > 0:
            positive += 1
        else:
            negative += 1
        rest = [k for k in range(m) if k != pivot]
        work = [[work[r][c] - work[r][pivot] * work[pivot][c] / d for c in rest] for r in rest]
    return positive, negative


# ============================================================================
# QUADRATIC FORM
# ============================================================================

@dataclass(frozen=True)
class QuadraticForm:
    """
    Q(v) = 1/2 v^T A v for a symmetric integer matrix A of signature (n-1, 1).

    B(u, v) = u^T A v, so that B(v, v) = 2 Q(v).
    """

    A: IntMatrix
    A_inv: RationalMatrix = field(init=False, repr=False, compare=False)
    det: int = field(init=False, compare=False)

    def __post_init__(self):
        rows = self.A
        n = len(rows)
        if n < 2 or any(len(r) != n for r in rows):
            raise SpecError(f"matrix must be square of size >= 2, got {n} rows")
        for r in rows:
            for x in r:
                if isinstance(x, bool) or int(x) != x:
                    raise SpecError(f"matrix entries must be integers, got {x!r}")
        ints = tuple(tuple(int(x) for x in r) for r in rows)
        if any(ints[i][j] != ints[j][i] for i in range(n) for j in range(n)):
            raise SpecError("matrix must be symmetric")
        object.__setattr__(self, 'A', ints)

        sym = sympy.Matrix(ints)
        det = int(sym.det())
        if det == 0:
            raise SignatureError("matrix is singular")
        sig = signature(ints)
        if sig != (n - 1, 1):
            raise SignatureError(f"signature {sig} is not ({n - 1}, 1)")
        inv = sym.inv()
        object.__setattr__(self, 'det', det)
        object.__setattr__(
            self, 'A_inv',
            tuple(tuple(as_fraction(inv[i, j]) for j in range(n)) for i in range(n)),
        )
        logger.debug(f"QuadraticForm n={n} det={det}")

    # ── shape ──

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def diag_vec(self) -> Tuple[int, ...]:
        """A*, the vector of diagonal entries."""
        return tuple(self.A[i][i] for i in range(self.n))

    @property
    def is_even(self) -> bool:
        return all(x % 2 == 0 for x in self.diag_vec)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.A, dtype=float)

    # ── evaluation ──

    def _check(self, v: Sequence[Any]):
        if len(v) != self.n:
            raise SpecError(f"vector of length {len(v)} does not match dimension {self.n}")

    def apply(self, v: Sequence[Any]) -> Tuple[Any, ...]:
        """A v, preserving the scalar type of v."""
        self._check(v)
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.A)

    def apply_inverse(self, v: Sequence[Any]) -> Vector:
        self._check(v)
        return tuple(sum(a * as_fraction(x) for a, x in zip(row, v)) for row in self.A_inv)

    def B(self, u: Sequence[Any], v: Sequence[Any]) -> Any:
        self._check(u)
        return sum(x * y for x, y in zip(u, self.apply(v)))

    def Q(self, v: Sequence[Any]) -> Any:
        b = self.B(v, v)
        return b / 2 if isinstance(b, float) else Fraction(b) / 2

    def evaluate(self, u: Sequence[Any], v: Sequence[Any]) -> Tuple[Any, Any]:
        """Return (Q(v), B(u, v))."""
        return self.Q(v), self.B(u, v)

    def to_list(self) -> List[List[int]]:
        return [list(r) for r in self.A]


def coset_reps(Qf: QuadraticForm) -> List[Vector]:
    """
    Representatives of A^{-1} Z^n / Z^n.

    The Hermite normal form H of A spans A Z^n, so the box prod [0, |H_ii|)
    is a complete residue system of Z^n / A Z^n; mapping w -> A^{-1} w mod 1
    gives the cosets of A^{-1} Z^n / Z^n.
    """
    n = Qf.n
    H = hermite_normal_form(sympy.Matrix(Qf.A))
    sizes = [abs(int(H[i, i])) for i in range(n)]
    if int(np.prod(sizes)) != abs(Qf.det):
        raise ArithmeticError(f"normal form diagonal {sizes} does not match det {Qf.det}")

    reps: List[Vector] = []
    seen = set()
    for w in np.ndindex(*sizes):
        p = tuple(x - (x.numerator // x.denominator) for x in Qf.apply_inverse(w))
        if p in seen:
            raise ArithmeticError(f"duplicate coset representative {p}")
        seen.add(p)
        reps.append(p)
    reps.sort()
    return reps
