"""
Cone Classification Tool
Interior points and cusps of the negative cone C_Q fixed by an anchor c0,
admissible characteristics and positive definite majorants.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Optional, Sequence, Tuple

import numpy as np

from apps.core.exceptions import NotInConeError, SpecError
from apps.lattice.tools.quadratic_form import (
    QuadraticForm,
    Vector,
    as_vector,
    denominator_lcm,
    primitive_integer_vector,
    signature,
)

logger = logging.getLogger(__name__)


class ConeKind(Enum):
    """Position of a vector relative to the closed cone"""
    INTERIOR = "interior"   # Q(c) < 0
    CUSP = "cusp"           # Q(c) = 0, rational, non-zero


@dataclass(frozen=True)
class ConeVector:
    """
    A cone parameter c with its classification.

    `c` is the exact rational vector (primitive integral for cusps). For an
    irrational interior vector `c` holds a rational vector on the same ray
    when one is known, else None; `real` always holds floating entries.
    """
    c: Optional[Vector]
    kind: ConeKind
    qc: Any
    anchor: Vector
    real: Tuple[float, ...]

    @property
    def is_cusp(self) -> bool:
        return self.kind is ConeKind.CUSP

    @property
    def is_interior(self) -> bool:
        return self.kind is ConeKind.INTERIOR

    @property
    def is_exact(self) -> bool:
        return self.c is not None

    @property
    def n(self) -> int:
        return len(self.real)

    def require_exact(self) -> Vector:
        if self.c is None:
            raise SpecError(f"cone vector {self.real} has no rational representative")
        return self.c

    def same_ray(self, other: "ConeVector") -> bool:
        """True when both vectors span the same ray."""
        if self.kind is not other.kind:
            return False
        if self.is_exact and other.is_exact:
            u, v = self.c, other.c
            pivot = next(i for i, x in enumerate(u) if x != 0)
            if v[pivot] == 0 or (u[pivot] > 0) != (v[pivot] > 0):
                return False
            ratio = v[pivot] / u[pivot]
            return all(y == ratio * x for x, y in zip(u, v))
        u, v = np.array(self.real), np.array(other.real)
        return bool(np.allclose(u / np.linalg.norm(u), v / np.linalg.norm(v), atol=1e-13))


@dataclass(frozen=True)
class Characteristics:
    """Lattice shift a and phase twist b."""
    a: Vector
    b: Vector

    @classmethod
    def of(cls, a: Sequence[Any], b: Sequence[Any]) -> "Characteristics":
        a, b = as_vector(a), as_vector(b)
        if len(a) != len(b):
            raise SpecError("characteristics a and b must have the same length")
        return cls(a, b)

    @property
    def denominator(self) -> int:
        return denominator_lcm(self.a + self.b)


# ============================================================================
# CLASSIFICATION
# ============================================================================

def classify_vector(Qf: QuadraticForm, c0: Sequence[Any], c: Sequence[Any]) -> Optional[ConeVector]:
    """
    Classify a rational vector relative to the component of {Q < 0} containing c0.

    Returns:
        ConeVector (Interior or Cusp, cusps rescaled to primitive integral
        form) or None when c lies in neither C_Q nor S_Q.
    """
    anchor = as_vector(c0)
    if Qf.Q(anchor) >= 0:
        raise SpecError(f"anchor {c0} must satisfy Q(c0) < 0")
    vec = as_vector(c)
    if all(x == 0 for x in vec):
        return None
    qc = Qf.Q(vec)
    if Qf.B(vec, anchor) >= 0:
        return None
    if qc < 0:
        return ConeVector(vec, ConeKind.INTERIOR, qc, anchor, tuple(float(x) for x in vec))
    if qc == 0:
        prim = tuple(Fraction(x) for x in primitive_integer_vector(vec))
        return ConeVector(prim, ConeKind.CUSP, Fraction(0), anchor, tuple(float(x) for x in prim))
    return None


def classify_real(Qf: QuadraticForm, c0: Sequence[Any], c: Sequence[float],
                  representative: Optional[Sequence[Any]] = None) -> Optional[ConeVector]:
    """
    Real-vector overload for interior points with irrational entries.

    A rational `representative` on the same ray may be supplied; it is
    carried for the exact sign tests of the expansion engine.
    """
    anchor = as_vector(c0)
    real = np.asarray(c, dtype=float)
    A = Qf.array
    qc = 0.5 * real @ A @ real
    scale = float(real @ real) * float(np.abs(A).max())
    if qc >= -1e-12 * scale or real @ A @ np.array(anchor, dtype=float) >= 0:
        return None
    rep = None
    if representative is not None:
        rep_cv = classify_vector(Qf, anchor, representative)
        if rep_cv is None or not rep_cv.is_interior:
            raise NotInConeError(f"representative {representative} is not interior")
        r = np.array(rep_cv.real)
        if not np.allclose(real / np.linalg.norm(real), r / np.linalg.norm(r), atol=1e-12):
            raise SpecError(f"representative {representative} is not on the ray of {tuple(c)}")
        rep = rep_cv.c
    return ConeVector(rep, ConeKind.INTERIOR, float(qc), anchor, tuple(float(x) for x in real))


def require_cone_vector(Qf: QuadraticForm, c0: Sequence[Any], c: Sequence[Any]) -> ConeVector:
    cv = classify_vector(Qf, c0, c)
    if cv is None:
        raise NotInConeError(f"{tuple(c)} is not in the cone anchored at {tuple(c0)}")
    return cv


def characteristic_admissible(Qf: QuadraticForm, c: ConeVector, a: Sequence[Any]) -> bool:
    """a ∈ R(c): always for interior c, B(c, a) ∉ Z for a cusp."""
    if c.is_interior:
        return True
    return Qf.B(c.c, as_vector(a)).denominator != 1


def interior_between(Qf: QuadraticForm, c1: ConeVector, c2: ConeVector) -> ConeVector:
    """c1 + c2 for two cusps of one component; Q(c1 + c2) = B(c1, c2) < 0."""
    if not (c1.is_cusp and c2.is_cusp):
        raise SpecError("interior_between expects two cusps")
    if Qf.B(c1.c, c2.c) >= 0:
        raise NotInConeError("cusps lie in opposite components (B(c1, c2) >= 0)")
    return require_cone_vector(Qf, c1.anchor, tuple(x + y for x, y in zip(c1.c, c2.c)))


# ============================================================================
# MAJORANTS
# ============================================================================

def majorant(Qf: QuadraticForm, c: ConeVector):
    """
    Gram matrix M of the majorant M(v) = Q(v) - B(c, v)^2 / (2 Q(c)),
    so that M(v) = 1/2 v^T M v.

    Exact (Fraction entries) for rational c, float otherwise. Positive
    definiteness is verified before returning.
    """
    if not c.is_interior:
        raise SpecError("majorant requires an interior cone vector")
    n = Qf.n
    if c.is_exact and isinstance(c.qc, Fraction):
        Ac = Qf.apply(c.c)
        M = tuple(tuple(Fraction(Qf.A[i][j]) - Ac[i] * Ac[j] / c.qc for j in range(n)) for i in range(n))
        if signature(M) != (n, 0):
            raise ArithmeticError("majorant is not positive definite")
        return M
    real = np.array(c.real)
    Ac = Qf.array @ real
    qc = 0.5 * real @ Qf.array @ real
    M = Qf.array - np.outer(Ac, Ac) / qc
    np.linalg.cholesky(M)
    return M


def majorant_array(Qf: QuadraticForm, c: ConeVector) -> np.ndarray:
    """Float Gram matrix of the majorant, using the real entries of c."""
    real = np.array(c.real)
    Ac = Qf.array @ real
    qc = 0.5 * real @ Qf.array @ real
    return Qf.array - np.outer(Ac, Ac) / qc
