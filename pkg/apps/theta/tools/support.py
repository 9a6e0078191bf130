"""
Theta Support Tool
Finite enumeration of the lattice points a + Z^n carrying a non-zero sign
weight sgn B(c1, l) - sgn B(c2, l) and exponent Q(l) below an order N.

Two strategies cover every cone pair:
  - two interior vectors: the sign region satisfies Q >= eps M for the
    majorant M of c1 + c2, so an ellipsoid of M-radius N/eps contains it
  - a cusp c against an interior vector: every point splits uniquely as
    mu + m c with mu in a slab 0 <= t(mu) < 1, the slab points lie in a
    majorant ellipsoid and each line is finite because B(c, .) is constant
    along it
Two cusps are joined through the interior vector c1 + c2.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Sequence, Set, Tuple

import numpy as np

from apps.core.exceptions import BoundaryOverrideViolation, SpecError
from apps.lattice.tools.cone import ConeVector, interior_between, majorant_array
from apps.lattice.tools.enumeration import ellipsoid_points, min_ratio_on_sign_region
from apps.lattice.tools.quadratic_form import QuadraticForm, Vector, as_fraction
from apps.theta.tools.spec import ThetaSpec

logger = logging.getLogger(__name__)

# Sign regions flatter than this are treated as degenerate.
_MIN_RATIO = 1e-12


@dataclass(frozen=True)
class SupportPoint:
    """A lattice point with non-zero weight."""
    ell: Vector
    weight: int
    exponent: Fraction


def _sign(x: Any) -> int:
    return int(x > 0) - int(x < 0)


def direction(c: ConeVector) -> Tuple[Any, ...]:
    """Exact entries when a rational vector is known, floats otherwise."""
    return c.c if c.is_exact else c.real


def pair_weight(Qf: QuadraticForm, c1: ConeVector, c2: ConeVector, ell: Sequence[Any]) -> int:
    return _sign(Qf.B(direction(c1), ell)) - _sign(Qf.B(direction(c2), ell))


# ============================================================================
# BOUNDARY LINES
# ============================================================================

def _check_boundary_line(spec: ThetaSpec, mu: Vector, cusp: ConeVector):
    """
    Every hat layer must vanish on the whole line mu + Z c.

    A layer of degree k restricted to the line is a polynomial of degree k in
    m, so vanishing at m = 0..k suffices.
    """
    if not spec.boundary_override:
        raise BoundaryOverrideViolation(
            f"B(c, l) = 0 on the line through {mu} but the characteristic is not overridden"
        )
    for j, layer in spec.fhat.layers:
        for m in range(layer.d + 1):
            point = tuple(x + m * ci for x, ci in zip(mu, cusp.c))
            re, im = layer.evaluate_parts(point)
            if re != 0 or im != 0:
                raise BoundaryOverrideViolation(
                    f"hat layer {j} does not vanish on the boundary line through {mu}",
                    {'point': [str(x) for x in point], 'cusp': [str(x) for x in cusp.c]},
                )


# ============================================================================
# STRATEGIES
# ============================================================================

def _slab_candidates(spec: ThetaSpec, interior: ConeVector, cusp: ConeVector, N: Fraction) -> Set[Vector]:
    """Points of the pair (interior, cusp) with non-zero pair weight and Q < N."""
    Qf = spec.Qf
    a = spec.a
    ci = direction(interior)
    cc = cusp.c
    b_ic = Qf.B(ci, cc)
    q_i = Qf.Q(ci)
    if not b_ic < 0:
        raise SpecError("interior vector and cusp lie in different components")
    radius = float(N) + float(b_ic) ** 2 / (2 * abs(float(q_i)))
    if radius < 0:
        return set()

    gram = majorant_array(Qf, interior)
    out: Set[Vector] = set()
    slab_count = 0
    for z in ellipsoid_points(gram, [float(x) for x in a], 2 * radius):
        mu = tuple(x + k for x, k in zip(a, z))
        q_mu = Qf.Q(mu)
        if q_mu >= N:
            continue
        t = Qf.B(ci, mu) / b_ic
        if not 0 <= t < 1:
            continue
        slab_count += 1
        slope = Qf.B(cc, mu)
        s = _sign(slope)
        if s == 0:
            _check_boundary_line(spec, mu, cusp)
            continue
        if s > 0:
            m = 0
            while q_mu + m * slope < N:
                out.add(tuple(x + m * y for x, y in zip(mu, cc)))
                m += 1
        else:
            if t == 0:
                out.add(mu)
            m = -1
            while q_mu + m * slope < N:
                out.add(tuple(x + m * y for x, y in zip(mu, cc)))
                m -= 1
    logger.debug(f"slab: {slab_count} slab points, {len(out)} candidates below {N}")
    return out


def _interior_candidates(spec: ThetaSpec, N: Fraction) -> Set[Vector]:
    """Points between two interior vectors with Q < N."""
    if N <= 0:
        return set()
    Qf = spec.Qf
    A = Qf.array
    r1, r2 = np.array(spec.c1.real), np.array(spec.c2.real)
    mid = r1 + r2
    Am = A @ mid
    gram = A - np.outer(Am, Am) / (0.5 * mid @ A @ mid)
    eps = min_ratio_on_sign_region(A, gram, A @ r1, A @ r2)
    if eps <= _MIN_RATIO:
        raise SpecError(f"sign region ratio {eps:.3e} is degenerate")
    radius = 2 * float(N) / (eps * (1 - 1e-9))
    out: Set[Vector] = set()
    for z in ellipsoid_points(gram, [float(x) for x in spec.a], radius):
        ell = tuple(x + k for x, k in zip(spec.a, z))
        if Qf.Q(ell) < N:
            out.add(ell)
    logger.debug(f"double interior: eps={eps:.4g}, {len(out)} candidates below {N}")
    return out


# ============================================================================
# ENTRY POINT
# ============================================================================

def theta_support(spec: ThetaSpec, N: Any) -> List[SupportPoint]:
    """
    Every l in a + Z^n with non-zero weight and Q(l) < N, ascending by (Q(l), l).

    Raises:
        BoundaryOverrideViolation: a boundary line with non-vanishing
            polynomial was met.
        EnumerationBoundError: the ellipsoid holds too many points.
    """
    N = as_fraction(N)
    if spec.is_trivial:
        return []
    c1, c2 = spec.c1, spec.c2
    if c1.is_interior and c2.is_interior:
        candidates = _interior_candidates(spec, N)
    elif c1.is_cusp and c2.is_cusp:
        mid = interior_between(spec.Qf, c1, c2)
        candidates = _slab_candidates(spec, mid, c1, N) | _slab_candidates(spec, mid, c2, N)
    else:
        interior, cusp = (c1, c2) if c1.is_interior else (c2, c1)
        candidates = _slab_candidates(spec, interior, cusp, N)

    points = []
    for ell in candidates:
        w = pair_weight(spec.Qf, c1, c2, ell)
        if w:
            points.append(SupportPoint(ell, w, spec.Qf.Q(ell)))
    points.sort(key=lambda p: (p.exponent, p.ell))
    return points


def support_arrays(points: Sequence[SupportPoint], n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(l, weight, Q(l)) as float arrays for the numeric evaluators."""
    ells = np.array([[float(x) for x in p.ell] for p in points], dtype=float).reshape(-1, n)
    weights = np.array([p.weight for p in points], dtype=float)
    exps = np.array([float(p.exponent) for p in points], dtype=float)
    return ells, weights, exps

