"""
Ellipsoid Enumeration Tool
Fincke-Pohst traversal of shifted integer lattices inside positive definite
ellipsoids, plus the minimal ratio of an indefinite form against a positive
definite one on a two-hyperplane sign region.
"""

import logging
import math
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from apps.core.conf import setting
from apps.core.exceptions import EnumerationBoundError

logger = logging.getLogger(__name__)

# Relative slack on floating bounds; callers re-test membership exactly.
_SLACK = 1e-9


def ellipsoid_points(gram: np.ndarray, offset: Sequence[float], radius: float,
                     max_points: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """
    Yield every z in Z^n with (z + offset)^T G (z + offset) <= radius.

    The bound is widened by a small relative slack, so a superset may be
    produced; no point inside the ellipsoid is ever missed.

    Args:
        gram: symmetric positive definite n x n matrix G
        offset: real shift of the lattice
        radius: bound on the quadratic form
        max_points: cap on yielded points (EnumerationBoundError beyond it)
    """
    G = np.asarray(gram, dtype=float)
    n = G.shape[0]
    R = np.linalg.cholesky(G).T  # G = R^T R, R upper triangular
    off = np.asarray(offset, dtype=float)
    budget = radius * (1 + _SLACK) + _SLACK
    cap = max_points if max_points is not None else setting('MAX_POINTS')
    if budget < 0:
        return

    x = np.zeros(n)
    z = [0] * n
    count = 0

    def search(i: int, remaining: float) -> Iterator[Tuple[int, ...]]:
        nonlocal count
        s = float(R[i, i + 1:] @ x[i + 1:]) if i + 1 < n else 0.0
        half = math.sqrt(max(remaining, 0.0)) / R[i, i]
        center = -s / R[i, i]
        lo = math.ceil(center - half - off[i] - _SLACK)
        hi = math.floor(center + half - off[i] + _SLACK)
        for zi in range(lo, hi + 1):
            x[i] = zi + off[i]
            rest = remaining - (R[i, i] * x[i] + s) ** 2
            if rest < -_SLACK * (1 + budget):
                continue
            z[i] = zi
            if i == 0:
                count += 1
                if count > cap:
                    raise EnumerationBoundError(
                        f"ellipsoid enumeration exceeded {cap} points",
                        {'radius': radius, 'dimension': n},
                    )
                yield tuple(z)
            else:
                yield from search(i - 1, rest)

    yield from search(n - 1, budget)


def min_ratio_on_sign_region(A: np.ndarray, M: np.ndarray,
                             u1: np.ndarray, u2: np.ndarray) -> float:
    """
    min { v^T A v / v^T M v : (u1 . v)(u2 . v) <= 0, v != 0 } for M positive definite.

    The minimum is attained on one of the hyperplanes u_i . v = 0 (where it is
    the smallest generalized eigenvalue of the restricted pencil) or at a
    generalized eigenvector of (A, M) inside the open region.
    """
    candidates: List[float] = []
    for u in (u1, u2):
        basis = linalg.null_space(u.reshape(1, -1))
        if basis.shape[1] == 0:
            continue
        sub_a = basis.T @ A @ basis
        sub_m = basis.T @ M @ basis
        candidates.append(float(linalg.eigh(sub_a, sub_m, eigvals_only=True)[0]))
    values, vectors = linalg.eigh(A, M)
    for lam, vec in zip(values, vectors.T):
        if (u1 @ vec) * (u2 @ vec) < 0:
            candidates.append(float(lam))
    eps = min(candidates)
    logger.debug(f"sign-region ratio candidates {candidates} -> {eps}")
    return eps


def count_points(gram: np.ndarray, offset: Sequence[float], radius: float,
                 accept: Optional[Callable[[Tuple[int, ...]], bool]] = None) -> int:
    """Number of enumerated points passing `accept`; used by diagnostics."""
    return sum(1 for z in ellipsoid_points(gram, offset, radius) if accept is None or accept(z))
