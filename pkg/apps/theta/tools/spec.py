"""
Theta Spec Tool
The (Q, f, c1, c2, a, b) bundle every theta operation consumes, with the
admissibility checks applied on construction.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Optional, Sequence

from apps.core.exceptions import InadmissibleCharacteristicError, SpecError
from apps.lattice.tools.cone import (
    Characteristics,
    ConeVector,
    characteristic_admissible,
    classify_real,
    require_cone_vector,
)
from apps.lattice.tools.polynomials import HatPoly, HomPoly, hat
from apps.lattice.tools.quadratic_form import QuadraticForm, as_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThetaSpec:
    """
    Holomorphic / completed theta series data.

    With boundary_override set, characteristics outside R(c1) ∩ R(c2) are
    accepted and the enumeration verifies that every boundary lattice line
    contributes zero.
    """
    Qf: QuadraticForm
    f: HomPoly
    c1: ConeVector
    c2: ConeVector
    chars: Characteristics
    boundary_override: bool = False
    fhat: HatPoly = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.Qf.n
        if self.f.n != n or self.c1.n != n or self.c2.n != n or len(self.chars.a) != n:
            raise SpecError("spec components disagree on the dimension")
        if self.c1.anchor != self.c2.anchor:
            raise SpecError("c1 and c2 must share one anchor")
        if not self.boundary_override:
            for c in (self.c1, self.c2):
                if not characteristic_admissible(self.Qf, c, self.chars.a):
                    raise InadmissibleCharacteristicError(
                        f"B(c, a) is integral for the cusp {c.c}",
                        {'cusp': [str(x) for x in c.c], 'a': [str(x) for x in self.chars.a]},
                    )
        object.__setattr__(self, 'fhat', hat(self.Qf, self.f))

    # ── shape ──

    @property
    def n(self) -> int:
        return self.Qf.n

    @property
    def d(self) -> int:
        return self.f.d

    @property
    def a(self):
        return self.chars.a

    @property
    def b(self):
        return self.chars.b

    @property
    def weight(self) -> Fraction:
        """n/2 + d."""
        return Fraction(self.n, 2) + self.d

    @property
    def is_trivial(self) -> bool:
        """c1 and c2 span the same ray, so the series vanishes."""
        return self.c1.same_ray(self.c2)

    @property
    def is_exact(self) -> bool:
        return self.c1.is_exact and self.c2.is_exact

    @property
    def admissible(self) -> bool:
        return all(characteristic_admissible(self.Qf, c, self.a) for c in (self.c1, self.c2))

    # ── derived specs ──

    def with_chars(self, a: Sequence[Any], b: Sequence[Any]) -> "ThetaSpec":
        return replace(self, chars=Characteristics.of(a, b))

    def with_cones(self, c1: ConeVector, c2: ConeVector) -> "ThetaSpec":
        return replace(self, c1=c1, c2=c2)


def build_spec(A: Sequence[Sequence[int]], f: HomPoly, anchor: Sequence[Any],
               c1: Sequence[Any], c2: Sequence[Any], a: Sequence[Any], b: Sequence[Any],
               boundary_override: bool = False, c1_real: Optional[Sequence[float]] = None,
               c2_real: Optional[Sequence[float]] = None) -> ThetaSpec:
    """
    Assemble a ThetaSpec from plain data.

    `c1` / `c2` are rational vectors. When `c*_real` is given the cone
    vector is the real one and the rational vector its representative on
    the same ray.
    """
    Qf = A if isinstance(A, QuadraticForm) else QuadraticForm(tuple(tuple(r) for r in A))
    cones = []
    for exact, real in ((c1, c1_real), (c2, c2_real)):
        if real is not None:
            cv = classify_real(Qf, anchor, real, representative=exact)
            if cv is None:
                raise SpecError(f"{tuple(real)} is not an interior point of the cone")
        else:
            cv = require_cone_vector(Qf, anchor, exact)
        cones.append(cv)
    spec = ThetaSpec(Qf, f, cones[0], cones[1], Characteristics(as_vector(a), as_vector(b)),
                     boundary_override)
    logger.debug(f"built spec n={spec.n} d={spec.d} kinds=({cones[0].kind.value}, {cones[1].kind.value})")
    return spec
