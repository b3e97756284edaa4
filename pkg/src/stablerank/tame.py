"""Tame functors Q^r -> Vect represented by a frame and a resolution alpha."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .frame import Frame, Point, leq
from .linalg import Matrix, rational


def floor_grid(v: Sequence, alpha: Fraction) -> Point:
    """``floor(v / alpha)`` coordinatewise."""
    return tuple(math.floor(rational(x) / alpha) for x in v)


@dataclass(frozen=True)
class TameModule:
    """``G = F o floor(v / alpha)``: constant on right-open alpha-cubes.

    Args:
        frame: The alpha-frame ``F``.
        alpha: Resolution, a positive rational.
    """

    frame: Frame
    alpha: Fraction = Fraction(1)

    def __post_init__(self):
        a = rational(self.alpha)
        if a <= 0:
            raise ValueError("resolution must be positive")
        object.__setattr__(self, "alpha", a)

    @property
    def r(self) -> int:
        return self.frame.r

    @property
    def p(self) -> int:
        return self.frame.p

    def grid_point(self, v: Sequence) -> Point:
        return self.frame.clamp(floor_grid(v, self.alpha))

    def coordinate(self, g: Sequence[int]) -> tuple[Fraction, ...]:
        """Rational coordinate of a grid point."""
        return tuple(self.alpha * int(a) for a in g)

    def evaluate(self, v: Sequence) -> int:
        return self.frame.dim(self.grid_point(v))

    def map(self, v: Sequence, w: Sequence) -> Matrix:
        if not leq([rational(x) for x in v], [rational(x) for x in w]):
            raise ValueError(f"{tuple(v)} is not <= {tuple(w)}")
        return self.frame.map(self.grid_point(v), self.grid_point(w))

    def refined(self, k: int) -> "TameModule":
        """The same functor on the finer grid ``alpha / k``."""
        return TameModule(self.frame.refine(k), self.alpha / k)

    def box_corner(self) -> tuple[Fraction, ...]:
        """Rational coordinate past which the functor is constant."""
        return self.coordinate(self.frame.box)


def tame_evaluate(G: TameModule, v: Sequence) -> int:
    return G.evaluate(v)


def tame_map(G: TameModule, v: Sequence, w: Sequence) -> Matrix:
    return G.map(v, w)
