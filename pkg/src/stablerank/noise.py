"""Simple noise systems induced by contours: membership and shifts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .contours import INFINITY, Contour, ContourPoint
from .frame import Subframe, join, quotient, submodule_generated
from .homology import minimal_generators
from .tame import TameModule


@dataclass
class ShiftResult:
    """A subfunctor of ``G`` produced by a shift.

    Attributes:
        shifted: The subfunctor as a tame module.
        ambient: ``G`` on the same grid and box as ``shifted``.
        sub: Subspace data of ``shifted`` inside ``ambient``.
        generators_used: ``(v_s, C(v_s, tau))`` for every minimal generator
            of ``G``; the second entry is ``INFINITY`` for dropped ones.
    """

    shifted: TameModule
    ambient: TameModule
    sub: Subframe
    generators_used: list[tuple[tuple[Fraction, ...], ContourPoint]]

    def quotient(self) -> TameModule:
        """``G / shifted`` on the common grid."""
        return TameModule(quotient(self.sub), self.ambient.alpha)


def _lcm_denominator(values) -> int:
    k = 1
    for q in values:
        k = math.lcm(k, Fraction(q).denominator)
    return k


def shift(G: TameModule, C: Contour, tau) -> ShiftResult:
    """The tau-shift ``G[tau]``: generated by ``G(v_s <= C(v_s, tau))(g_s)``.

    The grid is refined so every finite ``C(v_s, tau)`` is a grid point and
    the box is enlarged to contain them.
    """
    _check_dims(G, C)
    gens = minimal_generators(G.frame)
    coords = [G.coordinate(v) for v, _ in gens]
    targets = [C.eval(c, tau) for c in coords]
    finite = [t for t in targets if t is not INFINITY]
    k = _lcm_denominator(x / G.alpha for t in finite for x in t)
    H = G.refined(k)
    grid_targets = [tuple(int(x / H.alpha) for x in t) for t in finite]
    box = join([H.frame.box] + grid_targets)
    H = TameModule(H.frame.extend(box), H.alpha)
    elements = []
    for (v, g), c, t in zip(gens, coords, targets):
        if t is INFINITY:
            continue
        gp = tuple(int(x / H.alpha) for x in t)
        src = tuple(int(x / H.alpha) for x in c)
        elements.append((gp, H.frame.map(src, gp).apply(g)))
    sub = submodule_generated(H.frame, elements)
    return ShiftResult(TameModule(sub.frame, H.alpha), H, sub, list(zip(coords, targets)))


def domain_shift(G: TameModule, C: Contour, tau) -> ShiftResult:
    """Subfunctor generated by the minimal generators with ``C(v_s, tau)`` finite, left in place."""
    _check_dims(G, C)
    gens = minimal_generators(G.frame)
    coords = [G.coordinate(v) for v, _ in gens]
    targets = [C.eval(c, tau) for c in coords]
    kept = [(v, g) for (v, g), t in zip(gens, targets) if t is not INFINITY]
    sub = submodule_generated(G.frame, kept)
    return ShiftResult(TameModule(sub.frame, G.alpha), G, sub, list(zip(coords, targets)))


def noise_contains(G: TameModule, C: Contour, eps) -> bool:
    """Whether ``G(v <= C(v, eps))`` is zero for every ``v`` with finite ``C(v, eps)``.

    Checking the grid points of the box suffices: on a right-open cube the
    map factors through the one at the cube's corner, and past the box the
    functor is constant.
    """
    _check_dims(G, C)
    F = G.frame
    for g in F.points():
        if not F.dims[g]:
            continue
        v = G.coordinate(g)
        c = C.eval(v, eps)
        if c is INFINITY:
            continue
        if not G.map(v, c).is_zero():
            return False
    return True


def _check_dims(G: TameModule, C: Contour) -> None:
    if C.r != G.r:
        raise ValueError(f"contour acts on Q^{C.r} but the module lives on Q^{G.r}")


def shift_dims_at(res: ShiftResult, v) -> int:
    """Dimension of the shifted module at a rational point."""
    return res.shifted.evaluate(v)

