"""Persistence contours: the standard contour and its truncations.

A contour ``C(v, eps)`` moves a point of ``Q^r`` forward by ``eps``; a
truncated contour sends everything at or beyond its corner ``u`` to
:data:`INFINITY`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .linalg import rational


class _Infinity:
    """The extra top element of ``Q^r_inf``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

ContourPoint = Union[tuple, _Infinity]


def as_point(v: Sequence) -> tuple[Fraction, ...]:
    return tuple(rational(x) for x in v)


def point_leq(a: ContourPoint, b: ContourPoint) -> bool:
    """Order on ``Q^r_inf``: coordinatewise, with everything below infinity."""
    if b is INFINITY:
        return True
    if a is INFINITY:
        return False
    return all(x <= y for x, y in zip(a, b))


class Contour:
    r: int

    def __call__(self, v: ContourPoint, eps) -> ContourPoint:
        return self.eval(v, eps)

    def eval(self, v: ContourPoint, eps) -> ContourPoint:
        raise NotImplementedError

    def first_reach(self, v: ContourPoint, target: ContourPoint) -> Fraction | float:
        """``min{eps >= 0 : C(v, eps) is infinite or target <= C(v, eps)}``.

        Returns ``math.inf`` when no ``eps`` qualifies.  The set of such
        ``eps`` is closed upward, so the minimum is attained when finite.
        """
        raise NotImplementedError

    def critical_times(self, v: tuple, alpha: Fraction, top: tuple) -> set[Fraction]:
        """Values of ``eps`` where the alpha-cell of ``C(v, eps)`` below ``top`` changes."""
        raise NotImplementedError


@dataclass(frozen=True)
class Standard(Contour):
    """``S_w(v, eps) = v + eps * w``."""

    w: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "w", as_point(self.w))
        if not self.w:
            raise ValueError("direction must have at least one coordinate")

    @property
    def r(self) -> int:
        return len(self.w)

    def eval(self, v, eps):
        eps = rational(eps)
        if v is INFINITY:
            return INFINITY
        return tuple(rational(a) + eps * b for a, b in zip(v, self.w))

    def first_reach(self, v, target):
        if v is INFINITY:
            return Fraction(0)
        if target is INFINITY:
            return math.inf
        best = Fraction(0)
        for a, t, d in zip(v, target, self.w):
            gap = rational(t) - rational(a) if t >= a else Fraction(0)
            if gap == 0:
                continue
            if d == 0:
                return math.inf
            best = max(best, gap / d)
        return best

    def critical_times(self, v, alpha, top):
        out = set()
        for a, d, t in zip(v, self.w, top):
            if d == 0:
                continue
            j = math.floor(a / alpha) + 1
            while j * alpha <= t:
                out.add((j * alpha - a) / d)
                j += 1
        return out

    def __str__(self):
        return "standard " + ",".join(str(x) for x in self.w)


@dataclass(frozen=True)
class Truncated(Contour):
    """``(C/u)(v, eps)``: infinite once ``u <= C(v, eps)``, otherwise ``C(v, eps)``."""

    inner: Contour
    u: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "u", as_point(self.u))
        if len(self.u) != self.inner.r:
            raise ValueError("truncation corner and contour have different dimensions")

    @property
    def r(self) -> int:
        return self.inner.r

    def eval(self, v, eps):
        x = self.inner.eval(v, eps)
        if x is INFINITY or point_leq(self.u, x):
            return INFINITY
        return x

    def first_reach(self, v, target):
        return min(self.inner.first_reach(v, target), self.inner.first_reach(v, self.u))

    def critical_times(self, v, alpha, top):
        cut = self.inner.first_reach(v, self.u)
        out = {t for t in self.inner.critical_times(v, alpha, top) if t < cut}
        if cut != math.inf:
            out.add(cut)
        return out

    def __str__(self):
        return "truncate " + ",".join(str(x) for x in self.u) + f" ({self.inner})"


def contour_eval(C: Contour, v: ContourPoint, eps) -> ContourPoint:
    return C.eval(v if v is INFINITY else as_point(v), eps)


_TRUNC = re.compile(r"^truncate\s+([^\s(]+)\s*\((.*)\)\s*$")
_STD = re.compile(r"^standard\s+(\S+)\s*$")


def parse_contour(text: str) -> Contour:
    """Parse ``"standard w1,..,wr"`` or ``"truncate u1,..,ur (inner)"``."""
    s = text.strip()
    m = _TRUNC.match(s)
    if m:
        return Truncated(parse_contour(m.group(2)), _coords(m.group(1)))
    m = _STD.match(s)
    if m:
        return Standard(_coords(m.group(1)))
    raise ValueError(f"cannot parse contour {text!r}")


def _coords(text: str) -> tuple[Fraction, ...]:
    return tuple(rational(x) for x in text.split(","))


@dataclass
class AxiomReport:
    """Outcome of :func:`verify_contour_axioms`.

    Attributes:
        checked: Number of sample triples examined.
        violations: Human-readable description of every failed check.
        composition_equal: Whether ``C(C(v,eps),tau) == C(v,eps+tau)`` held
            on every sample (true for standard contours).
    """

    checked: int = 0
    violations: list[str] = field(default_factory=list)
    composition_equal: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_contour_axioms(C: Contour, sample: Sequence[tuple[Sequence, object, object]]) -> AxiomReport:
    """Check expansion, monotonicity and subadditivity on sample triples ``(v, eps, tau)``.

    Monotonicity in ``v`` compares ``v`` with ``v + tau * (1, ..., 1)``.
    """
    rep = AxiomReport()
    for v, eps, tau in sample:
        v, eps, tau = as_point(v), rational(eps), rational(tau)
        rep.checked += 1
        c = C.eval(v, eps)
        if not point_leq(v, c):
            rep.violations.append(f"expansion fails at v={v}, eps={eps}")
        if not point_leq(c, C.eval(v, eps + tau)):
            rep.violations.append(f"monotonicity in eps fails at v={v}, eps={eps}, tau={tau}")
        v2 = tuple(a + tau for a in v)
        if not point_leq(c, C.eval(v2, eps)):
            rep.violations.append(f"monotonicity in v fails at v={v}, eps={eps}, v'={v2}")
        lhs, rhs = C.eval(c, tau), C.eval(v, eps + tau)
        if not point_leq(lhs, rhs):
            rep.violations.append(f"subadditivity fails at v={v}, eps={eps}, tau={tau}")
        if lhs != rhs:
            rep.composition_equal = False
    return rep
