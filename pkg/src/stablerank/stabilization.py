"""Hierarchical stabilization and the interleaving distance on Mult(Q).

A multiset of non-negative rationals is a function Q -> N.  Two kinds of
such functions show up here:

* :class:`RationalMultiset` -- finite support, value 0 off the support;
* :class:`StepFunction` -- non-increasing, right-continuous, constant on
  ``[b_i, b_{i+1})``; this is how stabilized invariants are stored.

Both are piecewise constant with finitely many breakpoints, which is all the
distance computation needs.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Protocol, Sequence

from .linalg import rational

INF = math.inf


class PiecewiseConstant(Protocol):
    def __call__(self, tau: Fraction) -> int: ...

    def breakpoints(self) -> list[Fraction]: ...


class RationalMultiset:
    """Finite multi-subset of Q, i.e. a function Q -> N with finite support."""

    __slots__ = ("_support",)

    def __init__(self, support: Mapping | Iterable = ()):
        if isinstance(support, Mapping):
            items = ((rational(k), int(v)) for k, v in support.items())
        else:
            items = ((rational(k), 1) for k in support)
        acc: Counter = Counter()
        for k, v in items:
            if v < 0:
                raise ValueError("multiplicities must be non-negative")
            acc[k] += v
        self._support = {k: v for k, v in sorted(acc.items()) if v > 0}

    @property
    def support(self) -> dict[Fraction, int]:
        return dict(self._support)

    def __call__(self, tau) -> int:
        return self._support.get(Fraction(tau), 0)

    def breakpoints(self) -> list[Fraction]:
        return list(self._support)

    def rank(self) -> int:
        return sum(self._support.values())

    def __eq__(self, other):
        if not isinstance(other, RationalMultiset):
            return NotImplemented
        return self._support == other._support

    def __hash__(self):
        return hash(tuple(self._support.items()))

    def __repr__(self):
        inner = ", ".join(f"{k}: {v}" for k, v in self._support.items())
        return f"RationalMultiset({{{inner}}})"


@dataclass(frozen=True)
class StepFunction:
    """Non-increasing step function on ``[0, inf)``.

    ``values[i]`` holds on ``[breakpoints[i], breakpoints[i+1])``; the last
    value holds up to infinity.  Consecutive equal values are merged on
    construction, so equal functions compare equal.
    """

    breakpoints_: tuple[Fraction, ...]
    values: tuple[int, ...]

    def __init__(self, breakpoints: Sequence, values: Sequence[int]):
        bps = [rational(b) for b in breakpoints]
        vals = [int(v) for v in values]
        if not bps or len(bps) != len(vals):
            raise ValueError("need one value per breakpoint and at least one breakpoint")
        if bps[0] != 0:
            raise ValueError("the first breakpoint must be 0")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise ValueError("values must be non-increasing")
        if any(v < 0 for v in vals):
            raise ValueError("values must be natural numbers")
        merged_b, merged_v = [bps[0]], [vals[0]]
        for b, v in zip(bps[1:], vals[1:]):
            if v != merged_v[-1]:
                merged_b.append(b)
                merged_v.append(v)
        object.__setattr__(self, "breakpoints_", tuple(merged_b))
        object.__setattr__(self, "values", tuple(merged_v))

    @classmethod
    def constant(cls, value: int) -> "StepFunction":
        return cls([0], [value])

    def __call__(self, tau) -> int:
        tau = Fraction(tau)
        if tau < 0:
            raise ValueError("step functions are defined on non-negative rationals")
        out = self.values[0]
        for b, v in zip(self.breakpoints_, self.values):
            if b > tau:
                break
            out = v
        return out

    def breakpoints(self) -> list[Fraction]:
        return list(self.breakpoints_)

    def items(self) -> list[tuple[Fraction, int]]:
        return list(zip(self.breakpoints_, self.values))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tau", "value"])
        for b, v in self.items():
            w.writerow([str(b), v])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "StepFunction":
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        if rows and rows[0] == ["tau", "value"]:
            rows = rows[1:]
        return cls([Fraction(r[0]) for r in rows], [int(r[1]) for r in rows])

    def __repr__(self):
        body = ", ".join(f"{b}: {v}" for b, v in self.items())
        return f"StepFunction({body})"


def stabilize(candidates: Iterable[tuple[int, object]]) -> StepFunction:
    """tau -> min{value : distance <= tau} over a finite candidate list.

    Each candidate is a pair ``(f(y), d(x, y))``; the list must contain the
    centre ``x`` itself at distance 0.
    """
    pairs = sorted((rational(d), int(v)) for v, d in candidates)
    if not pairs:
        raise ValueError("cannot stabilize over an empty candidate list")
    if pairs[0][0] != 0:
        raise ValueError("candidate list must contain the centre at distance 0")
    bps: list[Fraction] = []
    vals: list[int] = []
    best = None
    for d, v in pairs:
        if best is None or v < best:
            best = v
            if bps and bps[-1] == d:
                vals[-1] = v
            else:
                bps.append(d)
                vals.append(v)
    return StepFunction(bps, vals)


def _probe_points(points: Iterable[Fraction]) -> list[Fraction]:
    # every breakpoint, a point inside each gap, and a point past the last one
    pts = sorted({q for q in points if q >= 0} | {Fraction(0)})
    probes = list(pts)
    probes += [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    probes.append(pts[-1] + 1)
    return probes


def epsilon_close(f: PiecewiseConstant, g: PiecewiseConstant, eps) -> bool:
    """``g(t) >= f(t+eps)`` and ``f(t) >= g(t+eps)`` for every rational t >= 0."""
    eps = rational(eps)
    bf, bg = f.breakpoints(), g.breakpoints()
    probes = _probe_points(bf + bg + [b - eps for b in bf + bg])
    return all(g(t) >= f(t + eps) and f(t) >= g(t + eps) for t in probes)


def distance_candidates(f: PiecewiseConstant, g: PiecewiseConstant) -> list[Fraction]:
    """The values of eps at which eps-closeness of ``f`` and ``g`` can change."""
    bf = set(f.breakpoints()) | {Fraction(0)}
    bg = set(g.breakpoints()) | {Fraction(0)}
    cands = {abs(s - t) for s in bf for t in bg}
    cands |= {abs(s - t) for s in bf for t in bf}
    cands |= {abs(s - t) for s in bg for t in bg}
    return sorted(cands)


def interleaving_infimum(f: PiecewiseConstant, g: PiecewiseConstant) -> tuple[Fraction | float, bool]:
    """Exact interleaving distance together with whether it is attained.

    Feasibility is constant on each open gap between consecutive candidates,
    so scanning the candidates and one probe per gap finds the infimum.
    For non-increasing step functions the infimum is always attained.
    """
    cands = distance_candidates(f, g)
    for i, c in enumerate(cands):
        if epsilon_close(f, g, c):
            return c, True
        nxt = cands[i + 1] if i + 1 < len(cands) else c + 2
        if epsilon_close(f, g, (c + nxt) / 2):
            return c, False
    return INF, False


def interleaving_distance(f: PiecewiseConstant, g: PiecewiseConstant) -> Fraction | float:
    """inf{eps : f and g are eps-close}, or ``math.inf`` when no eps works."""
    return interleaving_infimum(f, g)[0]
