"""Bars and one-parameter bar decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .frame import Frame, bar_module, direct_sum, free_module, zero_frame
from .linalg import PreconditionError, rational


@dataclass(frozen=True)
class Barcode:
    """A multiset of bars ``[birth, death)`` and infinite bars ``[birth, inf)``.

    Both lists are kept sorted, so equal multisets compare equal.
    """

    finite_bars: tuple[tuple[Fraction, Fraction], ...]
    infinite_bars: tuple[Fraction, ...]

    def __init__(self, finite_bars: Iterable = (), infinite_bars: Iterable = ()):
        fin = []
        for b, d in finite_bars:
            b, d = rational(b), rational(d)
            if not b < d:
                raise ValueError(f"bar [{b}, {d}) needs birth < death")
            fin.append((b, d))
        inf = [rational(b) for b in infinite_bars]
        object.__setattr__(self, "finite_bars", tuple(sorted(fin)))
        object.__setattr__(self, "infinite_bars", tuple(sorted(inf)))

    def __len__(self) -> int:
        return len(self.finite_bars) + len(self.infinite_bars)

    def rank0(self) -> int:
        return len(self)

    def bars(self) -> list[tuple[Fraction, Fraction | None]]:
        """All bars as ``(birth, death)`` with ``None`` for an infinite death."""
        return [(b, d) for b, d in self.finite_bars] + [(b, None) for b in self.infinite_bars]

    def count_containing(self, v, w) -> int:
        """Number of bars containing the whole interval ``[v, w]``."""
        v, w = Fraction(v), Fraction(w)
        n = sum(1 for b, d in self.finite_bars if b <= v and w < d)
        return n + sum(1 for b in self.infinite_bars if b <= v)

    def scaled(self, alpha) -> "Barcode":
        a = rational(alpha)
        return Barcode([(b * a, d * a) for b, d in self.finite_bars], [b * a for b in self.infinite_bars])

    def __repr__(self):
        parts = [f"[{b},{d})" for b, d in self.finite_bars] + [f"[{b},inf)" for b in self.infinite_bars]
        return "Barcode(" + " ".join(parts) + ")"


def _reduce(vec: list[int], pivots: dict[int, list[int]], p: int) -> list[int]:
    for lead, row in pivots.items():
        c = vec[lead]
        if c:
            vec = [(a - c * b) % p for a, b in zip(vec, row)]
    return vec


def bar_decomposition(F: Frame) -> Barcode:
    """Bars of a one-parameter frame in grid units.

    Runs the elder rule along ``0 -> 1 -> ... -> box``: at each step the
    alive vectors are pushed forward oldest first and reduced against the
    older images.  A vector that reduces to zero ends its bar; a complement
    of the image starts new bars.  Bars alive at the box never die.
    """
    if F.r != 1:
        raise PreconditionError(f"bar decomposition needs r = 1, got r = {F.r}")
    p, top = F.p, F.box[0]
    alive: list[tuple[int, list[int]]] = [(0, _unit(F.dims[(0,)], j)) for j in range(F.dims[(0,)])]
    finite = []
    for v in range(top):
        M = F.steps[(0, (v,))].data
        n = F.dims[(v + 1,)]
        pivots: dict[int, list[int]] = {}
        survivors = []
        for birth, x in sorted(alive, key=lambda t: t[0]):
            y = _reduce([int(c) for c in (M @ np.asarray(x, dtype=np.int64)) % p], pivots, p)
            lead = next((i for i, c in enumerate(y) if c), None)
            if lead is None:
                finite.append((birth, v + 1))
                continue
            inv = pow(y[lead], -1, p)
            row = [(c * inv) % p for c in y]
            pivots[lead] = row
            survivors.append((birth, row))
        for j in range(n):
            e = _reduce(_unit(n, j), pivots, p)
            lead = next((i for i, c in enumerate(e) if c), None)
            if lead is not None:
                inv = pow(e[lead], -1, p)
                row = [(c * inv) % p for c in e]
                pivots[lead] = row
                survivors.append((v + 1, row))
        alive = survivors
    return Barcode(finite, [b for b, _ in alive])


def _unit(n: int, j: int) -> list[int]:
    return [1 if i == j else 0 for i in range(n)]


def barcode_frame(barcode: Barcode, p: int, box: int | None = None) -> Frame:
    """Direct sum of the bars of an integer barcode as a one-parameter frame."""
    ends = [d for _, d in barcode.finite_bars] + list(barcode.infinite_bars) + [0]
    if any(Fraction(x).denominator != 1 for x in ends + [b for b, _ in barcode.finite_bars]):
        raise PreconditionError("barcode_frame needs integer endpoints; rescale first")
    top = int(max(ends)) if box is None else int(box)
    F = zero_frame(1, p, (top,))
    for b, d in barcode.finite_bars:
        F = direct_sum(F, bar_module((int(b),), (int(d),), p))
    for b in barcode.infinite_bars:
        F = direct_sum(F, free_module([((int(b),), 1)], p, r=1, box=(int(b),)))
    return F.extend((max(top, F.box[0]),))
