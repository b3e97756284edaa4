"""Koszul complexes, Betti diagrams, Euler characteristic and minimal generators."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .frame import Frame, Point, grid
from .linalg import Matrix, image, rank


@dataclass(frozen=True)
class KoszulComplex:
    """The Koszul complex of a frame at one grid point.

    Attributes:
        v: The grid point.
        subsets: ``subsets[i]`` lists the i-element subsets of the axes in
            lexicographic order; it fixes the block layout of degree ``i``.
        block_dims: ``block_dims[i][j]`` is ``dim F(v - e_S)`` for
            ``S = subsets[i][j]`` (0 when a coordinate goes negative).
        differentials: ``differentials[i]`` is ``delta_i`` from degree ``i``
            to degree ``i - 1`` for ``i = 1..r``; index 0 is unused.
    """

    v: Point
    subsets: list[list[tuple[int, ...]]]
    block_dims: list[list[int]]
    differentials: list[Matrix | None] = field(repr=False)

    @property
    def r(self) -> int:
        return len(self.v)

    def term_dim(self, i: int) -> int:
        return sum(self.block_dims[i]) if 0 <= i <= self.r else 0

    def rank_delta(self, i: int) -> int:
        if i < 1 or i > self.r:
            return 0
        return rank(self.differentials[i])

    def homology_dim(self, i: int) -> int:
        """``dim H_i = dim C_i - rank delta_i - rank delta_{i+1}``."""
        if i < 0 or i > self.r:
            return 0
        return self.term_dim(i) - self.rank_delta(i) - self.rank_delta(i + 1)

    def is_complex(self) -> bool:
        for i in range(2, self.r + 1):
            if not (self.differentials[i - 1] @ self.differentials[i]).is_zero():
                return False
        return True


def _shifted(v: Point, S: Sequence[int]) -> Point:
    return tuple(a - (1 if i in S else 0) for i, a in enumerate(v))


def koszul_at(F: Frame, v: Sequence[int]) -> KoszulComplex:
    """Koszul complex ``Delta F(v)`` with signed structure-map blocks.

    Block ``(T, S)`` of ``delta_i`` is ``(-1)^a F(v - e_S <= v - e_T)`` where
    ``a`` is the 1-based position in ``S`` of the single element of
    ``S \\ T``, and zero when ``T`` is not contained in ``S``.
    """
    v = tuple(int(a) for a in v)
    r = F.r
    subsets = [list(itertools.combinations(range(r), i)) for i in range(r + 1)]
    block_dims = [[F.dim(_shifted(v, S)) for S in subsets[i]] for i in range(r + 1)]
    diffs: list[Matrix | None] = [None]
    for i in range(1, r + 1):
        rows, cols = sum(block_dims[i - 1]), sum(block_dims[i])
        D = np.zeros((rows, cols), dtype=np.int64)
        row_off = np.concatenate([[0], np.cumsum(block_dims[i - 1])]).astype(int)
        col_off = np.concatenate([[0], np.cumsum(block_dims[i])]).astype(int)
        for cj, S in enumerate(subsets[i]):
            ds = block_dims[i][cj]
            if not ds:
                continue
            src = _shifted(v, S)
            for pos, x in enumerate(S, start=1):
                T = S[: pos - 1] + S[pos:]
                ti = subsets[i - 1].index(T)
                dt = block_dims[i - 1][ti]
                if not dt:
                    continue
                block = F.step(x, src).data
                sign = -1 if pos % 2 else 1
                D[row_off[ti] : row_off[ti] + dt, col_off[cj] : col_off[cj] + ds] = (sign * block) % F.p
        diffs.append(Matrix(D, F.p))
    return KoszulComplex(v, subsets, block_dims, diffs)


def scan_points(F: Frame):
    """Grid points where Koszul homology can be nonzero: ``0 <= v <= box + 1``."""
    return grid(tuple(b + 1 for b in F.box))


def betti_diagram(F: Frame, n: int) -> dict[Point, int]:
    """``beta_n F`` as a map from grid points to positive multiplicities."""
    if n < 0:
        raise ValueError("homological degree must be non-negative")
    if n > F.r:
        return {}
    return betti_diagrams(F)[n]


def betti_diagrams(F: Frame) -> list[dict[Point, int]]:
    """All Betti diagrams ``beta_0 .. beta_r`` from one scan, cached on the frame."""
    cached = getattr(F, "_betti", None)
    if cached is None:
        cached = [{} for _ in range(F.r + 1)]
        for v in scan_points(F):
            K = koszul_at(F, v)
            for n in range(F.r + 1):
                d = K.homology_dim(n)
                if d:
                    cached[n][v] = d
        F._betti = cached
    return [dict(d) for d in cached]


def betti_rank(F: Frame, n: int) -> int:
    """``rank_n F``: the total size of the n-th Betti diagram."""
    return sum(betti_diagram(F, n).values())


def euler_characteristic(F: Frame) -> int:
    return sum((-1) ** n * sum(d.values()) for n, d in enumerate(betti_diagrams(F)))


def outer_face_vanishes(F: Frame) -> bool:
    """Whether beta_0 and beta_1 vanish on the face one step past the box.

    Holds for every frame under the identity-past-the-box convention; kept
    as an explicit sanity check for hand-built inputs.
    """
    for v in scan_points(F):
        if all(a <= b for a, b in zip(v, F.box)):
            continue
        K = koszul_at(F, v)
        if K.homology_dim(0) or K.homology_dim(1):
            return False
    return True


def minimal_generators(F: Frame) -> list[tuple[Point, np.ndarray]]:
    """A minimal generating set, deterministic given ``F``.

    At each ``v`` the generators are standard basis vectors of ``F(v)`` at
    the non-pivot coordinates of the RREF of ``im delta_1``; their cosets
    form a basis of ``H_0(Delta F(v))``.
    """
    out = []
    for v in F.points():
        d = F.dims[v]
        if not d:
            continue
        K = koszul_at(F, v)
        if F.r and K.term_dim(1):
            piv = image(K.differentials[1]).pivots
        else:
            piv = ()
        for j in range(d):
            if j not in piv:
                e = np.zeros(d, dtype=np.int64)
                e[j] = 1
                out.append((v, e))
    return out


def rank0(F: Frame) -> int:
    return len(minimal_generators(F))


def structure_rank(F: Frame, v: Sequence[int], w: Sequence[int]) -> int:
    return rank(F.map(v, w))
