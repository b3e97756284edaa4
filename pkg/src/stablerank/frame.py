"""Frames: functors N^r -> Vect over GF(p) stored on a finite box.

A frame keeps the value ``F(v)`` and the unit step maps ``F(v <= v + e_i)``
for every grid point ``0 <= v <= box``.  Past the box the functor is
constant with identity maps, so every query is answered by clamping.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .linalg import (
    Matrix,
    PreconditionError,
    Subspace,
    block_diag,
    check_prime,
    quotient_projection,
    quotient_section,
)

Point = tuple[int, ...]


def leq(v: Sequence, w: Sequence) -> bool:
    """Coordinatewise order on N^r and Q^r."""
    return all(a <= b for a, b in zip(v, w))


def unit(r: int, axis: int) -> Point:
    return tuple(1 if i == axis else 0 for i in range(r))


def add(v: Sequence, w: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(v, w))


def join(points: Iterable[Sequence]) -> tuple:
    """Componentwise maximum of a non-empty collection of points."""
    pts = list(points)
    return tuple(max(c) for c in zip(*pts))


def grid(box: Sequence[int]) -> Iterator[Point]:
    """All points ``0 <= v <= box`` in lexicographic order."""
    return itertools.product(*(range(b + 1) for b in box))


class Frame:
    """A frame F: N^r -> Vect_K given on the box ``0..box``.

    Args:
        r: Number of parameters.
        box: Upper corner of the stored grid (inclusive).
        p: Prime modulus of the field.
        dims: Dimension of ``F(v)`` per grid point; missing points are 0.
        steps: Matrix of ``F(v <= v + e_axis)`` keyed by ``(axis, v)`` for
            ``v[axis] < box[axis]``.  Entries between zero spaces may be
            omitted.
        check: Verify shapes and commutativity of every unit square.
    """

    def __init__(
        self,
        r: int,
        box: Sequence[int],
        p: int,
        dims: Mapping[Point, int],
        steps: Mapping[tuple[int, Point], Matrix],
        check: bool = True,
    ):
        if r < 1:
            raise ValueError("frames need at least one parameter")
        box = tuple(int(b) for b in box)
        if len(box) != r or any(b < 0 for b in box):
            raise ValueError(f"box {box} does not match r={r}")
        self.r = r
        self.box = box
        self.p = check_prime(p)
        self.dims = {v: int(dims.get(v, 0)) for v in grid(box)}
        if any(d < 0 for d in self.dims.values()):
            raise ValueError("dimensions must be non-negative")
        self.steps: dict[tuple[int, Point], Matrix] = {}
        for axis in range(r):
            for v in grid(box):
                if v[axis] >= box[axis]:
                    continue
                w = add(v, unit(r, axis))
                shape = (self.dims[w], self.dims[v])
                M = steps.get((axis, v))
                if M is None:
                    if shape[0] and shape[1]:
                        raise ValueError(f"missing step map along axis {axis} at {v}")
                    M = Matrix.zeros(*shape, p=self.p)
                elif M.shape != shape or M.p != self.p:
                    raise ValueError(f"step map along axis {axis} at {v} has shape {M.shape}, expected {shape}")
                self.steps[(axis, v)] = M
        self._cache: dict[tuple[Point, Point], Matrix] = {}
        if check:
            self.check_commutativity()

    # -- evaluation ---------------------------------------------------------

    def points(self) -> Iterator[Point]:
        return grid(self.box)

    def clamp(self, v: Sequence[int]) -> Point:
        return tuple(min(int(a), b) for a, b in zip(v, self.box))

    def dim(self, v: Sequence[int]) -> int:
        if any(a < 0 for a in v):
            return 0
        return self.dims[self.clamp(v)]

    def step(self, axis: int, v: Sequence[int]) -> Matrix:
        """``F(v <= v + e_axis)``; the identity once ``v`` leaves the box."""
        if any(a < 0 for a in v):
            w = add(v, unit(self.r, axis))
            return Matrix.zeros(self.dim(w), 0, self.p)
        c = self.clamp(v)
        if v[axis] >= self.box[axis]:
            return Matrix.identity(self.dims[c], self.p)
        return self.steps[(axis, c)]

    def map(self, v: Sequence[int], w: Sequence[int]) -> Matrix:
        """The structure map ``F(v <= w)``, composed axis by axis."""
        if not leq(v, w):
            raise ValueError(f"{tuple(v)} is not <= {tuple(w)}")
        a, b = self.clamp(v), self.clamp(w)
        key = (a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        M = Matrix.identity(self.dims[a], self.p)
        cur = list(a)
        for axis in range(self.r):
            while cur[axis] < b[axis]:
                M = self.steps[(axis, tuple(cur))] @ M
                cur[axis] += 1
        self._cache[key] = M
        return M

    # -- checks and comparisons -------------------------------------------

    def check_commutativity(self) -> None:
        for v in self.points():
            for m, n in itertools.combinations(range(self.r), 2):
                if v[m] >= self.box[m] or v[n] >= self.box[n]:
                    continue
                vm, vn = add(v, unit(self.r, m)), add(v, unit(self.r, n))
                lhs = self.steps[(n, vm)] @ self.steps[(m, v)]
                rhs = self.steps[(m, vn)] @ self.steps[(n, v)]
                if lhs != rhs:
                    raise ValueError(f"square at {v} along axes {m},{n} does not commute")

    def is_zero(self) -> bool:
        return not any(self.dims.values())

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return (
            self.r == other.r
            and self.box == other.box
            and self.p == other.p
            and self.dims == other.dims
            and self.steps == other.steps
        )

    def __hash__(self):
        return hash((self.r, self.box, self.p, tuple(sorted(self.dims.items()))))

    def __repr__(self):
        return f"Frame(r={self.r}, box={self.box}, p={self.p}, total_dim={self.total_dim()})"

    # -- reshaping ----------------------------------------------------------

    def extend(self, box: Sequence[int]) -> "Frame":
        """The same functor stored on a larger box."""
        box = tuple(int(b) for b in box)
        if not leq(self.box, box):
            raise ValueError(f"new box {box} must contain {self.box}")
        if box == self.box:
            return self
        return Frame.from_functions(self.r, box, self.p, self.dim, self.step, check=False)

    def refine(self, k: int) -> "Frame":
        """The frame ``m -> F(floor(m / k))``, i.e. the same tame functor at resolution alpha/k."""
        if k < 1:
            raise ValueError("refinement factor must be positive")
        if k == 1:
            return self
        box = tuple(k * b for b in self.box)

        def dim(m):
            return self.dim(tuple(a // k for a in m))

        def step(axis, m):
            lo = tuple(a // k for a in m)
            if (m[axis] + 1) // k == m[axis] // k:
                return Matrix.identity(self.dim(lo), self.p)
            return self.step(axis, lo)

        return Frame.from_functions(self.r, box, self.p, dim, step, check=False)

    @classmethod
    def from_functions(
        cls,
        r: int,
        box: Sequence[int],
        p: int,
        dim: Callable[[Point], int],
        step: Callable[[int, Point], Matrix],
        check: bool = True,
    ) -> "Frame":
        box = tuple(box)
        dims = {v: dim(v) for v in grid(box)}
        steps = {
            (axis, v): step(axis, v)
            for axis in range(r)
            for v in grid(box)
            if v[axis] < box[axis] and dims[v] and dims[add(v, unit(r, axis))]
        }
        return cls(r, box, p, dims, steps, check=check)


def zero_frame(r: int, p: int, box: Sequence[int] | None = None) -> Frame:
    return Frame(r, box or (0,) * r, p, {}, {})


def free_module(
    generators: Sequence[tuple[Sequence[int], int]],
    p: int,
    r: int | None = None,
    box: Sequence[int] | None = None,
) -> Frame:
    """Free frame on generators ``[(v_i, m_i)]``, i.e. the sum of ``K(v_i, -)^{m_i}``.

    The basis of ``F(w)`` lists the generator slots with ``v_i <= w`` in input
    order; every structure map sends a slot to itself.
    """
    gens = [(tuple(int(a) for a in v), int(m)) for v, m in generators]
    if r is None:
        if not gens and box is None:
            raise ValueError("cannot infer r for an empty generator list")
        r = len(gens[0][0]) if gens else len(box)
    if box is None:
        box = join(v for v, _ in gens) if gens else (0,) * r
    box = tuple(box)
    if any(not leq(v, box) for v, _ in gens):
        raise PreconditionError("generators must lie inside the box")
    slots = [v for v, m in gens for _ in range(m)]

    def active(w):
        return [i for i, v in enumerate(slots) if leq(v, w)]

    def step(axis, w):
        src, dst = active(w), active(add(w, unit(r, axis)))
        M = np.zeros((len(dst), len(src)), dtype=np.int64)
        pos = {s: j for j, s in enumerate(dst)}
        for j, s in enumerate(src):
            M[pos[s], j] = 1
        return Matrix(M, p)

    return Frame.from_functions(r, box, p, lambda w: len(active(w)), step)


def bar_module(a: Sequence[int], b: Sequence[int], p: int) -> Frame:
    """The bar ``[a, b)``: K on ``{v : a <= v, not b <= v}``, identity maps inside."""
    a, b = tuple(int(x) for x in a), tuple(int(x) for x in b)
    if len(a) != len(b):
        raise ValueError("endpoints live in different dimensions")
    if not leq(a, b) or a == b:
        raise PreconditionError(f"bar needs a <= b and a != b, got {a}, {b}")
    r = len(a)

    def dim(v):
        return int(leq(a, v) and not leq(b, v))

    def step(axis, v):
        return Matrix.identity(1, p)

    return Frame.from_functions(r, b, p, dim, step)


def simple_module(w: Sequence[int], p: int) -> Frame:
    """The simple frame ``U_w``: K at ``w`` and 0 elsewhere."""
    w = tuple(int(x) for x in w)
    return Frame(len(w), tuple(x + 1 for x in w), p, {w: 1}, {})


def direct_sum(F: Frame, G: Frame) -> Frame:
    """Blockwise direct sum; the box is the componentwise max of both boxes."""
    if F.r != G.r or F.p != G.p:
        raise ValueError("direct sum needs frames with the same r and field")
    box = join([F.box, G.box])
    Fe, Ge = F.extend(box), G.extend(box)
    dims = {v: Fe.dims[v] + Ge.dims[v] for v in grid(box)}
    steps = {k: block_diag(Fe.steps[k], Ge.steps[k]) for k in Fe.steps}
    return Frame(F.r, box, F.p, dims, steps, check=False)


@dataclass
class Subframe:
    """A subfunctor of ``ambient`` together with its inclusion.

    Attributes:
        frame: The subfunctor as a frame in the RREF coordinates of each
            subspace.
        ambient: The frame it sits in.
        subspaces: The subspace of ``ambient(w)`` at every grid point.
    """

    frame: Frame
    ambient: Frame
    subspaces: dict[Point, Subspace]

    def inclusion(self, w: Sequence[int]) -> Matrix:
        return self.subspaces[self.ambient.clamp(w)].inclusion()


def submodule_generated(F: Frame, elements: Sequence[tuple[Sequence[int], Sequence[int]]]) -> Subframe:
    """Subfunctor of ``F`` generated by elements ``g_s in F(v_s)``.

    At each ``w`` the value is the span of ``F(v_s <= w)(g_s)`` over
    ``v_s <= w``.  Points are visited in lexicographic order, so it is
    enough to push the spans of the immediate predecessors.
    """
    by_point: dict[Point, list[np.ndarray]] = {}
    for v, g in elements:
        v = tuple(int(a) for a in v)
        if len(v) != F.r or not leq((0,) * F.r, v):
            raise PreconditionError(f"generator coordinate {v} is not a point of N^{F.r}")
        if not leq(v, F.box):
            raise PreconditionError(f"generator coordinate {v} lies outside the box {F.box}")
        vec = np.asarray(g, dtype=np.int64).reshape(-1) % F.p
        if vec.shape[0] != F.dims[v]:
            raise PreconditionError(f"element of length {vec.shape[0]} does not lie in F{v} of dim {F.dims[v]}")
        by_point.setdefault(v, []).append(vec)

    subs: dict[Point, Subspace] = {}
    for w in F.points():
        vecs = list(by_point.get(w, []))
        for axis in range(F.r):
            if w[axis] == 0:
                continue
            u = add(w, tuple(-x for x in unit(F.r, axis)))
            S = subs[u]
            if S.dim:
                vecs.extend((F.steps[(axis, u)].data @ S.basis.T % F.p).T)
        subs[w] = Subspace.span(vecs, F.dims[w], F.p)

    dims = {w: S.dim for w, S in subs.items()}
    steps = {}
    for (axis, w), M in F.steps.items():
        src, dst = subs[w], subs[add(w, unit(F.r, axis))]
        if src.dim and dst.dim:
            img = (M.data @ src.basis.T) % F.p
            steps[(axis, w)] = Matrix(img[list(dst.pivots)], F.p)
    frame = Frame(F.r, F.box, F.p, dims, steps, check=False)
    return Subframe(frame, F, subs)


def quotient(sub: Subframe) -> Frame:
    """The quotient frame ``ambient / sub`` in coset coordinates."""
    F = sub.ambient
    proj = {w: quotient_projection(S) for w, S in sub.subspaces.items()}
    sect = {w: quotient_section(S) for w, S in sub.subspaces.items()}
    dims = {w: proj[w].rows for w in F.points()}
    steps = {}
    for (axis, w), M in F.steps.items():
        steps[(axis, w)] = proj[add(w, unit(F.r, axis))] @ M @ sect[w]
    return Frame(F.r, F.box, F.p, dims, steps, check=False)
