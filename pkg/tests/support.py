"""Random builders and independent oracles shared by the tests."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import numpy as np

from stablerank.barcode import Barcode
from stablerank.contours import Standard, Truncated
from stablerank.frame import Frame, free_module, quotient, submodule_generated
from stablerank.hardness import Graph
from stablerank.linalg import Matrix
from stablerank.tame import TameModule

HALF = Fraction(1, 2)


# -- random inputs ------------------------------------------------------------


def random_frame_r1(rng: random.Random, max_dim: int = 4, max_box: int = 6, p: int = 2) -> Frame:
    """One-parameter frame with arbitrary random step matrices."""
    box = rng.randint(0, max_box)
    dims = {(v,): rng.randint(0, max_dim) for v in range(box + 1)}
    steps = {}
    for v in range(box):
        shape = (dims[(v + 1,)], dims[(v,)])
        steps[(0, (v,))] = Matrix(np.array([[rng.randrange(p) for _ in range(shape[1])] for _ in range(shape[0])], dtype=np.int64).reshape(shape), p)
    return Frame(1, (box,), p, dims, steps)


def random_frame(rng: random.Random, r: int, max_gens: int = 3, max_coord: int = 2, p: int = 2) -> Frame:
    """Free frame on random generators modulo random relations (dims <= max_gens)."""
    k = rng.randint(1, max_gens)
    gens = [(tuple(rng.randint(0, max_coord) for _ in range(r)), 1) for _ in range(k)]
    box = tuple(max_coord + 1 for _ in range(r))
    P = free_module(gens, p, r=r, box=box)
    rels = []
    for _ in range(rng.randint(0, 2)):
        v = tuple(rng.randint(0, b) for b in box)
        d = P.dim(v)
        if d:
            rels.append((v, [rng.randrange(p) for _ in range(d)]))
    return quotient(submodule_generated(P, rels))


def random_module(rng: random.Random, r: int, p: int = 2) -> TameModule:
    if r == 1:
        F = random_frame_r1(rng, max_dim=3, max_box=4, p=p)
    else:
        F = random_frame(rng, r, p=p)
    return TameModule(F, rng.choice([Fraction(1), HALF]))


def random_barcode(rng: random.Random, max_bars: int = 5, top: int = 8) -> Barcode:
    fin, inf = [], []
    for _ in range(rng.randint(0, max_bars)):
        b = rng.randint(0, top - 1)
        if rng.random() < 0.25:
            inf.append(b)
        else:
            fin.append((b, rng.randint(b + 1, top)))
    return Barcode(fin, inf)


def random_contour(rng: random.Random, r: int):
    w = tuple(rng.choice([HALF, Fraction(1), Fraction(2)]) for _ in range(r))
    C = Standard(w)
    if rng.random() < 0.4:
        u = tuple(Fraction(rng.randint(1, 8), 2) for _ in range(r))
        C = Truncated(C, u)
    return C


def all_graphs(n: int):
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [e for i, e in enumerate(pairs) if mask >> i & 1])


def random_graph(rng: random.Random, n: int, prob: float = 0.5) -> Graph:
    return Graph(n, [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < prob])


# -- oracles ------------------------------------------------------------------


def gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) of bitmask rows."""
    rank = 0
    rows = list(rows)
    while rows:
        pivot = rows.pop()
        if pivot == 0:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank


def exhaustive_minrank_gf2(X: Graph) -> int:
    """min rank over all 0/1 matrices with unit diagonal and zeros on edges."""
    n = X.n
    free = [(s, t) for s in range(n) for t in range(n) if s != t and not X.adjacent(s + 1, t + 1)]
    best = n
    for mask in range(1 << len(free)):
        rows = [1 << s for s in range(n)]
        for i, (s, t) in enumerate(free):
            if mask >> i & 1:
                rows[s] |= 1 << t
        best = min(best, gf2_rank(rows))
        if best == 1:
            break
    return best if n else 0


def ev_multiset(support: dict, t: Fraction) -> int:
    return support.get(t, 0)


def ev_step(items: list, t: Fraction) -> int:
    out = items[0][1]
    for b, v in items:
        if b <= t:
            out = v
    return out


def fine_grid_close(ev_f, ev_g, points: list[Fraction], eps: Fraction) -> bool:
    """eps-closeness checked at every multiple of 1/(2D) up to past the last breakpoint.

    ``D`` is the lcm of all denominators involved, so the grid hits every
    breakpoint, every shifted breakpoint and a point inside every gap.
    """
    D = 1
    for x in points + [eps]:
        D = math.lcm(D, Fraction(x).denominator)
    h = Fraction(1, 2 * D)
    top = max(points + [Fraction(0)]) + abs(eps) + 1
    k = 0
    while k * h <= top:
        t = k * h
        if ev_g(t) < ev_f(t + eps) or ev_f(t) < ev_g(t + eps):
            return False
        k += 1
    return True


def bar_rule(bars, tau, w=Fraction(1), u=None) -> int:
    """Count bars longer than ``tau`` (in contour time) and, if truncated, born before ``u - tau``."""
    count = 0
    for b, d in bars:
        length = math.inf if d is None else (d - b) / w
        if not length > tau:
            continue
        if u is not None and not b < u - tau * w:
            continue
        count += 1
    return count
