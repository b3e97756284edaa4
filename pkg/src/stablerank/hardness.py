"""From graphs to min-rank instances and band functors.

Vertices are numbered ``1..n`` in the public interface and ``0..n-1``
internally.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .contours import Standard
from .frame import Frame, Point
from .linalg import (
    BudgetExceeded,
    Matrix,
    PreconditionError,
    Subspace,
    check_prime,
    quotient_projection,
    quotient_section,
)
from .stable_rank import MinRankInstance, SearchStats, minrank_solve, reduce_to_minrank, stable_rank_bruteforce
from .tame import TameModule


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``1..n``."""

    n: int
    edges: frozenset[tuple[int, int]] = frozenset()

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = set()
        for s, t in edges:
            s, t = int(s), int(t)
            if s == t:
                raise ValueError(f"self-loop at vertex {s}")
            if not (1 <= s <= n and 1 <= t <= n):
                raise ValueError(f"edge {{{s},{t}}} leaves the vertex set 1..{n}")
            norm.add((min(s, t), max(s, t)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(norm))

    def adjacent(self, s: int, t: int) -> bool:
        return (min(s, t), max(s, t)) in self.edges

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, itertools.combinations(range(1, n + 1), 2))

    @classmethod
    def edgeless(cls, n: int) -> "Graph":
        return cls(n)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, [(i, i % n + 1) for i in range(1, n + 1)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, [(i, i + 1) for i in range(1, n)])


def graph_subspaces(X: Graph, p: int) -> list[Subspace]:
    """``L_s = {y : y_t = 0 when t = s or t is adjacent to s}``."""
    out = []
    for s in range(1, X.n + 1):
        free = [t for t in range(1, X.n + 1) if t != s and not X.adjacent(s, t)]
        vecs = [np.eye(X.n, dtype=np.int64)[t - 1] for t in free]
        out.append(Subspace.span(vecs, X.n, p))
    return out


def graph_to_minrank(X: Graph, p: int) -> MinRankInstance:
    """Targets are the standard basis; ``L_s`` frees the non-neighbours of ``s``."""
    p = check_prime(p)
    targets = [tuple(int(c) for c in np.eye(X.n, dtype=np.int64)[s]) for s in range(X.n)]
    return MinRankInstance(X.n, p, targets, graph_subspaces(X, p))


def in_matrix_family(X: Graph, A: Matrix) -> bool:
    """``A_ss = 1`` on the diagonal and ``A_st = 0`` on every edge."""
    a = A.data
    if a.shape != (X.n, X.n):
        return False
    if any(a[s, s] != 1 for s in range(X.n)):
        return False
    return all(a[s - 1, t - 1] == 0 and a[t - 1, s - 1] == 0 for s, t in X.edges)


def chromatic_witness(X: Graph, coloring: Mapping[int, object], p: int = 2) -> Matrix:
    """0/1 matrix with ``M_st = 1`` exactly when ``s`` and ``t`` share a colour.

    Raises:
        PreconditionError: If the colouring misses a vertex or is not proper.
    """
    if set(coloring) != set(range(1, X.n + 1)):
        raise PreconditionError("colouring must assign a colour to every vertex 1..n")
    for s, t in sorted(X.edges):
        if coloring[s] == coloring[t]:
            raise PreconditionError(f"colouring is not proper: edge {{{s},{t}}} is monochromatic")
    M = [[int(coloring[s] == coloring[t]) for t in range(1, X.n + 1)] for s in range(1, X.n + 1)]
    return Matrix(np.array(M, dtype=np.int64).reshape(X.n, X.n), p)


@dataclass
class BandSpec:
    """Band parameter ``n`` and subspaces ``L_0..L_n`` of ``GF(p)^(n+1)``."""

    n: int
    subspaces: list[Subspace]

    def __post_init__(self):
        if self.n < 0 or len(self.subspaces) != self.n + 1:
            raise ValueError(f"band parameter {self.n} needs {self.n + 1} subspaces")
        if any(L.ambient_dim != self.n + 1 for L in self.subspaces):
            raise ValueError(f"subspaces must live in dimension {self.n + 1}")
        if len({L.p for L in self.subspaces}) != 1:
            raise ValueError("subspaces must share the field")

    @property
    def p(self) -> int:
        return self.subspaces[0].p

    @classmethod
    def from_graph(cls, X: Graph, p: int) -> "BandSpec":
        if X.n < 1:
            raise PreconditionError("band functors need at least one vertex")
        return cls(X.n - 1, graph_subspaces(X, p))


def _free_slots(n: int, a: int, b: int) -> list[int]:
    # generators s with (n - s, s) <= (a, b)
    return list(range(max(0, n - a), min(n, b) + 1))


def band_cell(n: int, a: int, b: int) -> str:
    """Which case of the defining surjection applies at ``(a, b)``."""
    if a <= 2 * n and b <= 2 * n and a + b < 3 * n:
        return "identity"
    if a <= 2 * n and n <= b <= 2 * n and a + b == 3 * n:
        return "quotient"
    return "zero"


def band_functor(spec: BandSpec) -> TameModule:
    """The 1-tame band functor as a quotient of ``P = sum_s K((n-s, s), -)``.

    The value at ``(a, b)`` is ``P(a, b)``, its quotient by ``L_{b-n}`` on
    the anti-diagonal ``a + b = 3n``, or zero.  Structure maps are
    ``pi_y . P(x <= y) . sigma_x`` with ``sigma`` a section of ``pi``.
    """
    n, p = spec.n, spec.p
    box = (2 * n + 1, 2 * n + 1)

    def proj_sect(a, b):
        slots = _free_slots(n, a, b)
        case = band_cell(n, a, b)
        k = len(slots)
        if case == "identity":
            return Matrix.identity(k, p), Matrix.identity(k, p)
        if case == "quotient":
            L = spec.subspaces[b - n]
            return quotient_projection(L), quotient_section(L)
        return Matrix.zeros(0, k, p), Matrix.zeros(k, 0, p)

    cache = {}

    def ps(v):
        if v not in cache:
            cache[v] = proj_sect(*v)
        return cache[v]

    def dim(v: Point) -> int:
        return ps(v)[0].rows

    def step(axis: int, v: Point) -> Matrix:
        w = (v[0] + 1, v[1]) if axis == 0 else (v[0], v[1] + 1)
        src, dst = _free_slots(n, *v), _free_slots(n, *w)
        P = np.zeros((len(dst), len(src)), dtype=np.int64)
        for j, s in enumerate(src):
            P[dst.index(s), j] = 1
        return ps(w)[0] @ Matrix(P, p) @ ps(v)[1]

    return TameModule(Frame.from_functions(2, box, p, dim, step), 1)


@dataclass
class PipelineResult:
    """Outcome of :func:`hardness_pipeline`.

    Attributes:
        n: Number of vertices.
        stable_rank: Exhaustive stable rank, or ``None`` if the budget ran out.
        minrank: Min-rank of the reduced instance, or ``None`` likewise.
        time_ms_brute: Wall-clock milliseconds of the stable-rank search,
            kept exact from the nanosecond counter.
        time_ms_minrank: Wall-clock milliseconds of the reduction plus
            min-rank search.
        budget_hit: Whether either solver hit its budget.
        work_brute: Generating sets examined by the stable-rank search.
        work_minrank: Subspaces examined by the min-rank search.
    """

    n: int
    stable_rank: int | None
    minrank: int | None
    time_ms_brute: Fraction
    time_ms_minrank: Fraction
    budget_hit: bool
    work_brute: int = 0
    work_minrank: int = 0
    instance: MinRankInstance | None = field(default=None, repr=False)

    @property
    def agree(self) -> bool:
        return self.stable_rank is not None and self.stable_rank == self.minrank


def hardness_pipeline(X: Graph, p: int = 2, budget: int | None = None, jobs: int = 1) -> PipelineResult:
    """Stable rank of the band functor of ``X`` next to the min-rank of its reduction.

    Uses the standard contour ``(1, 1)``, radius ``n - 1`` and meeting point
    ``(n - 1, n - 1)`` where ``n`` is the number of vertices.
    """
    spec = BandSpec.from_graph(X, p)
    G = band_functor(spec)
    C = Standard((1, 1))
    m = spec.n
    hit = False

    st_b = SearchStats()
    t0 = time.perf_counter_ns()
    try:
        sr = stable_rank_bruteforce(G, C, m, budget, jobs=jobs, stats=st_b)
    except BudgetExceeded:
        sr, hit = None, True
    t1 = time.perf_counter_ns()

    st_m = SearchStats()
    inst = reduce_to_minrank(G, C, m, (m, m))
    try:
        mr = minrank_solve(inst, budget, jobs=jobs, stats=st_m)
    except BudgetExceeded:
        mr, hit = None, True
    t2 = time.perf_counter_ns()

    if sr is not None and mr is not None and sr != mr:
        raise AssertionError(f"stable rank {sr} differs from min-rank {mr}")
    return PipelineResult(
        X.n, sr, mr, Fraction(t1 - t0, 10**6), Fraction(t2 - t1, 10**6), hit, st_b.examined, st_m.examined, inst
    )


BENCH_COLUMNS = ("graph", "n", "stable_rank", "minrank", "agree", "time_ms_brute", "time_ms_minrank", "budget_hit")


def bench_row(name: str, res: PipelineResult) -> list[str]:
    def opt(x):
        return "" if x is None else str(x)

    return [
        name,
        str(res.n),
        opt(res.stable_rank),
        opt(res.minrank),
        str(res.agree).lower(),
        str(res.time_ms_brute),
        str(res.time_ms_minrank),
        str(res.budget_hit).lower(),
    ]


def graph_family(names: Sequence[str]) -> list[tuple[str, Graph]]:
    """Named standard graphs such as ``K4``, ``E3`` (edgeless), ``C5``, ``P3``."""
    makers = {"K": Graph.complete, "E": Graph.edgeless, "C": Graph.cycle, "P": Graph.path}
    out = []
    for name in names:
        kind, size = name[0], int(name[1:])
        out.append((name, makers[kind](size)))
    return out
