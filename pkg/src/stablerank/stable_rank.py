"""The stabilized rank invariant and the min-rank problem.

Three routes to ``rank0-hat G(tau)``:

* one parameter: count bars that are not yet noise at ``tau``;
* any number of parameters: minimize the rank of subfunctors ``F`` with
  ``G[tau] <= F <= G`` by exhaustive search;
* the min-rank reformulation at a meeting point ``u``.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .barcode import bar_decomposition
from .contours import INFINITY, Contour, Standard, Truncated, as_point, point_leq
from .frame import join, leq
from .homology import minimal_generators
from .linalg import (
    BudgetExceeded,
    PreconditionError,
    Subspace,
    check_prime,
    gaussian_binomial,
    in_span,
    kernel,
    resolve_budget,
    subspaces_with_pivots,
)
from .stabilization import StepFunction, stabilize
from .tame import TameModule


# -- one parameter ------------------------------------------------------------


def bar_thresholds(G: TameModule, C: Contour) -> list[Fraction | float]:
    """For each bar of ``G``, the least ``tau`` at which it belongs to the noise.

    A bar ``[b, d)`` is noise at ``tau`` exactly when ``C(b, tau)`` is
    infinite or ``d <= C(b, tau)``.
    """
    if G.r != 1:
        raise PreconditionError(f"one-parameter formula needs r = 1, got r = {G.r}")
    bc = bar_decomposition(G.frame).scaled(G.alpha)
    out = []
    for b, d in bc.bars():
        target = INFINITY if d is None else (d,)
        out.append(C.first_reach((b,), target))
    return out


def _count_step(thresholds: Sequence) -> StepFunction:
    times = sorted({Fraction(0)} | {t for t in thresholds if t != math.inf})
    return stabilize((sum(1 for t in thresholds if t > d), d) for d in times)


def stable_rank_r1(G: TameModule, C: Contour) -> StepFunction:
    """``tau -> rank0-hat G(tau)`` for one parameter: bars not yet in the noise."""
    return _count_step(bar_thresholds(G, C))


def fingerprint_r1(G: TameModule, w, grid: Sequence[tuple[object, object]]) -> list[tuple[Fraction, Fraction, int]]:
    """``rank0 G[tau]`` for the standard contour ``w`` truncated at each ``u``.

    Args:
        G: One-parameter tame module.
        w: Positive direction of the standard contour.
        grid: Pairs ``(tau, u)``.

    Returns:
        Rows ``(tau, u, value)`` in the order of ``grid``.
    """
    if G.r != 1:
        raise PreconditionError(f"fingerprint needs r = 1, got r = {G.r}")
    w = Fraction(w)
    if w <= 0:
        raise PreconditionError("fingerprint direction must be positive")
    bars = bar_decomposition(G.frame).scaled(G.alpha).bars()
    rows = []
    for tau, u in grid:
        tau, u = Fraction(tau), Fraction(u)
        C = Truncated(Standard((w,)), (u,))
        value = 0
        for b, d in bars:
            t = C.first_reach((b,), INFINITY if d is None else (d,))
            value += t > tau
        rows.append((tau, u, value))
    return rows


# -- exhaustive search --------------------------------------------------------


@dataclass
class SearchStats:
    """Work done by one exhaustive search.

    Attributes:
        candidates: Number of candidate generators after deduplication.
        examined: Number of generating sets (or subspaces) tested.
        levels: Highest size level entered.
    """

    candidates: int = 0
    examined: int = 0
    levels: int = 0


def _normalize(x: np.ndarray, p: int) -> tuple[int, ...]:
    nz = np.flatnonzero(x)
    inv = pow(int(x[nz[0]]), -1, p)
    return tuple(int(c) for c in (x * inv) % p)


def _candidates(G: TameModule, gens, coords, bound, budget: int):
    """Elements ``sum_s lambda_s G(v_s <= join T)(g_s)`` placed at ``join T <= bound``.

    Any subfunctor between ``G[tau]`` and ``G`` can be enlarged, without
    raising its rank, to one generated by such elements, so searching
    over them is exact.  Coefficients are projective: the first is 1.
    """
    p, N = G.p, len(gens)
    total = (p**N - 1) // (p - 1)
    if total > budget:
        raise BudgetExceeded(total, budget, "candidate generators")
    seen = set()
    out = []
    for size in range(1, N + 1):
        for T in itertools.combinations(range(N), size):
            w = join(coords[s] for s in T)
            if not leq(w, bound):
                continue
            pushed = [G.map(coords[s], w).apply(gens[s][1]) for s in T]
            for lam in itertools.product(range(1, p), repeat=size - 1):
                x = pushed[0].copy()
                for c, y in zip(lam, pushed[1:]):
                    x = (x + c * y) % p
                if not x.any():
                    continue
                key = (G.grid_point(w), _normalize(x, p))
                if key in seen:
                    continue
                seen.add(key)
                out.append((w, np.array(key[1], dtype=np.int64)))
    return out


# process-pool state for parallel searches
_WORKER: dict = {}


def _init_worker(state):
    _WORKER.clear()
    _WORKER.update(state)


def _level_has_solution(first: int) -> bool:
    st = _WORKER
    M, k = st["M"], st["k"]
    for rest in itertools.combinations(range(first + 1, M), k - 1):
        if _accepts((first,) + rest, st["pushes"], st["needs"], st["p"]):
            return True
    return False


def _accepts(combo, pushes, needs, p) -> bool:
    for s, h in needs:
        vecs = [pushes[i][s] for i in combo if pushes[i][s] is not None]
        if not vecs or not in_span(vecs, h, p):
            return False
    return True


def stable_rank_bruteforce(
    G: TameModule,
    C: Contour,
    tau,
    budget: int | None = None,
    jobs: int = 1,
    stats: SearchStats | None = None,
) -> int:
    """``min rank0 F`` over subfunctors ``G[tau] <= F <= G``, by exhaustive search.

    Generating sets of size ``k = 0, 1, ...`` are drawn from the candidate
    elements; the first ``k`` for which some set generates a functor
    containing every ``h_s = G(v_s <= C(v_s, tau))(g_s)`` is returned.

    Args:
        G: Tame module.
        C: Contour defining the noise.
        tau: Radius.
        budget: Maximum number of generating sets examined in total;
            defaults to the environment setting.
        jobs: Worker processes for each size level.
        stats: Optional accumulator for work counters.

    Raises:
        BudgetExceeded: Before starting a level whose cumulative count would
            exceed ``budget``.
    """
    budget = resolve_budget(budget)
    stats = stats if stats is not None else SearchStats()
    p = G.p
    gens = minimal_generators(G.frame)
    coords = [G.coordinate(v) for v, _ in gens]
    needs = []
    for s, (c, (_, g)) in enumerate(zip(coords, gens)):
        t = C.eval(c, tau)
        if t is INFINITY:
            continue
        h = G.map(c, t).apply(g)
        if h.any():
            needs.append((s, t, h))
    if not needs:
        return 0
    bound = join(t for _, t, _ in needs)
    cands = _candidates(G, gens, coords, bound, budget)
    stats.candidates = len(cands)
    pushes = []
    for w, x in cands:
        row = {}
        for s, t, _ in needs:
            row[s] = [int(c) for c in G.map(w, t).apply(x)] if leq(w, t) else None
        pushes.append(row)
    need_vecs = [(s, [int(c) for c in h]) for s, _, h in needs]
    M = len(cands)
    spent = 0
    for k in range(0, len(needs) + 1):
        spent += math.comb(M, k)
        if spent > budget:
            raise BudgetExceeded(spent, budget, "generating sets")
        stats.levels = k
        stats.examined += math.comb(M, k)
        if k == 0:
            continue
        if jobs > 1 and M > 1:
            state = {"M": M, "k": k, "pushes": pushes, "needs": need_vecs, "p": p}
            with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(state,)) as ex:
                if any(ex.map(_level_has_solution, range(M - k + 1))):
                    return k
            continue
        for combo in itertools.combinations(range(M), k):
            if _accepts(combo, pushes, need_vecs, p):
                return k
    raise AssertionError("the pushed generators themselves always form a solution")


def critical_taus(G: TameModule, C: Contour) -> list[Fraction]:
    """Radii at which some ``C(v_s, tau)`` enters a new grid cell or becomes infinite.

    Between consecutive values ``G[tau]`` is constant, hence so is the
    stable rank.
    """
    top = G.box_corner()
    times = {Fraction(0)}
    for v, _ in minimal_generators(G.frame):
        times |= C.critical_times(G.coordinate(v), G.alpha, top)
    return sorted(times)


def stable_rank_function(
    G: TameModule,
    C: Contour,
    budget: int | None = None,
    method: str = "auto",
    jobs: int = 1,
) -> StepFunction:
    """The whole function ``tau -> rank0-hat G(tau)``.

    Args:
        G: Tame module.
        C: Contour.
        budget: Search budget per radius for the exhaustive method.
        method: ``"r1"`` (bar counting), ``"bruteforce"``, or ``"auto"``
            which picks the bar count when ``r = 1``.
        jobs: Worker processes for the exhaustive method.
    """
    if method == "auto":
        method = "r1" if G.r == 1 else "bruteforce"
    if method == "r1":
        return stable_rank_r1(G, C)
    if method != "bruteforce":
        raise ValueError(f"unknown method {method!r}")
    values = [(stable_rank_bruteforce(G, C, t, budget, jobs), t) for t in critical_taus(G, C)]
    return stabilize(values)


# -- min-rank -----------------------------------------------------------------


@dataclass
class MinRankInstance:
    """Find the least ``dim L`` with ``x_s in L + L_s`` for every ``s``.

    Attributes:
        n: Ambient dimension.
        p: Prime modulus.
        targets: Vectors ``x_s`` of length ``n``.
        subspaces: Subspaces ``L_s`` of ``GF(p)^n``.
    """

    n: int
    p: int
    targets: list[tuple[int, ...]]
    subspaces: list[Subspace] = field(default_factory=list)

    def __post_init__(self):
        self.p = check_prime(self.p)
        self.targets = [tuple(int(c) % self.p for c in x) for x in self.targets]
        if len(self.targets) != len(self.subspaces):
            raise ValueError("need one subspace per target")
        for x, L in zip(self.targets, self.subspaces):
            if len(x) != self.n or L.ambient_dim != self.n or L.p != self.p:
                raise ValueError("targets and subspaces must live in GF(p)^n")

    def pairs(self) -> set[tuple[tuple[int, ...], Subspace]]:
        return set(zip(self.targets, self.subspaces))

    def feasible(self, L: Subspace) -> bool:
        return _feasible(L.basis.tolist(), self._prepared(), self.p)

    def _prepared(self):
        out = []
        for x, Ls in zip(self.targets, self.subspaces):
            base = Ls.basis.tolist()
            if not in_span(base, x, self.p):
                out.append((base, list(x)))
        return out


def _feasible(L_rows, prepared, p) -> bool:
    return all(in_span(L_rows + base, x, p) for base, x in prepared)


def _pattern_has_solution(args) -> bool:
    n, pivots, p, prepared = args
    return any(_feasible(L.basis.tolist(), prepared, p) for L in subspaces_with_pivots(n, pivots, p))


def minrank_solve(inst: MinRankInstance, budget: int | None = None, jobs: int = 1, stats: SearchStats | None = None) -> int:
    """Smallest ``d`` such that some ``d``-dimensional ``L`` satisfies every constraint.

    Subspaces are enumerated dimension by dimension; the budget bounds the
    cumulative number of subspaces before each dimension starts.
    """
    budget = resolve_budget(budget)
    stats = stats if stats is not None else SearchStats()
    n, p = inst.n, inst.p
    prepared = inst._prepared()
    if not prepared:
        return 0
    spent = 0
    for d in range(0, n + 1):
        count = gaussian_binomial(n, d, p)
        spent += count
        if spent > budget:
            raise BudgetExceeded(spent, budget, "subspaces")
        stats.levels = d
        stats.examined += count
        patterns = list(itertools.combinations(range(n), d))
        args = [(n, pv, p, prepared) for pv in patterns]
        if jobs > 1 and len(patterns) > 1:
            with ProcessPoolExecutor(jobs) as ex:
                if any(ex.map(_pattern_has_solution, args)):
                    return d
        elif any(_pattern_has_solution(a) for a in args):
            return d
    raise AssertionError("the full space is always feasible")


def reduce_to_minrank(G: TameModule, C: Contour, tau, u: Sequence | None = None) -> MinRankInstance:
    """Min-rank instance at a meeting point ``u`` with ``v_s <= u <= C(v_s, tau)``.

    Targets are ``G(v_s <= u)(g_s)`` and constraints ``Ker G(u <= C(v_s, tau))``,
    or the whole space when ``C(v_s, tau)`` is infinite.  ``u`` defaults to
    the join of the generator coordinates.

    Raises:
        PreconditionError: If some generator has no valid meeting point at ``u``.
    """
    gens = minimal_generators(G.frame)
    coords = [G.coordinate(v) for v, _ in gens]
    targets = [C.eval(c, tau) for c in coords]
    if u is None:
        u = join(coords) if coords else (Fraction(0),) * G.r
    u = as_point(u)
    for c, t in zip(coords, targets):
        if not leq(c, u):
            raise PreconditionError(f"meeting point {_fmt(u)} is not above generator {_fmt(c)}")
        if not point_leq(u, t):
            raise PreconditionError(f"meeting point {_fmt(u)} is not below C({_fmt(c)}, tau) = {_fmt(t)}")
    n, p = G.evaluate(u), G.p
    xs, Ls = [], []
    for (_, g), c, t in zip(gens, coords, targets):
        xs.append(tuple(int(a) for a in G.map(c, u).apply(g)))
        Ls.append(Subspace.full(n, p) if t is INFINITY else kernel(G.map(u, t)))
    return MinRankInstance(n, p, xs, Ls)


def _fmt(v) -> str:
    if v is INFINITY:
        return "inf"
    return "(" + ",".join(str(x) for x in v) + ")"
