from __future__ import annotations

import math
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablerank.barcode import Barcode, bar_decomposition, barcode_frame
from stablerank.contours import (
    INFINITY,
    Standard,
    Truncated,
    contour_eval,
    parse_contour,
    verify_contour_axioms,
)
from stablerank.frame import bar_module, direct_sum, free_module, grid, quotient, submodule_generated
from stablerank.noise import domain_shift, noise_contains, shift
from stablerank.tame import TameModule
from support import HALF, random_contour, random_frame, random_module

rationals = st.builds(Q, st.integers(0, 16), st.sampled_from([1, 2, 3]))


def test_contour_eval_examples():
    S = Standard((1, 2))
    assert contour_eval(S, (1, 1), Q(1, 2)) == (Q(3, 2), Q(2))
    assert contour_eval(S, INFINITY, 3) is INFINITY
    T = Truncated(S, (3, 3))
    assert contour_eval(T, (0, 0), 1) == (1, 2)
    assert contour_eval(T, (1, 1), 1) == (2, 3)
    assert contour_eval(T, (1, 1), 2) is INFINITY
    assert contour_eval(T, (0, 5), 0) == (0, 5)
    assert contour_eval(Truncated(Standard((1,)), (2,)), (2,), 0) is INFINITY


def test_first_reach_examples():
    S = Standard((1, 2))
    assert S.first_reach((0, 0), (2, 2)) == 2
    assert S.first_reach((3, 3), (2, 2)) == 0
    assert Standard((1, 0)).first_reach((0, 0), (1, 1)) == math.inf
    T = Truncated(S, (1, 10))
    assert T.first_reach((0, 0), (5, 5)) == 5
    assert Truncated(Standard((1,)), (4,)).first_reach((1,), (9,)) == 3


@settings(max_examples=80)
@given(st.integers(0, 3), st.lists(rationals, min_size=2, max_size=2), st.lists(rationals, min_size=2, max_size=2), st.booleans())
def test_first_reach_is_the_least_time(seed, v, target, trunc):
    C = random_contour(random.Random(seed), 2)
    if trunc and not isinstance(C, Truncated):
        C = Truncated(C, (3, 3))
    v, target = tuple(v), tuple(target)
    t = C.first_reach(v, target)

    def reached(eps):
        c = C.eval(v, eps)
        return c is INFINITY or all(a <= b for a, b in zip(target, c))

    if t == math.inf:
        assert not reached(Q(1000))
        return
    assert reached(t)
    if t > 0:
        assert not reached(t - Q(1, 1000))


def test_parse_contour_round_trip():
    for text in ["standard 1,1", "standard 1/2,2", "truncate 3,4 (standard 1,1)", "truncate 5 (truncate 6 (standard 2))"]:
        C = parse_contour(text)
        assert str(C) == text
        assert parse_contour(str(C)) == C
    with pytest.raises(ValueError):
        parse_contour("shifted 1,1")
    with pytest.raises(ValueError):
        Truncated(Standard((1, 1)), (1,))


@pytest.mark.parametrize("seed", range(10))
def test_contours_satisfy_the_axioms(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 3)
    C = random_contour(rng, r)
    sample = [
        (tuple(Q(rng.randint(0, 10), 2) for _ in range(r)), Q(rng.randint(0, 6), 2), Q(rng.randint(0, 6), 2))
        for _ in range(50)
    ]
    rep = verify_contour_axioms(C, sample)
    assert rep.ok and rep.checked == 50
    if isinstance(C, Standard):
        assert rep.composition_equal


def test_axiom_checker_catches_a_bad_contour():
    class Backwards(Standard):
        def eval(self, v, eps):
            return tuple(a - eps for a in v)

    rep = verify_contour_axioms(Backwards((1,)), [((2,), 1, 1)])
    assert not rep.ok and any("expansion" in m for m in rep.violations)


def test_shift_of_a_bar_module():
    G = TameModule(barcode_frame(Barcode([(0, 2), (0, 5)], [1]), 2), 1)
    res = shift(G, Standard((1,)), HALF)
    assert res.shifted.alpha == HALF
    bc = bar_decomposition(res.shifted.frame).scaled(res.shifted.alpha)
    assert bc == Barcode([(HALF, 2), (HALF, 5)], [Q(3, 2)])
    assert noise_contains(res.quotient(), Standard((1,)), HALF)
    assert not noise_contains(res.quotient(), Standard((1,)), Q(1, 3))


def test_shift_of_a_free_module_is_free():
    G = TameModule(free_module([((1, 0), 1)], 2), 1)
    res = shift(G, Standard((1, 2)), Q(1, 3))
    target = (Q(4, 3), Q(2, 3))
    for v in [(Q(a, 3), Q(b, 3)) for a in range(9) for b in range(9)]:
        expected = int(all(x >= t for x, t in zip(v, target)))
        assert res.shifted.evaluate(v) == expected


def test_truncated_shift_drops_generators():
    G = TameModule(free_module([((0, 0), 1), ((3, 0), 1)], 2), 1)
    res = domain_shift(G, Truncated(Standard((1, 1)), (3, 1)), 1)
    assert [t is INFINITY for _, t in res.generators_used] == [False, True]
    assert res.shifted.evaluate((4, 4)) == 1
    full = shift(G, Truncated(Standard((1, 1)), (3, 1)), 1)
    assert full.shifted.evaluate((Q(9, 10), Q(9, 10))) == 0
    assert full.shifted.evaluate((1, 1)) == 1


def test_noise_examples():
    B = TameModule(bar_module((0,), (2,), 2), HALF)
    S = Standard((1,))
    assert noise_contains(B, S, 1)
    assert not noise_contains(B, S, Q(99, 100))
    T = Truncated(S, (Q(1, 2),))
    assert not noise_contains(B, T, 0)
    assert noise_contains(B, T, HALF)
    assert noise_contains(TameModule(free_module([], 2, r=2)), Standard((1, 1)), 0)
    assert not noise_contains(TameModule(free_module([((0,), 1)], 2)), S, 10**6)
    with pytest.raises(ValueError):
        noise_contains(B, Standard((1, 1)), 1)


@pytest.mark.parametrize("seed", range(25))
def test_shift_is_the_least_subfunctor_with_noisy_quotient(seed):
    rng = random.Random(400 + seed)
    r = rng.choice([1, 2])
    G = random_module(rng, r)
    C = random_contour(rng, r)
    tau = Q(rng.randint(0, 4), 2)
    res = shift(G, C, tau)
    assert noise_contains(res.quotient(), C, tau)
    H = res.ambient
    for _ in range(6):
        elems = []
        for _ in range(rng.randint(0, 3)):
            v = tuple(rng.randint(0, b) for b in H.frame.box)
            d = H.frame.dim(v)
            if d:
                elems.append((v, [rng.randrange(G.p) for _ in range(d)]))
        F = submodule_generated(H.frame, elems)
        contains = all(res.sub.subspaces[w] <= F.subspaces[w] for w in H.frame.points())
        noisy = noise_contains(TameModule(quotient(F), H.alpha), C, tau)
        assert noisy == contains


@pytest.mark.parametrize("seed", range(15))
def test_shift_is_monotone_in_tau(seed):
    rng = random.Random(500 + seed)
    r = rng.choice([1, 2])
    G = random_module(rng, r)
    C = random_contour(rng, r)
    a, b = sorted(Q(rng.randint(0, 6), 2) for _ in range(2))
    ra, rb = shift(G, C, a), shift(G, C, b)
    top = max(max(ra.shifted.box_corner()), max(rb.shifted.box_corner())) + 1
    pts = [tuple(Q(c, 4) for c in g) for g in grid(tuple(int(top * 4) for _ in range(r)))]
    for v in pts[:: max(1, len(pts) // 200)]:
        assert rb.shifted.evaluate(v) <= ra.shifted.evaluate(v) <= G.evaluate(v)


@pytest.mark.parametrize("seed", range(10))
def test_shift_is_additive(seed):
    rng = random.Random(600 + seed)
    F1, F2 = random_frame(rng, 2), random_frame(rng, 2)
    C = random_contour(rng, 2)
    tau = Q(rng.randint(0, 4), 2)
    s1 = shift(TameModule(F1), C, tau).shifted
    s2 = shift(TameModule(F2), C, tau).shifted
    s = shift(TameModule(direct_sum(F1, F2)), C, tau).shifted
    for v in grid((16, 16)):
        x = tuple(Q(c, 2) for c in v)
        assert s.evaluate(x) == s1.evaluate(x) + s2.evaluate(x)
