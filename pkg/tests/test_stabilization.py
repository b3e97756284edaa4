from __future__ import annotations

import math
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablerank.stabilization import (
    RationalMultiset,
    StepFunction,
    distance_candidates,
    epsilon_close,
    interleaving_distance,
    interleaving_infimum,
    stabilize,
)
from support import ev_multiset, ev_step, fine_grid_close

rationals = st.builds(Q, st.integers(0, 12), st.sampled_from([1, 2, 3]))


@st.composite
def multisets(draw):
    keys = draw(st.lists(rationals, max_size=3))
    return RationalMultiset({k: draw(st.integers(1, 3)) for k in keys})


@st.composite
def step_functions(draw):
    bps = sorted(set(draw(st.lists(rationals, max_size=3))) | {Q(0)})
    vals = sorted(draw(st.lists(st.integers(0, 4), min_size=len(bps), max_size=len(bps))), reverse=True)
    return StepFunction(bps, vals)


def test_multiset_basics():
    f = RationalMultiset({"1/2": 2, 3: 0, 1: 1})
    assert f.support == {Q(1, 2): 2, Q(1): 1}
    assert f(Q(1, 2)) == 2 and f(5) == 0
    assert f.rank() == 3
    assert RationalMultiset([1, 1, 2]) == RationalMultiset({1: 2, 2: 1})


def test_step_function_semantics():
    f = StepFunction([0, 2, 5], [3, 2, 1])
    assert [f(t) for t in (0, Q(19, 10), 2, 4, 5, 100)] == [3, 3, 2, 2, 1, 1]
    assert StepFunction([0, 1], [2, 2]) == StepFunction.constant(2)
    with pytest.raises(ValueError):
        StepFunction([0, 1], [1, 2])
    with pytest.raises(ValueError):
        StepFunction([1], [1])


def test_step_function_csv_round_trip():
    f = StepFunction([0, Q(3, 2), 4], [5, 2, 0])
    text = f.to_csv()
    assert text.splitlines() == ["tau,value", "0,5", "3/2,2", "4,0"]
    assert StepFunction.from_csv(text) == f


def test_stabilize_examples():
    assert stabilize([(5, 0)]) == StepFunction.constant(5)
    assert stabilize([(3, 0), (1, 2)]) == StepFunction([0, 2], [3, 1])
    assert stabilize([(2, 0), (2, 1), (0, 3)]) == StepFunction([0, 3], [2, 0])
    with pytest.raises(ValueError):
        stabilize([])
    with pytest.raises(ValueError):
        stabilize([(1, 1)])


@given(st.lists(st.tuples(st.integers(0, 6), rationals), max_size=6), st.integers(0, 6))
def test_stabilize_is_monotone_and_matches_definition(extra, centre):
    pairs = [(centre, Q(0))] + extra
    f = stabilize(pairs)
    assert list(f.values) == sorted(f.values, reverse=True)
    for t in [Q(k, 6) for k in range(0, 80)]:
        assert f(t) == min(v for v, d in pairs if d <= t)


def test_distance_examples():
    f = RationalMultiset({0: 1})
    assert interleaving_distance(f, f) == 0
    g = RationalMultiset({1: 1})
    assert interleaving_distance(f, g) == 1
    # brute-force cross-check of the example over its candidate set
    cands = distance_candidates(f, g)
    feas = [c for c in cands if fine_grid_close(lambda t: ev_multiset({Q(0): 1}, t), lambda t: ev_multiset({Q(1): 1}, t), [Q(0), Q(1)], c)]
    assert min(feas) == 1


def test_distance_to_empty_is_an_unattained_zero():
    f, e = RationalMultiset({0: 2}), RationalMultiset()
    assert interleaving_infimum(f, e) == (0, False)
    assert not epsilon_close(f, e, 0)
    assert all(epsilon_close(f, e, Q(1, k)) for k in (1, 10, 1000))


def test_distance_can_be_infinite():
    f, g = StepFunction.constant(2), StepFunction.constant(1)
    assert interleaving_distance(f, g) == math.inf


@settings(max_examples=60)
@given(multisets(), multisets(), multisets())
def test_pseudometric_on_multisets(f, g, h):
    assert interleaving_distance(f, f) == 0
    assert interleaving_distance(f, g) == interleaving_distance(g, f)
    assert interleaving_distance(f, h) <= interleaving_distance(f, g) + interleaving_distance(g, h)


@settings(max_examples=60)
@given(step_functions(), step_functions(), step_functions())
def test_pseudometric_on_step_functions(f, g, h):
    assert interleaving_distance(f, f) == 0
    assert interleaving_distance(f, g) == interleaving_distance(g, f)
    assert interleaving_distance(f, h) <= interleaving_distance(f, g) + interleaving_distance(g, h)


@settings(max_examples=60)
@given(step_functions(), step_functions())
def test_step_function_infimum_is_attained_and_tight(f, g):
    d, attained = interleaving_infimum(f, g)
    if d == math.inf:
        return
    assert attained
    pts = f.breakpoints() + g.breakpoints()
    ef = lambda t: ev_step(f.items(), t)  # noqa: E731
    eg = lambda t: ev_step(g.items(), t)  # noqa: E731
    assert fine_grid_close(ef, eg, pts, d)
    smaller = [c for c in distance_candidates(f, g) if c < d]
    if smaller:
        assert not fine_grid_close(ef, eg, pts, max(smaller))
