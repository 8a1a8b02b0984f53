import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from rainbowtight.core import KGraph, OneKGraph, link
from rainbowtight.matching import (FractionalMatching, HypothesisError, VertexWeighting, as_weighting,
                                   is_robustly_matchable, lift_link_matchings, matching_density,
                                   max_fractional_matching, max_integral_matching, remove_isolated_then_match)

import oracles

HALF = Fraction(1, 2)


def g(n, k, edges):
    return KGraph(n, k, frozenset(tuple(sorted(e)) for e in edges))


@st.composite
def two_graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pool = list(combinations(range(n), 2))
    return g(n, 2, draw(st.sets(st.sampled_from(pool), max_size=len(pool))) if pool else [])


def test_triangle():
    value, m = max_fractional_matching(g(3, 2, [(0, 1), (1, 2), (0, 2)]))
    assert value == Fraction(3, 2)
    assert set(m.weights.values()) == {HALF}
    assert matching_density(m) == HALF


def test_single_edge_and_empty():
    assert max_fractional_matching(g(3, 3, [(0, 1, 2)]))[0] == 1
    value, m = max_fractional_matching(KGraph(4, 2))
    assert value == 0 and matching_density(m) == 0


def test_k4_is_perfect():
    value, m = max_fractional_matching(KGraph.complete(4, 2))
    assert value == 2 and matching_density(m) == HALF
    assert all(load == 1 for load in m.point_loads().values())


def test_weighting_inputs():
    assert as_weighting(None, 3) == VertexWeighting.uniform(3)
    assert as_weighting({1: HALF}, 3).values == (1, HALF, 1)
    assert as_weighting("1/3", 2).values == (Fraction(1, 3),) * 2
    with pytest.raises(ValueError):
        as_weighting([1, 1], 3)
    assert VertexWeighting((HALF, 1)).within(HALF) and not VertexWeighting((0, 1)).within(HALF)


def test_b_weighted_triangle():
    value, m = max_fractional_matching(g(3, 2, [(0, 1), (1, 2), (0, 2)]), [HALF, HALF, HALF])
    assert value == Fraction(3, 4) and not m.violations([HALF] * 3)


@settings(max_examples=120, deadline=None)
@given(two_graphs())
def test_matches_tutte_formula_and_sandwich(G):
    value, m = max_fractional_matching(G)
    assert value == oracles.fractional_matching_2graph(G.n, G.edges)
    assert not m.violations()
    nu = max_integral_matching(G)
    assert nu == oracles.integral_matching(G.edges)
    assert nu <= value <= Fraction(3, 2) * nu


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(6, 9))
def test_backends_agree(seed, n):
    rng = random.Random(seed)
    G = g(n, 3, [e for e in combinations(range(n), 3) if rng.random() < 0.4])
    b = [Fraction(rng.randint(1, 4), 4) for _ in range(n)]
    values = {max_fractional_matching(G, b, backend=be)[0] for be in ("exact", "certify")}
    assert len(values) == 1
    assert abs(float(values.pop()) - max_fractional_matching(G, b, backend="float")[0]) < 1e-7


def test_robust_single_edge():
    E = g(3, 3, [(0, 1, 2)])
    assert not is_robustly_matchable(E, Fraction(1, 10)).robust
    rep = is_robustly_matchable(E, 0)
    assert rep.robust and rep.corners_checked == 1


def test_robust_complete_graph():
    rep = is_robustly_matchable(KGraph.complete(6, 3), Fraction(1, 10))
    assert rep.robust and rep.exhaustive and rep.corners_checked == 2 ** 6


def test_robust_counterexample_is_first_corner():
    # a path: the middle vertex must carry both end loads
    P = g(3, 2, [(0, 1), (1, 2)])
    rep = is_robustly_matchable(P, Fraction(1, 5))
    assert not rep.robust
    assert rep.counterexample is not None and rep.corners_checked >= 1


def test_robust_size_mode_and_divisor():
    K = KGraph.complete(5, 3)
    rep = is_robustly_matchable(K, Fraction(1, 10), divisor=1, mode="size")
    assert rep.robust
    rep = is_robustly_matchable(g(5, 3, [(0, 1, 2)]), Fraction(1, 10), divisor=1, mode="size")
    assert not rep.robust and rep.shortfall > 0
    with pytest.raises(ValueError):
        is_robustly_matchable(K, 0, divisor=0)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([Fraction(1, 20), Fraction(1, 8), Fraction(1, 4)]))
def test_robust_is_monotone_in_gamma(seed, gamma):
    rng = random.Random(seed)
    n = rng.randint(4, 6)
    G = g(n, 3, [e for e in combinations(range(n), 3) if rng.random() < 0.7])
    if is_robustly_matchable(G, gamma).robust:
        assert is_robustly_matchable(G, gamma / 2).robust


def uniform_lift_instance(n=6, k=3):
    """Colors 0..n/k-1, each with the complete link."""
    cols = n // k
    R = OneKGraph.complete(n, k, range(cols))
    R = OneKGraph(cols, n, k, R.edges)
    return R, cols


def test_lift_identical_matchings():
    R, cols = uniform_lift_instance()
    # a perfect link matching would exceed n/k; use size 2 = n/k
    base = {(0, 1, 2): Fraction(1), (3, 4, 5): Fraction(1)}
    lifted = lift_link_matchings(R, {c: base for c in range(cols)})
    assert lifted.size == Fraction(2, 3)
    assert all(load == Fraction(2, 6) for load in lifted.color_loads().values())
    assert all(load <= Fraction(1, 3) for load in lifted.point_loads().values())


def test_lift_empty_and_rejections():
    R, cols = uniform_lift_instance()
    assert lift_link_matchings(R, {c: {} for c in range(cols)}).size == 0
    with pytest.raises(HypothesisError):
        lift_link_matchings(R, {0: {(0, 1, 2): 2}, 1: {}})
    with pytest.raises(HypothesisError):
        lift_link_matchings(R, {0: {(0, 1, 2): 1, (0, 1, 3): 1}, 1: {}})
    with pytest.raises(HypothesisError):
        lift_link_matchings(R, {}, colors=[0])


def test_lift_of_link_lp_optimum():
    R, cols = uniform_lift_instance()
    per = {}
    for c in range(cols):
        lk = KGraph(R.n, R.k, R.by_color[c])
        per[c] = max_fractional_matching(lk)[1]
    lifted = lift_link_matchings(R, per)
    m = min(p.size for p in per.values())
    assert lifted.size == m / R.k
    assert all(load == m / R.n for load in lifted.color_loads().values())


def test_remove_isolated_identity_and_padding():
    K = KGraph.complete(5, 3)
    base = max_fractional_matching(K)[0]
    assert remove_isolated_then_match(K, m=1).size == base
    padded = KGraph(7, 3, K.edges)
    m = remove_isolated_then_match(padded, m=1, alpha=Fraction(2, 7))
    assert m.size == base
    assert m.point_loads()[5] == m.point_loads()[6] == 0
    with pytest.raises(HypothesisError):
        remove_isolated_then_match(padded, m=1, alpha=Fraction(1, 7))
    with pytest.raises(HypothesisError):
        remove_isolated_then_match(K, m=100)


@settings(max_examples=40, deadline=None)
@given(two_graphs(max_n=7), st.integers(0, 3))
def test_remove_isolated_invariant_under_padding(G, extra):
    padded = KGraph(G.n + extra, 2, G.edges)
    m = remove_isolated_then_match(padded, m=0, alpha=1)
    assert m.size == oracles.fractional_matching_2graph(G.n, G.edges)


def test_link_cascade_on_complete_graph():
    # every vertex link of K_6^(3) matches, and so do the pair links
    K = KGraph.complete(6, 3)
    for v in range(6):
        assert max_fractional_matching(link(K, [v]))[0] == Fraction(5, 2)
    for pair in combinations(range(6), 2):
        assert max_fractional_matching(link(K, list(pair)))[0] == 4


def test_to_json_strings():
    m = max_fractional_matching(g(3, 2, [(0, 1), (1, 2), (0, 2)]))[1]
    data = m.to_json()
    assert data["size"] == "3/2" and {w["weight"] for w in data["weights"]} == {"1/2"}
    assert isinstance(m, FractionalMatching)
