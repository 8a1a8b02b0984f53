import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from rainbowtight.connectivity import (PreconditionError, build_walk_general, build_walk_one_coordinate,
                                       build_walk_same_set, check_strong_connectivity, closed_walk_one_mod_k,
                                       find_arc, find_closed_walk_mod, find_switchers, is_arc,
                                       is_seq_tightly_connected, is_tight_walk_2, odd_closed_tight_walk,
                                       tight_components, tight_cover_walk, tight_walk_between)
from rainbowtight.core import KGraph, OneKGraph
from rainbowtight.sequential import validate, walk_length_bound
from rainbowtight.vicinity import Vicinity, build_max_vicinity, verify_vicinity

import oracles


def g2(n, edges):
    return KGraph(n, 2, frozenset(tuple(sorted(e)) for e in edges))


@st.composite
def kgraphs(draw, k=3, max_n=8, max_edges=14):
    n = draw(st.integers(k, max_n))
    pool = list(combinations(range(n), k))
    return KGraph(n, k, frozenset(draw(st.sets(st.sampled_from(pool), max_size=max_edges))))


def test_components_examples():
    assert tight_components(g2(3, [(0, 1), (1, 2), (0, 2)])).sizes == (3,)
    assert len(tight_components(g2(4, [(0, 1), (2, 3)])).components) == 2


@settings(max_examples=80, deadline=None)
@given(kgraphs())
def test_components_match_bfs(G):
    ours = {frozenset(c) for c in tight_components(G).components}
    assert ours == set(oracles.tight_components(G.edges, G.k))


@settings(max_examples=40, deadline=None)
@given(kgraphs(k=2, max_n=7))
def test_components_match_bfs_2graphs(G):
    ours = {frozenset(c) for c in tight_components(G).components}
    assert ours == set(oracles.tight_components(G.edges, 2))


def test_seq_connectivity_examples():
    one = OneKGraph(1, 6, 3, frozenset({(0, (0, 1, 2))}))
    assert is_seq_tightly_connected(one, 0)
    two = OneKGraph(1, 6, 3, frozenset({(0, (0, 1, 2)), (0, (3, 4, 5))}))
    assert not is_seq_tightly_connected(two, 0)


@settings(max_examples=40, deadline=None)
@given(kgraphs(max_n=7, max_edges=10))
def test_tight_walks_between_edges_of_a_component(G):
    comps = tight_components(G).components
    for comp in comps:
        comp = sorted(comp)
        e, f = comp[0], comp[-1]
        walk = tight_walk_between(G, e, f)
        assert walk is not None
        assert tuple(sorted(walk[:3])) == e and tuple(sorted(walk[-3:])) == f
        assert all(tuple(sorted(walk[i:i + 3])) in G.edges for i in range(len(walk) - 2))
    if len(comps) > 1:
        assert tight_walk_between(G, sorted(comps[0])[0], sorted(comps[1])[0]) is None


@settings(max_examples=40, deadline=None)
@given(kgraphs(max_n=7, max_edges=10))
def test_cover_walk_visits_every_edge(G):
    H = OneKGraph(1, G.n, 3, frozenset((0, e) for e in G.edges))
    if not G.edges or len(tight_components(G).components) != 1:
        return
    W = tight_cover_walk(H, 0)
    assert validate(H, W)
    assert {tuple(sorted(w)) for _, w in W.windows(3)} == set(G.edges)


def test_switchers():
    assert find_switchers(g2(3, [(0, 1), (1, 2), (0, 2)])) == [(0, 1), (0, 2), (1, 2)]
    assert find_switchers(g2(3, [(0, 1), (1, 2)])) == []


@settings(max_examples=60, deadline=None)
@given(kgraphs(k=2, max_n=7))
def test_switchers_match_triangle_scan(G):
    brute = sorted({tuple(sorted(p)) for a, b, c in combinations(range(G.n), 3)
                    if {(a, b), (a, c), (b, c)} <= G.edges for p in ((a, b), (a, c), (b, c))})
    assert find_switchers(G) == brute


def test_odd_closed_walk_examples():
    tri = g2(3, [(0, 1), (1, 2), (0, 2)])
    assert odd_closed_tight_walk(tri) == (0, 1, 2)
    pendant = g2(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5)])
    w = odd_closed_tight_walk(pendant, start=5)
    assert len(w) % 2 == 1 and w[0] == 5 and is_tight_walk_2(pendant, w, closed=True)
    with pytest.raises(PreconditionError):
        odd_closed_tight_walk(g2(4, [(0, 1), (1, 2), (2, 3), (0, 3)]))


def test_strong_connectivity_triangle_reversal():
    W = check_strong_connectivity(g2(3, [(0, 1), (1, 2), (0, 2)]))
    w = W.walk((0, 1), (1, 0))
    assert w[:2] == (0, 1) and w[-2:] == (1, 0) and is_tight_walk_2(W.host, w)
    assert W.walk((0, 1), (1, 0)) == (0, 1, 0)


def test_strong_connectivity_needs_switcher():
    with pytest.raises(PreconditionError):
        check_strong_connectivity(g2(2, [(0, 1)]))


@settings(max_examples=60, deadline=None)
@given(kgraphs(k=2, max_n=8, max_edges=16))
def test_strong_connectivity_all_pairs(G):
    if not G.edges or len(tight_components(G).components) != 1 or not find_switchers(G):
        return
    W = check_strong_connectivity(G)
    ds = W.directed_edges()
    assert len(ds) == 2 * len(G.edges)
    for D1 in ds:
        for D2 in ds:
            w = W.walk(D1, D2)
            assert w[:2] == D1 and w[-2:] == D2 and is_tight_walk_2(G, w)


# ---------------------------------------------------------------- vicinities

def complete_vicinity(t, k, color=0):
    R = OneKGraph.complete(t, k, [color])
    return R, build_max_vicinity(R, [color])[color]


def assert_zero_mod_walk(vic, W, S, T, D1, D2):
    k = vic.k
    assert validate(vic.generated(), W)
    assert len(W.points) % k == 0
    assert W.points[:k] == tuple(S) + tuple(D1)
    assert W.points[len(W.points) - k:] == tuple(T) + tuple(D2)


def test_identical_endpoints_give_empty_walk():
    _, vic = complete_vicinity(6, 3)
    assert build_walk_same_set(vic, (0,), (1, 2), (1, 2)).points == ()
    assert build_walk_general(vic, (0,), (0,), (1, 2), (1, 2)).points == ()


@settings(max_examples=40, deadline=None)
@given(st.integers(5, 8), st.data())
def test_same_set_walks(t, data):
    _, vic = complete_vicinity(t, 3)
    S = (data.draw(st.integers(0, t - 1)),)
    others = [v for v in range(t) if v != S[0]]
    D1 = tuple(data.draw(st.permutations(others))[:2])
    D2 = tuple(data.draw(st.permutations(others))[:2])
    if D1 == D2:
        return
    assert_zero_mod_walk(vic, build_walk_same_set(vic, S, D1, D2), S, S, D1, D2)


def test_one_coordinate_walk_uses_shared_edge():
    _, vic = complete_vicinity(7, 3)
    W = build_walk_one_coordinate(vic, (0,), (1,), (2, 3), (4, 5))
    assert_zero_mod_walk(vic, W, (0,), (1,), (2, 3), (4, 5))
    with pytest.raises(ValueError):
        build_walk_one_coordinate(vic, (0,), (0,), (2, 3), (4, 5))


def test_general_walk_induction_depth_k4():
    _, vic = complete_vicinity(8, 4)
    trace = []
    W = build_walk_general(vic, (0, 1), (2, 3), (4, 5), (6, 7), trace)
    assert_zero_mod_walk(vic, W, (0, 1), (2, 3), (4, 5), (6, 7))
    assert trace == [2, 1]


def test_general_walk_k5_three_coordinates():
    _, vic = complete_vicinity(10, 5)
    trace = []
    W = build_walk_general(vic, (0, 1, 2), (3, 4, 5), (6, 7), (8, 9), trace)
    assert_zero_mod_walk(vic, W, (0, 1, 2), (3, 4, 5), (6, 7), (8, 9))
    assert trace == [3, 2, 1]


def test_disjoint_links_report_v2():
    # C_(0) and C_(1) share no edge
    assignment = {(0,): g2(6, [(2, 3), (3, 4), (2, 4)]), (1,): g2(6, [(0, 3), (3, 5), (0, 5)])}
    vic = Vicinity(0, 1, 6, 3, assignment)
    with pytest.raises(PreconditionError) as info:
        build_walk_one_coordinate(vic, (0,), (1,), (2, 3), (3, 5))
    assert info.value.condition == "V2"


def test_disconnected_link_reports_v1():
    vic = Vicinity(0, 1, 7, 3, {(0,): g2(7, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])})
    with pytest.raises(PreconditionError) as info:
        build_walk_same_set(vic, (0,), (1, 2), (4, 5))
    assert info.value.condition == "V1"


def random_dense(t, k, seed, p=0.8, colors=1):
    rng = random.Random(seed)
    edges = {(c, e) for c in range(colors) for e in combinations(range(t), k) if rng.random() < p}
    return OneKGraph(colors, t, k, frozenset(edges))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(6, 9))
def test_closed_walk_one_mod_k_on_dense_instances(seed, t):
    R = random_dense(t, 3, seed)
    vic = build_max_vicinity(R, [0])[0]
    rep = verify_vicinity(R, {0: vic}, 0, 1)
    if not rep.color_holds(0, "V1", "V2", "V3"):
        return
    W = closed_walk_one_mod_k(vic)
    assert W.closed and len(W.points) % 3 == 1
    assert validate(vic.generated(), W)


def test_closed_walk_complete_and_shortened():
    _, vic = complete_vicinity(7, 3)
    W = closed_walk_one_mod_k(vic)
    assert validate(vic.generated(), W) and len(W.points) % 3 == 1
    W2 = closed_walk_one_mod_k(vic, shorten=True)
    assert validate(vic.generated(), W2) and len(W2.points) % 3 == 1
    assert len(W2.points) <= len(W.points) and len(W2.points) <= walk_length_bound(3, 7)


def test_closed_walk_without_arc():
    vic = Vicinity(0, 1, 5, 3, {})
    with pytest.raises(PreconditionError):
        closed_walk_one_mod_k(vic)
    assert find_arc(vic) is None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(5, 8), st.sampled_from([3, 4]))
def test_found_arcs_satisfy_definition(seed, t, k):
    R = random_dense(t, k, seed, p=0.5)
    vic = build_max_vicinity(R, [0])[0]
    arc = find_arc(vic)
    if arc is None:
        return
    v = arc.points
    assert is_arc(vic, v)
    # naive restatement of both clauses
    first = vic.assignment.get(tuple(sorted(v[:k - 2])))
    second = vic.assignment.get(tuple(sorted(v[1:k - 1])))
    assert first is not None and tuple(sorted(v[k - 2:k])) in first.edges
    assert second is not None and tuple(sorted(v[k - 1:k + 1])) in second.edges


def test_dense_links_at_four_ninths_have_arcs():
    # every link has density above 4/9, where d + sqrt(d) > 1
    R = random_dense(20, 3, 7, p=0.75)
    vic = build_max_vicinity(R, [0])[0]
    dens = min(len(C.edges) for C in vic.assignment.values()) / (20 * 19 / 2)
    assert dens > 4 / 9
    assert find_arc(vic) is not None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(4, 7), st.integers(0, 2))
def test_closed_walk_mod_search(seed, t, residue):
    R = random_dense(t, 3, seed, p=0.5)
    W = find_closed_walk_mod(R, 0, residue)
    if W is not None:
        assert W.closed and len(W.points) % 3 == residue % 3 and validate(R, W)
