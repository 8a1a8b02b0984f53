import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from rainbowtight.core import OneKGraph
from rainbowtight.framework import (generate_family, generate_from_vicinity, pipeline_vicinity_to_framework,
                                    verify_framework, window_colors, window_graph)
from rainbowtight.sequential import validate
from rainbowtight.vicinity import CleanupError, Vicinity, build_max_vicinity, vicinity_from_links

ALPHA, GAMMA, DELTA = Fraction(1, 20), Fraction(1, 100), Fraction(5, 9)


def random_onek(t, k, seed, p):
    rng = random.Random(seed)
    return OneKGraph(t, t, k, frozenset((c, e) for c in range(t) for e in combinations(range(t), k)
                                        if rng.random() < p))


def test_generate_identity_and_empty():
    R = random_onek(7, 3, 1, 0.6)
    assert generate_from_vicinity(R, vicinity_from_links(R, 2)) == R.restrict([2])
    assert not generate_from_vicinity(R, Vicinity(2, 7, 7, 3, {})).edges


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_generated_graph_stays_inside(seed):
    R = random_onek(7, 3, seed, 0.5)
    H = generate_family(R, build_max_vicinity(R))
    assert H.edges <= R.edges


def test_generate_rejects_foreign_vicinity():
    R = OneKGraph(1, 5, 3)
    vic = build_max_vicinity(OneKGraph.complete(5, 3, [0]))[0]
    with pytest.raises(ValueError):
        generate_from_vicinity(R, vic)


def test_window_partition():
    assert window_colors(9, 3) == [range(0, 3), range(3, 6), range(6, 9)]
    with pytest.raises(ValueError):
        window_colors(10, 3)
    G = window_graph(OneKGraph.complete(6, 3), range(2, 4))
    assert G.k == 4 and G.n == 8 and len(G.edges) == 2 * 20


def test_complete_framework():
    H = OneKGraph.complete(9, 3)
    rep = verify_framework(H, ALPHA, GAMMA, DELTA)
    assert rep.holds()
    for c, w in rep.f2.items():
        assert validate(H, w) and len(w.points) % 3 == 1
    for c, w in rep.f1_witness.items():
        assert validate(H, w)


def test_empty_color_fails_f1():
    H = OneKGraph.complete(6, 3)
    H = H.without([e for e in H.edges if e[0] == 0])
    rep = verify_framework(H, ALPHA, GAMMA, DELTA)
    assert not rep.f1[0] and all(rep.f1[c] for c in range(1, 6))
    assert not rep.clause("F1") and rep.f2[0] is None


def test_disjoint_colors_fail_f5():
    H = OneKGraph.complete(6, 3)
    H = H.without([e for e in H.edges if (e[0] == 0 and e[1] != (0, 1, 2)) or (e[0] == 1 and e[1] != (3, 4, 5))])
    rep = verify_framework(H, ALPHA, GAMMA, DELTA)
    assert not rep.clause("F5") and rep.f5.failing_colors == {0, 1}


def test_framework_rejects_non_square():
    with pytest.raises(ValueError):
        verify_framework(OneKGraph(3, 6, 3), ALPHA, GAMMA, DELTA)


def test_pipeline_complete():
    rep = pipeline_vicinity_to_framework(OneKGraph.complete(9, 3), ALPHA, GAMMA, DELTA)
    assert rep.vicinity.holds() and rep.framework.holds() and rep.implications_hold
    assert rep.generated == rep.cleaned == OneKGraph.complete(9, 3)


def test_pipeline_v4_fails_but_walks_survive():
    # a large gamma raises the matching threshold above what any link reaches
    rep = pipeline_vicinity_to_framework(OneKGraph.complete(6, 3), ALPHA, Fraction(1, 4), DELTA)
    assert rep.vicinity.holds("V1", "V2", "V3") and not rep.vicinity.holds("V4")
    assert rep.framework.clause("F1") and rep.framework.clause("F2")
    assert rep.implications_hold


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pipeline_implications_on_random_instances(seed):
    R = random_onek(6, 3, seed, 0.85)
    try:
        rep = pipeline_vicinity_to_framework(R, Fraction(1, 5), GAMMA, Fraction(1, 2))
    except CleanupError:
        return
    assert rep.implications_hold


def test_flags_are_stable_under_window_preserving_relabelling():
    R = random_onek(6, 3, 11, 0.8)
    # swap the two colors inside each window, then swap the first two windows
    perm = {0: 3, 1: 2, 2: 1, 3: 0, 4: 5, 5: 4}
    R2 = OneKGraph(6, 6, 3, frozenset((perm[c], e) for c, e in R.edges))
    a = verify_framework(R, ALPHA, GAMMA, Fraction(1, 2))
    b = verify_framework(R2, ALPHA, GAMMA, Fraction(1, 2))
    for name in ("F1", "F2", "F3", "F4", "F5"):
        assert a.clause(name) == b.clause(name)
    assert all(a.f1[c] == b.f1[perm[c]] for c in range(6))
    assert all(a.f4[c] == b.f4[perm[c]] for c in range(6))
    assert a.f3[0].robust == b.f3[1].robust and a.f3[2].robust == b.f3[2].robust
