import pytest
from hypothesis import given, settings, strategies as st

from medtk.graphs import (
    FiniteGraph,
    Permutation,
    CapExceeded,
    build_hypercube,
    build_join,
    build_gamma_rs,
    empty_pair,
    automorphism_group,
    graph_isomorphic,
    check_distance2_transitivity,
)


def test_graph_validation():
    with pytest.raises(ValueError):
        FiniteGraph(2, [(0, 0)])
    with pytest.raises(ValueError):
        FiniteGraph(2, [(0, 2)])
    g = FiniteGraph(3, [(0, 1), (1, 0)])
    assert len(g.edges) == 1


def test_json_round_trip():
    g = FiniteGraph(4, [(0, 1), (2, 3), (1, 2)])
    assert FiniteGraph.from_json(g.to_json()) == g
    assert g.to_json()["edges"] == [[0, 1], [1, 2], [2, 3]]


def test_hypercube():
    assert build_hypercube(0).n == 1
    q2 = build_hypercube(2)
    assert graph_isomorphic(q2, FiniteGraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))
    q3 = build_hypercube(3)
    assert q3.n == 8 and len(q3.edges) == 12
    with pytest.raises(CapExceeded):
        build_hypercube(13)


def test_join():
    c4 = build_join([empty_pair(), empty_pair()])
    assert graph_isomorphic(c4, build_hypercube(2))
    octa = build_join([empty_pair()] * 3)
    assert octa.n == 6 and len(octa.edges) == 12
    p = FiniteGraph(3, [(0, 1)])
    assert build_join([p]) == p


def test_gamma_rs():
    assert build_gamma_rs(2, 1) == build_hypercube(2)
    assert len(build_gamma_rs(2, 2).edges) == 6  # K4
    g32 = build_gamma_rs(3, 2)
    # K8 minus a perfect matching: antipodes are the only non-edges
    assert g32.n == 8 and len(g32.edges) == 28 - 4
    for v in range(8):
        assert not g32.has_edge(v, v ^ 7)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_gamma_rs_complete_at_r(r):
    g = build_gamma_rs(r, r)
    assert len(g.edges) == g.n * (g.n - 1) // 2


@pytest.mark.parametrize("r,s", [(r, s) for r in range(1, 6) for s in range(1, r + 1)])
def test_gamma_rs_diameter(r, s):
    g = build_gamma_rs(r, s)
    assert max(max(row) for row in g.dist) == -(-r // s)


def test_automorphism_counts():
    c4 = FiniteGraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert len(automorphism_group(c4)) == 8
    assert len(automorphism_group(empty_pair())) == 2
    path3 = FiniteGraph(3, [(0, 1), (1, 2)])
    assert len(automorphism_group(path3)) == 2


def test_automorphism_group_closed():
    g = build_join([empty_pair(), empty_pair()])
    autos = automorphism_group(g)
    assert Permutation.identity(g.n) in autos
    some = sorted(autos, key=lambda p: p.images)[:4]
    for a in some:
        for b in some:
            assert a.compose(b) in autos
        assert a.inverse() in autos


def test_distance2_transitivity():
    c4 = FiniteGraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    ok, counter = check_distance2_transitivity(c4, automorphism_group(c4))
    assert ok and counter is None
    ok, counter = check_distance2_transitivity(c4, {Permutation.identity(4)})
    assert not ok
    assert sorted(counter) == [(0, 2), (1, 3)]
    octa = build_join([empty_pair()] * 3)
    ok, _ = check_distance2_transitivity(octa, automorphism_group(octa))
    assert ok


def test_isomorphism_basics():
    assert graph_isomorphic(FiniteGraph(3, [(0, 1), (1, 2)]), FiniteGraph(3, [(0, 1), (1, 2), (0, 2)])) is None
    g = build_hypercube(3)
    pi = graph_isomorphic(g, g)
    assert pi is not None and pi.is_automorphism(g)


@st.composite
def small_graphs(draw):
    n = draw(st.integers(1, 6))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = [p for p in pairs if draw(st.booleans())]
    return FiniteGraph(n, edges)


@settings(max_examples=40, deadline=None)
@given(small_graphs(), st.randoms(use_true_random=False))
def test_isomorphism_reflexive_symmetric(g, rnd):
    assert graph_isomorphic(g, g) is not None
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = FiniteGraph(g.n, [(perm[a], perm[b]) for a, b in g.edges])
    fwd = graph_isomorphic(g, h)
    back = graph_isomorphic(h, g)
    assert fwd is not None and back is not None
    assert fwd.is_automorphism(g) or all(
        h.has_edge(fwd(a), fwd(b)) for a, b in g.edges
    )
