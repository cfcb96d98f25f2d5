import itertools

import pytest
from hypothesis import given, settings, strategies as st

from medtk.graphs import FiniteGraph, build_hypercube, graph_isomorphic
from medtk.median import MedianGraph, certify_median
from medtk.wallspace import (
    Wallspace,
    all_consistent_orientations,
    cubulate,
    make_wallspace,
    max_pairwise_crossing,
    walls_of_median,
)


def path(n):
    return FiniteGraph(n, [(i, i + 1) for i in range(n - 1)])


def test_validation():
    with pytest.raises(ValueError):
        make_wallspace(3, [set()])
    with pytest.raises(ValueError):
        make_wallspace(3, [{0, 1, 2}])
    with pytest.raises(ValueError):
        make_wallspace(3, [{0}, {1, 2}])  # same partition twice
    with pytest.raises(ValueError):
        make_wallspace(2, [{5}])


def test_json_round_trip():
    ws = make_wallspace(4, [{0}, {0, 1}, {0, 1, 2}])
    back = Wallspace.from_json(ws.to_json())
    assert back.point_count == ws.point_count
    # serialization stores the lexicographically smaller side of each wall
    full = frozenset(range(4))
    for w, b in zip(ws.walls, back.walls):
        assert b in (w, full - w)
    assert Wallspace.from_json(back.to_json()) == back


def test_separates_all_pairs():
    assert make_wallspace(3, [{0}, {1}]).separates_all_pairs()
    assert not make_wallspace(3, [{0}]).separates_all_pairs()


def test_cubulate_line():
    # n points on a line, separated by nested singly-sided walls
    ws = make_wallspace(4, [{0}, {0, 1}, {0, 1, 2}])
    mg, pmap = cubulate(ws)
    assert graph_isomorphic(mg.graph, path(4))
    assert len(set(pmap.values())) == 4
    for a in range(4):
        for b in range(4):
            sep = sum(1 for w in ws.walls if (a in w) != (b in w))
            assert mg.graph.dist[pmap[a]][pmap[b]] == sep


def test_cubulate_crossing_walls():
    # two crossing walls on 4 points give a 4-cycle
    ws = make_wallspace(4, [{0, 1}, {0, 2}])
    mg, _ = cubulate(ws)
    assert graph_isomorphic(mg.graph, build_hypercube(2))
    # k pairwise-crossing walls give the full k-cube
    ws3 = make_wallspace(8, [frozenset(p for p in range(8) if (p >> i) & 1) for i in range(3)])
    mg3, pmap3 = cubulate(ws3)
    assert graph_isomorphic(mg3.graph, build_hypercube(3))
    assert len(set(pmap3.values())) == 8


def test_duality_round_trip():
    for g in [path(5), build_hypercube(3), FiniteGraph(4, [(0, 1), (1, 2), (1, 3)])]:
        mg = certify_median(g)
        ws = walls_of_median(mg)
        back, pmap = cubulate(ws)
        iso = graph_isomorphic(g, back.graph)
        assert iso is not None
        # the point map realizes the isomorphism up to relabelling
        assert sorted(pmap.values()) == list(range(g.n))


def test_oracle_agreement_small():
    cases = [
        make_wallspace(3, [{0}, {1}, {2}]),
        make_wallspace(4, [{0, 1}, {0, 2}, {0}]),
        make_wallspace(5, [{0}, {0, 1}, {2, 3}, {4}]),
    ]
    for ws in cases:
        mg, _ = cubulate(ws)
        oracle = all_consistent_orientations(ws)
        assert mg.n == len(oracle)


def test_max_pairwise_crossing():
    ws = make_wallspace(4, [{0, 1}, {0, 2}, {0}])
    assert max_pairwise_crossing(ws) == 2
    nested = make_wallspace(4, [{0}, {0, 1}, {0, 1, 2}])
    assert max_pairwise_crossing(nested) == 1
    ws3 = make_wallspace(8, [frozenset(p for p in range(8) if (p >> i) & 1) for i in range(3)])
    assert max_pairwise_crossing(ws3) == 3


@st.composite
def wallspaces(draw):
    n = draw(st.integers(2, 5))
    points = frozenset(range(n))
    nwalls = draw(st.integers(1, 5))
    walls = []
    seen = set()
    for _ in range(nwalls):
        side = frozenset(draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n - 1)))
        key = min(tuple(sorted(side)), tuple(sorted(points - side)))
        if key not in seen:
            seen.add(key)
            walls.append(side)
    return Wallspace(n, tuple(walls))


@settings(max_examples=60, deadline=None)
@given(wallspaces())
def test_cubulation_matches_brute_force(ws):
    mg, pmap = cubulate(ws)
    assert isinstance(mg, MedianGraph)
    oracle = all_consistent_orientations(ws)
    assert mg.n == len(oracle)
    # cubical dimension never exceeds the largest crossing family
    from medtk.median import cubical_dimension

    assert cubical_dimension(mg) <= max_pairwise_crossing(ws)
    # points land on their principal orientations; separation becomes distance
    for a, b in itertools.combinations(range(ws.point_count), 2):
        sep = sum(1 for w in ws.walls if (a in w) != (b in w))
        assert mg.graph.dist[pmap[a]][pmap[b]] == sep
