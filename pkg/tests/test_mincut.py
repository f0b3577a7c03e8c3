import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import complete, cycle, random_connected, triangle
from kecss.errors import InvalidCut
from kecss.graph import Graph
from kecss.mincut import edge_connectivity_at_least, global_min_cut
from kecss.oracles import brute_min_cut_value


def test_triangle_isolates_vertex_away_from_heavy_edge():
    g = triangle((5.0, 1.0, 1.0))
    res = global_min_cut(g, g.cost)
    assert res.value == 2.0
    assert res.side in (frozenset({2}), frozenset({0, 1}))


def test_single_edge():
    g = Graph.from_edges(2, [(0, 1, 7.0)])
    assert global_min_cut(g, g.cost).value == 7.0


def test_bridge_between_triangles():
    edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]
    g = Graph.from_edges(6, [(a, b, 1.0) for a, b in edges] + [(2, 3, 0.5)])
    res = global_min_cut(g, g.cost)
    assert res.value == 0.5
    assert res.side in (frozenset({0, 1, 2}), frozenset({3, 4, 5}))


def test_disconnected_graph_gives_zero_cut():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert global_min_cut(g, g.cost).value == 0.0


def test_needs_two_vertices():
    with pytest.raises(InvalidCut):
        global_min_cut(Graph(1, [], [], []), [])


def test_connectivity_checks():
    assert edge_connectivity_at_least(cycle(4), range(4), 2)
    assert not edge_connectivity_at_least(cycle(4), range(3), 2)
    assert edge_connectivity_at_least(complete(4), range(6), 3)
    assert not edge_connectivity_at_least(complete(4), range(6), 4)
    assert not edge_connectivity_at_least(Graph.from_edges(3, [(0, 1), (0, 1)]), range(2), 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.integers(0, 12), st.integers(0, 2 ** 31))
def test_stoer_wagner_matches_enumeration(n, extra, seed):
    rng = np.random.default_rng(seed)
    g = random_connected(rng, n, n - 1 + extra)
    w = rng.uniform(0.1, 10.0, g.m)
    res = global_min_cut(g, w)
    assert res.value == pytest.approx(brute_min_cut_value(g, w), rel=1e-9)
    assert res.value == pytest.approx(float(w[g.crossing(g.side_mask(res.side))].sum()), rel=1e-12)


def test_deterministic():
    rng = np.random.default_rng(3)
    g = random_connected(rng, 9, 16)
    w = np.ones(g.m)
    assert global_min_cut(g, w) == global_min_cut(g, w)
