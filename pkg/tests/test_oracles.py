import itertools
from fractions import Fraction

import numpy as np
import pytest

from generators import complete, cycle, lp_corpus, random_kconnected, triangle
from kecss.errors import Infeasible, RefusedScale
from kecss.graph import Graph, cut_matrix
from kecss.mincut import edge_connectivity_at_least
from kecss.oracles import (
    brute_free_cut,
    brute_min_cut_value,
    brute_strengths,
    exact_small_lp,
    exhaustive_ip,
    free_cut_values,
    kc_rows,
)


def test_triangle_free_cut():
    fc = brute_free_cut(triangle(k=2), np.ones(3))
    assert fc.value == pytest.approx(1.0)


def test_free_cut_with_k1_is_min_cut():
    rng = np.random.default_rng(3)
    for _ in range(20):
        g = random_kconnected(rng, 6, 1, extra=4)
        w = rng.uniform(0.1, 5.0, g.m)
        assert brute_free_cut(g, w, 1).value == pytest.approx(brute_min_cut_value(g, w))


def test_star_leaf_cut_is_entirely_free():
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)], 2)
    assert brute_free_cut(star, np.ones(3)).value == 0.0


def test_free_cut_values_matches_direct_enumeration():
    rng = np.random.default_rng(5)
    g = random_kconnected(rng, 6, 2, extra=3)
    w = rng.uniform(0.1, 3.0, g.m)
    _, crossing = cut_matrix(g)
    fast = free_cut_values(crossing, w, 3)
    for row, mask in enumerate(crossing):
        cut = np.flatnonzero(mask).tolist()
        best = np.inf
        for size in range(min(2, len(cut)) + 1):
            for free in itertools.combinations(cut, size):
                rest = [e for e in cut if e not in free]
                best = min(best, float(w[rest].sum()) / (3 - size))
        assert fast[row] == pytest.approx(best)


@pytest.mark.parametrize("g, expected", [
    (cycle(3), 3.0), (cycle(4), 4.0), (cycle(6), 6.0), (complete(4, k=2), 4.0), (complete(4, k=1), 2.0),
])
def test_lp_values(g, expected):
    value, x = exact_small_lp(g)
    assert value == pytest.approx(expected)
    assert float(g.cost @ x) == pytest.approx(value)


def test_lp_solution_satisfies_every_cover_row():
    for g in lp_corpus(seed=31, count=5):
        _, x = exact_small_lp(g)
        for row, rhs in kc_rows(g, g.k):
            assert sum(x[e] for e, _ in row) >= rhs - 1e-7


def test_knapsack_cover_relaxes_box_formulation():
    for g in lp_corpus(seed=32, count=6):
        kc, _ = exact_small_lp(g, formulation="kc")
        box, _ = exact_small_lp(g, formulation="box")
        # with x <= 1 every knapsack-cover row is implied, so the box region lies inside the cover region
        assert kc <= box + 1e-7


def test_float_and_rational_modes_agree():
    for g in lp_corpus(seed=33, count=4):
        assert exact_small_lp(g)[0] == pytest.approx(exact_small_lp(g, exact=True)[0], rel=1e-9)


def test_unknown_formulation_rejected():
    with pytest.raises(ValueError):
        exact_small_lp(cycle(4), formulation="flow")


def test_lp_of_infeasible_instance():
    with pytest.raises(Infeasible):
        exact_small_lp(cycle(4, k=3))


def test_ip_values():
    assert exhaustive_ip(cycle(4))[0] == 4.0
    value, edges = exhaustive_ip(complete(4, k=2))
    assert value == 4.0
    assert edge_connectivity_at_least(complete(4, k=2), edges, 2)
    assert exhaustive_ip(complete(4, k=1))[0] == 3.0


def test_ip_infeasible():
    with pytest.raises(Infeasible):
        exhaustive_ip(cycle(5, k=3))


def test_scale_guards():
    with pytest.raises(RefusedScale):
        exact_small_lp(cycle(13))
    with pytest.raises(RefusedScale):
        exact_small_lp(complete(5, k=4))
    with pytest.raises(RefusedScale):
        exhaustive_ip(complete(8))
    with pytest.raises(RefusedScale):
        brute_free_cut(cycle(17), np.ones(17))
    with pytest.raises(RefusedScale):
        brute_strengths(cycle(11), np.ones(11))


@pytest.mark.parametrize("seed", range(10))
def test_integrality_gap_is_at_most_two(seed):
    g = lp_corpus(seed=100 + seed, count=1)[0]
    lp, _ = exact_small_lp(g)
    ip, edges = exhaustive_ip(g)
    assert lp <= ip + 1e-9
    assert ip <= 2 * lp + 1e-9
    assert edge_connectivity_at_least(g, edges, g.k)


def test_strengths_on_two_triangles_joined_by_an_edge():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
    kappa = brute_strengths(g, np.ones(g.m))
    assert kappa.tolist() == [2, 2, 2, 2, 2, 2, 1]


def test_rational_arithmetic_is_exact():
    g = Graph.from_edges(3, [(0, 1, 1 / 3), (1, 2, 1 / 3), (2, 0, 1 / 3)], 2)
    value, _ = exact_small_lp(g, exact=True)
    assert Fraction(value).limit_denominator(100) == Fraction(1)
