import math

import numpy as np
import pytest

from generators import complete, cycle, lp_corpus, random_digraph, triangle
from kecss.arborescence import (
    ArborescenceSet,
    Digraph,
    bidirect,
    decompose,
    induce_undirected,
    is_k_root_connected,
    min_cost_k_arborescence,
    preprocess_costs,
    round_solution,
    unit_max_flow,
)
from kecss.errors import Degenerate, Infeasible, NotKRootConnected
from kecss.graph import Graph
from kecss.mincut import edge_connectivity_at_least
from kecss.mwu import solve_lp
from kecss.oracles import brute_k_arborescence, exact_small_lp, exhaustive_ip


def _check_valid(d: Digraph, arb: ArborescenceSet):
    by_id = {a.id: a for a in d.arcs}
    indeg = [0] * d.n
    for a in arb.arcs:
        indeg[by_id[a].head] += 1
    assert indeg[arb.root] == 0
    assert all(indeg[v] == arb.k for v in range(d.n) if v != arb.root)
    assert len(arb.trees) == arb.k
    assert sorted(a for t in arb.trees for a in t) == sorted(arb.arcs)
    for tree in arb.trees:
        reached = {arb.root}
        arcs = [by_id[a] for a in tree]
        changed = True
        while changed:
            changed = False
            for a in arcs:
                if a.tail in reached and a.head not in reached:
                    reached.add(a.head)
                    changed = True
        assert len(reached) == d.n and len(tree) == d.n - 1


def test_preprocess_drops_and_rounds():
    g = Graph.from_edges(2, [(0, 1, 7.0), (0, 1, 1000003.0)])
    scaled, scale, kept = preprocess_costs(g, 10.0, 0.5)
    assert scale == 3
    assert kept.tolist() == [0]
    assert scaled.cost.tolist() == [3.0]


def test_preprocess_divides_exact_multiples():
    g = Graph.from_edges(3, [(0, 1, 6.0), (1, 2, 9.0), (2, 0, 3.0)])
    scaled, scale, _ = preprocess_costs(g, 18.0, 0.5)
    assert scale == 3
    assert scaled.cost.tolist() == [2.0, 3.0, 1.0]


def test_preprocess_single_edge_eps_one():
    g = Graph.from_edges(2, [(0, 1, 5.0)])
    scaled, scale, _ = preprocess_costs(g, 4.0, 1.0)
    assert scale == 4
    assert scaled.cost.tolist() == [math.ceil(5 / 4)]


def test_preprocess_everything_dropped():
    with pytest.raises(Degenerate):
        preprocess_costs(Graph.from_edges(2, [(0, 1, 50.0)]), 10.0, 0.5)


def test_preprocess_preserves_approximation():
    eps = 0.5
    for g in lp_corpus(seed=17, count=8):
        c_star, _ = exact_small_lp(g)
        opt, _ = exhaustive_ip(g)
        scaled, scale, kept = preprocess_costs(g, c_star, eps)
        if not edge_connectivity_at_least(scaled, range(scaled.m), g.k):
            continue
        scaled_opt, edges = exhaustive_ip(scaled)
        original_cost = float(g.cost[kept[edges]].sum())
        assert scaled_opt * scale <= (1 + eps) * opt + eps * c_star + 1e-9
        assert original_cost <= scaled_opt * scale + 1e-9


def test_bidirect_shapes():
    d = bidirect(triangle())
    assert len(d.arcs) == 6
    d = bidirect(Graph.from_edges(2, [(0, 1, 5.0)]))
    assert [(a.tail, a.head, a.cost, a.source_edge) for a in d.arcs] == [(0, 1, 5.0, 0), (1, 0, 5.0, 0)]
    assert bidirect(Graph(3, [], [], [])).arcs == ()


def test_unit_max_flow_counts_disjoint_paths():
    arcs = [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)]
    assert unit_max_flow(4, arcs, 0, 3) == 2
    assert unit_max_flow(4, arcs, 3, 0) == 0
    assert is_k_root_connected(4, arcs, 0, 1)
    assert not is_k_root_connected(4, arcs, 0, 2)


def test_k3_unit_costs():
    d = bidirect(triangle())
    arb = min_cost_k_arborescence(d, 0, 2)
    assert arb.cost == 4.0
    _check_valid(d, arb)
    assert induce_undirected(arb, d) == [0, 1, 2]


def test_c4_unit_costs():
    d = bidirect(cycle(4))
    arb = min_cost_k_arborescence(d, 0, 2)
    assert arb.cost == 6.0
    assert arb.cost == brute_k_arborescence(4, [(a.tail, a.head, a.cost) for a in d.arcs], 0, 2)[0]
    _check_valid(d, arb)


def test_weighted_k3_expensive_side():
    d = bidirect(triangle((1.0, 10.0, 1.0)))
    arb = min_cost_k_arborescence(d, 0, 2)
    brute = brute_k_arborescence(3, [(a.tail, a.head, a.cost) for a in d.arcs], 0, 2)
    # both non-root vertices need two entering arcs and only one arc from the root reaches each,
    # so both directions of the expensive edge are forced
    assert brute[0] == 22.0
    assert arb.cost == 22.0


def test_unreachable_root_raises():
    d = Digraph.from_arcs(3, [(0, 1, 1), (1, 2, 1), (2, 1, 1)])
    with pytest.raises(NotKRootConnected):
        min_cost_k_arborescence(d, 0, 2)


def test_k1_is_min_cost_arborescence():
    arcs = [(0, 1, 5), (0, 2, 1), (2, 1, 1), (1, 3, 2), (2, 3, 7), (3, 2, 1)]
    arb = min_cost_k_arborescence(Digraph.from_arcs(4, arcs), 0, 1)
    assert arb.cost == brute_k_arborescence(4, arcs, 0, 1)[0] == 4.0


@pytest.mark.parametrize("seed", range(40))
def test_matches_enumeration_on_random_digraphs(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(2, 6))
    k = int(rng.integers(1, 3))
    arcs = random_digraph(rng, n, int(rng.integers(n, 13)))
    brute = brute_k_arborescence(n, arcs, 0, k)
    d = Digraph.from_arcs(n, arcs)
    if brute is None:
        with pytest.raises(NotKRootConnected):
            min_cost_k_arborescence(d, 0, k)
    else:
        arb = min_cost_k_arborescence(d, 0, k)
        assert arb.cost == pytest.approx(brute[0])
        _check_valid(d, arb)


def test_decompose_splits_into_disjoint_trees():
    trees = decompose(3, [(0, 1, 0), (1, 2, 1), (2, 1, 2), (0, 2, 3)], 0, 2)
    assert sorted(sorted(t) for t in trees) == [[0, 1], [2, 3]]


def test_decompose_rejects_non_decomposable_sets():
    # right in-degrees, but the root has a single outgoing arc
    with pytest.raises(NotKRootConnected):
        decompose(3, [(0, 1, 0), (1, 2, 1), (2, 1, 2), (1, 2, 3)], 0, 2)


def test_induce_deduplicates_both_directions():
    d = bidirect(cycle(3))
    arb = ArborescenceSet((0, 1, 2), 0, 1, 3.0)
    assert induce_undirected(arb, d) == [0, 1]


def test_round_cycle_returns_the_cycle():
    g = cycle(4)
    res = round_solution(g, np.ones(4), 0.1, seed=0)
    assert res.edges == (0, 1, 2, 3)
    assert res.cost == 4.0
    assert res.verified


def test_round_k4_against_integral_optimum():
    g = complete(4, k=2)
    sol = solve_lp(g, 0.1)
    res = round_solution(g, sol.x, 0.1)
    ip, _ = exhaustive_ip(g)
    assert ip == 4.0
    assert res.verified
    assert res.cost <= 2 * (1 + 3 * 0.1) * sol.objective
    assert res.cost <= 2 * ip


def test_round_rejects_infeasible_graph():
    with pytest.raises(Infeasible):
        round_solution(cycle(4, k=3), np.ones(4), 0.1)


def test_round_chain_of_inequalities():
    eps = 0.1
    for g in lp_corpus(seed=21, count=8):
        sol = solve_lp(g, eps)
        res = round_solution(g, sol.x, eps, seed=1)
        sub, _ = g.subgraph(np.flatnonzero(sol.x > 0))
        lp_sub, _ = exact_small_lp(sub)
        assert res.verified
        assert res.cost <= res.arborescence_cost + 1e-9
        # costs are integral and the support is small, so no rescaling takes place
        assert res.scale == 1
        assert res.arborescence_cost <= 2 * lp_sub * (1 + 1e-9)
        assert lp_sub <= (1 + 6 * eps) * exact_small_lp(g)[0]


def test_round_is_seed_reproducible():
    g = lp_corpus(seed=22, count=1)[0]
    sol = solve_lp(g, 0.1)
    assert round_solution(g, sol.x, 0.1, seed=4) == round_solution(g, sol.x, 0.1, seed=4)
