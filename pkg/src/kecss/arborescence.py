"""Integral rounding through minimum-cost k-arborescences.

The undirected support is bidirected, a cheapest union of k arc-disjoint
spanning arborescences is found exactly by weighted matroid intersection,
and the underlying undirected edges form the integral solution.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import Degenerate, Infeasible, NotKRootConnected
from .graph import Graph
from .mincut import edge_connectivity_at_least


@dataclass(frozen=True)
class Arc:
    id: int
    tail: int
    head: int
    cost: float
    source_edge: int


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: tuple

    @classmethod
    def from_arcs(cls, n: int, arcs: Sequence[tuple]) -> "Digraph":
        """Build from (tail, head, cost) or (tail, head, cost, source_edge) tuples."""
        built = []
        for i, a in enumerate(arcs):
            src = int(a[3]) if len(a) > 3 else i
            built.append(Arc(i, int(a[0]), int(a[1]), float(a[2]), src))
        return cls(n, tuple(built))

    @property
    def cost(self) -> np.ndarray:
        return np.array([a.cost for a in self.arcs])


@dataclass(frozen=True)
class ArborescenceSet:
    arcs: tuple
    root: int
    k: int
    cost: float
    trees: tuple = field(default=(), repr=False)


def bidirect(g: Graph) -> Digraph:
    """Two opposite arcs of equal cost per undirected edge: arcs 2e and 2e+1 come from edge e."""
    arcs = []
    for e, a, b, c in g.edges:
        arcs.append(Arc(2 * e, a, b, c, e))
        arcs.append(Arc(2 * e + 1, b, a, c, e))
    return Digraph(g.n, tuple(arcs))


def preprocess_costs(g: Graph, lp_value: float, eps: float) -> tuple[Graph, int, np.ndarray]:
    """Drop edges costlier than 2 * lp_value and round the rest up to multiples of M.

    M = ceil(eps * lp_value / m).  Returns the rescaled graph (costs divided
    by M), M itself, and the ids of the kept edges in ``g``.
    """
    if not lp_value > 0:
        raise ValueError(f"lp_value must be positive, got {lp_value}")
    keep = np.flatnonzero(g.cost <= 2.0 * lp_value)
    if len(keep) == 0:
        raise Degenerate("every edge costs more than twice the LP value")
    scale = max(1, math.ceil(eps * lp_value / g.m))
    sub, ids = g.subgraph(keep)
    return sub.with_costs(np.ceil(sub.cost / scale - 1e-12)), scale, ids


# ---------------------------------------------------------------- max flow

def unit_max_flow(n: int, arcs: Sequence[tuple[int, int]], s: int, t: int,
                  limit: float = math.inf) -> int:
    """Number of arc-disjoint s-t paths (stops early once ``limit`` is reached)."""
    heads, caps, adj = [], [], [[] for _ in range(n)]
    for a, b in arcs:
        adj[a].append(len(heads))
        heads.append(b)
        caps.append(1)
        adj[b].append(len(heads))
        heads.append(a)
        caps.append(0)
    flow = 0
    while flow < limit:
        pred = [-1] * n
        pred[s] = -2
        queue = deque([s])
        while queue and pred[t] == -1:
            x = queue.popleft()
            for j in adj[x]:
                if caps[j] and pred[heads[j]] == -1:
                    pred[heads[j]] = j
                    queue.append(heads[j])
        if pred[t] == -1:
            break
        x = t
        while x != s:
            j = pred[x]
            caps[j] -= 1
            caps[j ^ 1] += 1
            x = heads[j ^ 1]
        flow += 1
    return flow


def is_k_root_connected(n: int, arcs: Sequence[tuple[int, int]], root: int, k: int) -> bool:
    """Every vertex is reachable from ``root`` along k arc-disjoint paths."""
    if k <= 0:
        return True
    return all(unit_max_flow(n, arcs, root, v, k) >= k for v in range(n) if v != root)


# ---------------------------------------------------------------- matroids

class _ForestUnion:
    """An independent set of the k-fold graphic matroid, kept split into k forests."""

    def __init__(self, n: int, k: int, ends: Sequence[tuple[int, int]]):
        self.n = n
        self.k = k
        self.ends = ends
        self.forest_of: dict[int, int] = {}

    def _tree_path(self, i: int, a: int, b: int) -> list[int] | None:
        """Elements of forest i on the a-b path, or None if a and b are in different trees."""
        adj: dict[int, list[tuple[int, int]]] = {}
        for e, f in self.forest_of.items():
            if f == i:
                x, y = self.ends[e]
                adj.setdefault(x, []).append((y, e))
                adj.setdefault(y, []).append((x, e))
        via = {a: None}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            if x == b:
                path = []
                while via[x] is not None:
                    x, e = via[x]
                    path.append(e)
                return path
            for y, e in adj.get(x, ()):
                if y not in via:
                    via[y] = (x, e)
                    queue.append(y)
        return None

    def search(self, x: int):
        """Shortest exchange sequence inserting x.

        Returns ("ok", parents, last, forest) if x can be added, else
        ("circuit", reached) where reached are the members that x can replace.
        """
        parent = {x: None}
        queue = deque([x])
        while queue:
            z = queue.popleft()
            a, b = self.ends[z]
            for i in range(self.k):
                if self.forest_of.get(z) == i:
                    continue
                path = self._tree_path(i, a, b)
                if path is None:
                    return "ok", parent, z, i
                for y in sorted(path):
                    if y not in parent:
                        parent[y] = (z, i)
                        queue.append(y)
        return "circuit", [y for y in parent if y != x]

    def insert(self, x: int) -> None:
        result = self.search(x)
        if result[0] != "ok":
            raise ValueError(f"element {x} is dependent on the current set")
        _, parent, z, i = result
        while True:
            old = self.forest_of.get(z)
            self.forest_of[z] = i
            if parent[z] is None:
                return
            z, _ = parent[z]
            i = old


def _shortest_path(nodes, length, sources, sinks, edges):
    """Bellman-Ford with vertex lengths, ordered by (length, hops); returns a node list or None."""
    dist = {v: (length[v], 0) for v in sources}
    pred = {v: None for v in sources}
    for _ in range(len(nodes)):
        changed = False
        for u, v in edges:
            if u in dist:
                cand = (dist[u][0] + length[v], dist[u][1] + 1)
                if v not in dist or cand < dist[v]:
                    dist[v], pred[v] = cand, u
                    changed = True
        if not changed:
            break
    reached = [v for v in sinks if v in dist]
    if not reached:
        return None
    end = min(reached, key=lambda v: (dist[v], v))
    path = []
    while end is not None:
        path.append(end)
        end = pred[end]
    return path[::-1]


def min_cost_k_arborescence(d: Digraph, root: int = 0, k: int = 1) -> ArborescenceSet:
    """Cheapest union of k arc-disjoint spanning arborescences rooted at ``root``.

    Solved as a minimum-cost common base of the partition matroid (at most k
    arcs entering each non-root vertex) and the union of k graphic matroids
    on the underlying undirected multigraph, by shortest augmenting paths.
    """
    n = d.n
    if not 0 <= root < n:
        raise ValueError(f"root {root} out of range")
    pairs = [(a.tail, a.head) for a in d.arcs]
    if not is_k_root_connected(n, pairs, root, k):
        raise NotKRootConnected(f"some vertex is not reachable from {root} by {k} arc-disjoint paths")
    ground = [a.id for a in d.arcs if a.head != root and a.tail != a.head]
    by_id = {a.id: a for a in d.arcs}
    ends = {a.id: (a.tail, a.head) for a in d.arcs}
    target = k * (n - 1)
    chosen: set[int] = set()

    while len(chosen) < target:
        inside = sorted(chosen)
        outside = [x for x in ground if x not in chosen]
        load: dict[int, int] = {}
        for y in inside:
            load[by_id[y].head] = load.get(by_id[y].head, 0) + 1
        forests = _ForestUnion(n, k, ends)
        for y in inside:
            forests.insert(y)
        sources, sinks, edges = [], [], []
        for x in outside:
            h = by_id[x].head
            if load.get(h, 0) < k:
                sources.append(x)
                edges.extend((y, x) for y in inside)
            else:
                edges.extend((y, x) for y in inside if by_id[y].head == h)
            result = forests.search(x)
            if result[0] == "ok":
                sinks.append(x)
                edges.extend((x, y) for y in inside)
            else:
                edges.extend((x, y) for y in result[1])
        length = {x: by_id[x].cost for x in outside}
        length.update({y: -by_id[y].cost for y in inside})
        path = _shortest_path(ground, length, sources, set(sinks), edges)
        if path is None:
            raise NotKRootConnected(f"no common base of size {target}")
        chosen.symmetric_difference_update(path)

    arcs = tuple(sorted(chosen))
    trees = decompose(n, [(by_id[a].tail, by_id[a].head, a) for a in arcs], root, k)
    return ArborescenceSet(arcs, root, k, math.fsum(by_id[a].cost for a in arcs), trees)


def decompose(n: int, arcs: Sequence[tuple[int, int, int]], root: int, k: int) -> tuple:
    """Split (tail, head, id) arcs into k arc-disjoint spanning arborescences.

    Grows one arborescence at a time and accepts an arc only if the arcs not
    yet used keep one less unit of root connectivity.
    """
    remaining = list(arcs)
    trees = []
    for left in range(k, 0, -1):
        reached = {root}
        tree: list[int] = []
        while len(reached) < n:
            for a in remaining:
                tail, head, ident = a
                if tail not in reached or head in reached or ident in tree:
                    continue
                rest = [(t, h) for t, h, i in remaining if i not in tree and i != ident]
                if is_k_root_connected(n, rest, root, left - 1):
                    tree.append(ident)
                    reached.add(head)
                    break
            else:
                raise NotKRootConnected("arc set does not split into arc-disjoint arborescences")
        trees.append(tuple(sorted(tree)))
        used = set(tree)
        remaining = [a for a in remaining if a[2] not in used]
    return tuple(trees)


def induce_undirected(arb: ArborescenceSet, d: Digraph) -> list[int]:
    """Distinct undirected source edges of the chosen arcs, ascending."""
    by_id = {a.id: a for a in d.arcs}
    return sorted({by_id[a].source_edge for a in arb.arcs})


# ---------------------------------------------------------------- pipeline

@dataclass(frozen=True)
class RoundingResult:
    edges: tuple
    cost: float
    arborescence_cost: float
    lp_objective: float
    support_size: int
    scale: int
    verified: bool
    seed_used: int

    @property
    def ratio(self) -> float:
        return self.cost / self.lp_objective if self.lp_objective > 0 else math.nan


def round_solution(g: Graph, x, eps: float, seed: int = 0, root: int = 0,
                   retries: int = 8) -> RoundingResult:
    """Sparsify, bidirect, solve the k-arborescence problem and induce an integral kECSS solution.

    If a sample's support is not k-edge-connected the sampler is rerun with
    derived seeds; after ``retries`` failures the full support of x is used.
    """
    from .sparsify import compress

    k = g.k
    x = np.asarray(x, dtype=float)
    if not edge_connectivity_at_least(g, range(g.m), k):
        raise Infeasible(f"graph is not {k}-edge-connected")
    lp_objective = math.fsum(g.cost * x)
    if g.n == 1:
        return RoundingResult((), 0.0, 0.0, lp_objective, 0, 1, True, seed)

    support, weights, used = None, None, seed
    for attempt in range(retries):
        used = seed + attempt * 7919
        sample = compress(g, x, eps, used, k)
        ids = sample.support
        if edge_connectivity_at_least(g, ids, k):
            support, weights = ids, sample.y[ids]
            break
    if support is None:
        support = np.flatnonzero(x > 0)
        weights = x[support]
        used = -1
        if not edge_connectivity_at_least(g, support, k):
            support, weights = np.arange(g.m), np.maximum(x, 0.0)

    sub, parent = g.subgraph(support)
    c_star = math.fsum(sub.cost * weights)
    scaled, scale, kept = preprocess_costs(sub, c_star, eps)
    if not edge_connectivity_at_least(scaled, range(scaled.m), k):
        # dropping expensive edges can only hurt when the LP value is a poor estimate
        scaled, scale, kept = sub, 1, np.arange(sub.m)
    d = bidirect(scaled)
    arb = min_cost_k_arborescence(d, root, k)
    local = induce_undirected(arb, d)
    edges = tuple(int(e) for e in sorted(parent[kept[local]]))
    cost = math.fsum(g.cost[list(edges)])
    arb_cost = math.fsum(g.cost[parent[kept[d.arcs[a].source_edge]]] for a in arb.arcs)
    verified = edge_connectivity_at_least(g, edges, k)
    return RoundingResult(edges, cost, arb_cost, lp_objective, len(support), scale, verified, used)
