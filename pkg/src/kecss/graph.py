"""Undirected multigraphs, MWU weight functions and normalized free cuts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidCut


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected multigraph with positive edge costs.

    Edge ``i`` joins ``u[i]`` and ``v[i]`` and costs ``cost[i]``.  Ids are the
    dense range ``0..m-1`` and never change; subgraphs carry an explicit map
    back to the ids of their parent.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    cost: np.ndarray
    k: int = 1

    def __post_init__(self):
        u = np.asarray(self.u, dtype=np.int64)
        v = np.asarray(self.v, dtype=np.int64)
        cost = np.asarray(self.cost, dtype=float)
        if not (u.shape == v.shape == cost.shape) or u.ndim != 1:
            raise ValueError("u, v and cost must be 1-d arrays of equal length")
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k}")
        if len(u) and (u.min() < 0 or v.min() < 0 or u.max() >= self.n or v.max() >= self.n):
            raise ValueError("edge endpoint out of range")
        if np.any(u == v):
            bad = int(np.flatnonzero(u == v)[0])
            raise ValueError(f"edge {bad} is a self-loop")
        if np.any(~(cost > 0)) or not np.all(np.isfinite(cost)):
            raise ValueError("edge costs must be finite and positive")
        for name, arr in (("u", u), ("v", v), ("cost", cost)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "k", int(self.k))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[float]], k: int = 1) -> "Graph":
        """Build from ``(u, v)`` or ``(u, v, cost)`` tuples; missing costs are 1."""
        us, vs, cs = [], [], []
        for e in edges:
            us.append(int(e[0]))
            vs.append(int(e[1]))
            cs.append(float(e[2]) if len(e) > 2 else 1.0)
        return cls(n, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64),
                   np.array(cs, dtype=float), k)

    @property
    def m(self) -> int:
        return len(self.u)

    @property
    def edges(self) -> list[tuple[int, int, int, float]]:
        return [(i, int(a), int(b), float(c))
                for i, (a, b, c) in enumerate(zip(self.u, self.v, self.cost))]

    def with_k(self, k: int) -> "Graph":
        return Graph(self.n, self.u, self.v, self.cost, k)

    def with_costs(self, cost) -> "Graph":
        return Graph(self.n, self.u, self.v, np.asarray(cost, dtype=float), self.k)

    def subgraph(self, edge_ids: Iterable[int]) -> tuple["Graph", np.ndarray]:
        """Spanning subgraph on ``edge_ids``; returns it with the parent-id map."""
        ids = np.array(sorted(set(int(i) for i in edge_ids)), dtype=np.int64)
        return Graph(self.n, self.u[ids], self.v[ids], self.cost[ids], self.k), ids

    def side_mask(self, side: Iterable[int]) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[list(side)] = True
        return mask

    def crossing(self, mask: np.ndarray) -> np.ndarray:
        """Boolean edge mask of δ(S) for the vertex mask ``mask``."""
        return mask[self.u] != mask[self.v]

    def is_connected(self) -> bool:
        return len(components(self.n, self.u, self.v)) == 1


def components(n: int, u: Sequence[int], v: Sequence[int]) -> list[list[int]]:
    """Connected components of the vertex range ``0..n-1`` under the given edges."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in zip(u, v):
        ra, rb = find(int(a)), find(int(b))
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return list(groups.values())


def as_weights(w) -> np.ndarray:
    if isinstance(w, WeightFn):
        return w.w
    return np.asarray(w, dtype=float)


class WeightFn:
    """MWU weights kept in additive form.

    The exponent ``v`` is authoritative; ``w(e) = exp(v(e) * eps / c(e)) / c(e)``
    is materialized on demand.  Weights start at ``1/c`` and only grow.
    """

    def __init__(self, cost, eps: float, v=None):
        self.cost = np.asarray(cost, dtype=float)
        self.eps = float(eps)
        self.scale = self.eps / self.cost
        self.v = np.zeros_like(self.cost) if v is None else np.array(v, dtype=float)
        self._w = None

    @property
    def w(self) -> np.ndarray:
        if self._w is None:
            self._w = np.exp(self.v * self.scale) / self.cost
        return self._w

    def add(self, edge_ids, amount: float) -> None:
        """Raise the exponent of ``edge_ids`` by ``amount`` (that is, by c_min)."""
        self.v[edge_ids] += amount
        if self._w is not None:
            self._w[edge_ids] = np.exp(self.v[edge_ids] * self.scale[edge_ids]) / self.cost[edge_ids]

    def copy(self) -> "WeightFn":
        return WeightFn(self.cost, self.eps, self.v)

    def __array__(self, dtype=None, copy=None):
        return self.w if dtype is None else self.w.astype(dtype)

    def __len__(self):
        return len(self.cost)


@dataclass(frozen=True)
class FreeCut:
    """A cut δ(side) with at most k-1 designated free edges."""

    side: frozenset
    cut_edges: tuple
    free_edges: tuple
    value: float

    def recompute(self, w, k: int) -> float:
        return val(w, self.cut_edges, self.free_edges, k)

    @property
    def charged_edges(self) -> tuple:
        free = set(self.free_edges)
        return tuple(e for e in self.cut_edges if e not in free)


@dataclass(frozen=True)
class CutValueBreakdown:
    """``values[i]`` is the value of the cut with its ``i`` heaviest edges freed."""

    values: np.ndarray = field(repr=False)

    @property
    def best(self) -> float:
        return float(self.values.min())


def cut_edges(g: Graph, side: Iterable[int]) -> list[int]:
    """Edge ids of δ(side), ascending."""
    mask = g.side_mask(side)
    count = int(mask.sum())
    if count == 0 or count == g.n:
        raise InvalidCut("cut side must be a proper nonempty vertex subset")
    return [int(e) for e in np.flatnonzero(g.crossing(mask))]


def val(w, cut: Sequence[int], free: Sequence[int], k: int) -> float:
    """Normalized value ``w(cut \\ free) / (k - |free|)``; infinite once |free| >= k."""
    cut_set = set(int(e) for e in cut)
    free_set = set(int(e) for e in free)
    if not free_set <= cut_set:
        raise ValueError("free edges must be a subset of the cut")
    if len(free_set) >= k:
        return math.inf
    w = as_weights(w)
    charged = [e for e in cut_set if e not in free_set]
    return float(w[charged].sum()) / (k - len(free_set))


def _heaviest_order(w: np.ndarray, cut: Sequence[int]) -> list[int]:
    # heaviest first; equal weights broken towards the larger edge id
    return sorted((int(e) for e in cut), key=lambda e: (-w[e], -e))


def value_breakdown(w, cut: Sequence[int], k: int) -> CutValueBreakdown:
    w = as_weights(w)
    order = _heaviest_order(w, cut)
    total = float(w[order].sum()) if order else 0.0
    out = np.full(k, math.inf)
    prefix = 0.0
    for i in range(k):
        if i > len(order):
            break
        out[i] = max(total - prefix, 0.0) / (k - i)
        if i < len(order):
            prefix += w[order[i]]
    return CutValueBreakdown(out)


def best_val(w, cut: Sequence[int], k: int) -> tuple[float, tuple]:
    """Minimum of ``val`` over all free sets, with the achieving free set.

    Freeing the ``i`` heaviest edges is optimal for each fixed ``i``; the
    smallest ``i`` wins ties.
    """
    if len(cut) == 0:
        raise InvalidCut("cut must be nonempty")
    w = as_weights(w)
    order = _heaviest_order(w, cut)
    values = value_breakdown(w, order, k).values
    i = int(np.argmin(values))
    return float(values[i]), tuple(order[:i])


def make_free_cut(g: Graph, w, side: Iterable[int], k: int | None = None) -> FreeCut:
    """Best free cut for the vertex side ``side`` under weights ``w``."""
    k = g.k if k is None else k
    side = frozenset(int(x) for x in side)
    cut = cut_edges(g, side)
    value, free = best_val(w, cut, k)
    return FreeCut(side, tuple(cut), free, value)


def all_sides(n: int) -> np.ndarray:
    """Vertex masks of the 2^(n-1) - 1 cuts; each side avoids vertex n-1."""
    if n < 2:
        return np.zeros((0, n), dtype=bool)
    codes = np.arange(1, 1 << (n - 1), dtype=np.int64)
    return ((codes[:, None] >> np.arange(n)) & 1).astype(bool)


def cut_matrix(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """All sides together with the boolean side-by-edge crossing matrix."""
    sides = all_sides(g.n)
    return sides, sides[:, g.u] != sides[:, g.v]
