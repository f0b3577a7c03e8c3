"""Exact global minimum cut (Stoer-Wagner) and k-edge-connectivity checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidCut
from .graph import Graph, as_weights, components


@dataclass(frozen=True)
class MinCutResult:
    side: frozenset
    value: float


def adjacency(n: int, u: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Dense symmetric matrix with parallel edges summed."""
    a = np.zeros((n, n))
    np.add.at(a, (u, v), w)
    np.add.at(a, (v, u), w)
    return a


def stoer_wagner(a: np.ndarray) -> tuple[float, list[int]]:
    """Minimum cut of the dense weight matrix ``a``; returns (value, side).

    Maximum-adjacency orderings always start at the smallest surviving vertex
    and break ties towards the smallest vertex id, so the result is a
    deterministic function of ``a``.
    """
    n = a.shape[0]
    if n < 2:
        raise InvalidCut("minimum cut needs at least two vertices")
    a = np.array(a, dtype=float)
    alive = np.ones(n, dtype=bool)
    groups = [[i] for i in range(n)]
    best = np.inf
    best_side: list[int] = []
    for count in range(n, 1, -1):
        start = int(np.argmax(alive))
        key = a[start].copy()
        key[~alive] = -np.inf
        key[start] = -np.inf
        prev, last = start, start
        for _ in range(count - 1):
            nxt = int(np.argmax(key))
            cut_of_phase = key[nxt]
            key[nxt] = -np.inf
            key += a[nxt]
            prev, last = last, nxt
        if cut_of_phase < best:
            best = float(cut_of_phase)
            best_side = list(groups[last])
        s, t = prev, last
        a[s, :] += a[t, :]
        a[:, s] += a[:, t]
        a[s, s] = 0.0
        a[t, :] = 0.0
        a[:, t] = 0.0
        alive[t] = False
        groups[s].extend(groups[t])
    return best, sorted(best_side)


def global_min_cut(g: Graph, w) -> MinCutResult:
    """Minimum-weight cut of ``g`` under nonnegative edge weights ``w``.

    A disconnected graph yields a zero-weight side.  The reported value is
    recomputed from the returned side.
    """
    w = as_weights(w)
    if g.n < 2:
        raise InvalidCut("minimum cut needs at least two vertices")
    _, side = stoer_wagner(adjacency(g.n, g.u, g.v, w))
    mask = g.side_mask(side)
    return MinCutResult(frozenset(side), float(w[g.crossing(mask)].sum()))


def edge_connectivity_at_least(g: Graph, selected: Iterable[int], k: int) -> bool:
    """True iff the spanning subgraph on ``selected`` is k-edge-connected."""
    ids = np.array(sorted(set(int(e) for e in selected)), dtype=np.int64)
    if g.n == 1:
        return True
    u, v = g.u[ids], g.v[ids]
    if len(components(g.n, u, v)) > 1:
        return False
    if k <= 1:
        return True
    value, _ = stoer_wagner(adjacency(g.n, u, v, np.ones(len(ids))))
    return value >= k - 1e-9
