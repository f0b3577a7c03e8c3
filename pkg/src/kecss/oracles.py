"""Brute-force reference solvers for tiny instances.

Everything here enumerates: every vertex side, every free-edge set, every
edge subset.  The point is to be obviously right, not fast, so each entry
point refuses instances beyond a small size.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .errors import Infeasible, RefusedScale
from .graph import FreeCut, Graph, as_weights, cut_matrix, make_free_cut
from .mincut import edge_connectivity_at_least

MAX_FREECUT_N = 16
MAX_LP_N = 12
MAX_LP_K = 3
MAX_LP_ROWS = 60_000
MAX_IP_M = 22


def free_cut_values(crossing: np.ndarray, w: np.ndarray, k: int) -> np.ndarray:
    """Best normalized free-cut value of every row of a side-by-edge crossing matrix."""
    weights = np.where(crossing, w[None, :], 0.0)
    heaviest = -np.sort(-weights, axis=1)
    prefix = np.concatenate([np.zeros((len(weights), 1)), np.cumsum(heaviest, axis=1)], axis=1)
    total = prefix[:, -1]
    sizes = crossing.sum(axis=1)
    best = np.full(len(weights), np.inf)
    for i in range(min(k, prefix.shape[1])):
        vals = np.maximum(total - prefix[:, i], 0.0) / (k - i)
        vals[sizes < i] = np.inf
        best = np.minimum(best, vals)
    return best


def brute_free_cut(g: Graph, w, k: int | None = None) -> FreeCut:
    """Exact minimum normalized free cut by enumerating every vertex side."""
    k = g.k if k is None else k
    if g.n > MAX_FREECUT_N:
        raise RefusedScale(f"brute_free_cut handles n <= {MAX_FREECUT_N}, got {g.n}")
    if g.n < 2:
        raise RefusedScale("need at least two vertices")
    w = as_weights(w)
    sides, crossing = cut_matrix(g)
    values = free_cut_values(crossing, w, k)
    best = int(np.argmin(values))
    return make_free_cut(g, w, np.flatnonzero(sides[best]), k)


def brute_min_cut_value(g: Graph, w) -> float:
    _, crossing = cut_matrix(g)
    return float((crossing @ as_weights(w)).min())


# ---------------------------------------------------------------- exact LPs

def _simplex_max(at, b, c, exact: bool):
    """Maximize b.y subject to at @ y <= c, y >= 0, for c > 0.

    Dense tableau with Bland's rule.  Returns (value, y, x) where x holds the
    shadow prices of the m constraints, i.e. an optimal solution of the
    covering LP min{c.x : at.T @ x >= b, x >= 0}.
    """
    m, r = at.shape
    dtype = object if exact else float
    conv = (lambda a: np.vectorize(Fraction, otypes=[object])(a)) if exact else (lambda a: np.asarray(a, float))
    tab = np.zeros((m + 1, r + m + 1), dtype=dtype)
    if exact:
        tab[:] = Fraction(0)
    tab[:m, :r] = conv(at)
    for i in range(m):
        tab[i, r + i] = Fraction(1) if exact else 1.0
    tab[:m, -1] = conv(c)
    tab[m, :r] = -conv(b)
    basis = list(range(r, r + m))
    tol = 0 if exact else 1e-11
    while True:
        obj = tab[m, :-1]
        entering = next((j for j in range(r + m) if obj[j] < -tol), None)
        if entering is None:
            break
        col = tab[:m, entering]
        rows = [i for i in range(m) if col[i] > tol]
        if not rows:
            raise Infeasible("covering LP is infeasible (its dual is unbounded)")
        ratios = [(tab[i, -1] / col[i], basis[i], i) for i in rows]
        best_ratio = min(q for q, _, _ in ratios)
        # Bland: among tied rows leave by the smallest basic variable
        tied = [(bv, i) for q, bv, i in ratios if (q == best_ratio if exact else q <= best_ratio + 1e-12)]
        _, leave = min(tied)
        tab[leave] = tab[leave] / tab[leave, entering]
        for i in range(m + 1):
            if i != leave and tab[i, entering] != 0:
                tab[i] = tab[i] - tab[i, entering] * tab[leave]
        basis[leave] = entering
    y = [Fraction(0) if exact else 0.0] * r
    for i, bv in enumerate(basis):
        if bv < r:
            y[bv] = tab[i, -1]
    x = list(tab[m, r:r + m])
    return tab[m, -1], y, x


def _solve_covering(rows, rhs, g: Graph, exact: bool):
    """min c.x s.t. sum_{e in row} coef * x_e >= rhs for each row, x >= 0."""
    at = np.zeros((g.m, len(rows)))
    for j, row in enumerate(rows):
        for e, coef in row:
            at[e, j] += coef
    cost = g.cost
    if not exact:
        value, y, x = _simplex_max(at, np.array(rhs, float), cost, exact=False)
        x = np.maximum(np.array(x, float), 0.0)
        ok = np.all(at.T @ x >= np.array(rhs) - 1e-7) and abs(value - cost @ x) <= 1e-7 * max(1.0, abs(value))
        if ok:
            return float(value), x
        # numerical trouble: redo the same pivots in rational arithmetic
    value, y, x = _simplex_max(at, list(rhs), [Fraction(float(c)) for c in cost], exact=True)
    return float(value), np.array([float(v) for v in x])


def _guard_lp(g: Graph, k: int):
    if g.n > MAX_LP_N or k > MAX_LP_K:
        raise RefusedScale(f"exact_small_lp handles n <= {MAX_LP_N}, k <= {MAX_LP_K}")
    if g.n < 2:
        raise RefusedScale("need at least two vertices")
    _, crossing = cut_matrix(g)
    sizes = crossing.sum(axis=1)
    rows = sum(int(sum(math.comb(int(s), i) for i in range(k))) for s in sizes)
    if rows > MAX_LP_ROWS:
        raise RefusedScale(f"exact_small_lp would need {rows} > {MAX_LP_ROWS} constraint rows")


def kc_rows(g: Graph, k: int):
    """Every knapsack-cover row: (cut edges minus F, k - |F|) over all cuts and |F| <= k-1."""
    _, crossing = cut_matrix(g)
    for mask in crossing:
        cut = [int(e) for e in np.flatnonzero(mask)]
        for size in range(min(k - 1, len(cut)) + 1):
            for free in itertools.combinations(cut, size):
                fs = set(free)
                support = [e for e in cut if e not in fs]
                if not support:
                    raise Infeasible(f"a cut has only {len(cut)} < k = {k} edges")
                yield [(e, 1.0) for e in support], k - size


def exact_small_lp(g: Graph, k: int | None = None, formulation: str = "kc",
                   exact: bool = False) -> tuple[float, np.ndarray]:
    """Optimum of the kECSS LP on a tiny graph, as (value, x).

    ``formulation="kc"`` writes every knapsack-cover inequality explicitly;
    ``formulation="box"`` uses plain cut constraints with x <= 1.
    """
    k = g.k if k is None else k
    _guard_lp(g, k)
    if formulation == "kc":
        pairs = list(kc_rows(g, k))
    elif formulation == "box":
        _, crossing = cut_matrix(g)
        pairs = [([(int(e), 1.0) for e in np.flatnonzero(mask)], k) for mask in crossing]
        pairs += [([(e, -1.0)], -1) for e in range(g.m)]
    else:
        raise ValueError(f"unknown formulation {formulation!r}")
    rows = [p[0] for p in pairs]
    rhs = [p[1] for p in pairs]
    return _solve_covering(rows, rhs, g, exact)


# ---------------------------------------------------------------- exact IP

def exhaustive_ip(g: Graph, k: int | None = None) -> tuple[float, list[int]]:
    """Cheapest k-edge-connected spanning subgraph by branch and bound over all 2^m subsets."""
    k = g.k if k is None else k
    if g.m > MAX_IP_M:
        raise RefusedScale(f"exhaustive_ip handles m <= {MAX_IP_M}, got {g.m}")
    if g.n <= 12:
        _, crossing = cut_matrix(g)
        crossing = crossing.astype(np.int64)

        def feasible(mask):
            return g.n == 1 or bool((crossing @ mask.astype(np.int64) >= k).all())
    else:
        def feasible(mask):
            return edge_connectivity_at_least(g, np.flatnonzero(mask), k)

    everything = np.ones(g.m, dtype=bool)
    if not feasible(everything):
        raise Infeasible(f"graph is not {k}-edge-connected")
    order = sorted(range(g.m), key=lambda e: (-g.cost[e], e))
    best = [math.inf, None]

    def search(depth, mask, spent):
        if spent >= best[0]:
            return
        chosen = mask.copy()
        chosen[order[depth:]] = False
        if feasible(chosen):
            best[0], best[1] = spent, chosen
            return
        if depth == len(order):
            return
        e = order[depth]
        mask[e] = False
        if feasible(mask):
            search(depth + 1, mask, spent)
        mask[e] = True
        search(depth + 1, mask, spent + g.cost[e])

    search(0, everything.copy(), 0.0)
    chosen = best[1]
    edges = [int(e) for e in np.flatnonzero(chosen)]
    return float(g.cost[edges].sum()), edges


# ---------------------------------------------------------------- strengths

def brute_strengths(g: Graph, w) -> np.ndarray:
    """Exact edge strengths: best min cut over all vertex-induced subgraphs holding the edge."""
    if g.n > 10:
        raise RefusedScale("brute_strengths handles n <= 10")
    w = as_weights(w)
    kappa = np.zeros(g.m)
    for size in range(2, g.n + 1):
        for subset in itertools.combinations(range(g.n), size):
            inside = np.zeros(g.n, dtype=bool)
            inside[list(subset)] = True
            induced = inside[g.u] & inside[g.v]
            if not induced.any():
                continue
            best = math.inf
            for bits in range(1, 1 << (size - 1)):
                side = np.zeros(g.n, dtype=bool)
                for j, vtx in enumerate(subset):
                    if bits >> j & 1:
                        side[vtx] = True
                crossing = induced & (side[g.u] != side[g.v])
                best = min(best, float(w[crossing].sum()))
            kappa[induced] = np.maximum(kappa[induced], best)
    return kappa


def brute_k_arborescence(n: int, arcs, root: int, k: int) -> tuple[float, list[int]] | None:
    """Cheapest union of k arc-disjoint spanning root-arborescences, by enumeration.

    ``arcs`` is a list of (tail, head, cost).  Every non-root vertex picks k
    entering arcs; a choice is accepted when every vertex set avoiding the
    root is entered by at least k chosen arcs.  Returns None if infeasible.
    """
    entering = {v: [i for i, (t, h, _) in enumerate(arcs) if h == v and t != h] for v in range(n)}
    others = [v for v in range(n) if v != root]
    choices = [list(itertools.combinations(entering[v], k)) for v in others]
    subsets = [s for size in range(1, len(others) + 1) for s in itertools.combinations(others, size)]
    best: tuple[float, list[int]] | None = None
    for pick in itertools.product(*choices):
        chosen = [a for group in pick for a in group]
        cost = sum(arcs[a][2] for a in chosen)
        if best is not None and cost >= best[0]:
            continue
        ok = True
        for z in subsets:
            zs = set(z)
            if sum(1 for a in chosen if arcs[a][1] in zs and arcs[a][0] not in zs) < k:
                ok = False
                break
        if ok:
            best = (cost, sorted(chosen))
    return best
