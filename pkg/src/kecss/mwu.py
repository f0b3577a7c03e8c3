"""Multiplicative-weights solver for the kECSS LP with knapsack-cover constraints.

The solver keeps one weight per edge, starting at 1/c(e).  Each step finds a
near-minimum normalized free cut (C, F) and multiplies the weight of every
edge in C \\ F by exp(eps * c_min / c(e)).  Steps are grouped into ranges:
within a range the free-cut optimum is known to lie in [lam, (1+eps) lam),
and the range ends once no cut of truncated weight below k(1+eps)lam is left.
The weights scaled at the start of the best range form the fractional solution.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable, TextIO

import numpy as np

from .errors import BudgetExceeded, DegenerateCut, DualUnavailable, Infeasible
from .freecut import certified_lower_bound, static_min_free_cut
from .graph import FreeCut, Graph, WeightFn, best_val, cut_matrix
from .mincut import edge_connectivity_at_least, global_min_cut


@dataclass
class SolverConfig:
    # stop once max phi exceeds ln(m) / eps**stop_exponent
    stop_exponent: float = 2.0
    # "auto" enumerates all cuts for n <= enumerate_max_n, otherwise Stoer-Wagner
    cut_finder: str = "auto"
    enumerate_max_n: int = 10
    pool_limit: int = 2048
    budget_factor: float = 40.0
    trace: TextIO | None = None
    on_punish: Callable | None = None


class SolverState:
    """Weights, congestion and dual bookkeeping of one solver run."""

    def __init__(self, g: Graph, eps: float):
        self.g = g
        self.k = g.k
        self.eps = eps
        self.weights = WeightFn(g.cost, eps)
        self.cong = np.zeros(g.m)
        self.dual_total = 0.0
        self.punish_count = 0
        self.range_index = 0
        self.lam = math.nan
        self.max_phi = 0.0
        self.primal_best = math.nan

    @property
    def w(self) -> np.ndarray:
        return self.weights.w

    @property
    def phi(self) -> np.ndarray:
        return np.log(self.g.cost * self.w) / self.eps

    @property
    def congestion(self) -> float:
        return float(self.cong.max()) if len(self.cong) else 0.0

    @property
    def potential(self) -> float:
        return float(self.g.cost @ self.w)


@dataclass(frozen=True)
class PunishRecord:
    cut: FreeCut
    c_min: float
    delta: float
    potential_before: float
    potential_after: float


def punish(state: SolverState, fc: FreeCut, eps: float | None = None) -> PunishRecord:
    """Apply one multiplicative update to the charged edges of ``fc``.

    Every charged edge has its exponent raised by c_min, so its weight grows
    by exp(eps * c_min / c(e)) <= e^eps and its congestion by c_min / c(e);
    the cheapest charged edge gains exactly one unit of congestion.  The dual
    packing variable of the row grows by (k - |F|) * c_min.
    """
    if eps is not None and eps != state.eps:
        raise ValueError("punish eps must match the state's eps")
    charged = np.array(fc.charged_edges, dtype=np.int64)
    if len(charged) == 0:
        raise DegenerateCut("every cut edge is free; nothing to punish")
    cost = state.g.cost[charged]
    c_min = float(cost.min())
    before = state.potential
    state.weights.add(charged, c_min)
    state.cong[charged] += c_min / cost
    delta = (state.k - len(fc.free_edges)) * c_min
    state.dual_total += delta
    state.punish_count += 1
    touched_phi = float(np.log(cost * state.w[charged]).max()) / state.eps
    state.max_phi = max(state.max_phi, touched_phi)
    return PunishRecord(fc, c_min, delta, before, state.potential)


class CutFinder:
    """Finds some cut whose truncated weight is below a threshold.

    Small graphs keep the full side-by-edge matrix and answer exactly with a
    matrix-vector product.  Larger graphs keep a pool of previously found
    cuts, scan it first, and fall back to Stoer-Wagner, whose answer also
    certifies that no cut is below the threshold.
    """

    def __init__(self, g: Graph, mode: str = "auto", enumerate_max_n: int = 10,
                 pool_limit: int = 2048):
        if mode == "auto":
            mode = "enumerate" if g.n <= enumerate_max_n else "stoer_wagner"
        if mode not in ("enumerate", "stoer_wagner"):
            raise ValueError(f"unknown cut finder {mode!r}")
        self.g = g
        self.mode = mode
        self.pool_limit = pool_limit
        self.mincut_calls = 0
        self.queries = 0
        if mode == "enumerate":
            sides, crossing = cut_matrix(g)
            self._sides = list(sides)
            self._rows = crossing.astype(float)
        else:
            self._sides = []
            self._rows = np.zeros((0, g.m))

    def _cut(self, i: int):
        side = frozenset(int(x) for x in np.flatnonzero(self._sides[i]))
        cut = tuple(int(e) for e in np.flatnonzero(self._rows[i]))
        return side, cut

    def find(self, w_rho: np.ndarray, threshold: float):
        """Return ((side, cut_edges) or None, smallest truncated cut weight seen)."""
        self.queries += 1
        best = math.inf
        if len(self._rows):
            values = self._rows @ w_rho
            i = int(np.argmin(values))
            best = float(values[i])
            if best < threshold:
                return self._cut(i), best
        if self.mode == "enumerate":
            return None, best
        self.mincut_calls += 1
        res = global_min_cut(self.g, w_rho)
        if res.value < threshold:
            mask = self.g.side_mask(res.side)
            row = self.g.crossing(mask).astype(float)
            if len(self._rows) >= self.pool_limit:
                self._rows, self._sides = self._rows[1:], self._sides[1:]
            self._rows = np.vstack([self._rows, row])
            self._sides.append(mask)
            return self._cut(len(self._rows) - 1), res.value
        return None, res.value

    def min_cut_value(self, w: np.ndarray) -> float:
        if self.mode == "enumerate":
            return float((self._rows @ w).min())
        self.mincut_calls += 1
        return global_min_cut(self.g, w).value


@dataclass(frozen=True)
class RangeResult:
    w_sol: np.ndarray | None
    stopped: bool
    punishes: int
    mincut_value: float


def range_punish(g: Graph, state: SolverState, lam: float, eps: float,
                 finder: CutFinder | None = None, config: SolverConfig | None = None,
                 stop_threshold: float = math.inf, budget: float = math.inf) -> RangeResult:
    """Punish near-minimum free cuts until the free-cut optimum reaches (1+eps) lam.

    Requires OPT >= lam on entry.  The weights at entry divided by the value of
    the first punished cut are returned as the range's candidate solution.
    """
    config = config or SolverConfig()
    finder = finder or CutFinder(g, config.cut_finder, config.enumerate_max_n, config.pool_limit)
    k = state.k
    rho = (1.0 + eps) * lam
    threshold = k * rho
    w_sol = None
    count = 0
    while True:
        w = state.w
        found, value = finder.find(np.minimum(w, rho), threshold)
        if found is None:
            return RangeResult(w_sol, False, count, value)
        side, cut = found
        fc_value, free = best_val(w, cut, k)
        if not fc_value < rho * (1.0 + 1e-9):
            raise AssertionError(f"mapped free cut {fc_value} is not below rho {rho}")
        fc = FreeCut(side, cut, free, fc_value)
        if w_sol is None:
            w_sol = w / fc_value
        record = punish(state, fc)
        count += 1
        if config.on_punish is not None:
            config.on_punish(state, record)
        if state.max_phi > stop_threshold:
            return RangeResult(w_sol, True, count, value)
        if state.punish_count >= budget:
            raise BudgetExceeded(f"punish budget of {budget:.0f} exhausted")


def kc_clamp(x) -> np.ndarray:
    """Cap every coordinate at 1; keeps knapsack-cover feasibility and gives box feasibility."""
    return np.minimum(np.asarray(x, dtype=float), 1.0)


@dataclass
class SolverStats:
    ranges: int = 0
    punishes: int = 0
    mincut_calls: int = 0
    cut_queries: int = 0
    wall_time: float = 0.0
    congestion: float = 0.0
    certified_scale: float = 1.0


@dataclass
class FractionalSolution:
    x: np.ndarray
    objective: float
    dual_lower_bound: float
    eps: float
    stats: SolverStats = field(default_factory=SolverStats)
    state: SolverState | None = field(default=None, repr=False)


@dataclass(frozen=True)
class DualityReport:
    primal_best: float
    dual_bound: float
    ratio: float
    within_bound: bool


def duality_report(state: SolverState) -> DualityReport:
    """Compare the best primal objective with the scaled dual f / cong(f)."""
    cong = state.congestion
    if not cong > 0:
        raise DualUnavailable("no congestion recorded; nothing was punished")
    dual = state.dual_total / cong
    primal = state.primal_best
    ratio = primal / dual if not math.isnan(primal) else math.nan
    return DualityReport(primal, dual, ratio, bool(ratio <= 1.0 + 6.0 * state.eps))


def _trace(stream, record):
    if stream is not None:
        stream.write(json.dumps(record, sort_keys=True) + "\n")
        stream.flush()


def solve_lp(g: Graph, eps: float, seed: int = 0, config: SolverConfig | None = None) -> FractionalSolution:
    """(1 + O(eps))-approximate fractional kECSS solution.

    The run is deterministic; ``seed`` is accepted for interface symmetry with
    the randomized stages of the pipeline and does not affect the result.
    """
    config = config or SolverConfig()
    if not 0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    started = time.perf_counter()
    k = g.k
    if g.n == 1:
        state = SolverState(g, eps)
        return FractionalSolution(np.zeros(g.m), 0.0, 0.0, eps, SolverStats(), state)
    if not edge_connectivity_at_least(g, range(g.m), k):
        raise Infeasible(f"graph is not {k}-edge-connected")

    m = g.m
    log_m = math.log(m)
    stop_threshold = log_m / eps ** config.stop_exponent
    if eps * stop_threshold > 600:
        raise ValueError("eps too small: final weights would overflow double precision")
    budget = config.budget_factor * m * max(log_m, 1.0) / eps ** 2

    state = SolverState(g, eps)
    finder = CutFinder(g, config.cut_finder, config.enumerate_max_n, config.pool_limit)
    estimate = static_min_free_cut(g, state.w, k, eps)
    lam = estimate.value / (1.0 + eps)
    w_best = state.w / estimate.value
    best_obj = math.fsum(g.cost * w_best)

    while True:
        state.range_index += 1
        state.lam = lam
        res = range_punish(g, state, lam, eps, finder, config, stop_threshold, budget)
        _trace(config.trace, {
            "range": state.range_index,
            "lambda": lam,
            "punishes": res.punishes,
            "mincutValue": res.mincut_value,
            "elapsed": round(time.perf_counter() - started, 6),
        })
        lam *= 1.0 + eps
        if res.w_sol is not None:
            obj = math.fsum(g.cost * res.w_sol)
            if obj < best_obj:
                w_best, best_obj = res.w_sol, obj
        if res.stopped:
            break

    # w_best has a free cut of value 1; scale by a certified lower bound on its
    # optimum so that every knapsack-cover row holds exactly.
    scale = certified_lower_bound(g, w_best, k, 1.0, eps, min_cut_value=finder.min_cut_value)
    x = kc_clamp(w_best / scale)
    objective = math.fsum(g.cost * x)
    state.primal_best = objective
    dual = state.dual_total / state.congestion
    stats = SolverStats(
        ranges=state.range_index,
        punishes=state.punish_count,
        mincut_calls=finder.mincut_calls,
        cut_queries=finder.queries,
        wall_time=time.perf_counter() - started,
        congestion=state.congestion,
        certified_scale=scale,
    )
    return FractionalSolution(x, objective, dual, eps, stats, state)
