"""Weight truncation and the static (1+eps)-approximate minimum normalized free cut.

Capping every weight at a threshold rho turns the free-cut question
"is there a cut of normalized value below rho?" into the plain minimum-cut
question "is there a cut of truncated weight below k * rho?".  Scanning rho
over a geometric grid then yields a (1+eps)-approximation with one exact
minimum-cut computation per grid point.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import Infeasible, InvalidThreshold, NotBelowThreshold
from .graph import FreeCut, Graph, as_weights, make_free_cut, val
from .mincut import global_min_cut

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TruncationContext:
    rho: float
    heavy: frozenset
    w_rho: np.ndarray

    def truncated_weight(self, cut: Sequence[int]) -> float:
        return float(self.w_rho[list(cut)].sum())


def truncate(w, rho: float) -> TruncationContext:
    if not rho > 0:
        raise InvalidThreshold(f"threshold must be positive, got {rho}")
    w = as_weights(w)
    heavy = frozenset(int(e) for e in np.flatnonzero(w >= rho))
    return TruncationContext(float(rho), heavy, np.minimum(w, rho))


def is_interesting(ctx: TruncationContext, cut: Sequence[int], k: int) -> bool:
    return len(ctx.heavy.intersection(int(e) for e in cut)) < k


def map_cut_to_free_cut(w, ctx: TruncationContext, cut: Sequence[int], k: int,
                        side=frozenset()) -> FreeCut:
    """Free the heavy edges of a cut whose truncated weight is below k * rho.

    The result always has value below rho.
    """
    cut = tuple(sorted(int(e) for e in cut))
    if not ctx.truncated_weight(cut) < k * ctx.rho:
        raise NotBelowThreshold(
            f"truncated cut weight {ctx.truncated_weight(cut)} is not below k*rho = {k * ctx.rho}")
    free = tuple(e for e in cut if e in ctx.heavy)
    return FreeCut(frozenset(side), cut, free, val(w, cut, free, k))


def threshold_grid(w, k: int, eps: float) -> np.ndarray:
    """Geometric thresholds L(1+eps)^i from L = min(w)/k up to the first one above w(E)."""
    w = as_weights(w)
    lo = float(w.min()) / k
    hi = float(w.sum())
    count = int(math.floor(math.log(hi / lo) / math.log1p(eps))) + 2
    return lo * (1.0 + eps) ** np.arange(count)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("KECSS_THREADS", "1")))
    except ValueError:
        return 1


def static_min_free_cut(g: Graph, w, k: int | None = None, eps: float = 0.1) -> FreeCut:
    """(1+eps)-approximate minimum normalized free cut of ``g`` under ``w``."""
    k = g.k if k is None else k
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if g.n < 2 or not g.is_connected():
        raise Infeasible("free-cut oracle needs a connected graph with at least two vertices")
    w = as_weights(w)
    grid = threshold_grid(w, k, eps)
    log.debug("free-cut grid: %d thresholds in [%g, %g]", len(grid), grid[0], grid[-1])

    def at(rho):
        side = global_min_cut(g, np.minimum(w, rho)).side
        return make_free_cut(g, w, side, k)

    threads = min(_threads(), len(grid))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(at, grid))
    else:
        results = [at(rho) for rho in grid]
    return min(results, key=lambda fc: fc.value)


def opt_at_least(g: Graph, w, k: int, rho: float,
                 min_cut_value: Callable[[np.ndarray], float] | None = None) -> bool:
    """Exact test of OPT_w >= rho, via min cut of the rho-truncated weights >= k*rho."""
    w = as_weights(w)
    wr = np.minimum(w, rho)
    value = min_cut_value(wr) if min_cut_value is not None else global_min_cut(g, wr).value
    return value >= k * rho


def certified_lower_bound(g: Graph, w, k: int, upper: float, eps: float,
                          rel_tol: float = 1e-12, min_cut_value=None) -> float:
    """Largest threshold (to ``rel_tol``) certified to be <= OPT_w.

    ``upper`` must be the value of some free cut and ``upper / (1+eps)`` a
    lower bound on the optimum, as returned by :func:`static_min_free_cut`.
    """
    lo, hi = upper / (1.0 + eps), upper
    if opt_at_least(g, w, k, hi, min_cut_value):
        return hi
    while not opt_at_least(g, w, k, lo, min_cut_value):
        hi, lo = lo, lo / (1.0 + eps)
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if opt_at_least(g, w, k, mid, min_cut_value):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class MappingDiagnostics:
    rho: float
    mincut_value: float
    lower: float
    upper: float
    in_range: bool
    precondition_ok: bool
    opt: float


def check_mapping_theorem(g: Graph, w, k: int, lam: float, gamma: float,
                          opt: float | None = None) -> MappingDiagnostics:
    """Minimum cut of w_rho at rho = (1+gamma)*lam and whether it lies in [k rho/(1+gamma), k rho).

    ``opt`` defaults to the exhaustive free-cut optimum.
    """
    if opt is None:
        from .oracles import brute_free_cut
        opt = brute_free_cut(g, w, k).value
    rho = (1.0 + gamma) * lam
    value = global_min_cut(g, np.minimum(as_weights(w), rho)).value
    # k*rho/(1+gamma) is exactly k*lam; use the latter to avoid rounding
    lower, upper = k * lam, k * rho
    return MappingDiagnostics(
        rho=rho,
        mincut_value=value,
        lower=lower,
        upper=upper,
        in_range=bool(lower <= value < upper),
        precondition_ok=bool(lam <= opt < (1.0 + gamma) * lam),
        opt=float(opt),
    )
