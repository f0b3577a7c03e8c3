"""Edge strengths and constrained-cut-preserving sampling of fractional solutions."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, all_sides, as_weights, components
from .mincut import adjacency, stoer_wagner


@dataclass(frozen=True)
class StrengthMap:
    kappa: np.ndarray

    def ratio_sum(self, w) -> float:
        """sum_e w_e / kappa_e, skipping zero-weight edges."""
        w = as_weights(w)
        nz = w > 0
        return float((w[nz] / self.kappa[nz]).sum())


def edge_strengths(g: Graph, w) -> StrengthMap:
    """Exact strengths by recursive minimum-cut decomposition.

    An edge crossing the minimum cut of the piece that contains it has the
    strength of that piece's cut value (or of an enclosing piece, whichever
    is larger); the recursion splits each piece along its minimum cut.
    """
    w = as_weights(w)
    if np.any(w < 0):
        raise ValueError("edge weights must be nonnegative")
    kappa = np.zeros(g.m)
    positive = w > 0
    local = np.full(g.n, -1, dtype=np.int64)
    stack = [(np.arange(g.n), 0.0)]
    while stack:
        verts, floor = stack.pop()
        if len(verts) < 2:
            continue
        inside = np.zeros(g.n, dtype=bool)
        inside[verts] = True
        induced = np.flatnonzero(inside[g.u] & inside[g.v])
        local[verts] = np.arange(len(verts))
        lu, lv = local[g.u[induced]], local[g.v[induced]]
        live = positive[induced]
        parts = components(len(verts), lu[live], lv[live])
        if len(parts) > 1:
            label = np.empty(len(verts), dtype=np.int64)
            for j, part in enumerate(parts):
                label[part] = j
            split = label[lu] != label[lv]
            kappa[induced[split]] = floor
            stack.extend((verts[part], floor) for part in parts)
            continue
        value, side = stoer_wagner(adjacency(len(verts), lu, lv, w[induced]))
        level = max(floor, value)
        mask = np.zeros(len(verts), dtype=bool)
        mask[side] = True
        crossing = mask[lu] != mask[lv]
        kappa[induced[crossing]] = level
        stack.append((verts[mask], level))
        stack.append((verts[~mask], level))
    return StrengthMap(kappa)


@dataclass(frozen=True)
class SamplingConstants:
    """delta = ceil(c_delta * k * d * ln n); the defaults are c_delta = 4, d = 3."""

    c_delta: float = 4.0
    d: float = 3.0

    def delta(self, k: int, n: int) -> int:
        return int(math.ceil(self.c_delta * k * self.d * math.log(max(n, 2))))


@dataclass(frozen=True)
class SparseSolution:
    y: np.ndarray
    sampled: np.ndarray = field(repr=False)
    probabilities: np.ndarray = field(repr=False)
    delta: int = 0

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.y > 0)

    @property
    def support_size(self) -> int:
        return int((self.y > 0).sum())


def edge_uniforms(seed: int, m: int) -> np.ndarray:
    """Uniform draw per edge id from a counter-based Philox stream.

    Draw ``e`` depends only on (seed, e), so kept sets do not depend on the
    order in which edges are processed.
    """
    return np.random.Generator(np.random.Philox(key=int(seed))).random(m)


def sampling_probabilities(g: Graph, x, eps: float, k: int | None = None,
                           constants: SamplingConstants = SamplingConstants()) -> tuple[np.ndarray, int]:
    """r_e = max(p_e, q_e) with p from strengths and q from cost shares."""
    k = g.k if k is None else k
    x = as_weights(x)
    delta = constants.delta(k, g.n)
    kappa = edge_strengths(g, x).kappa
    support = x > 0
    p = np.zeros(g.m)
    q = np.zeros(g.m)
    p[support] = np.minimum(1.0, delta * x[support] / (eps ** 2 * kappa[support]))
    total_cost = float(g.cost @ x)
    if total_cost > 0:
        q[support] = np.minimum(1.0, delta * g.cost[support] * x[support] / (eps ** 2 * total_cost))
    return np.maximum(p, q), delta


def compress(g: Graph, x, eps: float, seed: int = 0, k: int | None = None,
             constants: SamplingConstants = SamplingConstants()) -> SparseSolution:
    """Sample the support of ``x`` keeping constrained cuts within (1 +- eps).

    Edge e survives with probability r_e at weight x_e / r_e; the returned
    ``y`` is those weights scaled by (1 + eps), which restores feasibility.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    x = as_weights(x)
    r, delta = sampling_probabilities(g, x, eps, k, constants)
    keep = (edge_uniforms(seed, g.m) < r) & (r > 0)
    sampled = np.zeros(g.m)
    sampled[keep] = x[keep] / r[keep]
    return SparseSolution((1.0 + eps) * sampled, sampled, r, delta)


@dataclass(frozen=True)
class CutCheck:
    side: frozenset
    free: tuple
    original: float
    sampled: float

    @property
    def ratio(self) -> float:
        if self.original == 0:
            return 1.0 if self.sampled == 0 else math.inf
        return self.sampled / self.original


@dataclass
class DistortionReport:
    worst: CutCheck | None
    checked: int
    failures: list = field(default_factory=list)
    failed_sides: set = field(default_factory=set)

    @property
    def worst_ratio(self) -> float:
        return 1.0 if self.worst is None else self.worst.ratio

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_constrained_cuts(g: Graph, original, sampled, k: int | None = None, eps: float = 0.1,
                            sides=None, exhaustive_limit: int = 12) -> DistortionReport:
    """Compare sampled and original weight of every checked constrained cut C \\ F.

    Sides default to all 2^(n-1) - 1 cuts (small n only).  For a cut with at
    most ``exhaustive_limit`` edges every F with |F| <= k-1 is checked; larger
    cuts are checked for F = {} and every single free edge.
    """
    k = g.k if k is None else k
    original = as_weights(original)
    sampled = as_weights(sampled)
    if sides is None:
        sides = all_sides(g.n)
    report = DistortionReport(None, 0)
    worst_dev = -1.0
    for side in sides:
        mask = np.asarray(side)
        if mask.dtype != bool:
            mask = g.side_mask(side)
        cut = np.flatnonzero(g.crossing(mask))
        if len(cut) == 0:
            continue
        o_total, s_total = float(original[cut].sum()), float(sampled[cut].sum())
        if len(cut) <= exhaustive_limit:
            frees = [f for size in range(min(k - 1, len(cut) - 1) + 1)
                     for f in itertools.combinations(cut.tolist(), size)]
            o = np.array([o_total - float(original[list(f)].sum()) for f in frees])
            s = np.array([s_total - float(sampled[list(f)].sum()) for f in frees])
        else:
            frees = [()] + ([(int(e),) for e in cut] if k > 1 else [])
            o = np.concatenate([[o_total], o_total - original[cut] if k > 1 else []])
            s = np.concatenate([[s_total], s_total - sampled[cut] if k > 1 else []])
        with np.errstate(divide="ignore", invalid="ignore"):
            dev = np.where(o > 0, np.abs(s / o - 1.0), np.where(s == 0, 0.0, np.inf))
        report.checked += len(frees)
        key = frozenset(int(v) for v in np.flatnonzero(mask))
        i = int(np.argmax(dev))
        if dev[i] > worst_dev:
            worst_dev = float(dev[i])
            report.worst = CutCheck(key, tuple(frees[i]), float(o[i]), float(s[i]))
        for j in np.flatnonzero(dev > eps + 1e-12):
            report.failures.append(CutCheck(key, tuple(frees[j]), float(o[j]), float(s[j])))
            report.failed_sides.add(key)
    return report
