"""Approximate minimum-cost k-edge-connected spanning subgraphs.

The pipeline is: :func:`solve_lp` (multiplicative weights over knapsack-cover
constraints with a normalized free-cut oracle), :func:`compress` (strength-based
sampling of the fractional support) and :func:`round_solution` (minimum-cost
k-arborescence on the bidirected support, induced back to undirected edges).
"""

__version__ = "0.1.0"

from .arborescence import (
    Arc,
    ArborescenceSet,
    Digraph,
    RoundingResult,
    bidirect,
    induce_undirected,
    min_cost_k_arborescence,
    preprocess_costs,
    round_solution,
)
from .errors import (
    BudgetExceeded,
    Degenerate,
    DegenerateCut,
    DualUnavailable,
    Infeasible,
    InfeasibleGraph,
    InvalidCut,
    InvalidThreshold,
    KecssError,
    NotBelowThreshold,
    NotKRootConnected,
    ParseError,
    RefusedScale,
)
from .freecut import check_mapping_theorem, map_cut_to_free_cut, static_min_free_cut, truncate
from .graph import FreeCut, Graph, WeightFn, best_val, cut_edges, val
from .io import read_instance, read_solution, write_instance, write_solution
from .mincut import edge_connectivity_at_least, global_min_cut
from .mwu import FractionalSolution, SolverConfig, duality_report, kc_clamp, punish, range_punish, solve_lp
from .oracles import brute_free_cut, exact_small_lp, exhaustive_ip
from .sparsify import SparseSolution, StrengthMap, compress, edge_strengths, verify_constrained_cuts

# the rounding entry point under its short name
round = round_solution
