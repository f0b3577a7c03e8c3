"""Command-line interface: ``kecss {solve-lp,round,verify,oracle} INSTANCE ...``.

Every command prints one JSON document (``"schema": 1``) on stdout.  Exit
codes: 0 ok, 1 parse error, 2 infeasible or failed verification, 64 usage
error, 70 iteration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .arborescence import round_solution
from .errors import BudgetExceeded, Infeasible, NotKRootConnected, ParseError, RefusedScale
from .graph import Graph
from .io import read_instance, read_solution
from .mincut import edge_connectivity_at_least
from .mwu import SolverConfig, solve_lp
from .oracles import brute_free_cut, exact_small_lp, exhaustive_ip

SCHEMA = 1
EXIT_OK, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 64, 70


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _eps(text: str) -> float:
    try:
        eps = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < eps < 0.5:
        raise argparse.ArgumentTypeError(f"eps must lie in (0, 0.5), got {text}")
    return eps


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _emit(payload: dict) -> None:
    payload = {"schema": SCHEMA, **payload}
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _load(args) -> Graph:
    g = read_instance(args.instance)
    return g.with_k(args.k) if args.k is not None else g


def cmd_solve_lp(args) -> int:
    g = _load(args)
    config = SolverConfig(trace=sys.stderr if args.trace else None)
    sol = solve_lp(g, args.eps, args.seed, config)
    ratio = sol.objective / sol.dual_lower_bound if sol.dual_lower_bound > 0 else None
    _emit({
        "command": "solve-lp",
        "k": g.k,
        "eps": args.eps,
        "objective": sol.objective,
        "dualLowerBound": sol.dual_lower_bound,
        "ratio": ratio,
        "x": [{"edge": e, "value": float(v)} for e, v in enumerate(sol.x)],
        "stats": {
            "ranges": sol.stats.ranges,
            "punishes": sol.stats.punishes,
            "mincutCalls": sol.stats.mincut_calls,
            "cutQueries": sol.stats.cut_queries,
            "congestion": sol.stats.congestion,
            "certifiedScale": sol.stats.certified_scale,
        },
    })
    return EXIT_OK


def cmd_round(args) -> int:
    g = _load(args)
    config = SolverConfig(trace=sys.stderr if args.trace else None)
    sol = solve_lp(g, args.eps, args.seed, config)
    res = round_solution(g, sol.x, args.eps, args.seed)
    bound = 2.0 * (1.0 + 3.0 * args.eps)
    _emit({
        "command": "round",
        "k": g.k,
        "eps": args.eps,
        "edges": list(res.edges),
        "cost": res.cost,
        "arborescenceCost": res.arborescence_cost,
        "lpObjective": sol.objective,
        "approxRatioVsLp": res.cost / sol.objective if sol.objective > 0 else None,
        "ratioBound": bound,
        "withinBound": bool(sol.objective == 0 or res.cost <= bound * sol.objective),
        "supportSize": res.support_size,
        "costScale": res.scale,
        "verified": res.verified,
    })
    return EXIT_OK if res.verified else EXIT_INFEASIBLE


def cmd_verify(args) -> int:
    g = _load(args)
    edges = sorted(set(read_solution(args.solution, g.m)))
    ok = edge_connectivity_at_least(g, edges, g.k)
    _emit({
        "command": "verify",
        "k": g.k,
        "edges": len(edges),
        "cost": math.fsum(g.cost[edges]) if edges else 0.0,
        "verified": bool(ok),
    })
    return EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    g = _load(args)
    payload = {"command": "oracle", "which": args.which, "k": g.k}
    if args.which == "freecut":
        # edge costs are read as the weights of the free-cut problem
        fc = brute_free_cut(g, g.cost)
        payload.update(value=fc.value, side=sorted(fc.side), cutEdges=list(fc.cut_edges),
                       freeEdges=list(fc.free_edges))
    elif args.which == "lp":
        value, x = exact_small_lp(g)
        payload.update(value=value, x=[{"edge": e, "value": float(v)} for e, v in enumerate(x)])
    else:
        value, edges = exhaustive_ip(g)
        payload.update(value=value, edges=edges)
    _emit(payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kecss", description="Approximate minimum-cost k-edge-connected spanning subgraphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("instance", help="instance file ('p kecss n m k' format)")
        p.add_argument("--k", type=_positive_int, default=None, help="override the connectivity in the header")

    p = sub.add_parser("solve-lp", help="approximate the fractional LP optimum")
    common(p)
    p.add_argument("--eps", type=_eps, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", action="store_true", help="write one JSON line per range to stderr")
    p.set_defaults(func=cmd_solve_lp)

    p = sub.add_parser("round", help="solve the LP and round it to an integral solution")
    common(p)
    p.add_argument("--eps", type=_eps, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", action="store_true", help="write one JSON line per range to stderr")
    p.set_defaults(func=cmd_round)

    p = sub.add_parser("verify", help="check that an edge set is k-edge-connected")
    common(p)
    p.add_argument("solution", help="file with one edge id per line")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="run an exhaustive reference solver on a small instance")
    common(p)
    p.add_argument("--which", choices=("freecut", "lp", "ip"), required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def _fail(code: int, kind: str, message: str, **extra) -> int:
    sys.stderr.write(f"kecss: {message}\n")
    _emit({"error": {"type": kind, "message": message, **extra}})
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        return _fail(EXIT_PARSE, "ParseError", str(exc), line=exc.line)
    except OSError as exc:
        return _fail(EXIT_PARSE, "IOError", str(exc))
    except (Infeasible, NotKRootConnected) as exc:
        return _fail(EXIT_INFEASIBLE, "Infeasible", str(exc))
    except RefusedScale as exc:
        return _fail(EXIT_USAGE, "RefusedScale", str(exc))
    except BudgetExceeded as exc:
        return _fail(EXIT_BUDGET, "BudgetExceeded", str(exc))


if __name__ == "__main__":
    sys.exit(main())
