"""Reading and writing instance and solution files.

Instance format (UTF-8, one record per line)::

    c optional comment
    p kecss <n> <m> <k>
    e <u> <v> <cost>        # m lines, 0-based vertex ids, decimal costs

A solution file lists one edge id per line; blank lines and ``c`` comments
are ignored.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable

from .errors import ParseError
from .graph import Graph


def _int(token: str, what: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", line) from None


def parse_instance(text: str) -> Graph:
    header = None
    edges: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line == "c" or line.startswith("c "):
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if header is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 5 or parts[1] != "kecss":
                raise ParseError("header must read 'p kecss <n> <m> <k>'", lineno)
            n, m, k = (_int(t, name, lineno) for t, name in zip(parts[2:], ("n", "m", "k")))
            if n < 1 or m < 0 or k < 1:
                raise ParseError("header needs n >= 1, m >= 0, k >= 1", lineno)
            header = (n, m, k, lineno)
        elif tag == "e":
            if header is None:
                raise ParseError("edge line before the 'p kecss' header", lineno)
            if len(parts) != 4:
                raise ParseError("edge line must read 'e <u> <v> <cost>'", lineno)
            u, v = _int(parts[1], "u", lineno), _int(parts[2], "v", lineno)
            try:
                cost = float(parts[3])
            except ValueError:
                raise ParseError(f"cost must be a number, got {parts[3]!r}", lineno) from None
            n = header[0]
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"vertex id out of range 0..{n - 1}", lineno)
            if u == v:
                raise ParseError("self-loops are not allowed", lineno)
            if not (math.isfinite(cost) and cost > 0):
                raise ParseError("cost must be finite and positive", lineno)
            edges.append((u, v, cost))
        else:
            raise ParseError(f"unknown record type {tag!r}", lineno)
    if header is None:
        raise ParseError("missing 'p kecss <n> <m> <k>' header", 1)
    n, m, k, lineno = header
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges but {len(edges)} were given", lineno)
    return Graph.from_edges(n, edges, k)


def read_instance(path: str | Path) -> Graph:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def _number(c: float) -> str:
    """Shortest text that parses back to exactly ``c``."""
    c = float(c)
    return str(int(c)) if c.is_integer() and abs(c) < 2 ** 53 else repr(c)


def format_instance(g: Graph, comment: str | None = None) -> str:
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p kecss {g.n} {g.m} {g.k}")
    lines.extend(f"e {a} {b} {_number(c)}" for _, a, b, c in g.edges)
    return "\n".join(lines) + "\n"


def write_instance(path: str | Path, g: Graph, comment: str | None = None) -> None:
    Path(path).write_text(format_instance(g, comment), encoding="utf-8")


def parse_solution(text: str, m: int | None = None) -> list[int]:
    ids = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line == "c" or line.startswith("c "):
            continue
        e = _int(line, "edge id", lineno)
        if e < 0 or (m is not None and e >= m):
            raise ParseError(f"edge id {e} out of range", lineno)
        ids.append(e)
    return ids


def read_solution(path: str | Path, m: int | None = None) -> list[int]:
    return parse_solution(Path(path).read_text(encoding="utf-8"), m)


def write_solution(path: str | Path, edges: Iterable[int]) -> None:
    Path(path).write_text("".join(f"{int(e)}\n" for e in edges), encoding="utf-8")
