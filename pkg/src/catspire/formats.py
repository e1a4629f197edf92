"""Flat-file graph formats: the native edge list and DIMACS .col.

Native documents start with a header line "n m" followed by exactly m edge
lines "u v" (either orientation, 0-indexed).  Blank lines are skipped and
"#" starts a comment anywhere.  DIMACS documents are detected by their
"c"/"p edge" prelude and use 1-indexed "e u v" lines.  Both parsers reject
self-loops, out-of-range endpoints, duplicate edges (in either orientation),
and header/count mismatches, always naming the offending line.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Tuple

from .graphs import Graph
from .witnesses import parse_rational


class ParseError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def _native_lines(text: str) -> List[Tuple[int, str]]:
    out = []
    for idx, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append((idx, body))
    return out


def _int_pair(line: int, body: str, what: str) -> Tuple[int, int]:
    parts = body.split()
    if len(parts) != 2:
        raise ParseError(line, f"expected two integers for {what}, got {body!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(line, f"expected two integers for {what}, got {body!r}") from None


def _checked_edges(
    n: int, rows: List[Tuple[int, int, int]], expected: int, header_line: int
) -> List[Tuple[int, int]]:
    edges: List[Tuple[int, int]] = []
    seen = set()
    for line, u, v in rows:
        if u == v:
            raise ParseError(line, f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(line, f"vertex out of range 0..{n - 1}: {u} {v}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise ParseError(line, f"duplicate edge {u} {v}")
        seen.add(key)
        edges.append(key)
        if len(edges) > expected:
            raise ParseError(line, f"more than the declared {expected} edges")
    if len(edges) < expected:
        raise ParseError(
            header_line, f"header declares {expected} edges but only {len(edges)} given"
        )
    return edges


def parse_edge_list(text: str) -> Graph:
    lines = _native_lines(text)
    if not lines:
        raise ParseError(1, "empty document")
    header_line, header = lines[0]
    n, m = _int_pair(header_line, header, "the header")
    if n < 0 or m < 0:
        raise ParseError(header_line, "header counts must be non-negative")
    rows = [(line, *_int_pair(line, body, "an edge")) for line, body in lines[1:]]
    return Graph(n, _checked_edges(n, rows, m, header_line))


def parse_dimacs(text: str) -> Graph:
    n: Optional[int] = None
    m = 0
    header_line = 1
    rows: List[Tuple[int, int, int]] = []
    for idx, raw in enumerate(text.splitlines(), start=1):
        body = raw.strip()
        if not body or body.startswith("c"):
            continue
        if body.startswith("p"):
            if n is not None:
                raise ParseError(idx, "second problem line")
            parts = body.split()
            if len(parts) != 4 or parts[1] != "edge":
                raise ParseError(idx, f"expected 'p edge n m', got {body!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(idx, f"expected 'p edge n m', got {body!r}") from None
            if n < 0 or m < 0:
                raise ParseError(idx, "problem line counts must be non-negative")
            header_line = idx
        elif body.startswith("e"):
            if n is None:
                raise ParseError(idx, "edge line before the problem line")
            u, v = _int_pair(idx, body[1:].strip(), "an edge")
            rows.append((idx, u - 1, v - 1))
        else:
            raise ParseError(idx, f"unrecognized line {body!r}")
    if n is None:
        raise ParseError(1, "missing problem line")
    return Graph(n, _checked_edges(n, rows, m, header_line))


def parse_graph(text: str) -> Graph:
    """Parse either format, sniffing DIMACS by its 'c'/'p' prelude."""
    for raw in text.splitlines():
        body = raw.strip()
        if not body:
            continue
        first = body.split()[0]
        if first in ("c", "p", "e"):
            return parse_dimacs(text)
        break
    return parse_edge_list(text)


def serialize_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_weights(text: str) -> List[Fraction]:
    """One non-negative rational per line; comments and blanks as usual."""
    weights = []
    for line, body in _native_lines(text):
        try:
            w = parse_rational(body)
        except ValueError as ex:
            raise ParseError(line, str(ex)) from None
        if w < 0:
            raise ParseError(line, f"negative weight {body}")
        weights.append(w)
    return weights
