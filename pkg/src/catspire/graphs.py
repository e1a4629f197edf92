"""Immutable simple graphs over integer vertex ids, with bitmask adjacency.

Vertex sets are thin wrappers around Python ints used as bitmasks, so the
hot operations (intersection, difference, connectivity floods) are single
big-integer instructions.  Induced subgraphs are always represented as a
(graph, VertexSet) pair and never copied.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List, Sequence, Tuple


class VertexSet:
    """Immutable set of vertex ids backed by an int bitmask.

    Iteration is in ascending id order; every deterministic tie-break in
    the engine derives from that ordering.
    """

    __slots__ = ("mask",)

    def __init__(self, vertices: Iterable[int] = ()) -> None:
        mask = 0
        for v in vertices:
            if v < 0:
                raise ValueError(f"negative vertex id {v}")
            mask |= 1 << v
        self.mask = mask

    @classmethod
    def from_mask(cls, mask: int) -> "VertexSet":
        if mask < 0:
            raise ValueError("negative mask")
        s = cls.__new__(cls)
        s.mask = mask
        return s

    def __contains__(self, v: int) -> bool:
        return v >= 0 and (self.mask >> v) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VertexSet) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self.mask | other.mask)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self.mask & other.mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self.mask & ~other.mask)

    def isdisjoint(self, other: "VertexSet") -> bool:
        return self.mask & other.mask == 0

    def issubset(self, other: "VertexSet") -> bool:
        return self.mask & ~other.mask == 0

    def least(self) -> int:
        """Least member id; errors on the empty set."""
        if not self.mask:
            raise ValueError("empty vertex set has no least member")
        return (self.mask & -self.mask).bit_length() - 1

    def members(self) -> Tuple[int, ...]:
        return tuple(self)

    def __repr__(self) -> str:
        return f"VertexSet({{{', '.join(map(str, self))}}})"


class Graph:
    """Undirected simple graph on vertices 0..n-1.

    Adjacency is one int bitmask per vertex.  Instances are immutable by
    convention: nothing in this package mutates a graph after construction.
    """

    __slots__ = ("n", "_adj")

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()) -> None:
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self._adj = adj

    def adj(self, v: int) -> int:
        """Adjacency bitmask of v (fast path used throughout the engine)."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and (self._adj[u] >> v) & 1 == 1

    def vertices(self) -> VertexSet:
        return VertexSet.from_mask((1 << self.n) - 1 if self.n else 0)

    def edges(self) -> List[Tuple[int, int]]:
        """All edges as (u, v) with u < v, in ascending order."""
        out = []
        for u in range(self.n):
            higher = self._adj[u] >> (u + 1)
            while higher:
                low = higher & -higher
                out.append((u, u + 1 + low.bit_length() - 1))
                higher ^= low
        return out

    @property
    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self._adj) // 2

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._adj == other._adj

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def neighbours(g: Graph, v: int) -> VertexSet:
    """The set of neighbours of v."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range for n={g.n}")
    return VertexSet.from_mask(g.adj(v))


def _flood(g: Graph, seed: int, allowed: int) -> int:
    """Mask of the connected component of `seed` inside `allowed`."""
    comp = seed
    frontier = seed
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= g.adj(low.bit_length() - 1)
            f ^= low
        nxt &= allowed & ~comp
        comp |= nxt
        frontier = nxt
    return comp


def components(g: Graph, x: VertexSet) -> List[VertexSet]:
    """Connected components of the induced subgraph on x.

    Ordered by descending cardinality, ties broken by least member id.
    """
    remaining = x.mask
    pieces = []
    while remaining:
        low = remaining & -remaining
        comp = _flood(g, low, remaining)
        pieces.append(comp)
        remaining &= ~comp
    # peeling from the least remaining bit makes the stable sort's ties
    # come out in least-member order automatically
    pieces.sort(key=lambda m: -m.bit_count())
    return [VertexSet.from_mask(m) for m in pieces]


def is_connected(g: Graph, x: VertexSet) -> bool:
    """True iff the induced subgraph on x is connected (empty counts as connected)."""
    if not x.mask:
        return True
    low = x.mask & -x.mask
    return _flood(g, low, x.mask) == x.mask


def is_anticomplete(g: Graph, a: VertexSet, b: VertexSet) -> bool:
    """True iff a and b are disjoint and no edge of g joins them."""
    if a.mask & b.mask:
        return False
    # iterate the smaller side
    small, other = (a, b) if len(a) <= len(b) else (b, a)
    for v in small:
        if g.adj(v) & other.mask:
            return False
    return True


def covers(g: Graph, x: VertexSet, y: VertexSet) -> bool:
    """True iff every vertex of y has a neighbour in x.  Requires x, y disjoint."""
    if x.mask & y.mask:
        raise ValueError("covers requires disjoint sets")
    for v in y:
        if not g.adj(v) & x.mask:
            return False
    return True


def connected_order(g: Graph, z: VertexSet, z1: int) -> List[int]:
    """Order z as z_1, ..., z_n with z_1 = z1 and every prefix connected.

    Deterministic breadth-first order from z1, ties by ascending id.
    Errors if z1 is not in z or the induced subgraph on z is disconnected.
    """
    if z1 not in z:
        raise ValueError(f"start vertex {z1} not in the set")
    seen = 1 << z1
    order = [z1]
    frontier = seen
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= g.adj(low.bit_length() - 1)
            f ^= low
        nxt &= z.mask & ~seen
        order.extend(VertexSet.from_mask(nxt))
        seen |= nxt
        frontier = nxt
    if seen != z.mask:
        raise ValueError("induced subgraph is disconnected")
    return order
