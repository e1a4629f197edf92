"""Independent brute-force ground truth: induced embeddings, best anticomplete
pairs, exact chromatic numbers, and the witness verifier.

Nothing here shares code with the engine; these are the referees.  All
searches are deterministic and return lexicographic extremes so their
outputs can be frozen into tests.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .graphs import Graph, VertexSet, is_anticomplete, neighbours
from .witnesses import (
    AnticompletePair,
    HighMassNeighbourhood,
    HighMassVertex,
    InducedCopy,
    Stuck,
    Witness,
)

NODE_LIMIT_ENV = "CATSPIRE_ORACLE_NODE_LIMIT"
DEFAULT_NODE_LIMIT = 10**6
DEFAULT_CHROMATIC_LIMIT = 64


def default_node_limit() -> int:
    raw = os.environ.get(NODE_LIMIT_ENV)
    if raw is None:
        return DEFAULT_NODE_LIMIT
    limit = int(raw)
    if limit <= 0:
        raise ValueError(f"{NODE_LIMIT_ENV} must be positive, got {raw!r}")
    return limit


class NodeLimitExceeded(RuntimeError):
    """The backtracking search ran out of its node budget (an error, not 'absent')."""


@dataclass(frozen=True)
class EmbeddingResult:
    """mapping[i] is the image of target vertex i, or None when absent."""

    mapping: Optional[Tuple[int, ...]]

    @property
    def found(self) -> bool:
        return self.mapping is not None


def brute_induced_embedding(
    g: Graph,
    t: Graph,
    node_limit: Optional[int] = None,
    within: Optional[VertexSet] = None,
) -> EmbeddingResult:
    """Lexicographically least induced embedding of t into g, by t's vertex order.

    Candidates are tried in ascending id order, optionally restricted to the
    `within` set.  A node is one attempted (target vertex, candidate)
    assignment; exceeding node_limit raises NodeLimitExceeded.
    """
    if node_limit is None:
        node_limit = default_node_limit()
    k = t.n
    allowed = within.mask if within is not None else (1 << g.n) - 1
    if k > allowed.bit_count():
        return EmbeddingResult(None)
    if k == 0:
        return EmbeddingResult(())

    t_adj = [t.adj(i) for i in range(k)]
    images: List[int] = []
    used = 0
    nodes = 0

    def candidates(i: int) -> List[int]:
        # required adjacency pattern against already-placed vertices
        req = 0
        earlier = t_adj[i] & ((1 << i) - 1)
        while earlier:
            low = earlier & -earlier
            req |= 1 << images[low.bit_length() - 1]
            earlier ^= low
        out = []
        pool = allowed & ~used
        while pool:
            low = pool & -pool
            c = low.bit_length() - 1
            if g.adj(c) & used == req:
                out.append(c)
            pool ^= low
        return out

    def search(i: int) -> bool:
        nonlocal used, nodes
        if i == k:
            return True
        for c in candidates(i):
            nodes += 1
            if nodes > node_limit:
                raise NodeLimitExceeded(f"exceeded {node_limit} search nodes")
            images.append(c)
            used |= 1 << c
            if search(i + 1):
                return True
            used &= ~(1 << c)
            images.pop()
        return False

    if search(0):
        return EmbeddingResult(tuple(images))
    return EmbeddingResult(None)


def brute_best_anticomplete(g: Graph) -> Tuple[VertexSet, VertexSet]:
    """Best anticomplete pair on a small graph (n <= 16), exhaustively.

    Maximizes min(|a|, |b|), ties by max |a| + |b|, ties by lexicographically
    least (members(a), members(b)) with the pair ordered so a <= b.  Returns
    (empty, empty) when no nonempty anticomplete pair exists.

    For any a, the inclusion-maximal partner is V minus the closed
    neighbourhood of a; enumerating a over all subsets therefore covers every
    pair that can win under the size criteria.
    """
    n = g.n
    if n > 16:
        raise ValueError(f"exhaustive anticomplete search limited to n <= 16, got {n}")
    full = (1 << n) - 1
    best_size = None
    best_pair = None
    for a_mask in range(1, full + 1):
        closed = a_mask
        rest = a_mask
        while rest:
            low = rest & -rest
            closed |= g.adj(low.bit_length() - 1)
            rest ^= low
        b_mask = full & ~closed
        if not b_mask:
            continue
        sa, sb = a_mask.bit_count(), b_mask.bit_count()
        size_key = (min(sa, sb), sa + sb)
        if best_size is not None and size_key < best_size:
            continue
        pair = tuple(sorted((VertexSet.from_mask(a_mask).members(),
                             VertexSet.from_mask(b_mask).members())))
        if best_size is None or size_key > best_size or pair < best_pair:
            best_size, best_pair = size_key, pair
    if best_pair is None:
        return (VertexSet(), VertexSet())
    return (VertexSet(best_pair[0]), VertexSet(best_pair[1]))


def exact_chromatic_number(
    g: Graph,
    limit: int = DEFAULT_CHROMATIC_LIMIT,
    within: Optional[VertexSet] = None,
) -> int:
    """Exact chromatic number by branch and bound with saturation ordering.

    A greedy clique gives the lower bound, greedy DSATUR the upper bound.
    `within` colors an induced subgraph without copying it.
    """
    mask = within.mask if within is not None else (1 << g.n) - 1
    verts = list(VertexSet.from_mask(mask))
    k = len(verts)
    if k > limit:
        raise ValueError(f"exact coloring limited to {limit} vertices, got {k}")
    if k == 0:
        return 0
    idx = {v: i for i, v in enumerate(verts)}
    # local adjacency over positions 0..k-1
    adj = [0] * k
    for i, v in enumerate(verts):
        nb = g.adj(v) & mask
        while nb:
            low = nb & -nb
            adj[i] |= 1 << idx[low.bit_length() - 1]
            nb ^= low
    deg = [a.bit_count() for a in adj]

    # greedy clique lower bound: extend by max degree inside the candidate set
    cand = (1 << k) - 1
    clique = 0
    while cand:
        pick, pick_deg = -1, -1
        p = cand
        while p:
            low = p & -p
            i = low.bit_length() - 1
            d = (adj[i] & cand).bit_count()
            if d > pick_deg:
                pick, pick_deg = i, d
            p ^= low
        clique += 1
        cand &= adj[pick]
    lower = clique

    color = [-1] * k

    def dsatur_pick(colored_mask: int) -> int:
        best_i, best_key = -1, None
        pool = ((1 << k) - 1) & ~colored_mask
        p = pool
        while p:
            low = p & -p
            i = low.bit_length() - 1
            sat = 0
            nb = adj[i] & colored_mask
            while nb:
                nlow = nb & -nb
                sat |= 1 << color[nlow.bit_length() - 1]
                nb ^= nlow
            key = (sat.bit_count(), deg[i], -i)
            if best_key is None or key > best_key:
                best_i, best_key = i, key
            p ^= low
        return best_i

    # greedy DSATUR upper bound
    colored = 0
    used_max = 0
    for _ in range(k):
        i = dsatur_pick(colored)
        taken = 0
        nb = adj[i] & colored
        while nb:
            low = nb & -nb
            taken |= 1 << color[low.bit_length() - 1]
            nb ^= low
        c = 0
        while (taken >> c) & 1:
            c += 1
        color[i] = c
        used_max = max(used_max, c + 1)
        colored |= 1 << i
    best = used_max
    if best == lower:
        return best

    color = [-1] * k

    def solve(colored_mask: int, used: int) -> None:
        nonlocal best
        if used >= best:
            return
        if colored_mask == (1 << k) - 1:
            best = used
            return
        i = dsatur_pick(colored_mask)
        taken = 0
        nb = adj[i] & colored_mask
        while nb:
            low = nb & -nb
            taken |= 1 << color[low.bit_length() - 1]
            nb ^= low
        top = min(used + 1, best - 1)
        for c in range(top):
            if (taken >> c) & 1:
                continue
            color[i] = c
            solve(colored_mask | (1 << i), max(used, c + 1))
            color[i] = -1
            if best == lower:
                return

    solve(0, 0)
    return best


@dataclass(frozen=True)
class VerificationReport:
    verdict: str  # "pass", "fail", or "unverified"
    problems: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"


def verify_witness(g: Graph, m, t, epsilon: Fraction, w: Witness) -> VerificationReport:
    """Independently check a witness against the graph, mass, and target tree.

    All mass comparisons are >= epsilon (equality passes).  Stuck is never a
    certificate and reports 'unverified' with its diagnostics echoed.
    """
    problems: List[str] = []
    if isinstance(w, HighMassVertex):
        v = w.vertex
        if not 0 <= v < g.n:
            problems.append(f"vertex {v} out of range")
        elif m.mass(VertexSet([v])) < epsilon:
            problems.append(f"mass of vertex {v} is below epsilon")
    elif isinstance(w, HighMassNeighbourhood):
        v = w.vertex
        if not 0 <= v < g.n:
            problems.append(f"vertex {v} out of range")
        elif m.mass(neighbours(g, v)) < epsilon:
            problems.append(f"neighbourhood mass of vertex {v} is below epsilon")
    elif isinstance(w, AnticompletePair):
        if not w.a or not w.b:
            problems.append("pair sides must be nonempty")
        if not w.a.isdisjoint(w.b):
            problems.append("pair sides intersect")
        elif not is_anticomplete(g, w.a, w.b):
            problems.append("an edge joins the two sides")
        if w.a and m.mass(w.a) < epsilon:
            problems.append("mass of side a is below epsilon")
        if w.b and m.mass(w.b) < epsilon:
            problems.append("mass of side b is below epsilon")
    elif isinstance(w, InducedCopy):
        tg = t.tree if hasattr(t, "tree") else t
        mapping = w.mapping
        if len(mapping) != tg.n:
            problems.append(f"mapping covers {len(mapping)} vertices, target has {tg.n}")
        elif len(set(mapping)) != len(mapping):
            problems.append("mapping is not injective")
        elif any(not 0 <= x < g.n for x in mapping):
            problems.append("mapping image out of range")
        else:
            for i in range(tg.n):
                for j in range(i + 1, tg.n):
                    want = tg.has_edge(i, j)
                    got = g.has_edge(mapping[i], mapping[j])
                    if want != got:
                        kind = "missing" if want else "extra"
                        problems.append(
                            f"{kind} edge between images of target vertices {i} and {j}"
                        )
    elif isinstance(w, Stuck):
        detail = "; ".join(f"{k}={v}" for k, v in w.diagnostics)
        return VerificationReport("unverified", (f"stuck at {w.stage}" + (f": {detail}" if detail else ""),))
    else:
        problems.append(f"unknown witness type {type(w).__name__}")
    return VerificationReport("pass" if not problems else "fail", tuple(problems))
