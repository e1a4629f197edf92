"""Instance generators and the batch experiment runner.

Generators are deterministic functions of (model, parameters, seed): the
generator family is numpy's PCG64, seeded explicitly, with edge decisions
made by exact integer draws so that a rational edge probability is honored
exactly.  Same spec, same graph, on any platform.

run_batch drives run_trichotomy over a spec list, re-verifies every witness
against the oracle checker, and aggregates variant counts and timing
percentiles.  A verification failure aborts the batch and carries a replay
document naming the exact instance.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .engine import EngineParams, TheoremViolation, run_trichotomy
from .graphs import Graph
from .mass import CardinalityMass
from .oracles import verify_witness
from .trees import CaterpillarTree
from .witnesses import (
    Stuck,
    format_rational,
    parse_rational,
    variant_tag,
    witness_document,
)

MODELS = ("gnp", "regular", "high_girth", "caterpillar_subdivision")

_SEED_SPAN = 1 << 64
_PAIRING_RETRIES = 1000


@dataclass(frozen=True)
class GenSpec:
    """One reproducible instance: model, parameters, 64-bit seed.

    gnp needs probability; regular needs degree (n*degree even); high_girth
    needs probability and girth; caterpillar_subdivision needs spine and
    legs, where each leg is (position, length) with 1-based spine positions,
    and n must be 0 (meaning derived) or the exact vertex count.
    """

    model: str
    n: int = 0
    probability: Optional[Fraction] = None
    degree: Optional[int] = None
    girth: Optional[int] = None
    spine: Optional[int] = None
    legs: Tuple[Tuple[int, int], ...] = ()
    seed: int = 0

    def __post_init__(self) -> None:
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if not 0 <= self.seed < _SEED_SPAN:
            raise ValueError("seed must fit in 64 bits")
        if self.probability is not None:
            object.__setattr__(self, "probability", Fraction(self.probability))
        object.__setattr__(
            self, "legs", tuple((int(a), int(b)) for a, b in self.legs)
        )
        if self.model in ("gnp", "high_girth"):
            if self.n < 1:
                raise ValueError(f"{self.model} needs n >= 1")
            p = self.probability
            if p is None or not 0 <= p <= 1:
                raise ValueError(f"{self.model} needs an edge probability in [0, 1]")
            if p.denominator >= 1 << 63:
                raise ValueError("edge probability denominator does not fit in 63 bits")
        if self.model == "high_girth":
            if self.girth is None or self.girth < 3:
                raise ValueError("high_girth needs a girth target >= 3")
        if self.model == "regular":
            d = self.degree
            if self.n < 1 or d is None or not 0 <= d < self.n:
                raise ValueError("regular needs n >= 1 and 0 <= degree < n")
            if self.n * d % 2 != 0:
                raise ValueError("regular needs n*degree even")
        if self.model == "caterpillar_subdivision":
            if self.spine is None or self.spine < 1:
                raise ValueError("caterpillar_subdivision needs spine >= 1")
            for pos, length in self.legs:
                if not 1 <= pos <= self.spine:
                    raise ValueError(f"leg position {pos} outside 1..{self.spine}")
                if length < 1:
                    raise ValueError("leg lengths must be >= 1")
            expected = self.spine + sum(length for _, length in self.legs)
            if self.n not in (0, expected):
                raise ValueError(
                    f"n={self.n} does not match the tree's {expected} vertices"
                )

    def to_document(self) -> dict:
        doc: dict = {"model": self.model, "n": self.n, "seed": self.seed}
        if self.probability is not None:
            doc["probability"] = format_rational(self.probability)
        if self.degree is not None:
            doc["degree"] = self.degree
        if self.girth is not None:
            doc["girth"] = self.girth
        if self.spine is not None:
            doc["spine"] = self.spine
        if self.legs:
            doc["legs"] = [[pos, length] for pos, length in self.legs]
        return doc

    @staticmethod
    def from_document(doc: dict) -> "GenSpec":
        prob = doc.get("probability")
        return GenSpec(
            model=doc["model"],
            n=int(doc.get("n", 0)),
            probability=parse_rational(prob) if prob is not None else None,
            degree=doc.get("degree"),
            girth=doc.get("girth"),
            spine=doc.get("spine"),
            legs=tuple((int(a), int(b)) for a, b in doc.get("legs", [])),
            seed=int(doc.get("seed", 0)),
        )


def _gnp_edges(rng: np.random.Generator, n: int, prob: Fraction) -> List[Tuple[int, int]]:
    # one exact draw per vertex pair, row by row to bound memory; the draw
    # count per row is fixed, so edges depend only on the seed
    num, den = prob.numerator, prob.denominator
    edges: List[Tuple[int, int]] = []
    for u in range(n - 1):
        draws = rng.integers(0, den, size=n - 1 - u)
        for off in np.flatnonzero(draws < num):
            edges.append((u, u + 1 + int(off)))
    return edges


def _generate_regular(rng: np.random.Generator, n: int, d: int) -> Graph:
    if d == 0:
        return Graph(n)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(_PAIRING_RETRIES):
        perm = rng.permutation(n * d)
        paired = stubs[perm].reshape(-1, 2)
        seen = set()
        ok = True
        for a, b in paired:
            u, v = int(a), int(b)
            if u == v:
                ok = False
                break
            key = (u, v) if u < v else (v, u)
            if key in seen:
                ok = False
                break
            seen.add(key)
        if ok:
            return Graph(n, sorted(seen))
    raise ValueError(
        f"pairing model failed to produce a simple {d}-regular graph on {n} "
        f"vertices after {_PAIRING_RETRIES} attempts"
    )


def _short_cycle_edge(adj: List[int], bound: int) -> Optional[Tuple[int, int, int]]:
    """(length, u, w) for a shortest cycle when below bound, scanning roots
    ascending; (u, w) is the closing edge found first at that length."""
    n = len(adj)
    best: Optional[Tuple[int, int, int]] = None
    radius = (bound - 1) // 2 + 1
    for root in range(n):
        dist = {root: 0}
        parent = {root: root}
        frontier = [root]
        depth = 0
        while frontier and depth < radius:
            nxt: List[int] = []
            for u in frontier:
                scan = adj[u]
                while scan:
                    low = scan & -scan
                    w = low.bit_length() - 1
                    scan ^= low
                    if w == parent[u]:
                        continue
                    if w in dist:
                        length = dist[u] + dist[w] + 1
                        if length < bound and (best is None or length < best[0]):
                            best = (length, u, w)
                    else:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        nxt.append(w)
            frontier = nxt
            depth += 1
    return best


def _generate_high_girth(
    rng: np.random.Generator, n: int, prob: Fraction, girth: int
) -> Graph:
    adj = [0] * n
    for u, v in _gnp_edges(rng, n, prob):
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    while True:
        hit = _short_cycle_edge(adj, girth)
        if hit is None:
            break
        _, u, w = hit
        adj[u] &= ~(1 << w)
        adj[w] &= ~(1 << u)
    edges = []
    for u in range(n):
        higher = adj[u] >> (u + 1)
        while higher:
            low = higher & -higher
            edges.append((u, u + 1 + low.bit_length() - 1))
            higher ^= low
    return Graph(n, edges)


def _generate_caterpillar(spine: int, legs: Sequence[Tuple[int, int]]) -> Graph:
    edges = [(i, i + 1) for i in range(spine - 1)]
    nxt = spine
    for pos, length in legs:
        prev = pos - 1
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph(nxt, edges)


def generate(spec: GenSpec) -> Graph:
    """The deterministic graph for (model, parameters, seed)."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    if spec.model == "gnp":
        return Graph(spec.n, _gnp_edges(rng, spec.n, spec.probability))
    if spec.model == "regular":
        return _generate_regular(rng, spec.n, spec.degree)
    if spec.model == "high_girth":
        return _generate_high_girth(rng, spec.n, spec.probability, spec.girth)
    return _generate_caterpillar(spec.spine, spec.legs)


class BatchVerificationError(RuntimeError):
    """A witness failed verification; .replay identifies the instance."""

    def __init__(self, message: str, replay: dict) -> None:
        super().__init__(message)
        self.replay = replay


@dataclass(frozen=True)
class TrialResult:
    trial: int
    spec: GenSpec
    variant: str
    seconds: float


@dataclass(frozen=True)
class BatchReport:
    trials: int
    counts: Dict[str, int] = field(default_factory=dict)
    stuck_rate: Fraction = Fraction(0)
    total_seconds: float = 0.0
    results: Tuple[TrialResult, ...] = ()

    def percentile(self, q: int) -> float:
        xs = sorted(r.seconds for r in self.results)
        if not xs:
            return 0.0
        rank = max(1, math.ceil(q * len(xs) / 100))
        return xs[rank - 1]

    def to_document(self) -> dict:
        return {
            "trials": self.trials,
            "counts": dict(sorted(self.counts.items())),
            "stuck_rate": format_rational(self.stuck_rate),
            "timings_seconds": {
                "p50": self.percentile(50),
                "p90": self.percentile(90),
                "p99": self.percentile(99),
            },
            "total_seconds": self.total_seconds,
            "results": [
                {
                    "trial": r.trial,
                    "spec": r.spec.to_document(),
                    "variant": r.variant,
                    "seconds": r.seconds,
                }
                for r in self.results
            ],
        }

    def format_table(self) -> str:
        lines = [f"trials: {self.trials}"]
        width = max((len(tag) for tag in self.counts), default=0)
        for tag in sorted(self.counts):
            lines.append(f"  {tag.ljust(width)}  {self.counts[tag]}")
        lines.append(f"stuck rate: {format_rational(self.stuck_rate)}")
        lines.append(
            "timing seconds: "
            f"p50={self.percentile(50):.3f} "
            f"p90={self.percentile(90):.3f} "
            f"p99={self.percentile(99):.3f} "
            f"total={self.total_seconds:.3f}"
        )
        return "\n".join(lines)


def run_batch(
    specs: Sequence[GenSpec],
    t: CaterpillarTree,
    params: EngineParams,
    trials: int,
) -> BatchReport:
    """trials sequential runs; trial k uses specs[k % len(specs)] reseeded
    with spec.seed + k, so a single spec fans out into distinct instances."""
    if trials < 0:
        raise ValueError("trials must be >= 0")
    if trials > 0 and not specs:
        raise ValueError("trials > 0 needs at least one spec")
    counts: Dict[str, int] = {}
    results: List[TrialResult] = []
    stuck = 0
    started = time.perf_counter()
    for k in range(trials):
        spec = replace(
            specs[k % len(specs)], seed=(specs[k % len(specs)].seed + k) % _SEED_SPAN
        )
        g = generate(spec)
        m = CardinalityMass(g.n)

        def _replay(witness_doc: Optional[dict], problems: List[str]) -> dict:
            return {
                "trial": k,
                "spec": spec.to_document(),
                "params": {
                    "tau": params.tau,
                    "epsilon": format_rational(params.epsilon),
                    "p": params.p,
                },
                "witness": witness_doc,
                "problems": problems,
            }

        begun = time.perf_counter()
        try:
            w = run_trichotomy(g, m, t, params)
        except TheoremViolation as ex:
            raise BatchVerificationError(
                f"trial {k}: {ex}", _replay(None, [str(ex)])
            ) from ex
        seconds = time.perf_counter() - begun
        if isinstance(w, Stuck):
            stuck += 1
        else:
            report = verify_witness(g, m, t, params.epsilon, w)
            if not report.ok:
                doc = witness_document(g, m, w, params, report.verdict)
                raise BatchVerificationError(
                    f"trial {k}: witness failed verification",
                    _replay(doc, list(report.problems)),
                )
        tag = variant_tag(w)
        counts[tag] = counts.get(tag, 0) + 1
        results.append(TrialResult(k, spec, tag, seconds))
    return BatchReport(
        trials=trials,
        counts=counts,
        stuck_rate=Fraction(stuck, trials) if trials else Fraction(0),
        total_seconds=time.perf_counter() - started,
        results=tuple(results),
    )
