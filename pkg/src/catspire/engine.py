"""The certifying trichotomy engine.

Given a graph, a mass, a target caterpillar subdivision, and parameters
(tau, epsilon, p), the engine returns one of five witnesses: a vertex of
mass >= epsilon, a neighbourhood of mass >= epsilon, an anticomplete pair
both of mass >= epsilon, an induced copy of the target, or (only when the
parameters fall short of the proven constants) an honest Stuck report.

The pipeline follows the constructive argument exactly: carve p disjoint
blocks, realize a nursery of p isolated heads, improve it p-1 times while
the kappa schedule decays, and extract the target from a butterfly
realization.  Anticomplete pairs fall out of the two places the argument
leans on the no-anticomplete-pair axiom: big-piece selection and the
connected-cover step inside improve.

Every mass comparison is exact rational arithmetic.  Masses of unions are
always recomputed from the set, never updated incrementally: subadditivity
is an inequality and incremental updates are wrong for masses like the
chromatic one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .graphs import Graph, VertexSet, components, connected_order, is_connected, neighbours
from .mass import MassProvider
from .oracles import brute_induced_embedding, verify_witness
from .trees import (
    CaterpillarTree,
    Chrysalis,
    Nursery,
    fit_tau,
    is_improvement,
    phi,
    validate_chrysalis,
)
from .witnesses import (
    AnticompletePair,
    HighMassNeighbourhood,
    HighMassVertex,
    InducedCopy,
    Stuck,
    Witness,
    format_rational,
)

log = logging.getLogger(__name__)


class EngineStuck(RuntimeError):
    """Internal dead end, possible only when the parameters are off-guarantee."""

    def __init__(self, stage: str, diagnostics: Optional[Dict[str, str]] = None) -> None:
        self.stage = stage
        self.diagnostics = dict(diagnostics or {})
        super().__init__(f"{stage}: {self.diagnostics}")


class TheoremViolation(RuntimeError):
    """A step the proof guarantees has failed; the run is not trustworthy."""


class ScheduleError(ValueError):
    """epsilon too large for this p; carries the largest feasible epsilon."""

    def __init__(self, message: str, max_feasible: Fraction) -> None:
        super().__init__(message)
        self.max_feasible = max_feasible


def paper_epsilon(tau: int) -> Fraction:
    """The proven constant: 1 / (p * 2^p * (tau+3)) with p = 2^(tau^2)."""
    if tau < 3:
        raise ValueError("tau must be at least 3")
    p = 1 << (tau * tau)
    return Fraction(1, p * (1 << p) * (tau + 3))


def max_feasible_epsilon(p: int, tau: int) -> Fraction:
    return Fraction(1, p * (1 << p) * (tau + 3))


class KappaSchedule(Sequence[Fraction]):
    """kappa_i = 2^(-i)/p - (tau+2)*epsilon for i = 0..p.

    Entries are computed on demand: at the proven constants p is 2^(tau^2)
    and each entry carries a p-bit denominator, so materializing the whole
    schedule is out of the question.  kappa is strictly decreasing in i, so
    feasibility is a single endpoint check: kappa_p >= epsilon.
    """

    def __init__(self, p: int, epsilon: Fraction, tau: int) -> None:
        if p < 2:
            raise ValueError("schedule needs p >= 2")
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if tau < 3:
            raise ValueError("tau must be at least 3")
        self.p = p
        self.epsilon = Fraction(epsilon)
        self.tau = tau
        if self[p] < epsilon:
            limit = max_feasible_epsilon(p, tau)
            raise ScheduleError(
                f"epsilon {epsilon} is too large for p={p}: the schedule floor "
                f"kappa_p falls below epsilon; largest feasible epsilon is {limit}",
                max_feasible=limit,
            )

    def __len__(self) -> int:
        return self.p + 1

    def __getitem__(self, i: int) -> Fraction:
        if not isinstance(i, int):
            raise TypeError("schedule indices must be integers")
        if i < 0:
            i += len(self)
        if not 0 <= i <= self.p:
            raise IndexError(f"kappa index {i} outside 0..{self.p}")
        return Fraction(1, self.p << i) - (self.tau + 2) * self.epsilon


def kappa_schedule(p: int, epsilon: Fraction, tau: int) -> KappaSchedule:
    return KappaSchedule(p, epsilon, tau)


@dataclass(frozen=True)
class EngineParams:
    """tau, epsilon, p, with the derived schedule and the guarantee flag.

    epsilon and p default to the proven constants for the given tau.  The
    schedule is built lazily: axiom checks never touch it, and several
    interesting oversized-epsilon runs have no feasible schedule at all yet
    still terminate at the axiom stage.
    """

    tau: int
    epsilon: Optional[Fraction] = None
    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.tau < 3:
            raise ValueError("tau must be at least 3")
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", paper_epsilon(self.tau))
        else:
            object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.p is None:
            object.__setattr__(self, "p", 1 << (self.tau * self.tau))
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.p < 2:
            raise ValueError("p must be at least 2")

    @cached_property
    def kappas(self) -> KappaSchedule:
        return KappaSchedule(self.p, self.epsilon, self.tau)

    @property
    def guarantee(self) -> bool:
        return self.epsilon <= paper_epsilon(self.tau) and self.p >= 1 << (self.tau * self.tau)


@dataclass(frozen=True)
class Piece:
    vertices: VertexSet


@dataclass(frozen=True)
class Pair:
    a: VertexSet
    b: VertexSet


@dataclass(frozen=True)
class Spire:
    """An induced path x_1..x_tau escaping into a connected reservoir z.

    x_tau belongs to z; the earlier path vertices have no neighbours in
    z minus x_tau, so anything anchored in z can only reach the path tip.
    """

    xs: Tuple[int, ...]
    z: VertexSet


def validate_spire(g: Graph, s: Spire, within: Optional[VertexSet] = None) -> List[str]:
    """All violated spire conditions, empty when valid."""
    problems: List[str] = []
    xs = s.xs
    for a in range(len(xs)):
        for b in range(a + 1, len(xs)):
            adjacent = g.has_edge(xs[a], xs[b])
            if b == a + 1 and not adjacent:
                problems.append(f"path break: {xs[a]} and {xs[b]} are not adjacent")
            if b > a + 1 and adjacent:
                problems.append(f"path chord: {xs[a]} and {xs[b]} are adjacent")
    if len(set(xs)) != len(xs):
        problems.append("path vertices are not distinct")
    body = VertexSet(xs[:-1])
    if body.mask & s.z.mask:
        problems.append("z meets x_1..x_(tau-1)")
    if xs[-1] not in s.z:
        problems.append("x_tau is not in z")
    quiet = s.z.mask & ~(1 << xs[-1])
    for v in xs[:-1]:
        if g.adj(v) & quiet:
            problems.append(f"{v} has a neighbour in z beyond x_tau")
    if not is_connected(g, s.z):
        problems.append("z is not connected")
    if within is not None:
        if not VertexSet(xs).issubset(within) or not s.z.issubset(within):
            problems.append("spire leaves its ambient set")
    return problems


def big_piece(g: Graph, m: MassProvider, x: VertexSet, epsilon: Fraction) -> Union[Piece, Pair]:
    """The unique component of mass > mass(x) - epsilon, or an anticomplete pair.

    Components are scanned in the canonical order (descending size, ties by
    least member); the minimal prefix of mass >= epsilon either splits off a
    heavy suffix (a pair), ends in a pivot component that splits against the
    rest (a pair), or pins the pivot as the big piece.
    """
    if m.mass(x) < 3 * epsilon:
        raise ValueError("big_piece needs mass(x) >= 3*epsilon")
    comps = components(g, x)
    acc = 0
    for idx, comp in enumerate(comps):
        acc |= comp.mask
        if m.mass(VertexSet.from_mask(acc)) >= epsilon:
            break
    prefix = VertexSet.from_mask(acc)
    suffix = VertexSet.from_mask(x.mask & ~acc)
    if m.mass(suffix) >= epsilon:
        return Pair(prefix, suffix)
    pivot = comps[idx]
    rest = VertexSet.from_mask(x.mask & ~pivot.mask)
    if m.mass(rest) >= epsilon:
        return Pair(pivot, rest)
    return Piece(pivot)


def grow_spire(
    g: Graph,
    m: MassProvider,
    x: VertexSet,
    tau: int,
    epsilon: Fraction,
    x1_rng=None,
) -> Union[Spire, Pair]:
    """Grow a tau-spire in x, or surface an anticomplete pair while trying.

    x_1 is the least vertex of the first big piece (or a random member when
    x1_rng is given); each x_{i+1} is the least neighbour of x_i inside the
    current big piece that can see the next one.  Under the small-vertex and
    small-neighbourhood axioms the construction cannot get stuck and the
    final reservoir keeps mass >= mass(x) - tau*epsilon.
    """
    if tau < 3:
        raise ValueError("tau must be at least 3")
    if m.mass(x) < (tau + 2) * epsilon:
        raise ValueError("grow_spire needs mass(x) >= (tau+2)*epsilon")

    first = big_piece(g, m, x, epsilon)
    if isinstance(first, Pair):
        return first
    z_cur = first.vertices
    if x1_rng is not None:
        x1 = x1_rng.choice(z_cur.members())
    else:
        x1 = z_cur.least()
    xs = [x1]

    removed = 0
    for _ in range(tau - 1):
        removed |= g.adj(xs[-1])
        y = VertexSet.from_mask(x.mask & ~removed)
        if m.mass(y) < 3 * epsilon:
            raise EngineStuck(
                "spire-blocked",
                {
                    "reason": "remaining mass below 3*epsilon",
                    "path_so_far": str(xs),
                    "remaining_mass": format_rational(m.mass(y)),
                },
            )
        nxt = big_piece(g, m, y, epsilon)
        if isinstance(nxt, Pair):
            return nxt
        z_next = nxt.vertices
        cand = None
        scan = g.adj(xs[-1]) & z_cur.mask
        while scan:
            low = scan & -scan
            v = low.bit_length() - 1
            if g.adj(v) & z_next.mask:
                cand = v
                break
            scan ^= low
        if cand is None:
            raise EngineStuck(
                "spire-blocked",
                {
                    "reason": "no continuation vertex into the next big piece",
                    "path_so_far": str(xs),
                },
            )
        xs.append(cand)
        z_cur = z_next

    return Spire(tuple(xs), z_cur | VertexSet([xs[-1]]))


def initial_blocks(
    g: Graph, m: MassProvider, kappa0: Fraction, epsilon: Fraction, p: int
) -> List[VertexSet]:
    """Greedy p disjoint blocks, each the minimal id-prefix of mass >= kappa0.

    The caller has already ruled out vertices of mass >= epsilon, so each
    block's mass sits in [kappa0, kappa0 + epsilon) by subadditivity, the
    same minimal-set argument that makes maximal block families large.
    """
    blocks: List[VertexSet] = []
    acc = 0
    for v in range(g.n):
        acc |= 1 << v
        if m.mass(VertexSet.from_mask(acc)) >= kappa0:
            blocks.append(VertexSet.from_mask(acc))
            acc = 0
            if len(blocks) == p:
                return blocks
    raise EngineStuck(
        "insufficient-blocks",
        {
            "blocks_found": str(len(blocks)),
            "blocks_needed": str(p),
            "kappa0": format_rational(kappa0),
        },
    )


@dataclass
class Realization:
    """Disjoint vertex classes for every nursery vertex, spires for leaves.

    Valid when the six conditions checked by check_realization hold at
    self.kappa.  Treated as immutable; improvements build a new one.
    """

    nursery: Nursery
    assignment: Dict[int, VertexSet]
    spires: Dict[int, Spire]
    kappa: Fraction


def restrict(r: Realization, comp: Chrysalis, creation: int = 0) -> Realization:
    """The realization induced on a single component, at the same kappa."""
    keep = comp.vertex_set()
    return Realization(
        Nursery(comp.tau, [comp], [creation]),
        {v: s for v, s in r.assignment.items() if v in keep},
        {v: s for v, s in r.spires.items() if v in keep},
        r.kappa,
    )


def check_realization(g: Graph, m: MassProvider, r: Realization) -> List[str]:
    """Evaluate all six realization conditions literally; list every violation."""
    problems: List[str] = []
    nursery = r.nursery

    vs = nursery.vertices()
    if set(r.assignment) != set(vs):
        problems.append("assignment keys do not match the nursery's vertices")
        return problems
    leaves: List[int] = []
    for comp in nursery.components:
        bad = validate_chrysalis(comp)
        if bad:
            problems.append(f"component with head {comp.head} invalid: {'; '.join(bad)}")
        leaves.extend(comp.leaves())
    if set(r.spires) != set(leaves):
        problems.append("spire keys do not match the nursery's leaves")
        return problems

    heads = set(nursery.heads())
    # 1: pairwise disjoint classes
    union = 0
    for v in vs:
        x = r.assignment[v]
        if union & x.mask:
            for u in vs:
                if u != v and r.assignment[u].mask & x.mask:
                    problems.append(f"classes of {u} and {v} intersect")
                    break
        union |= x.mask

    # 2: each leaf decomposes into its spire
    for v in leaves:
        s = r.spires[v]
        for issue in validate_spire(g, s):
            problems.append(f"spire of leaf {v}: {issue}")
        if (VertexSet(s.xs) | s.z) != r.assignment[v]:
            problems.append(f"class of leaf {v} is not its spire path plus reservoir")

    # neighbour mask per class, shared by conditions 3-5
    reach: Dict[int, int] = {}
    for v in vs:
        acc = 0
        for w in r.assignment[v]:
            acc |= g.adj(w)
        reach[v] = acc

    # 3: leaf path vertices see nothing outside their own class
    for v in leaves:
        path_reach = 0
        for w in r.spires[v].xs:
            path_reach |= g.adj(w)
        for u in vs:
            if u != v and path_reach & r.assignment[u].mask:
                problems.append(f"spire path of leaf {v} has edges to the class of {u}")

    # 4: class edges only along nursery edges or between heads
    allowed = set()
    for comp in nursery.components:
        for child, par in comp.parent.items():
            allowed.add((min(child, par), max(child, par)))
    for ai, v in enumerate(vs):
        for u in vs[ai + 1 :]:
            if (v, u) in allowed or (v in heads and u in heads):
                continue
            if reach[v] & r.assignment[u].mask:
                problems.append(f"stray edges between the classes of {v} and {u}")

    # 5: each directed edge child -> parent covers: every parent-class vertex
    # has a neighbour in the child's class
    for comp in nursery.components:
        for child, par in comp.parent.items():
            if r.assignment[par].mask & ~reach[child]:
                problems.append(f"class of {child} does not cover the class of {par}")

    # 6: head masses
    for h in sorted(heads):
        have = m.mass(r.assignment[h])
        if have < r.kappa:
            problems.append(
                f"head {h} has mass {format_rational(have)}, below kappa {format_rational(r.kappa)}"
            )
    return problems


def improve(
    g: Graph,
    m: MassProvider,
    r: Realization,
    kappa_next: Fraction,
    epsilon: Fraction,
    x1_rng=None,
) -> Union[Tuple[Nursery, Realization], Pair]:
    """One merge step: components drop by one, potential does not drop.

    Grows a spire in the chosen head class, shaves every other head class
    down to the part that cannot see the spire path, then walks the spire
    reservoir in connected order until some shaved class is nearly covered.
    The covered class becomes the new head class; the spire prefix becomes
    the class of the merged vertex.  Failure to cover anything is itself a
    verified anticomplete pair.
    """
    nursery = r.nursery
    comps = nursery.components
    k = len(comps)
    tau = nursery.tau
    if k < 2:
        raise ValueError("improve needs at least two components")
    for c in comps:
        if c.is_butterfly:
            raise ValueError("improve must not run on a butterfly component")
    if r.kappa < 2 * kappa_next + (tau + 2) * epsilon:
        raise ValueError(
            "kappa step too steep: need kappa >= 2*kappa_next + (tau+2)*epsilon"
        )

    i = 0
    for idx in range(k):
        if comps[idx].degree(comps[idx].head) == tau - 1:
            i = idx
    heads = [c.head for c in comps]
    x_hi = r.assignment[heads[i]]
    if m.mass(x_hi) < (tau + 2) * epsilon:
        raise EngineStuck(
            "spire-blocked",
            {
                "reason": "chosen head class too light to grow a spire",
                "head": str(heads[i]),
                "mass": format_rational(m.mass(x_hi)),
            },
        )
    grown = grow_spire(g, m, x_hi, tau, epsilon, x1_rng=x1_rng)
    if isinstance(grown, Pair):
        return grown

    xs_reach = 0
    for v in grown.xs:
        xs_reach |= g.adj(v)
    shaved: Dict[int, int] = {
        j: r.assignment[heads[j]].mask & ~xs_reach for j in range(k) if j != i
    }

    z_order = connected_order(g, grown.z, grown.xs[-1])
    covered_reach = 0
    hit: Optional[Tuple[int, int]] = None
    for steps in range(1, len(z_order) + 1):
        covered_reach |= g.adj(z_order[steps - 1])
        for j in sorted(shaved):
            left = VertexSet.from_mask(shaved[j] & ~covered_reach)
            if m.mass(left) < kappa_next + epsilon:
                hit = (steps, j)
                break
        if hit:
            break

    if hit is None:
        j = min(shaved)
        return Pair(grown.z, VertexSet.from_mask(shaved[j] & ~covered_reach))

    steps, j = hit
    if steps == 1:
        # the shaved classes exclude all neighbours of x_tau = z_1, so a hit
        # at the first step means the class was already below the bar
        log.warning(
            "connected cover succeeded at its first vertex; head class %s was "
            "already below kappa'+epsilon",
            heads[j],
        )
    prefix = VertexSet(z_order[:steps])

    h_i, h_j = heads[i], heads[j]
    kept = comps[i] if j < i else comps[j]
    dropped = comps[j] if j < i else comps[i]
    merged = Chrysalis(tau, h_j, {**kept.parent, h_i: h_j})
    new_comps: List[Chrysalis] = [merged]
    new_creations: List[int] = [nursery.creations[max(i, j)]]
    for idx in range(k):
        if idx not in (i, j):
            new_comps.append(comps[idx])
            new_creations.append(nursery.creations[idx])
    new_nursery = Nursery(tau, new_comps, new_creations)

    gone = dropped.vertex_set() - {dropped.head}
    assignment = {
        v: s for v, s in r.assignment.items() if v not in gone and v not in set(heads)
    }
    spires = {v: s for v, s in r.spires.items() if v not in gone}
    assignment[h_i] = prefix | VertexSet(grown.xs)
    assignment[h_j] = VertexSet.from_mask(shaved[j] & covered_reach)
    for idx in range(k):
        if idx not in (i, j):
            assignment[heads[idx]] = VertexSet.from_mask(shaved[idx] & ~covered_reach)
    if j > i:
        spires[h_i] = Spire(grown.xs, prefix)

    return new_nursery, Realization(new_nursery, assignment, spires, kappa_next)


def _host_paths(g: Graph, r: Realization, comp: Chrysalis) -> VertexSet:
    """The host: spine picks plus one induced tau-vertex path per leaf."""
    tau = comp.tau
    spine = comp.spine
    picks: Dict[int, int] = {}
    prev = r.assignment[spine[0]].least()
    picks[spine[0]] = prev
    for v in spine[1:]:
        options = g.adj(prev) & r.assignment[v].mask
        if not options:
            raise ValueError(
                f"class of spine vertex {v} has no neighbour of the previous pick"
            )
        prev = (options & -options).bit_length() - 1
        picks[v] = prev

    host = 0
    for pick in picks.values():
        host |= 1 << pick
    for u in sorted(comp.leaves()):
        anchor = picks[comp.parent[u]]
        s = r.spires[u]
        allowed = s.z.mask | (1 << anchor)
        # breadth-first shortest path from the anchor to the path tip inside
        # the reservoir; shortest paths are induced
        parent = {anchor: anchor}
        frontier = [anchor]
        goal = s.xs[-1]
        while frontier and goal not in parent:
            nxt = []
            for w in frontier:
                scan = g.adj(w) & allowed
                while scan:
                    low = scan & -scan
                    d = low.bit_length() - 1
                    scan ^= low
                    if d not in parent:
                        parent[d] = w
                        nxt.append(d)
            frontier = nxt
        if goal not in parent:
            raise ValueError(f"leaf {u}: reservoir path from the spine pick is broken")
        walk = [goal]
        while walk[-1] != anchor:
            walk.append(parent[walk[-1]])
        walk.reverse()
        if len(walk) >= tau:
            path = walk[:tau]
        else:
            # extend backwards along the spire path, which is anticomplete to
            # everything the walk can touch except its tip
            path = walk + list(s.xs[-2::-1][: tau - len(walk)])
        for w in path:
            host |= 1 << w
    return VertexSet.from_mask(host)


def extract_copy(
    g: Graph,
    r: Realization,
    t: CaterpillarTree,
    node_limit: Optional[int] = None,
    m: Optional[MassProvider] = None,
) -> Tuple[int, ...]:
    """Pull an induced copy of t out of a butterfly realization.

    Builds the host subgraph the existence proof describes (spine picks plus
    an induced tau-vertex path per butterfly leaf) and searches for t inside
    it.  The search cannot fail for a valid realization; if it does, that
    falsifies the theorem and raises TheoremViolation rather than returning.

    Pass m to have the realization fully validated first.
    """
    if len(r.nursery.components) != 1 or not r.nursery.components[0].is_butterfly:
        raise ValueError("extract_copy needs a single-butterfly realization")
    if r.kappa <= 0:
        raise ValueError("extract_copy needs kappa > 0")
    comp = r.nursery.components[0]
    target = t.tree if isinstance(t, CaterpillarTree) else t
    if fit_tau(t) > comp.tau:
        raise ValueError("tau does not fit the target tree")
    if m is not None:
        bad = check_realization(g, m, r)
        if bad:
            raise ValueError("realization invalid: " + "; ".join(bad))

    host = _host_paths(g, r, comp)
    found = brute_induced_embedding(g, target, node_limit=node_limit, within=host)
    if not found.found:
        raise TheoremViolation(
            f"no induced copy of the target inside the {len(host)}-vertex host; "
            "this contradicts the extraction theorem"
        )
    return found.mapping


def run_trichotomy(
    g: Graph,
    m: MassProvider,
    t: CaterpillarTree,
    params: EngineParams,
    trace: Optional[List[dict]] = None,
    x1_rng=None,
) -> Witness:
    """The full certified pipeline; every non-Stuck result is verified.

    Stuck is returned only when params.guarantee is false; under the proven
    constants the same condition raises TheoremViolation instead, because
    the proof says it cannot happen.
    """
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    if not isinstance(t, CaterpillarTree):
        t = CaterpillarTree(t)
    if params.tau < fit_tau(t):
        raise ValueError(f"tau={params.tau} does not fit the target (needs {fit_tau(t)})")
    eps = params.epsilon

    def note(stage: str, **info: object) -> None:
        if trace is not None:
            trace.append({"stage": stage, **{k: str(v) for k, v in info.items()}})

    def finish(w: Witness) -> Witness:
        report = verify_witness(g, m, t, eps, w)
        if not report.ok:
            raise TheoremViolation(
                "witness failed verification: " + "; ".join(report.problems)
            )
        note("verified", variant=type(w).__name__)
        return w

    def stuck(s: Stuck) -> Witness:
        if params.guarantee:
            raise TheoremViolation(
                f"engine stuck at {s.stage} despite guaranteed parameters"
            )
        note("stuck", at=s.stage)
        return s

    for v in range(g.n):
        if m.mass(VertexSet([v])) >= eps:
            note("axiom-1", vertex=v)
            return finish(HighMassVertex(v))
    for v in range(g.n):
        if m.mass(neighbours(g, v)) >= eps:
            note("axiom-2", vertex=v)
            return finish(HighMassNeighbourhood(v))

    try:
        kappas = params.kappas
    except ScheduleError as ex:
        return stuck(
            Stuck.make(
                "kappa-schedule-infeasible",
                {
                    "epsilon": format_rational(eps),
                    "p": str(params.p),
                    "max_feasible_epsilon": format_rational(ex.max_feasible),
                },
            )
        )

    try:
        blocks = initial_blocks(g, m, kappas[0], eps, params.p)
    except EngineStuck as ex:
        return stuck(Stuck.make(ex.stage, ex.diagnostics))
    note("blocks", count=len(blocks), kappa0=format_rational(kappas[0]))

    nursery = Nursery(params.tau, [Chrysalis(params.tau, h, {}) for h in range(params.p)])
    r = Realization(nursery, {h: blocks[h] for h in range(params.p)}, {}, kappas[0])
    bad = check_realization(g, m, r)
    if bad:
        raise TheoremViolation("initial realization invalid: " + "; ".join(bad))

    def butterfly_component() -> Optional[int]:
        for idx, comp in enumerate(r.nursery.components):
            if comp.is_butterfly:
                return idx
        return None

    for step in range(1, params.p):
        hit = butterfly_component()
        if hit is not None:
            note("butterfly", improvements=step - 1)
            sub = restrict(r, r.nursery.components[hit], r.nursery.creations[hit])
            return finish(InducedCopy(extract_copy(g, sub, t, m=m)))
        if len(r.nursery.components) < 2:
            # unreachable: each merge removes exactly one of p components
            return stuck(
                Stuck.make(
                    "phi-contradiction",
                    {"components": "1", "phi": str(phi(r.nursery))},
                )
            )
        try:
            outcome = improve(g, m, r, kappas[step], eps, x1_rng=x1_rng)
        except EngineStuck as ex:
            diag = dict(ex.diagnostics)
            diag["improvement"] = str(step)
            return stuck(Stuck.make(ex.stage, diag))
        if isinstance(outcome, Pair):
            note("anticomplete", improvements=step - 1)
            return finish(AnticompletePair(outcome.a, outcome.b))
        old = r.nursery
        nursery, r = outcome
        if not is_improvement(nursery, old):
            raise TheoremViolation("merge did not improve the nursery")
        bad = check_realization(g, m, r)
        if bad:
            raise TheoremViolation(
                f"realization invalid after improvement {step}: " + "; ".join(bad)
            )
        note(
            "improved",
            improvement=step,
            kappa=format_rational(kappas[step]),
            components=len(r.nursery.components),
        )

    hit = butterfly_component()
    if hit is not None:
        note("butterfly", improvements=params.p - 1)
        sub = restrict(r, r.nursery.components[hit], r.nursery.creations[hit])
        return finish(InducedCopy(extract_copy(g, sub, t, m=m)))
    comp = r.nursery.components[0]
    return stuck(
        Stuck.make(
            "phi-contradiction",
            {
                "components": str(len(r.nursery.components)),
                "largest_size": str(comp.size),
                "phi": str(phi(r.nursery)),
                "floor": str(2 * params.p),
            },
        )
    )
