"""Command-line surface.

Subcommands: certify (the full pipeline), fit-tau, epsilon, verify, oracle,
chi-split (anticomplete split with chromatic mass, reporting the chromatic
bounds), gen, and batch.  Exit codes: 0 success / verified witness, 1 failed
verification, 2 honest Stuck, 64 usage or domain errors, 66 unreadable or
malformed input files, 70 theorem violation (a replay bundle is written).

Rationals are exact "p/q" strings everywhere; decimals are rejected.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .engine import (
    EngineParams,
    TheoremViolation,
    max_feasible_epsilon,
    paper_epsilon,
    run_trichotomy,
)
from .formats import ParseError, parse_graph, parse_weights, serialize_edge_list
from .graphs import Graph
from .harness import BatchVerificationError, GenSpec, generate, run_batch
from .mass import CardinalityMass, ChromaticMass, MassProvider, WeightedMass
from .oracles import (
    NodeLimitExceeded,
    brute_best_anticomplete,
    brute_induced_embedding,
    exact_chromatic_number,
    verify_witness,
)
from .trees import CaterpillarTree, fit_tau
from .witnesses import (
    AnticompletePair,
    Stuck,
    format_rational,
    parse_rational,
    witness_document,
    witness_from_document,
)

EX_OK = 0
EX_VERIFY_FAILED = 1
EX_STUCK = 2
EX_USAGE = 64
EX_IO = 66
EX_INTERNAL = 70

REPLAY_BUNDLE = "catspire-replay.json"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_graph(path: str) -> Graph:
    return parse_graph(_read(path))


def _load_tree(path: str) -> CaterpillarTree:
    return CaterpillarTree(parse_graph(_read(path)))


def _build_mass(g: Graph, option: str) -> MassProvider:
    if option == "cardinality":
        return CardinalityMass(g.n)
    if option == "chromatic":
        return ChromaticMass(g)
    if option.startswith("weighted:"):
        weights = parse_weights(_read(option.split(":", 1)[1]))
        if len(weights) != g.n:
            raise ValueError(f"weight file has {len(weights)} entries for {g.n} vertices")
        return WeightedMass(weights)
    raise ValueError(f"unknown mass {option!r} (use cardinality, chromatic, weighted:FILE)")


def _default_p(epsilon: Fraction, tau: int) -> int:
    # the largest p whose schedule tolerates this epsilon, floored at 2; the
    # floor keeps oversized epsilons runnable so they can report Stuck
    best = 2
    p = 2
    while epsilon <= max_feasible_epsilon(p, tau):
        best = p
        p += 1
    return best


def _resolve_params(t: CaterpillarTree, args: argparse.Namespace) -> EngineParams:
    tau = args.tau if args.tau is not None else fit_tau(t)
    if args.epsilon is None:
        return EngineParams(tau, None, args.p)
    epsilon = parse_rational(args.epsilon)
    p = args.p if args.p is not None else _default_p(epsilon, tau)
    return EngineParams(tau, epsilon, p)


def _run_engine(
    g: Graph,
    m: MassProvider,
    t: CaterpillarTree,
    params: EngineParams,
    mass_option: str,
    trace: Optional[List[dict]] = None,
    x1_rng: Optional[random.Random] = None,
):
    try:
        return run_trichotomy(g, m, t, params, trace=trace, x1_rng=x1_rng)
    except TheoremViolation as ex:
        ex.replay = {  # type: ignore[attr-defined]
            "message": str(ex),
            "graph": serialize_edge_list(g),
            "tree": serialize_edge_list(t.tree),
            "mass": mass_option,
            "params": {
                "tau": params.tau,
                "epsilon": format_rational(params.epsilon),
                "p": params.p,
            },
        }
        raise


def _write_replay(replay: dict) -> None:
    try:
        with open(REPLAY_BUNDLE, "w", encoding="utf-8") as fh:
            json.dump(replay, fh, indent=2)
            fh.write("\n")
        print(f"replay bundle written to {REPLAY_BUNDLE}", file=sys.stderr)
    except OSError as ex:
        print(f"could not write replay bundle: {ex}", file=sys.stderr)


def _cmd_certify(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    t = _load_tree(args.tree)
    m = _build_mass(g, args.mass)
    params = _resolve_params(t, args)
    trace: Optional[List[dict]] = [] if args.trace else None
    rng = random.Random(args.x1_seed) if args.x1_seed is not None else None
    w = _run_engine(g, m, t, params, args.mass, trace=trace, x1_rng=rng)
    verdict = "unverified" if isinstance(w, Stuck) else "pass"
    print(json.dumps(witness_document(g, m, w, params, verdict, trace=trace), indent=2))
    return EX_STUCK if isinstance(w, Stuck) else EX_OK


def _cmd_fit_tau(args: argparse.Namespace) -> int:
    print(fit_tau(_load_tree(args.tree)))
    return EX_OK


def _cmd_epsilon(args: argparse.Namespace) -> int:
    epsilon = paper_epsilon(args.tau)
    doc = {
        "tau": args.tau,
        "p": 1 << (args.tau * args.tau),
        "epsilon": format_rational(epsilon),
    }
    print(json.dumps(doc, indent=2))
    return EX_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    t = _load_tree(args.tree)
    m = _build_mass(g, args.mass)
    epsilon = parse_rational(args.epsilon)
    doc = json.loads(_read(args.witness))
    try:
        w = witness_from_document(doc)
    except (KeyError, TypeError, ValueError) as ex:
        print(f"error: malformed witness document: {ex}", file=sys.stderr)
        return EX_IO
    report = verify_witness(g, m, t, epsilon, w)
    print(json.dumps({"verdict": report.verdict, "problems": list(report.problems)}, indent=2))
    return EX_OK if report.ok else EX_VERIFY_FAILED


def _cmd_oracle(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    if args.mode == "embed":
        if args.tree is None:
            raise ValueError("oracle embed needs --tree")
        t = parse_graph(_read(args.tree))
        result = brute_induced_embedding(g, t)
        doc = {"found": result.found, "mapping": list(result.mapping) if result.found else None}
    elif args.mode == "anticomplete":
        a, b = brute_best_anticomplete(g)
        doc = {"a": sorted(a), "b": sorted(b)}
    else:
        doc = {"chi": exact_chromatic_number(g)}
    print(json.dumps(doc, indent=2))
    return EX_OK


def _cmd_chi_split(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    t = _load_tree(args.tree)
    m = ChromaticMass(g)
    epsilon = parse_rational(args.epsilon)
    tau = args.tau if args.tau is not None else fit_tau(t)
    p = args.p if args.p is not None else _default_p(epsilon, tau)
    params = EngineParams(tau, epsilon, p)
    w = _run_engine(g, m, t, params, "chromatic")
    verdict = "unverified" if isinstance(w, Stuck) else "pass"
    chi_g = exact_chromatic_number(g)
    doc = {
        "witness": witness_document(g, m, w, params, verdict),
        "chi_g": chi_g,
        "epsilon_chi_g": format_rational(epsilon * chi_g),
    }
    if isinstance(w, AnticompletePair):
        chi_a = exact_chromatic_number(g, within=w.a)
        chi_b = exact_chromatic_number(g, within=w.b)
        doc["chi_a"] = chi_a
        doc["chi_b"] = chi_b
        doc["bound_holds"] = chi_a >= epsilon * chi_g and chi_b >= epsilon * chi_g
    print(json.dumps(doc, indent=2))
    return EX_STUCK if isinstance(w, Stuck) else EX_OK


def _parse_legs(text: str) -> Tuple[Tuple[int, int], ...]:
    legs = []
    for item in text.split(","):
        pos, _, length = item.partition(":")
        try:
            legs.append((int(pos), int(length)))
        except ValueError:
            raise ValueError(
                f"bad leg {item!r}: expected POSITION:LENGTH, e.g. --legs 3:1"
            ) from None
    return tuple(legs)


def _cmd_gen(args: argparse.Namespace) -> int:
    spec = GenSpec(
        model=args.model,
        n=args.n,
        probability=parse_rational(args.probability) if args.probability else None,
        degree=args.degree,
        girth=args.girth,
        spine=args.spine,
        legs=_parse_legs(args.legs) if args.legs else (),
        seed=args.seed,
    )
    sys.stdout.write(serialize_edge_list(generate(spec)))
    return EX_OK


def _tree_from_value(value) -> CaterpillarTree:
    if isinstance(value, str):
        return _load_tree(value)
    if isinstance(value, dict):
        spec = GenSpec(
            model="caterpillar_subdivision",
            spine=value.get("spine"),
            legs=tuple((int(a), int(b)) for a, b in value.get("legs", [])),
        )
        return CaterpillarTree(generate(spec))
    raise ValueError("tree must be a file path or {spine, legs}")


def _cmd_batch(args: argparse.Namespace) -> int:
    doc = json.loads(_read(args.spec))
    try:
        trials = int(doc["trials"])
        tree = _tree_from_value(doc["tree"])
        given = doc.get("params", {})
        tau = int(given["tau"]) if "tau" in given else fit_tau(tree)
        if "epsilon" in given:
            epsilon = parse_rational(given["epsilon"])
            p = int(given["p"]) if "p" in given else _default_p(epsilon, tau)
        else:
            epsilon = paper_epsilon(tau)
            p = int(given["p"]) if "p" in given else 1 << (tau * tau)
        params = EngineParams(tau, epsilon, p)
        specs = [GenSpec.from_document(sd) for sd in doc.get("specs", [])]
        report = run_batch(specs, tree, params, trials)
    except (KeyError, TypeError, ValueError) as ex:
        print(f"error: bad batch spec: {ex}", file=sys.stderr)
        return EX_IO
    print(report.format_table() if args.table else json.dumps(report.to_document(), indent=2))
    return EX_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="catspire", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def engine_flags(p: argparse.ArgumentParser, epsilon_required: bool = False) -> None:
        p.add_argument("--epsilon", required=epsilon_required, help="threshold as p/q")
        p.add_argument("--p", type=int, help="number of nursery components")
        p.add_argument("--tau", type=int, help="spire length (default: fit-tau of the tree)")

    c = sub.add_parser("certify", help="run the trichotomy and print the witness")
    c.add_argument("--graph", required=True)
    c.add_argument("--tree", required=True)
    c.add_argument("--mass", default="cardinality", help="cardinality, chromatic, or weighted:FILE")
    engine_flags(c)
    c.add_argument("--trace", action="store_true", help="include the engine trace")
    c.add_argument("--x1-seed", type=int, dest="x1_seed", help="randomize spire starts")
    c.set_defaults(func=_cmd_certify)

    f = sub.add_parser("fit-tau", help="minimal tau fitting a tree")
    f.add_argument("--tree", required=True)
    f.set_defaults(func=_cmd_fit_tau)

    e = sub.add_parser("epsilon", help="proven epsilon and p for a tau")
    e.add_argument("--tau", type=int, required=True)
    e.set_defaults(func=_cmd_epsilon)

    v = sub.add_parser("verify", help="re-check a witness document")
    v.add_argument("--graph", required=True)
    v.add_argument("--tree", required=True)
    v.add_argument("--witness", required=True)
    v.add_argument("--epsilon", required=True)
    v.add_argument("--mass", default="cardinality")
    v.set_defaults(func=_cmd_verify)

    o = sub.add_parser("oracle", help="brute-force ground truth")
    o.add_argument("mode", choices=("embed", "anticomplete", "chi"))
    o.add_argument("--graph", required=True)
    o.add_argument("--tree")
    o.set_defaults(func=_cmd_oracle)

    x = sub.add_parser("chi-split", help="certify under chromatic mass and report the bounds")
    x.add_argument("--graph", required=True)
    x.add_argument("--tree", required=True)
    engine_flags(x, epsilon_required=True)
    x.set_defaults(func=_cmd_chi_split)

    g = sub.add_parser("gen", help="emit a generated graph as an edge list")
    g.add_argument("--model", required=True, choices=("gnp", "regular", "high_girth", "caterpillar_subdivision"))
    g.add_argument("--n", type=int, default=0)
    g.add_argument("--probability", help="edge probability as p/q")
    g.add_argument("--degree", type=int)
    g.add_argument("--girth", type=int)
    g.add_argument("--spine", type=int)
    g.add_argument("--legs", help="comma-separated POSITION:LENGTH pairs")
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=_cmd_gen)

    b = sub.add_parser("batch", help="run a batch spec file")
    b.add_argument("--spec", required=True)
    b.add_argument("--table", action="store_true", help="plain-text summary instead of JSON")
    b.set_defaults(func=_cmd_batch)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as ex:
        return ex.code if isinstance(ex.code, int) else EX_USAGE
    try:
        return args.func(args)
    except BatchVerificationError as ex:
        print(f"error: {ex}", file=sys.stderr)
        _write_replay(ex.replay)
        return EX_INTERNAL
    except TheoremViolation as ex:
        print(f"error: theorem violation: {ex}", file=sys.stderr)
        _write_replay(getattr(ex, "replay", {"message": str(ex)}))
        return EX_INTERNAL
    except ParseError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EX_IO
    except json.JSONDecodeError as ex:
        print(f"error: bad JSON: {ex}", file=sys.stderr)
        return EX_IO
    except OSError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EX_IO
    except NodeLimitExceeded as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EX_USAGE
    except ValueError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())
