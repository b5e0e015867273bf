"""Command-line front end.

Exit codes: 0 success (winnable / safe), 1 negative answer (not winnable /
unsafe), 2 error, 3 undecided within the configured caps.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import arena as arena_mod
from . import generators, product, synthesis, unfolding, verify

EXIT_OK, EXIT_NO, EXIT_ERROR, EXIT_UNDECIDED = 0, 1, 2, 3


@dataclass
class Config:
    """Budget caps; defaults can be overridden through the environment."""

    max_states: int = product.DEFAULT_MAX_STATES
    brute_budget: int = verify.DEFAULT_BRUTE_BUDGET
    lcm_cap: int = verify.DEFAULT_LCM_CAP
    resolver: str = "random"
    seed: int = 0

    ENV = {"max_states": "PARACOAL_MAX_STATES", "brute_budget": "PARACOAL_BRUTE_BUDGET",
           "lcm_cap": "PARACOAL_LCM_CAP"}

    def __post_init__(self):
        for name in ("max_states", "brute_budget", "lcm_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_env(cls, env=None) -> "Config":
        env = os.environ if env is None else env
        kwargs = {}
        for name, var in cls.ENV.items():
            if env.get(var):
                try:
                    kwargs[name] = int(env[var])
                except ValueError:
                    raise ValueError(f"{var} must be an integer") from None
        return cls(**kwargs)


class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def say(self, text: str) -> None:
        print(text, file=sys.stderr if self.as_json else sys.stdout)

    def data(self, obj) -> None:
        if self.as_json:
            print(json.dumps(obj, indent=2))


def _load(path):
    return arena_mod.normalize(arena_mod.load_game(path))


def cmd_check(args, cfg: Config, out: Output) -> int:
    raw = arena_mod.load_game(args.arena)
    game = arena_mod.normalize(raw)
    complete_raw = arena_mod.completeness_check(raw)
    deterministic = arena_mod.determinism_check(game)
    added = [v for v in game.vertices if v not in raw.vertices]
    edges = [e for v in game.vertices for e in game.out_edges(v)]
    stats = {
        "vertices": len(game.vertices),
        "safe": len(game.safe),
        "edges": len(edges),
        "alphabet": len(game.alphabet),
        "dfa_states": sum(e.dfa.n_states for e in edges),
        "complete": arena_mod.completeness_check(game),
        "complete_as_given": complete_raw,
        "deterministic": deterministic,
        "added_vertices": added,
    }
    yes = {True: "yes", False: "no"}
    out.say(f"vertices: {stats['vertices']} ({stats['safe']} safe), edges: {stats['edges']}, "
            f"letters: {stats['alphabet']}, DFA states: {stats['dfa_states']}")
    out.say(f"complete: {yes[stats['complete']]} (as given: {yes[complete_raw]}), "
            f"deterministic: {yes[deterministic]}")
    if added:
        out.say("added: " + ", ".join(added))
    out.data(stats)
    return EXIT_OK


def cmd_solve(args, cfg: Config, out: Output) -> int:
    game = _load(args.arena)
    tree = unfolding.unfold(game)
    if args.dot_tree:
        Path(args.dot_tree).write_text(unfolding.to_dot(tree))
    result = product.solve(tree, args.method, cfg.max_states)
    if args.dot_product:
        res = result
        if res.exploration is None and tree.m:
            try:
                res = product.solve_explicit(tree, cfg.max_states)
            except product.BudgetExceeded:
                pass
        Path(args.dot_product).write_text(product.to_dot(res))
    info = {"winnable": result.winnable, "method": result.method, "nodes": len(tree.nodes),
            "internal": tree.m, "explored": result.explored}
    out.say(f"tree: {len(tree.nodes)} nodes, {tree.m} internal; method: {result.method}")
    if not result.winnable:
        out.say("not winnable")
        out.data(info)
        return EXIT_NO
    out.say("winnable")
    if tree.m:
        ms = synthesis.build_memory(tree, synthesis.extract_strategy(tree, result.lasso))
        for n in tree.internal:
            name = synthesis.node_name(tree, n)
            out.say(f"  {name} @ {tree.nodes[n].vertex}: {ms.words[name]}")
        if args.emit_strategy:
            synthesis.save_strategy(ms, args.emit_strategy)
        info["strategy"] = synthesis.strategy_to_dict(ms)
    out.data(info)
    return EXIT_OK


def _agents(text: str) -> list:
    if ".." in text:
        lo, hi = (int(x) for x in text.split("..", 1))
        if lo < 1 or hi < lo:
            raise ValueError(f"bad agent range {text!r}")
        return list(range(lo, hi + 1))
    k = int(text)
    if k < 1:
        raise ValueError("agent count must be >= 1")
    return [k]


def cmd_verify(args, cfg: Config, out: Output) -> int:
    game = _load(args.arena)
    ms = synthesis.load_strategy(args.strategy, game.alphabet)
    ms.check_game(game)
    if args.all:
        report = verify.verify_all_k(game, ms, cfg.lcm_cap)
    else:
        report = None
        explored = 0
        ks = _agents(args.agents)
        for k in ks:
            report = verify.verify_fixed_k(game, ms, k)
            explored += report.explored
            if not report.safe:
                break
        report.explored = explored
        report.ks_checked = len(ks) if report.safe else ks.index(report.k) + 1
    out.say(report.to_text())
    if args.dot_witness and report.witness:
        Path(args.dot_witness).write_text(verify.witness_dot(game, report.witness))
    out.data(report.to_dict())
    return {verify.SAFE: EXIT_OK, verify.UNSAFE: EXIT_NO}.get(report.verdict, EXIT_UNDECIDED)


def cmd_simulate(args, cfg: Config, out: Output) -> int:
    game = _load(args.arena)
    ms = synthesis.load_strategy(args.strategy, game.alphabet)
    trace = verify.simulate(game, ms, args.agents, args.steps, args.seed, args.resolver)
    out.say(trace.to_text())
    out.data(trace.to_dict())
    return EXIT_OK


def cmd_gen(args, cfg: Config, out: Output) -> int:
    if args.kind == "example":
        spec = generators.example_spec(args.what)
    elif args.kind == "worstcase":
        spec = generators.worstcase_spec(int(args.what))
    else:
        spec = generators.qbf_spec(generators.load_qbf(args.what))
    game = arena_mod.game_from_dict(spec)  # validates
    text = json.dumps(spec, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
        out.say(f"wrote {args.output}: {len(game.vertices)} vertices")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paracoal", description="Safety games for an unknown number of agents.")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output on stdout, human text on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate and normalize an arena file")
    p.add_argument("arena")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="decide winnability and synthesize a strategy")
    p.add_argument("arena")
    p.add_argument("--emit-strategy", metavar="FILE")
    p.add_argument("--dot-tree", metavar="FILE")
    p.add_argument("--dot-product", metavar="FILE")
    p.add_argument("--method", choices=("auto", "explicit", "compositional"), default="auto")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a strategy file against an arena")
    p.add_argument("arena")
    p.add_argument("strategy")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--agents", metavar="K|LO..HI")
    group.add_argument("--all", action="store_true", help="every number of agents")
    p.add_argument("--dot-witness", metavar="FILE")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="play one run of a strategy")
    p.add_argument("arena")
    p.add_argument("strategy")
    p.add_argument("--agents", type=int, required=True)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resolver", choices=verify.RESOLVERS, default="random")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gen", help="write a built-in or generated arena")
    p.add_argument("kind", choices=("example", "worstcase", "qbf"))
    p.add_argument("what", help="fig1|fig2, n, or a QDIMACS/JSON formula file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.json)
    try:
        cfg = Config.from_env()
        return args.func(args, cfg, out)
    except product.BudgetExceeded as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.json:
            print(json.dumps({"error": str(exc)}))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
