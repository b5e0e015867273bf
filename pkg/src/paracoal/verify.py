"""Independent checks of strategies and of winnability.

``verify_fixed_k`` model-checks the ``k``-agent outcome of a memory strategy,
``verify_all_k`` reduces all ``k`` to finitely many representatives,
``brute_force_exists`` searches for tree strategies when only ``k <= K``
matters, and ``simulate`` samples one play.
"""

from __future__ import annotations

import json
import math
import random
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

from . import lang
from .arena import SafetyGame
from .product import BudgetExceeded
from .synthesis import DEAD, MemoryStrategy
from .unfolding import UnfoldingTree

DEFAULT_LCM_CAP = 1_000_000
DEFAULT_BRUTE_BUDGET = 2_000_000

SAFE, UNSAFE, UNDECIDED = "safe", "unsafe", "undecided"


@dataclass
class VerificationReport:
    verdict: str
    k: int | None = None
    witness: list = field(default_factory=list)
    explored: int = 0
    ks_checked: int = 0
    threshold: int | None = None
    period: int | None = None
    note: str = ""

    @property
    def safe(self) -> bool:
        return self.verdict == SAFE

    def to_dict(self) -> dict:
        return {key: value for key, value in asdict(self).items()
                if value not in (None, "", [])}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"verdict: {self.verdict}"]
        if self.k is not None:
            lines.append(f"failing k: {self.k}")
        if self.witness:
            lines.append("witness: " + " ".join(self.witness))
        if self.threshold is not None:
            lines.append(f"threshold: {self.threshold}, period: {self.period}")
        lines.append(f"representatives checked: {self.ks_checked}, states explored: {self.explored}")
        if self.note:
            lines.append(self.note)
        return "\n".join(lines)


def _reach(game: SafetyGame, ms: MemoryStrategy, moves: Callable):
    """BFS over (memory, vertex); ``moves(m, v)`` lists successor vertices.

    Returns ``(witness or None, explored)``.
    """
    start = (ms.root, game.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        m, v = state
        if not game.is_safe(v):
            path = []
            while state is not None:
                path.append(state[1])
                state = parent[state]
            return path[::-1], len(parent)
        for w in moves(m, v):
            nxt = (ms.update(m, w), w)
            if nxt not in parent:
                parent[nxt] = state
                queue.append(nxt)
    return None, len(parent)


def verify_fixed_k(game: SafetyGame, ms: MemoryStrategy, k: int) -> VerificationReport:
    if k < 1:
        raise ValueError("k must be >= 1")
    ms.check_game(game)

    def moves(m, v):
        u = ms.next(m, v).prefix_of(k)
        return [e.target for e in game.out_edges(v) if e.dfa.accepts(u)]

    witness, explored = _reach(game, ms, moves)
    if witness is None:
        return VerificationReport(SAFE, explored=explored, ks_checked=1)
    return VerificationReport(UNSAFE, k, witness, explored, 1)


def membership_table(game: SafetyGame, ms: MemoryStrategy) -> dict:
    """``(memory, successor) -> UPSet`` of agent counts taking that edge."""
    table = {}
    for m, v in ms.vertex.items():
        if not game.is_safe(v):
            continue
        w = ms.next(m, v)
        for e in game.out_edges(v):
            table[(m, e.target)] = lang.prefix_membership(e.dfa, w)
    return table


def verify_all_k(game: SafetyGame, ms: MemoryStrategy, lcm_cap: int = DEFAULT_LCM_CAP
                 ) -> VerificationReport:
    """Exact check over every ``k >= 1``.

    Beyond the largest threshold ``T`` every membership set repeats with the
    lcm ``P`` of the periods, so ``k = 1 .. T + P - 1`` are representative.
    """
    ms.check_game(game)
    table = membership_table(game, ms)
    sets = list(table.values()) or [lang.UPSet.everything()]
    t = max(s.threshold for s in sets)
    p = 1
    for s in sets:
        p = math.lcm(p, s.period)
        if p > lcm_cap:
            return VerificationReport(UNDECIDED, threshold=t, note=f"period lcm exceeds cap {lcm_cap}")
    explored = 0
    for k in range(1, t + p):
        def moves(m, v, k=k):
            if m == DEAD:
                return [v]
            return [e.target for e in game.out_edges(v) if table[(m, e.target)].membership(k)]

        witness, n = _reach(game, ms, moves)
        explored += n
        if witness is not None:
            return VerificationReport(UNSAFE, k, witness, explored, k, t, p)
    return VerificationReport(SAFE, explored=explored, ks_checked=t + p - 1, threshold=t, period=p)


# ---------------------------------------------------------------------------
# Bounded brute force


class _Signatures:
    """Acceptance patterns of length-``K`` words on the out-edges of a vertex.

    The signature of a word restricted to a set ``A`` of agent counts is, per
    out-edge, the set of ``k`` in ``A`` whose length-``k`` prefix the edge
    accepts.  Two words with equal signatures are interchangeable for every
    play with at most ``K`` agents, so searching signatures is exhaustive.
    """

    def __init__(self, game: SafetyGame, K: int, budget: int):
        self.game = game
        self.K = K
        self.budget = budget
        self.spent = 0
        self.cache = {}

    def __call__(self, v: str, alive: frozenset, forbidden: frozenset = frozenset()) -> list:
        """Signatures of words at ``v`` for the agent counts ``alive``.

        Words making an edge into ``forbidden`` accept some alive ``k`` are
        dropped early.
        """
        key = (v, alive, forbidden)
        if key in self.cache:
            return self.cache[key]
        edges = self.game.out_edges(v)
        bad = [i for i, e in enumerate(edges) if e.target in forbidden]
        k_letters = len(self.game.alphabet)
        layer = {(tuple(e.dfa.initial for e in edges), tuple(frozenset() for _ in edges))}
        for j in range(1, self.K + 1):
            nxt = set()
            for qs, sig in layer:
                for x in range(k_letters):
                    q2 = tuple(e.dfa.delta[q][x] for e, q in zip(edges, qs))
                    if j in alive:
                        sig2 = tuple(s | {j} if q in e.dfa.accepting else s
                                     for e, q, s in zip(edges, q2, sig))
                        if any(sig2[i] for i in bad):
                            continue
                    else:
                        sig2 = sig
                    nxt.add((q2, sig2))
            self.spent += len(nxt) * k_letters
            if self.spent > self.budget:
                raise BudgetExceeded(f"brute force exceeded {self.budget} steps")
            layer = nxt
        out = sorted({sig for _, sig in layer}, key=lambda s: [sorted(x) for x in s])
        self.cache[key] = out
        return out


def brute_force_exists(game: SafetyGame, tree: UnfoldingTree, K: int, L: int | None = None,
                       memoryless: bool = False, budget: int = DEFAULT_BRUTE_BUDGET) -> bool:
    """Is there an assignment of length-``L`` words to internal nodes winning for all ``k <= K``?

    With ``memoryless`` the same word is forced on equilabelled nodes.
    Only ``L == K`` is meaningful: plays with ``k`` agents read ``k``-prefixes.
    """
    L = K if L is None else L
    if L != K:
        raise ValueError("only L == K is supported")
    if K < 1:
        raise ValueError("K must be >= 1")
    if not tree.root.internal:
        return game.is_safe(tree.root.vertex)
    sigs = _Signatures(game, K, budget)
    unsafe = frozenset(v for v in game.vertices if not game.is_safe(v))
    everyone = frozenset(range(1, K + 1))
    nodes = tree.nodes

    if not memoryless:
        memo = {}

        def solvable(n: int, alive: frozenset) -> bool:
            if not alive:
                return True
            key = (n, alive)
            if key in memo:
                return memo[key]
            memo[key] = False
            kids = nodes[n].children
            result = False
            for sig in sigs(nodes[n].vertex, alive, unsafe):
                if all(not nodes[c].internal or solvable(c, sig[i])
                       for i, c in enumerate(kids)):
                    result = True
                    break
            memo[key] = result
            return result

        return solvable(0, everyone)

    # memoryless: one full signature per vertex, found by backtracking
    order = []
    for n in tree.internal:
        if nodes[n].vertex not in order:
            order.append(nodes[n].vertex)
    options = {v: sigs(v, everyone, frozenset()) for v in order}
    chosen = {}

    def consistent() -> bool:
        stack = [(0, everyone)]
        while stack:
            n, alive = stack.pop()
            sig = chosen.get(nodes[n].vertex)
            if sig is None or not alive:
                continue
            for i, c in enumerate(nodes[n].children):
                a = alive & sig[i]
                if not a:
                    continue
                if nodes[c].internal:
                    stack.append((c, a))
                elif not game.is_safe(nodes[c].vertex):
                    return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for sig in options[v]:
            chosen[v] = sig
            sigs.spent += 1
            if sigs.spent > budget:
                raise BudgetExceeded(f"brute force exceeded {budget} steps")
            if consistent() and search(i + 1):
                return True
        del chosen[v]
        return False

    return search(0)


# ---------------------------------------------------------------------------
# Simulation


@dataclass
class Trace:
    k: int
    vertices: list
    memories: list
    moves: list  # played length-k prefixes

    def to_dict(self) -> dict:
        return {"k": self.k, "vertices": self.vertices, "memories": self.memories,
                "moves": ["".join(u) if all(len(a) == 1 for a in u) else list(u)
                          for u in self.moves]}

    def to_text(self) -> str:
        lines = [f"k = {self.k}", " ".join(self.vertices)]
        for i, u in enumerate(self.moves):
            lines.append(f"{self.vertices[i]} --{' '.join(u)}--> {self.vertices[i + 1]}")
        return "\n".join(lines)


RESOLVERS = ("first", "minimal", "random")


def simulate(game: SafetyGame, ms: MemoryStrategy, k: int, steps: int, seed: int = 0,
             resolver: str = "random") -> Trace:
    """One ``k``-agent play of at most ``steps`` moves.

    Among several possible successors, ``first`` takes the earliest declared
    vertex, ``minimal`` the least vertex name and ``random`` a seeded choice.
    """
    if k < 1 or steps < 1:
        raise ValueError("k and steps must be >= 1")
    if resolver not in RESOLVERS:
        raise ValueError(f"unknown resolver {resolver!r}")
    ms.check_game(game)
    rng = random.Random(seed)
    v, m = game.initial, ms.root
    trace = Trace(k, [v], [m], [])
    for _ in range(steps):
        u = ms.next(m, v).prefix_of(k)
        options = [e.target for e in game.out_edges(v) if e.dfa.accepts(u)]
        if not options:
            break
        if resolver == "first":
            v = options[0]
        elif resolver == "minimal":
            v = min(options)
        else:
            v = options[rng.randrange(len(options))] if len(options) > 1 else options[0]
        m = ms.update(m, v)
        trace.moves.append(u)
        trace.vertices.append(v)
        trace.memories.append(m)
    return trace


def witness_dot(game: SafetyGame, witness: Sequence[str]) -> str:
    """The arena with the counterexample path drawn in red."""
    used = set(zip(witness, witness[1:]))
    lines = ["digraph arena {", "  rankdir=LR;"]
    for v in game.vertices:
        style = "style=filled, fillcolor=palegreen" if game.is_safe(v) else "style=dashed"
        if v in witness:
            style += ", color=red, penwidth=2"
        lines.append(f'  "{v}" [{style}];')
    for v in game.vertices:
        for e in game.out_edges(v):
            text = e.text.replace("\\", "\\\\").replace('"', '\\"')
            red = ", color=red, penwidth=2" if (v, e.target) in used else ""
            lines.append(f'  "{v}" -> "{e.target}" [label="{text}"{red}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
