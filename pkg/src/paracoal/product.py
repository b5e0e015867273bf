"""The product safety automaton over tuple letters and its emptiness check.

One component DFA runs per tree edge, reading the letter of the edge's
source node.  A state is accepting when no root-to-unsafe-leaf path has all
of its components accepting.  A word is accepted when every state after the
first letter is accepting (the initial state is exempt).
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

from .unfolding import UnfoldingTree

DEFAULT_MAX_STATES = 200_000
EXPLICIT_LETTER_LIMIT = 4096


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Lasso:
    stem: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(tuple(a) for a in self.stem))
        object.__setattr__(self, "cycle", tuple(tuple(a) for a in self.cycle))
        if not self.cycle:
            raise ValueError("cycle must be non-empty")

    def letter_at(self, k: int) -> tuple:
        """Tuple letter at 1-based position ``k``."""
        if k <= len(self.stem):
            return self.stem[k - 1]
        return self.cycle[(k - len(self.stem) - 1) % len(self.cycle)]


# ---------------------------------------------------------------------------
# Generic safety emptiness


@dataclass
class Exploration:
    initial: Hashable
    succ: dict  # expanded state -> [(letter, state)]
    accepting: set  # accepting states among the discovered ones
    winning: set  # greatest fixpoint inside the accepting states

    @property
    def explored(self) -> int:
        return len(self.succ)


def explore(initial, successors: Callable, accepting: Callable, max_states: int | None = None
            ) -> Exploration:
    """Expand the initial state and every reachable accepting state, then prune.

    ``successors(state)`` yields ``(letter, state)`` pairs in preference order.
    The result's ``winning`` set holds the accepting states with an infinite
    path staying inside accepting states.
    """
    succ = {}
    good = set()
    seen = {initial}
    queue = deque([initial])
    while queue:
        s = queue.popleft()
        out = list(successors(s))
        succ[s] = out
        for _, t in out:
            if t in seen:
                continue
            seen.add(t)
            if accepting(t):
                good.add(t)
                queue.append(t)
                if max_states is not None and len(seen) > max_states:
                    raise BudgetExceeded(f"more than {max_states} states explored")
    if initial in seen and accepting(initial):
        good.add(initial)
    count = {}
    preds = {}
    for s in good:
        n = 0
        for _, t in succ[s]:
            if t in good:
                n += 1
                preds.setdefault(t, []).append(s)
        count[s] = n
    alive = set(good)
    todo = [s for s in good if count[s] == 0]
    while todo:
        s = todo.pop()
        if s not in alive:
            continue
        alive.discard(s)
        for p in preds.get(s, ()):
            if p in alive:
                count[p] -= 1
                if count[p] == 0:
                    todo.append(p)
    return Exploration(initial, succ, good, alive)


def extract_lasso(ex: Exploration):
    """Follow the first viable letter until a state repeats; ``None`` if empty."""
    s = ex.initial
    seen = {s: 0}
    letters = []
    while True:
        for a, t in ex.succ[s]:
            if t in ex.winning:
                break
        else:
            return None
        letters.append(a)
        s = t
        if s in seen:
            i = seen[s]
            return tuple(letters[:i]), tuple(letters[i:])
        seen[s] = len(letters)


def safety_lasso(initial, successors: Callable, accepting: Callable,
                 max_states: int | None = None):
    """``(stem, cycle)`` of an accepted word, or ``None`` if the language is empty."""
    return extract_lasso(explore(initial, successors, accepting, max_states))


# ---------------------------------------------------------------------------
# The product automaton


class ProductAutomaton:
    """Product over a chosen subset of tree edges (all of them by default).

    Components are identified by the id of the node the edge enters; letters
    are tuples indexed by internal-node coordinate.
    """

    def __init__(self, tree: UnfoldingTree, components: Sequence[int] | None = None):
        self.tree = tree
        self.alphabet = tree.game.alphabet
        self.index = {a: i for i, a in enumerate(self.alphabet)}
        self.components = tuple(tree.tree_edges if components is None else components)
        pos = {c: i for i, c in enumerate(self.components)}
        nodes = tree.nodes
        self.dfas = [nodes[c].edge.dfa for c in self.components]
        self.coord = [tree.coordinate[nodes[c].parent] for c in self.components]
        self.paths = []
        for leaf in tree.leaves:
            if tree.is_unsafe_leaf(leaf):
                path = tree.path(leaf)[1:]
                self.paths.append(tuple(pos[c] for c in path if c in pos))

    @property
    def m(self) -> int:
        return self.tree.m

    def initial_state(self) -> tuple:
        return tuple(d.initial for d in self.dfas)

    def step(self, q: Sequence[int], a: Sequence[str]) -> tuple:
        if len(a) != self.m:
            raise ValueError(f"tuple letter has {len(a)} coordinates, expected {self.m}")
        if len(q) != len(self.dfas):
            raise ValueError("state has the wrong number of components")
        idx = self.index
        return tuple(d.delta[s][idx[a[c]]] for d, s, c in zip(self.dfas, q, self.coord))

    def phi_eval(self, q: Sequence[int]) -> bool:
        acc = [s in d.accepting for d, s in zip(self.dfas, q)]
        return all(not all(acc[i] for i in path) for path in self.paths)

    def run(self, letters: Iterable[Sequence[str]], q=None) -> list:
        """States visited after each letter."""
        q = self.initial_state() if q is None else q
        out = []
        for a in letters:
            q = self.step(q, a)
            out.append(q)
        return out

    # successor enumeration -------------------------------------------------

    @cached_property
    def free_coordinates(self) -> tuple:
        return tuple(sorted(set(self.coord)))

    def letter_classes(self, q: tuple) -> Iterable:
        """``(tuple letter, successor)`` pairs, one per distinct local move, in lex order.

        Coordinates read by no component are fixed to the first letter.
        """
        k = len(self.alphabet)
        per_coord = []
        for c in self.free_coordinates:
            comps = [i for i, cc in enumerate(self.coord) if cc == c]
            groups = {}
            for x in range(k):
                local = tuple(self.dfas[i].delta[q[i]][x] for i in comps)
                groups.setdefault(local, x)
            per_coord.append([(x, comps, local) for local, x in
                              sorted(groups.items(), key=lambda kv: kv[1])])
        first = self.alphabet[0]
        for combo in itertools.product(*per_coord):
            letter = [first] * self.m
            nxt = list(q)
            for c, (x, comps, local) in zip(self.free_coordinates, combo):
                letter[c] = self.alphabet[x]
                for i, s in zip(comps, local):
                    nxt[i] = s
            yield tuple(letter), tuple(nxt)

    def n_letter_classes_bound(self) -> int:
        return len(self.alphabet) ** len(self.free_coordinates)


def relevant_components(tree: UnfoldingTree) -> tuple:
    """Edges lying on some path to an unsafe leaf; the others never affect acceptance."""
    out = set()
    for leaf in tree.leaves:
        if tree.is_unsafe_leaf(leaf):
            out.update(tree.path(leaf)[1:])
    return tuple(sorted(out))


def check_lasso(tree: UnfoldingTree, lasso: Lasso, repetitions: int = 2) -> bool:
    """Run the full product over stem and cycle repetitions; accepting at every position >= 1."""
    aut = ProductAutomaton(tree)
    letters = list(lasso.stem) + list(lasso.cycle) * repetitions
    return all(aut.phi_eval(q) for q in aut.run(letters))


@dataclass
class SolveResult:
    lasso: Lasso | None
    method: str
    explored: int = 0
    winning: int = 0
    exploration: Exploration | None = field(default=None, repr=False)
    automaton: ProductAutomaton | None = field(default=None, repr=False)

    @property
    def winnable(self) -> bool:
        return self.lasso is not None


def solve_explicit(tree: UnfoldingTree, max_states: int | None = DEFAULT_MAX_STATES
                   ) -> SolveResult:
    if tree.m == 0:
        lasso = None
        if tree.game.is_safe(tree.root.vertex):
            lasso = Lasso((), ((),))
        return SolveResult(lasso, "explicit")
    aut = ProductAutomaton(tree, relevant_components(tree))
    ex = explore(aut.initial_state(), aut.letter_classes, aut.phi_eval, max_states)
    found = extract_lasso(ex)
    lasso = None if found is None else Lasso(*found)
    return SolveResult(lasso, "explicit", ex.explored, len(ex.winning), ex, aut)


def solve(tree: UnfoldingTree, method: str = "auto",
          max_states: int | None = DEFAULT_MAX_STATES) -> SolveResult:
    """Decide whether the product accepts some word and return a lasso if so.

    ``method`` is ``explicit`` (on-the-fly greatest fixpoint over product
    states), ``compositional`` (bottom-up over the tree, see
    :mod:`paracoal.signals`) or ``auto``, which uses the explicit search when
    the number of letter classes per state is small and falls back to the
    compositional one otherwise.
    """
    if method not in ("auto", "explicit", "compositional"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        aut = ProductAutomaton(tree, relevant_components(tree))
        if aut.n_letter_classes_bound() <= EXPLICIT_LETTER_LIMIT:
            try:
                return solve_explicit(tree, max_states)
            except BudgetExceeded:
                pass
        method = "compositional"
    if method == "explicit":
        return solve_explicit(tree, max_states)
    from .signals import solve_compositional
    return solve_compositional(tree, max_states)


def lasso_from_words(tree: UnfoldingTree, words: dict) -> Lasso:
    """Combine per-node ultimately periodic words into one tuple lasso."""
    if tree.m == 0:
        return Lasso((), ((),))
    ws = [words[n] for n in tree.internal]
    s = max(len(w.prefix) for w in ws)
    p = math.lcm(*(len(w.period) for w in ws))
    letters = [tuple(w.letter_at(k) for w in ws) for k in range(1, s + p + 1)]
    return Lasso(letters[:s], letters[s:])


def to_dot(result: SolveResult, max_states: int = 200) -> str:
    """DOT picture of the explored fragment; accepting states are filled blue."""
    ex, aut = result.exploration, result.automaton
    lines = ["digraph product {", "  rankdir=LR;", "  node [shape=ellipse];"]
    if ex is None:
        lines.append('  note [shape=note, label="no explicit exploration"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    ids = {}
    order = [ex.initial] + [s for s in ex.succ if s != ex.initial]
    shown = order[:max_states]
    for s in shown:
        ids[s] = len(ids)
    for s in shown:
        label = ",".join(map(str, s))
        style = []
        if s in ex.accepting:
            style.append("style=filled, fillcolor=lightblue")
        if s in ex.winning:
            style.append("penwidth=2")
        if s == ex.initial:
            style.append("shape=doublecircle")
        extra = (", " + ", ".join(style)) if style else ""
        lines.append(f'  q{ids[s]} [label="({label})"{extra}];')
    for s in shown:
        grouped = {}
        for a, t in ex.succ.get(s, ()):
            if t in ids:
                grouped.setdefault(t, []).append("".join(a) if all(len(x) == 1 for x in a)
                                                 else " ".join(a))
        for t, labels in grouped.items():
            text = "\\n".join(labels[:4]) + ("\\n..." if len(labels) > 4 else "")
            lines.append(f'  q{ids[s]} -> q{ids[t]} [label="{text}"];')
    if len(order) > max_states:
        lines.append(f'  truncated [shape=note, label="{len(order) - max_states} more states"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
