"""Compositional emptiness check for the product automaton.

For a tree node ``n`` and a run of the coalition, call ``n`` *alive* at step
``k`` when every edge on the root path of ``n`` accepts the length-``k``
prefix of the word played at its source.  The coalition wins iff no unsafe
leaf is ever alive.

For every subtree we compute, bottom-up, the set of alive signals
``alpha in {0,1}^omega`` of its root for which words for the subtree's
internal nodes exist that keep all its unsafe leaves dead.  That set is a
safety language; it is represented by a deterministic :class:`SignalAutomaton`
obtained from a nondeterministic one (guessing the node's letters) by subset
construction, pruning and minimization.  Words are then extracted top-down,
each node solving a small one-node game against the signal its parent fixed.

This visits one automaton per distinct subtree shape instead of the
exponentially many letter classes of the flat product, and decides the
same question.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from . import lang
from .lang import UPSet, UPWord
from .product import (BudgetExceeded, Lasso, SolveResult, check_lasso, explore,
                      extract_lasso, lasso_from_words)
from .unfolding import UnfoldingTree

REJECT = -1


@dataclass(frozen=True)
class SignalAutomaton:
    """Deterministic safety automaton over bits; ``trans[q] = (on 0, on 1)``."""

    trans: tuple
    initial: int

    def accepts_signal(self, signal: UPSet) -> bool:
        q = self.initial
        t, p = signal.threshold, signal.period
        k, seen = 0, set()
        while True:
            j = k if k < t else t + (k - t) % p
            if j >= t and (j, q) in seen:
                return True
            seen.add((j, q))
            q = self.trans[q][signal.membership(k + 1)]
            if q == REJECT:
                return False
            k += 1

    @property
    def universal(self) -> bool:
        return all(REJECT not in row for row in self.trans)


UNIVERSAL = SignalAutomaton(((0, 0),), 0)


def _minimize(trans: list, initial: int) -> SignalAutomaton:
    """Moore refinement with REJECT as a distinguished class; canonical numbering."""
    n = len(trans)
    if n == 0:
        return SignalAutomaton((), REJECT)
    cls = [0] * n
    while True:
        sig = {}
        new = []
        for q in range(n):
            key = (cls[q],) + tuple(REJECT if t == REJECT else cls[t] for t in trans[q])
            new.append(sig.setdefault(key, len(sig)))
        if len(sig) == len(set(cls)):
            cls = new
            break
        cls = new
    rep = {}
    for q in range(n):
        rep.setdefault(cls[q], q)
    order = {cls[initial]: 0}
    queue = deque([cls[initial]])
    rows = {}
    while queue:
        c = queue.popleft()
        row = []
        for t in trans[rep[c]]:
            if t == REJECT:
                row.append(REJECT)
                continue
            ct = cls[t]
            if ct not in order:
                order[ct] = len(order)
                queue.append(ct)
            row.append(order[ct])
        rows[order[c]] = tuple(row)
    return SignalAutomaton(tuple(rows[i] for i in range(len(rows))), 0)


class NodeGame:
    """Nondeterministic signal automaton of one subtree shape.

    States are pairs (local DFA states of the relevant out-edges, states of
    the children's signal automata); the guessed letter is the node's move.
    """

    def __init__(self, alphabet, dfas, kinds, children, budget):
        self.alphabet = alphabet
        self.dfas = dfas  # per relevant out-edge
        self.kinds = kinds  # "unsafe" or "child"
        self.children = children  # SignalAutomaton per edge (None for unsafe leaves)
        self.budget = budget
        self._cache = {}

    @property
    def initial(self) -> tuple:
        return (tuple(d.initial for d in self.dfas),
                tuple(c.initial if c is not None else 0 for c in self.children))

    def step(self, state, bit: int, x: int):
        key = (state, bit, x)
        hit = self._cache.get(key)
        if hit is not None or key in self._cache:
            return hit
        qs, ss = state
        nq, ns = [], []
        result = None
        for d, kind, child, q, s in zip(self.dfas, self.kinds, self.children, qs, ss):
            q2 = d.delta[q][x]
            acc = bit and q2 in d.accepting
            if kind == "unsafe":
                if acc:
                    break
                nq.append(q2)
                ns.append(0)
            else:
                s2 = child.trans[s][1 if acc else 0]
                if s2 == REJECT:
                    break
                nq.append(q2)
                ns.append(s2)
        else:
            result = (tuple(nq), tuple(ns))
        self._cache[key] = result
        return result

    @cached_property
    def automaton(self) -> SignalAutomaton:
        """Determinize, drop states with empty language, minimize."""
        if not self.dfas:
            return UNIVERSAL
        k = len(self.alphabet)
        start = frozenset([self.initial])
        ids = {start: 0}
        subsets = [start]
        trans = []
        i = 0
        while i < len(subsets):
            S = subsets[i]
            row = []
            for bit in (0, 1):
                T = frozenset(t for s in S for x in range(k)
                              if (t := self.step(s, bit, x)) is not None)
                if not T:
                    row.append(REJECT)
                    continue
                if T not in ids:
                    ids[T] = len(subsets)
                    subsets.append(T)
                    if self.budget is not None and len(subsets) > self.budget:
                        raise BudgetExceeded(f"signal automaton exceeds {self.budget} states")
                row.append(ids[T])
            trans.append(row)
            i += 1
        # greatest fixpoint: keep states with an infinite non-rejecting path
        alive = [True] * len(trans)
        changed = True
        while changed:
            changed = False
            for q, row in enumerate(trans):
                if alive[q] and all(t == REJECT or not alive[t] for t in row):
                    alive[q] = False
                    changed = True
        pruned = [[t if t != REJECT and alive[t] else REJECT for t in row] for row in trans]
        if not alive[0]:
            return SignalAutomaton(((REJECT, REJECT),), 0)
        return _minimize(pruned, 0)

    def extract(self, signal: UPSet, max_states=None) -> UPWord | None:
        """Least word (letter by letter) keeping this node's run alive under ``signal``."""
        t, p = signal.threshold, signal.period

        def nxt(j):
            return j + 1 if j + 1 < t + p else t

        def successors(state):
            j, s = state
            j2 = nxt(j)
            bit = 1 if signal.membership(j2) else 0
            for x in range(len(self.alphabet)):
                r = self.step(s, bit, x)
                if r is not None:
                    yield self.alphabet[x], (j2, r)

        found = extract_lasso(explore((0, self.initial), successors, lambda s: True, max_states))
        if found is None:
            return None
        return UPWord(*found)


class CompositionalSolver:
    def __init__(self, tree: UnfoldingTree, budget: int | None = None):
        self.tree = tree
        self.budget = budget
        self.alphabet = tree.game.alphabet
        self.shape = {}  # node id -> shape key
        self.games = {}  # shape key -> NodeGame
        self.relevant = {}  # node id -> list of relevant child ids
        self._build()

    def _build(self):
        tree = self.tree
        intern = {}
        hazard = {}
        for n in reversed(tree.nodes):
            if not n.internal:
                hazard[n.id] = tree.is_unsafe_leaf(n.id)
                key = ("leaf", n.vertex, hazard[n.id])
            else:
                hazard[n.id] = any(hazard[c] for c in n.children)
                key = ("node", n.vertex,
                       tuple((tree.nodes[c].edge.target, self.shape[c]) for c in n.children))
            self.shape[n.id] = intern.setdefault(key, len(intern))
            if not n.internal:
                continue
            rel = [c for c in n.children if hazard[c]]
            self.relevant[n.id] = rel
            sk = self.shape[n.id]
            if sk in self.games:
                continue
            dfas, kinds, children = [], [], []
            for c in rel:
                dfas.append(tree.nodes[c].edge.dfa)
                if tree.nodes[c].internal:
                    kinds.append("child")
                    children.append(self.games[self.shape[c]].automaton)
                else:
                    kinds.append("unsafe")
                    children.append(None)
            self.games[sk] = NodeGame(self.alphabet, dfas, kinds, children, self.budget)

    def game(self, node: int) -> NodeGame:
        return self.games[self.shape[node]]

    def winnable(self) -> bool:
        root = self.tree.root
        if not root.internal:
            return self.tree.game.is_safe(root.vertex)
        return self.game(0).automaton.accepts_signal(UPSet.everything())

    def words(self) -> dict | None:
        if not self.winnable():
            return None
        tree = self.tree
        words = {}
        signals = {0: UPSet.everything()}
        queue = deque([0])
        while queue:
            n = queue.popleft()
            w = self.game(n).extract(signals[n], self.budget)
            if w is None:
                raise AssertionError("signal outside the winning region")
            words[n] = w
            for c in tree.nodes[n].children:
                if tree.nodes[c].internal:
                    acc = lang.prefix_membership(tree.nodes[c].edge.dfa, w)
                    signals[c] = signals[n] & acc
                    queue.append(c)
        return words


def solve_compositional(tree: UnfoldingTree, max_states: int | None = None) -> SolveResult:
    solver = CompositionalSolver(tree, max_states)
    if tree.m == 0:
        lasso = Lasso((), ((),)) if solver.winnable() else None
        return SolveResult(lasso, "compositional")
    words = solver.words()
    explored = sum(len(g.automaton.trans) for g in solver.games.values())
    if words is None:
        return SolveResult(None, "compositional", explored)
    lasso = lasso_from_words(tree, words)
    if not check_lasso(tree, lasso):
        raise AssertionError("combined lasso rejected by the product automaton")
    return SolveResult(lasso, "compositional", explored)
