"""Slow, obviously-correct reference implementations used by the tests."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from paracoal import lang


def naive_member(expr, word) -> bool:
    """Membership of ``word`` in the expression's language (nonempty words only)."""
    word = tuple(word)
    return bool(word) and _match(expr, word)


def _match(e, w) -> bool:
    return _match_cached(e, w)


@lru_cache(maxsize=None)
def _match_cached(e, w) -> bool:
    if isinstance(e, lang.Lit):
        return w == (e.letter,)
    if isinstance(e, lang.AnyLetter):
        return len(w) == 1
    if isinstance(e, lang.Mod):
        return len(w) >= 1 and all(x == e.letter for x in w) and len(w) % e.modulus in e.residues
    if isinstance(e, lang.Union):
        return any(_match(p, w) for p in e.parts)
    if isinstance(e, lang.Inter):
        return all(_match(p, w) for p in e.parts)
    if isinstance(e, lang.Diff):
        return _match(e.left, w) and not _match(e.right, w)
    if isinstance(e, lang.Compl):
        return len(w) >= 1 and not _match(e.inner, w)
    if isinstance(e, lang.Concat):
        return _concat(e.parts, w)
    if isinstance(e, lang.Star):
        return len(w) == 0 or _plus(e.inner, w)
    if isinstance(e, lang.Plus):
        return _plus(e.inner, w)
    if isinstance(e, lang.ExplicitDfa):
        return e.dfa.accepts(w)
    raise TypeError(e)


def _concat(parts, w) -> bool:
    if not parts:
        return len(w) == 0
    head, rest = parts[0], parts[1:]
    return any(_match(head, w[:i]) and _concat(rest, w[i:]) for i in range(len(w) + 1))


def _plus(inner, w) -> bool:
    if _match(inner, w):
        return True
    return any(_match(inner, w[:i]) and _plus(inner, w[i:]) for i in range(1, len(w)))


def random_expr(rng: random.Random, alphabet, depth: int = 4):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.6:
            return lang.Lit(rng.choice(alphabet))
        if r < 0.8:
            return lang.AnyLetter()
        p = rng.randint(1, 4)
        res = frozenset(x for x in range(p) if rng.random() < 0.5)
        return lang.Mod(rng.choice(alphabet), p, res)
    op = rng.choice(["concat", "union", "inter", "diff", "compl", "star", "plus"])
    sub = lambda: random_expr(rng, alphabet, depth - 1)
    if op == "concat":
        return lang.Concat((sub(), sub()))
    if op == "union":
        return lang.Union((sub(), sub()))
    if op == "inter":
        return lang.Inter((sub(), sub()))
    if op == "diff":
        return lang.Diff(sub(), sub())
    if op == "compl":
        return lang.Compl(sub())
    if op == "star":
        return lang.Star(sub())
    return lang.Plus(sub())


def words_up_to(alphabet, n: int):
    for k in range(1, n + 1):
        yield from itertools.product(alphabet, repeat=k)


def lengths_by_bfs(dfa, up_to: int) -> set:
    """Lengths k <= up_to with an accepted word, by exhaustive enumeration."""
    out = set()
    for k in range(1, up_to + 1):
        states = {dfa.initial}
        for _ in range(k):
            states = {dfa.run((a,), q) for q in states for a in dfa.alphabet}
        if states & dfa.accepting:
            out.add(k)
    return out


def random_dfa(rng: random.Random, alphabet, n_states: int):
    delta = tuple(tuple(rng.randrange(n_states) for _ in alphabet) for _ in range(n_states))
    acc = frozenset(q for q in range(n_states) if rng.random() < 0.4)
    return lang.Dfa(tuple(alphabet), delta, 0, acc)


def safety_nonempty_bfs(delta, initial, accepting) -> bool:
    """Is there a run of length |Q| whose states after the first letter all accept?"""
    layer = {initial}
    for _ in range(len(delta)):
        layer = {t for q in layer for t in delta[q] if t in accepting}
        if not layer:
            return False
    return True


def count_unfolding(game, vertex=None, ancestors=frozenset()):
    """(nodes, internal, leaves) of the unfolding, by direct recursion on the definition."""
    vertex = game.initial if vertex is None else vertex
    if not game.is_safe(vertex) or vertex in ancestors:
        return 1, 0, 1
    nodes, internal, leaves = 1, 1, 0
    for e in game.out_edges(vertex):
        n, i, l = count_unfolding(game, e.target, ancestors | {vertex})
        nodes, internal, leaves = nodes + n, internal + i, leaves + l
    return nodes, internal, leaves


def tree_assignment_wins(tree, words: dict, K: int) -> bool:
    """Do the finite words at internal nodes keep every k-play (k <= K) off unsafe leaves?"""
    for k in range(1, K + 1):
        stack = [0]
        while stack:
            n = stack.pop()
            node = tree.nodes[n]
            if not node.internal:
                if not tree.game.is_safe(node.vertex):
                    return False
                continue
            u = words[n][:k]
            for c in node.children:
                if tree.nodes[c].edge.dfa.accepts(u):
                    stack.append(c)
    return True


def brute_force_naive(tree, K: int, memoryless: bool = False) -> bool:
    """Enumerate every assignment of length-K words (per node or per vertex)."""
    alphabet = tree.game.alphabet
    words = list(itertools.product(alphabet, repeat=K))
    if memoryless:
        labels = sorted({tree.nodes[n].vertex for n in tree.internal})
        for combo in itertools.product(words, repeat=len(labels)):
            table = dict(zip(labels, combo))
            if tree_assignment_wins(tree, {n: table[tree.nodes[n].vertex] for n in tree.internal}, K):
                return True
        return False
    for combo in itertools.product(words, repeat=tree.m):
        if tree_assignment_wins(tree, dict(zip(tree.internal, combo)), K):
            return True
    return False


def qbf_truth_table(phi) -> bool:
    """Quantifier evaluation by expanding the full truth table bottom-up."""
    q = phi.n_vars
    values = {}
    for bits in itertools.product((False, True), repeat=q):
        values[bits] = all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in phi.clauses)
    for i in reversed(range(q)):
        nxt = {}
        for bits in itertools.product((False, True), repeat=i):
            pair = (values[bits + (False,)], values[bits + (True,)])
            nxt[bits] = any(pair) if phi.prefix[i] == "e" else all(pair)
        values = nxt
    return values[()]


def random_safe_history(game, rng: random.Random, max_len: int) -> tuple:
    h = [game.initial]
    for _ in range(rng.randint(0, max_len)):
        options = [e.target for e in game.out_edges(h[-1])
                   if game.is_safe(e.target) and not lang.is_empty(e.dfa)]
        if not options:
            break
        h.append(rng.choice(options))
    return tuple(h)


def random_game(rng: random.Random, n_vertices: int = 3):
    """Small random game over {a, b} built from a pool of edge languages."""
    from paracoal.arena import make_game, normalize

    pool = ["a", "b", ".", "a+", "b+", "(..)+", ".(..)*", "a*ba*", "mod(a,2,{0})",
            "mod(b,3,{1,2})", ".+", "(ab)+", "b | aa+", "!(a+)"]
    vertices = [f"u{i}" for i in range(n_vertices)]
    safe = [v for v in vertices if rng.random() < 0.85] or vertices[:1]
    if vertices[0] not in safe:
        safe.append(vertices[0])
    edges = []
    for v in vertices:
        for w in vertices:
            if rng.random() < 0.45:
                edges.append((v, w, rng.choice(pool)))
    return normalize(make_game(["a", "b"], vertices, safe, vertices[0], edges))


def fig1_hand_strategy():
    """a^w at v0, v1, v2; at v3 a^w after v1 (even) and b^w after v2 (odd)."""
    from paracoal.synthesis import MemoryStrategy

    a, b = lang.UPWord.constant("a"), lang.UPWord.constant("b")
    vertex = {"m0": "v0", "m1": "v1", "m2": "v2", "m3": "v3", "m4": "v3", "m5": "v5"}
    words = {"m0": a, "m1": a, "m2": a, "m3": a, "m4": b, "m5": a}
    upd = {("m0", "v1"): "m1", ("m0", "v2"): "m2", ("m1", "v3"): "m3", ("m2", "v3"): "m4",
           ("m3", "v4"): "dead", ("m3", "v5"): "m5", ("m4", "v4"): "dead", ("m4", "v5"): "m5",
           ("m5", "v5"): "m5"}
    return MemoryStrategy(("a", "b"), vertex, words, upd, "m0", "a")
