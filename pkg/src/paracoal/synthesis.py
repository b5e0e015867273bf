"""Strategies: per-node words on the tree, and finite-memory strategies on the game."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .arena import SafetyGame
from .lang import UPWord
from .product import Lasso
from .unfolding import UnfoldingTree

DEAD = "dead"


class StrategyError(ValueError):
    pass


@dataclass(frozen=True)
class TreeStrategy:
    tree: UnfoldingTree
    words: dict  # internal node id -> UPWord

    def __getitem__(self, node: int) -> UPWord:
        return self.words[node]


def extract_strategy(tree: UnfoldingTree, lasso: Lasso) -> TreeStrategy:
    """Project the lasso onto each internal node's coordinate."""
    for a in lasso.stem + lasso.cycle:
        if len(a) != tree.m:
            raise StrategyError(f"tuple letter has {len(a)} coordinates, tree has {tree.m}")
    words = {n: UPWord(tuple(a[i] for a in lasso.stem), tuple(a[i] for a in lasso.cycle))
             for i, n in enumerate(tree.internal)}
    return TreeStrategy(tree, words)


@dataclass(frozen=True)
class MemoryStrategy:
    """Memory states are named nodes, each tied to the vertex it sits on, plus ``dead``.

    ``upd[(node, vertex)]`` is the next memory state after moving to
    ``vertex``; ``words[node]`` is the word played there.  In ``dead`` the
    constant word on ``dead_letter`` is played.
    """

    alphabet: tuple
    vertex: dict  # node name -> vertex
    words: dict  # node name -> UPWord
    upd: dict  # (node name, vertex) -> node name or DEAD
    root: str
    dead_letter: str

    def __post_init__(self):
        if self.root not in self.vertex:
            raise StrategyError(f"root {self.root!r} is not a memory node")
        if self.dead_letter not in self.alphabet:
            raise StrategyError(f"dead letter {self.dead_letter!r} not in alphabet")
        for n in self.vertex:
            if n == DEAD:
                raise StrategyError(f"{DEAD!r} is reserved")
            if n not in self.words:
                raise StrategyError(f"node {n!r} has no word")
            bad = self.words[n].letters() - set(self.alphabet)
            if bad:
                raise StrategyError(f"node {n!r} plays letters outside the alphabet: {sorted(bad)}")
        for (n, v), t in self.upd.items():
            if n not in self.vertex:
                raise StrategyError(f"update from unknown node {n!r}")
            if t != DEAD and t not in self.vertex:
                raise StrategyError(f"update to unknown node {t!r}")
            if t != DEAD and self.vertex[t] != v:
                raise StrategyError(f"update ({n}, {v}) -> {t} lands on vertex {self.vertex[t]}")

    @property
    def nodes(self) -> tuple:
        return tuple(self.vertex)

    @property
    def size(self) -> int:
        return len(self.vertex) + 1

    def update(self, m: str, v: str) -> str:
        if m == DEAD:
            return DEAD
        try:
            return self.upd[(m, v)]
        except KeyError:
            raise StrategyError(f"no update for memory {m!r} on vertex {v!r}") from None

    def next(self, m: str, v: str | None = None) -> UPWord:
        if m == DEAD:
            return UPWord.constant(self.dead_letter)
        return self.words[m]

    def memory(self, h: Sequence[str]) -> str:
        """Memory state after the history ``h`` (which starts at the root's vertex)."""
        m = self.root
        for v in tuple(h)[1:]:
            m = self.update(m, v)
        return m

    def check_game(self, game: SafetyGame) -> None:
        if tuple(self.alphabet) != tuple(game.alphabet):
            raise StrategyError("strategy alphabet differs from the arena alphabet")
        for n, v in self.vertex.items():
            if v not in game.vertices:
                raise StrategyError(f"node {n!r} sits on undeclared vertex {v!r}")
        for (n, v) in self.upd:
            if v not in game.vertices:
                raise StrategyError(f"update mentions undeclared vertex {v!r}")
        if self.vertex[self.root] != game.initial:
            raise StrategyError("root memory does not sit on the initial vertex")


def node_name(tree: UnfoldingTree, node: int) -> str:
    return f"n{tree.coordinate[node] + 1}"


def build_memory(tree: UnfoldingTree, ts: TreeStrategy) -> MemoryStrategy:
    """Use the internal nodes of the tree as memory."""
    game = tree.game
    vertex, words, upd = {}, {}, {}
    for n in tree.internal:
        name = node_name(tree, n)
        vertex[name] = tree.nodes[n].vertex
        words[name] = ts.words[n]
        for c in tree.nodes[n].children:
            v = tree.nodes[c].vertex
            if tree.nodes[c].internal:
                upd[(name, v)] = node_name(tree, c)
            elif not game.is_safe(v):
                upd[(name, v)] = DEAD
            else:
                upd[(name, v)] = node_name(tree, tree.ancestor_with_label(c, v))
    if tree.m == 0:
        raise StrategyError("the root is unsafe; there is nothing to play")
    return MemoryStrategy(tuple(game.alphabet), vertex, words, upd,
                          node_name(tree, 0), game.alphabet[0])


def memoryless(game: SafetyGame, words: Mapping[str, UPWord]) -> MemoryStrategy:
    """Strategy playing ``words[v]`` whenever the play is at ``v``."""
    vertex, table, upd = {}, {}, {}
    for v in game.vertices:
        if game.is_safe(v):
            vertex[v] = v
            table[v] = words.get(v, UPWord.constant(game.alphabet[0]))
    for v in vertex:
        for e in game.out_edges(v):
            upd[(v, e.target)] = e.target if e.target in vertex else DEAD
    return MemoryStrategy(tuple(game.alphabet), vertex, table, upd, game.initial,
                          game.alphabet[0])


def strategy_word(ms: MemoryStrategy, h: Sequence[str]) -> UPWord:
    h = tuple(h)
    return ms.next(ms.memory(h), h[-1])


def agent_action(ms: MemoryStrategy, h: Sequence[str], n: int) -> str:
    if n < 1:
        raise ValueError("agents are numbered from 1")
    return strategy_word(ms, h).letter_at(n)


# ---------------------------------------------------------------------------
# Files


def _letters_out(letters: tuple, compact: bool):
    return "".join(letters) if compact else list(letters)


def _letters_in(value, alphabet) -> tuple:
    if isinstance(value, list):
        return tuple(value)
    if not isinstance(value, str):
        raise StrategyError(f"expected a string or a list of letters, got {value!r}")
    if all(len(a) == 1 for a in alphabet):
        return tuple(value)
    raise StrategyError("multi-character alphabets need prefix/period as lists")


def strategy_to_dict(ms: MemoryStrategy) -> dict:
    compact = all(len(a) == 1 for a in ms.alphabet)
    return {
        "alphabet": list(ms.alphabet),
        "nodes": [{"id": n, "vertex": ms.vertex[n],
                   "prefix": _letters_out(ms.words[n].prefix, compact),
                   "period": _letters_out(ms.words[n].period, compact)} for n in ms.vertex],
        "root": ms.root,
        "upd": [{"from": n, "vertex": v, "to": t} for (n, v), t in ms.upd.items()],
        "dead_letter": ms.dead_letter,
    }


def strategy_from_dict(data: dict, alphabet: Sequence[str] | None = None) -> MemoryStrategy:
    try:
        alphabet = tuple(data.get("alphabet") or alphabet or ())
        if not alphabet:
            raise StrategyError("strategy file names no alphabet")
        vertex, words = {}, {}
        for node in data["nodes"]:
            n = node["id"]
            if n in vertex:
                raise StrategyError(f"duplicate node {n!r}")
            vertex[n] = node["vertex"]
            words[n] = UPWord(_letters_in(node.get("prefix", ""), alphabet),
                              _letters_in(node["period"], alphabet))
        upd = {}
        for u in data.get("upd", []):
            upd[(u["from"], u["vertex"])] = u["to"]
        return MemoryStrategy(alphabet, vertex, words, upd, data["root"],
                              data.get("dead_letter", alphabet[0]))
    except KeyError as exc:
        raise StrategyError(f"malformed strategy file: missing {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, StrategyError):
            raise
        raise StrategyError(f"malformed strategy file: {exc}") from None


def serialize(ms: MemoryStrategy) -> str:
    return json.dumps(strategy_to_dict(ms), indent=2) + "\n"


def deserialize(text: str, alphabet: Sequence[str] | None = None) -> MemoryStrategy:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StrategyError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise StrategyError("strategy file must hold a JSON object")
    return strategy_from_dict(data, alphabet)


def load_strategy(path, alphabet=None) -> MemoryStrategy:
    return deserialize(Path(path).read_text(), alphabet)


def save_strategy(ms: MemoryStrategy, path) -> None:
    Path(path).write_text(serialize(ms))
