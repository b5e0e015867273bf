"""Parameterized arenas and safety games.

An arena labels each edge ``(v, v')`` with a regular language of non-empty
words; a word of length ``k`` is one joint move of ``k`` agents.  A safety
game adds a set of safe vertices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, reduce
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import lang
from .lang import Dfa

BOTTOM = "bot"


class ArenaError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    expr: object  # LangExpr
    dfa: Dfa

    @property
    def text(self) -> str:
        return lang.to_text(self.expr)


@dataclass(frozen=True)
class Arena:
    alphabet: tuple
    vertices: tuple
    edges: tuple
    initial: str
    default_target: object = None  # None, a vertex, or {vertex: vertex}

    def __post_init__(self):
        if not self.alphabet:
            raise ArenaError("empty alphabet")
        if len(set(self.vertices)) != len(self.vertices):
            raise ArenaError("duplicate vertex names")
        if self.initial not in self.vertices:
            raise ArenaError(f"initial vertex {self.initial!r} is not declared")
        seen = set()
        for e in self.edges:
            for v in (e.source, e.target):
                if v not in self.vertices:
                    raise ArenaError(f"edge mentions undeclared vertex {v!r}")
            if (e.source, e.target) in seen:
                raise ArenaError(f"duplicate edge {e.source} -> {e.target}")
            seen.add((e.source, e.target))
            if e.dfa.alphabet != self.alphabet:
                raise ArenaError(f"edge {e.source} -> {e.target} uses another alphabet")

    @cached_property
    def order(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _out(self) -> dict:
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.source].append(e)
        return {v: tuple(sorted(es, key=lambda e: self.order[e.target]))
                for v, es in out.items()}

    def out_edges(self, v: str) -> tuple:
        """Outgoing edges of ``v`` ordered by target declaration order."""
        return self._out[v]

    def edge(self, v: str, w: str) -> Edge | None:
        for e in self._out[v]:
            if e.target == w:
                return e
        return None

    def default_for(self, v: str):
        if isinstance(self.default_target, Mapping):
            return self.default_target.get(v)
        return self.default_target


@dataclass(frozen=True)
class SafetyGame:
    arena: Arena
    safe: frozenset

    def __post_init__(self):
        object.__setattr__(self, "safe", frozenset(self.safe))
        unknown = self.safe - set(self.arena.vertices)
        if unknown:
            raise ArenaError(f"safe set mentions undeclared vertices {sorted(unknown)}")

    @property
    def alphabet(self) -> tuple:
        return self.arena.alphabet

    @property
    def vertices(self) -> tuple:
        return self.arena.vertices

    @property
    def initial(self) -> str:
        return self.arena.initial

    def is_safe(self, v: str) -> bool:
        return v in self.safe

    def out_edges(self, v: str) -> tuple:
        return self.arena.out_edges(v)


def make_edge(source: str, target: str, expr, alphabet) -> Edge:
    if isinstance(expr, str):
        expr = lang.parse_lang_expr(expr, alphabet)
    return Edge(source, target, expr, lang.compile_expr(expr, alphabet))


def make_game(alphabet: Sequence[str], vertices: Sequence[str], safe: Iterable[str],
              initial: str, edges: Iterable[tuple], default_target=None) -> SafetyGame:
    """Build a game from ``(source, target, expression)`` triples."""
    try:
        alphabet = lang.check_alphabet(alphabet)
    except ValueError as exc:
        raise ArenaError(str(exc)) from None
    built = [make_edge(s, t, x, alphabet) for s, t, x in edges]
    arena = Arena(alphabet, tuple(vertices), tuple(built), initial, default_target)
    if isinstance(default_target, Mapping):
        for v, w in default_target.items():
            if v not in arena.vertices or w not in arena.vertices:
                raise ArenaError(f"default target {v!r} -> {w!r} mentions undeclared vertex")
    elif default_target is not None and default_target not in arena.vertices:
        raise ArenaError(f"default target {default_target!r} is not declared")
    return SafetyGame(arena, frozenset(safe))


# ---------------------------------------------------------------------------
# Normalization and checks


def _fresh_bottom(vertices: Sequence[str]) -> str:
    name = BOTTOM
    while name in vertices:
        name += "_"
    return name


def normalize(game: SafetyGame) -> SafetyGame:
    """Complete the arena and turn unsafe vertices into sinks.

    Unspecified words from a vertex go to its default target, or to a fresh
    unsafe vertex ``bot``.  Empty edges disappear.
    """
    arena = game.arena
    alphabet = arena.alphabet
    vertices = list(arena.vertices)
    safe = set(game.safe)
    sink_expr = lang.Plus(lang.AnyLetter())
    sink = lang.sigma_plus(alphabet)
    bottom = None
    edges = {}
    for v in arena.vertices:
        if v not in safe:
            continue
        out = [e for e in arena.out_edges(v) if not lang.is_empty(e.dfa)]
        for e in out:
            edges[(v, e.target)] = e
        covered = reduce(lang.dfa_union, (e.dfa for e in out), lang.empty_dfa(alphabet))
        if lang.is_sigma_plus(covered):
            continue
        target = arena.default_for(v)
        if target is None:
            if bottom is None:
                bottom = _fresh_bottom(vertices)
                vertices.append(bottom)
            target = bottom
        rest = lang.Compl(lang.union(*(e.expr for e in out))) if out else sink_expr
        rest_dfa = lang.dfa_complement(covered)
        old = edges.get((v, target))
        if old is None:
            edges[(v, target)] = Edge(v, target, rest, rest_dfa)
        else:
            edges[(v, target)] = Edge(v, target, lang.union(old.expr, rest),
                                      lang.dfa_union(old.dfa, rest_dfa))
    for v in vertices:
        if v not in safe:
            edges[(v, v)] = Edge(v, v, sink_expr, sink)
    new = Arena(tuple(alphabet), tuple(vertices), tuple(edges.values()),
                arena.initial, arena.default_target)
    return SafetyGame(new, frozenset(safe))


def completeness_check(arena: Arena | SafetyGame) -> bool:
    arena = getattr(arena, "arena", arena)
    for v in arena.vertices:
        covered = reduce(lang.dfa_union, (e.dfa for e in arena.out_edges(v)),
                         lang.empty_dfa(arena.alphabet))
        if not lang.is_sigma_plus(covered):
            return False
    return True


def determinism_check(arena: Arena | SafetyGame) -> bool:
    arena = getattr(arena, "arena", arena)
    for v in arena.vertices:
        out = arena.out_edges(v)
        for i, e in enumerate(out):
            for f in out[i + 1:]:
                if not lang.is_empty(lang.dfa_intersection(e.dfa, f.dfa)):
                    return False
    return True


def successors(arena: Arena | SafetyGame, v: str, word: Sequence[str]) -> set:
    arena = getattr(arena, "arena", arena)
    word = tuple(word)
    return {e.target for e in arena.out_edges(v) if e.dfa.accepts(word)}


def check_history(arena: Arena | SafetyGame, h: Sequence[str]) -> tuple:
    arena = getattr(arena, "arena", arena)
    h = tuple(h)
    if not h:
        raise ArenaError("a history is a non-empty vertex sequence")
    for v, w in zip(h, h[1:]):
        e = arena.edge(v, w)
        if e is None or lang.is_empty(e.dfa):
            raise ArenaError(f"no edge {v} -> {w}")
    return h


def k_realizable(arena: Arena | SafetyGame, h: Sequence[str], k: int) -> bool:
    """Whether each step of ``h`` admits a word of length ``k``."""
    arena = getattr(arena, "arena", arena)
    h = check_history(arena, h)
    return all(k in lang.length_set(arena.edge(v, w).dfa) for v, w in zip(h, h[1:]))


# ---------------------------------------------------------------------------
# JSON


def game_from_dict(data: dict) -> SafetyGame:
    try:
        alphabet = data["alphabet"]
        vertices = data["vertices"]
        initial = data["initial"]
        edges = [(e["from"], e["to"], e["lang"]) for e in data.get("edges", [])]
    except (KeyError, TypeError) as exc:
        raise ArenaError(f"malformed arena file: missing {exc}") from None
    safe = data.get("safe", vertices)
    return make_game(alphabet, vertices, safe, initial, edges, data.get("default_target"))


def game_to_dict(game: SafetyGame) -> dict:
    arena = game.arena
    out = {
        "alphabet": list(arena.alphabet),
        "vertices": list(arena.vertices),
        "safe": [v for v in arena.vertices if v in game.safe],
        "initial": arena.initial,
    }
    if arena.default_target is not None:
        d = arena.default_target
        out["default_target"] = dict(d) if isinstance(d, Mapping) else d
    out["edges"] = [{"from": e.source, "to": e.target, "lang": e.text}
                    for v in arena.vertices for e in arena.out_edges(v)]
    return out


def load_game(path) -> SafetyGame:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ArenaError(f"{path}: invalid JSON: {exc}") from None
    return game_from_dict(data)


def save_game(game: SafetyGame, path) -> None:
    Path(path).write_text(json.dumps(game_to_dict(game), indent=2) + "\n")
