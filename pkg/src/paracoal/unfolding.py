"""Finite tree unfolding of a safety game, and the zip map on histories."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .arena import Edge, SafetyGame, check_history


class UnfoldingError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    id: int
    vertex: str
    parent: int | None
    depth: int
    edge: Edge | None  # arena edge from the parent's label
    internal: bool
    children: tuple = ()


@dataclass(frozen=True)
class UnfoldingTree:
    """Nodes are numbered breadth-first; node ``s > 0`` is the target of tree edge ``s``.

    ``internal`` lists the internal nodes in breadth-first order, so the
    coordinate of internal node ``internal[i]`` is ``i``.
    """

    game: SafetyGame
    nodes: tuple

    @property
    def root(self) -> Node:
        return self.nodes[0]

    @cached_property
    def internal(self) -> tuple:
        return tuple(n.id for n in self.nodes if n.internal)

    @cached_property
    def leaves(self) -> tuple:
        return tuple(n.id for n in self.nodes if not n.internal)

    @cached_property
    def coordinate(self) -> dict:
        return {n: i for i, n in enumerate(self.internal)}

    @property
    def m(self) -> int:
        return len(self.internal)

    @cached_property
    def tree_edges(self) -> tuple:
        """Child node ids in breadth-first order; edge ``s`` enters node ``tree_edges[s]``."""
        return tuple(n.id for n in self.nodes[1:])

    def path(self, node: int) -> list:
        out = []
        cur = node
        while cur is not None:
            out.append(cur)
            cur = self.nodes[cur].parent
        return out[::-1]

    def label_path(self, node: int) -> tuple:
        return tuple(self.nodes[n].vertex for n in self.path(node))

    def is_unsafe_leaf(self, node: int) -> bool:
        n = self.nodes[node]
        return not n.internal and not self.game.is_safe(n.vertex)

    def child_by_vertex(self, node: int, vertex: str) -> int | None:
        for c in self.nodes[node].children:
            if self.nodes[c].vertex == vertex:
                return c
        return None

    def ancestor_with_label(self, node: int, vertex: str) -> int | None:
        """Proper ancestor of ``node`` labelled ``vertex``, if any."""
        cur = self.nodes[node].parent
        while cur is not None:
            if self.nodes[cur].vertex == vertex:
                return cur
            cur = self.nodes[cur].parent
        return None

    @property
    def height(self) -> int:
        return max(n.depth for n in self.nodes)


def unfold(game: SafetyGame) -> UnfoldingTree:
    """Unfold ``game`` (which should be normalized) breadth-first."""
    specs = []  # [vertex, parent, depth, edge, internal, children]
    ancestors = []
    queue = deque()

    def add(vertex, parent, edge):
        depth = 0 if parent is None else specs[parent][2] + 1
        above = frozenset() if parent is None else ancestors[parent] | {specs[parent][0]}
        internal = game.is_safe(vertex) and vertex not in above
        specs.append([vertex, parent, depth, edge, internal, []])
        ancestors.append(above)
        if parent is not None:
            specs[parent][5].append(len(specs) - 1)
        if internal:
            queue.append(len(specs) - 1)

    add(game.initial, None, None)
    while queue:
        n = queue.popleft()
        for e in game.out_edges(specs[n][0]):
            add(e.target, n, e)
    nodes = tuple(Node(i, v, p, d, e, internal, tuple(ch))
                  for i, (v, p, d, e, internal, ch) in enumerate(specs))
    return UnfoldingTree(game, nodes)


class Zipper:
    """Incremental loop erasure of a history; amortized O(1) per step."""

    def __init__(self, game: SafetyGame, start: str | None = None):
        self.game = game
        self.path = [game.initial if start is None else start]
        self.pos = {self.path[0]: 0}

    @property
    def frozen(self) -> bool:
        return not self.game.is_safe(self.path[-1])

    def push(self, v: str) -> None:
        if self.frozen:
            return
        i = self.pos.get(v)
        if i is None:
            self.pos[v] = len(self.path)
            self.path.append(v)
            return
        for w in self.path[i + 1:]:
            del self.pos[w]
        del self.path[i + 1:]

    def value(self) -> tuple:
        return tuple(self.path)


def zip_history(game: SafetyGame, h: Sequence[str]) -> tuple:
    h = check_history(game, h)
    if h[0] != game.initial:
        raise UnfoldingError("histories start at the initial vertex")
    z = Zipper(game)
    for v in h[1:]:
        z.push(v)
    return z.value()


def alpha(tree: UnfoldingTree, z: Sequence[str]) -> int:
    """Node whose root path carries the labels ``z``."""
    z = tuple(z)
    if not z or len(set(z)) != len(z):
        raise UnfoldingError(f"{z!r} is not a zipped history")
    if z[0] != tree.root.vertex:
        raise UnfoldingError("zipped histories start at the root label")
    node = 0
    for v in z[1:]:
        nxt = tree.child_by_vertex(node, v) if tree.nodes[node].internal else None
        if nxt is None:
            raise UnfoldingError(f"{z!r} does not label a root path")
        node = nxt
    return node


def beta(tree: UnfoldingTree, node: int) -> tuple:
    return tree.label_path(node)


def maximal_paths(tree: UnfoldingTree) -> list:
    return [tree.path(leaf) for leaf in tree.leaves]


def to_dot(tree: UnfoldingTree) -> str:
    lines = ["digraph unfolding {", "  node [shape=box];"]
    for n in tree.nodes:
        name = f"n{tree.coordinate[n.id] + 1}" if n.internal else ""
        label = f"{n.vertex}\\n{name}" if name else n.vertex
        style = ""
        if not n.internal and not tree.game.is_safe(n.vertex):
            style = ", style=dashed"
        elif tree.game.is_safe(n.vertex):
            style = ", style=filled, fillcolor=palegreen"
        lines.append(f'  {n.id} [label="{label}"{style}];')
    for n in tree.nodes[1:]:
        text = n.edge.text.replace("\\", "\\\\").replace('"', '\\"')
        dashed = ", style=dashed" if tree.is_unsafe_leaf(n.id) else ""
        lines.append(f'  {n.parent} -> {n.id} [label="{text}"{dashed}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
