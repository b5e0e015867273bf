"""Built-in games: the two small examples, the exponential-memory family and QBF arenas."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from pathlib import Path

from .arena import SafetyGame, game_from_dict, normalize

MAX_PRIME_INDEX = 16
MAX_WORSTCASE = 6
MAX_QBF_VARS = 12


def prime(i: int) -> int:
    """The ``i``-th prime, ``prime(1) == 2``."""
    if not 1 <= i <= MAX_PRIME_INDEX:
        raise ValueError(f"prime index must lie in 1..{MAX_PRIME_INDEX}")
    limit = 60
    sieve = [True] * limit
    found = []
    for n in range(2, limit):
        if sieve[n]:
            found.append(n)
            for j in range(n * n, limit, n):
                sieve[j] = False
    return found[i - 1]


# ---------------------------------------------------------------------------
# Examples

EXAMPLES = {
    "fig1": {
        "alphabet": ["a", "b"],
        "vertices": ["v0", "v1", "v2", "v3", "v4", "v5"],
        "safe": ["v0", "v1", "v2", "v3", "v5"],
        "initial": "v0",
        "default_target": "v4",
        "edges": [
            {"from": "v0", "to": "v1", "lang": "(..)+"},
            {"from": "v0", "to": "v2", "lang": ".(..)*"},
            {"from": "v1", "to": "v3", "lang": ".+"},
            {"from": "v2", "to": "v3", "lang": ".+"},
            {"from": "v3", "to": "v4", "lang": "(bb)+ | a(aa)*"},
            {"from": "v3", "to": "v5", "lang": "(aa)+ | b(bb)*"},
            {"from": "v4", "to": "v4", "lang": ".+"},
            {"from": "v5", "to": "v5", "lang": ".+"},
        ],
    },
    "fig2": {
        "alphabet": ["a", "b"],
        "vertices": ["v0", "v1", "v2", "bot"],
        "safe": ["v0", "v1", "v2"],
        "initial": "v0",
        "default_target": "bot",
        "edges": [
            {"from": "v0", "to": "v0", "lang": "a*ba*"},
            {"from": "v0", "to": "v1", "lang": "a*ba*"},
            {"from": "v0", "to": "v2", "lang": "a"},
            {"from": "v1", "to": "v0", "lang": "b | aa+"},
            {"from": "v2", "to": "v1", "lang": ".+"},
        ],
    },
}


def example_spec(name: str) -> dict:
    try:
        return json.loads(json.dumps(EXAMPLES[name]))
    except KeyError:
        raise ValueError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}") from None


def gen_example(name: str) -> SafetyGame:
    return normalize(game_from_dict(example_spec(name)))


# ---------------------------------------------------------------------------
# Exponential-memory family


def _multiples(letter: str, p: int) -> str:
    return f"mod({letter},{p},{{0}})"


def worstcase_spec(n: int) -> dict:
    if not 1 <= n <= MAX_WORSTCASE:
        raise ValueError(f"n must lie in 1..{MAX_WORSTCASE}")
    vertices, edges = [], []
    for i in range(1, n + 1):
        vertices += [f"B{i}", f"v{i}", f"vbar{i}"]
    vertices += [f"C{i}" for i in range(1, n + 1)] + ["top", "bot"]
    for i in range(1, n + 1):
        p = prime(i)
        nxt = f"B{i + 1}" if i < n else "C1"
        edges += [
            {"from": f"B{i}", "to": f"v{i}", "lang": _multiples("a", p)},
            {"from": f"B{i}", "to": f"vbar{i}", "lang": f"a+ \\ {_multiples('a', p)}"},
            {"from": f"v{i}", "to": nxt, "lang": ".+"},
            {"from": f"vbar{i}", "to": nxt, "lang": ".+"},
        ]
    for i in range(1, n + 1):
        p = prime(i)
        nxt = f"C{i + 1}" if i < n else "top"
        edges.append({"from": f"C{i}", "to": nxt,
                      "lang": f"{_multiples('a', p)} | (b+ \\ {_multiples('b', p)})"})
    edges.append({"from": "top", "to": "top", "lang": ".+"})
    return {"alphabet": ["a", "b"], "vertices": vertices,
            "safe": [v for v in vertices if v != "bot"], "initial": "B1",
            "default_target": "bot", "edges": edges}


def gen_worstcase(n: int) -> SafetyGame:
    return normalize(game_from_dict(worstcase_spec(n)))


# ---------------------------------------------------------------------------
# QBF


@dataclass(frozen=True)
class Qbf:
    """Prenex formula; ``prefix[i]`` quantifies variable ``i + 1`` ("e" or "a").

    Clauses are tuples of non-zero integers, negative for negated variables.
    """

    prefix: tuple
    clauses: tuple

    def __post_init__(self):
        prefix = tuple(self.prefix)
        clauses = tuple(tuple(c) for c in self.clauses)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "clauses", clauses)
        for i, q in enumerate(prefix):
            want = "e" if i % 2 == 0 else "a"
            if q != want:
                raise ValueError("the prefix must alternate strictly, starting with 'e'")
        for c in clauses:
            if len(c) > 3:
                raise ValueError("clauses have at most 3 literals")
            for lit in c:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > len(prefix):
                    raise ValueError(f"literal {lit!r} names no quantified variable")

    @property
    def n_vars(self) -> int:
        return len(self.prefix)

    def __str__(self):
        quant = " ".join(f"{'E' if q == 'e' else 'A'}x{i + 1}" for i, q in enumerate(self.prefix))
        body = " & ".join("(" + " | ".join(f"{'~' if l < 0 else ''}x{abs(l)}" for l in c) + ")"
                          for c in self.clauses) or "true"
        return f"{quant} . {body}"

    def to_dict(self) -> dict:
        return {"prefix": list(self.prefix), "clauses": [list(c) for c in self.clauses]}


def qbf_eval(phi: Qbf) -> bool:
    if phi.n_vars > MAX_QBF_VARS:
        raise ValueError(f"more than {MAX_QBF_VARS} variables")

    def go(i: int, val: tuple) -> bool:
        if i == phi.n_vars:
            return all(any(val[abs(l) - 1] == (l > 0) for l in c) for c in phi.clauses)
        branches = (go(i + 1, val + (b,)) for b in (True, False))
        return any(branches) if phi.prefix[i] == "e" else all(branches)

    return go(0, ())


def parse_qdimacs(text: str) -> Qbf:
    n_vars = None
    quant = {}
    order = []
    clauses = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if fields[0] == "p":
            if len(fields) != 4 or fields[1] != "cnf":
                raise ValueError(f"bad problem line {line!r}")
            n_vars = int(fields[2])
            continue
        if fields[0] in ("e", "a"):
            nums = [int(x) for x in fields[1:]]
            if not nums or nums[-1] != 0:
                raise ValueError(f"quantifier line must end with 0: {line!r}")
            for v in nums[:-1]:
                if v in quant:
                    raise ValueError(f"variable {v} quantified twice")
                quant[v] = fields[0]
                order.append(v)
            continue
        nums = [int(x) for x in fields]
        if nums[-1] != 0:
            raise ValueError(f"clause must end with 0: {line!r}")
        clauses.append(tuple(nums[:-1]))
    if n_vars is None:
        n_vars = len(order)
    if order != list(range(1, n_vars + 1)):
        raise ValueError("variables must be quantified in order 1..n")
    return Qbf(tuple(quant[v] for v in order), tuple(clauses))


def load_qbf(path) -> Qbf:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        return Qbf(tuple(data["prefix"]), tuple(tuple(c) for c in data["clauses"]))
    return parse_qdimacs(text)


def qbf_spec(phi: Qbf) -> dict:
    q, m = phi.n_vars, len(phi.clauses)
    clause_names = [f"C{h}" for h in range(1, m + 1)] + ["top"]
    chain = [f"v{i}" for i in range(q)] + [clause_names[0]]
    vertices = [f"v{i}" for i in range(q)]
    for i in range(1, q + 1):
        vertices += [f"x{i}", f"xbar{i}"]
    vertices += clause_names + ["bot"]
    alphabet = ["a", "b", "c"] + [f"a{i}" for i in range(1, q + 1)]
    edges = []
    for i in range(1, q + 1):
        p = prime(i)
        src = chain[i - 1]
        if phi.prefix[i - 1] == "e":
            edges += [
                {"from": src, "to": f"x{i}", "lang": _multiples("a", p)},
                {"from": src, "to": f"xbar{i}", "lang": f"b+ \\ {_multiples('b', p)}"},
                {"from": src, "to": "top",
                 "lang": f"(a+ \\ {_multiples('a', p)}) | {_multiples('b', p)}"},
            ]
        else:
            edges += [
                {"from": src, "to": f"x{i}", "lang": _multiples("c", p)},
                {"from": src, "to": f"xbar{i}", "lang": f"c+ \\ {_multiples('c', p)}"},
            ]
        edges += [
            {"from": f"x{i}", "to": chain[i], "lang": ".+"},
            {"from": f"xbar{i}", "to": chain[i], "lang": ".+"},
        ]
    for h, clause in enumerate(phi.clauses):
        parts = []
        for lit in clause:
            letter, p = f"a{abs(lit)}", prime(abs(lit))
            parts.append(_multiples(letter, p) if lit > 0
                         else f"({letter}+ \\ {_multiples(letter, p)})")
        if parts:
            edges.append({"from": clause_names[h], "to": clause_names[h + 1],
                          "lang": " | ".join(parts)})
    edges.append({"from": "top", "to": "top", "lang": ".+"})
    return {"alphabet": alphabet, "vertices": vertices,
            "safe": [v for v in vertices if v != "bot"], "initial": chain[0],
            "default_target": "bot", "edges": edges}


def gen_qbf(phi: Qbf) -> SafetyGame:
    return normalize(game_from_dict(qbf_spec(phi)))


FIG8 = Qbf(("e", "a", "e"), ((1, -2, -3), (1, -2, 3)))
FALSE_EXAMPLE = Qbf(("e", "a"), ((1, 2), (-1, 2)))


def qbf_corpus(seed: int = 7, size: int = 48) -> list:
    """Deterministic list of small formulas (at most 3 variables, 2 clauses)."""
    out = [FIG8, FALSE_EXAMPLE]
    seen = {FIG8, FALSE_EXAMPLE}
    pool = []
    for q in (1, 2, 3):
        prefix = tuple("e" if i % 2 == 0 else "a" for i in range(q))
        lits = [l for v in range(1, q + 1) for l in (v, -v)]
        clauses = [c for r in (1, 2, 3) for c in itertools.combinations(lits, r)
                   if len({abs(l) for l in c}) == r]
        for c1 in clauses:
            pool.append(Qbf(prefix, (c1,)))
        for c1, c2 in itertools.combinations(clauses, 2):
            pool.append(Qbf(prefix, (c1, c2)))
    rng = random.Random(seed)
    small = [phi for phi in pool if phi.n_vars == 1]
    rng.shuffle(pool)
    for phi in small + pool:
        if len(out) >= size:
            break
        if phi not in seen:
            seen.add(phi)
            out.append(phi)
    return out
