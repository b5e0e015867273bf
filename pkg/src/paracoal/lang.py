"""Regular languages over a finite alphabet.

Edge labels are written as expressions (see :func:`parse_lang_expr`) and
compiled to minimal complete DFAs.  Every language handled here is a subset
of the non-empty words: compiled automata never accept the empty word.

The module also provides the two ultimately periodic objects used for
all-k reasoning: :class:`UPSet` (a set of positive integers) and
:class:`UPWord` (an infinite word ``u v v v ...``).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Callable, Iterable, Sequence, Union as TUnion

Letter = str
Word = tuple

GRAMMAR_CHARS = set("|&\\!*+.(),{} \t\n")


class LangSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownLetterError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Expression AST


@dataclass(frozen=True)
class Lit:
    letter: Letter


@dataclass(frozen=True)
class AnyLetter:
    pass


@dataclass(frozen=True)
class Concat:
    parts: tuple


@dataclass(frozen=True)
class Union:
    parts: tuple


@dataclass(frozen=True)
class Inter:
    parts: tuple


@dataclass(frozen=True)
class Diff:
    left: object
    right: object


@dataclass(frozen=True)
class Compl:
    """Complement relative to the non-empty words."""

    inner: object


@dataclass(frozen=True)
class Star:
    inner: object


@dataclass(frozen=True)
class Plus:
    inner: object


@dataclass(frozen=True)
class Mod:
    """Words ``letter^j`` with ``j >= 1`` and ``j mod modulus`` in ``residues``."""

    letter: Letter
    modulus: int
    residues: frozenset

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        object.__setattr__(self, "residues", frozenset(self.residues))
        if any(not 0 <= r < self.modulus for r in self.residues):
            raise ValueError(f"residues must lie in 0..{self.modulus - 1}")


@dataclass(frozen=True)
class ExplicitDfa:
    dfa: "Dfa"


LangExpr = TUnion[Lit, AnyLetter, Concat, Union, Inter, Diff, Compl, Star, Plus, Mod, ExplicitDfa]


def union(*parts) -> Union:
    flat = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Union) else (p,))
    return Union(tuple(flat))


# ---------------------------------------------------------------------------
# Parsing


def check_alphabet(alphabet: Sequence[Letter]) -> tuple:
    alphabet = tuple(alphabet)
    if not alphabet:
        raise ValueError("alphabet must not be empty")
    if len(set(alphabet)) != len(alphabet):
        raise ValueError("alphabet letters must be distinct")
    for a in alphabet:
        if not isinstance(a, str) or not a or any(ch in GRAMMAR_CHARS for ch in a):
            raise ValueError(f"invalid letter {a!r}")
        if a == "mod":
            raise ValueError("'mod' is reserved")
    return alphabet


class _Parser:
    def __init__(self, text: str, alphabet: Sequence[Letter]):
        self.text = text
        self.pos = 0
        self.alphabet = check_alphabet(alphabet)
        self.by_length = sorted(self.alphabet, key=len, reverse=True)

    # character helpers
    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise LangSyntaxError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def at_mod(self) -> bool:
        self.skip()
        if not self.text.startswith("mod", self.pos):
            return False
        j = self.pos + 3
        while j < len(self.text) and self.text[j].isspace():
            j += 1
        return j < len(self.text) and self.text[j] == "("

    def letter(self) -> Letter:
        self.skip()
        for a in self.by_length:
            if self.text.startswith(a, self.pos):
                self.pos += len(a)
                return a
        if self.pos >= len(self.text):
            raise LangSyntaxError("unexpected end of input", self.pos)
        raise UnknownLetterError(
            f"unknown letter at position {self.pos}: {self.text[self.pos:self.pos + 8]!r}")

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise LangSyntaxError("expected an integer", start)
        return int(self.text[start:self.pos])

    # grammar
    def parse(self):
        if not self.peek():
            raise LangSyntaxError("empty expression", self.pos)
        e = self.union()
        if self.peek():
            raise LangSyntaxError(f"unexpected {self.peek()!r}", self.pos)
        return e

    def union(self):
        parts = [self.diff()]
        while self.peek() == "|":
            self.pos += 1
            parts.append(self.diff())
        return parts[0] if len(parts) == 1 else union(*parts)

    def diff(self):
        left = self.inter()
        while self.peek() == "\\":
            self.pos += 1
            left = Diff(left, self.inter())
        return left

    def inter(self):
        parts = [self.concat()]
        while self.peek() == "&":
            self.pos += 1
            parts.append(self.concat())
        return parts[0] if len(parts) == 1 else Inter(tuple(parts))

    def starts_factor(self) -> bool:
        ch = self.peek()
        if not ch:
            return False
        return ch in "!.(" or ch not in GRAMMAR_CHARS

    def concat(self):
        if not self.starts_factor():
            found = self.peek() or "end of input"
            raise LangSyntaxError(f"expected an expression, found {found!r}", self.pos)
        parts = []
        while self.starts_factor():
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def unary(self):
        if self.peek() == "!":
            self.pos += 1
            return Compl(self.unary())
        e = self.atom()
        while self.peek() in ("*", "+"):
            op = self.text[self.pos]
            self.pos += 1
            e = Star(e) if op == "*" else Plus(e)
        return e

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            e = self.union()
            self.expect(")")
            return e
        if ch == ".":
            self.pos += 1
            return AnyLetter()
        if self.at_mod():
            return self.mod()
        return Lit(self.letter())

    def mod(self):
        start = self.pos
        self.pos += 3
        self.expect("(")
        letter = self.letter()
        self.expect(",")
        p = self.integer()
        self.expect(",")
        self.expect("{")
        residues = []
        if self.peek() != "}":
            residues.append(self.integer())
            while self.peek() == ",":
                self.pos += 1
                residues.append(self.integer())
        self.expect("}")
        self.expect(")")
        # trailing '+' only restates non-emptiness
        if self.peek() == "+":
            self.pos += 1
        try:
            return Mod(letter, p, frozenset(residues))
        except ValueError as exc:
            raise LangSyntaxError(str(exc), start) from None


def parse_lang_expr(text: str, alphabet: Sequence[Letter]):
    """Parse an edge-label expression.

    Operators by decreasing precedence: postfix ``*``/``+``, prefix ``!``
    (complement within the non-empty words), juxtaposition, ``&``, ``\\``,
    ``|``.  ``.`` is any single letter and ``mod(a, p, {r, ...})`` the words
    ``a^j`` (``j >= 1``) with ``j mod p`` among the residues.  Letters are
    matched longest-first against the alphabet.
    """
    return _Parser(text, alphabet).parse()


def _level(e) -> int:
    if isinstance(e, Union):
        return 1
    if isinstance(e, Diff):
        return 2
    if isinstance(e, Inter):
        return 3
    if isinstance(e, Concat):
        return 4
    if isinstance(e, Compl):
        return 5
    if isinstance(e, (Star, Plus)):
        return 6
    return 7


def to_text(e) -> str:
    """Render an expression back into the concrete syntax."""

    def wrap(x, level):
        s = to_text(x)
        return s if _level(x) >= level else f"({s})"

    if isinstance(e, Lit):
        return e.letter
    if isinstance(e, AnyLetter):
        return "."
    if isinstance(e, Mod):
        res = ",".join(str(r) for r in sorted(e.residues))
        return f"mod({e.letter},{e.modulus},{{{res}}})"
    if isinstance(e, Star):
        return wrap(e.inner, 6) + "*"
    if isinstance(e, Plus):
        # a bare "mod(...)+" would read back as the Mod itself
        if isinstance(e.inner, Mod):
            return f"({to_text(e.inner)})+"
        return wrap(e.inner, 6) + "+"
    if isinstance(e, Compl):
        return "!" + wrap(e.inner, 5)
    if isinstance(e, Concat):
        return " ".join(wrap(p, 5) for p in e.parts)
    if isinstance(e, Inter):
        return " & ".join(wrap(p, 4) for p in e.parts)
    if isinstance(e, Diff):
        return f"{wrap(e.left, 2)} \\ {wrap(e.right, 3)}"
    if isinstance(e, Union):
        return " | ".join(wrap(p, 2) for p in e.parts)
    if isinstance(e, ExplicitDfa):
        raise ValueError("explicit automata have no textual form")
    raise TypeError(f"not a language expression: {e!r}")


# ---------------------------------------------------------------------------
# DFAs


@dataclass(frozen=True)
class Dfa:
    """Complete DFA with states ``0..n-1``; ``delta[state][letter_index]``."""

    alphabet: tuple
    delta: tuple
    initial: int
    accepting: frozenset

    def __post_init__(self):
        n = len(self.delta)
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        for row in self.delta:
            if len(row) != len(self.alphabet) or any(not 0 <= t < n for t in row):
                raise ValueError("transition function must be total")

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @cached_property
    def index(self) -> dict:
        return {a: i for i, a in enumerate(self.alphabet)}

    def step(self, state: int, letter: Letter) -> int:
        try:
            return self.delta[state][self.index[letter]]
        except KeyError:
            raise UnknownLetterError(f"letter {letter!r} not in alphabet") from None

    def run(self, word: Iterable[Letter], state: int | None = None) -> int:
        q = self.initial if state is None else state
        for a in word:
            q = self.step(q, a)
        return q

    def accepts(self, word: Iterable[Letter]) -> bool:
        word = tuple(word)
        return bool(word) and self.run(word) in self.accepting

    @cached_property
    def dead_states(self) -> frozenset:
        """States from which no accepting state is reachable."""
        preds = [[] for _ in self.delta]
        for q, row in enumerate(self.delta):
            for t in row:
                preds[t].append(q)
        live = set(self.accepting)
        todo = list(live)
        while todo:
            q = todo.pop()
            for p in preds[q]:
                if p not in live:
                    live.add(p)
                    todo.append(p)
        return frozenset(q for q in range(self.n_states) if q not in live)


def member(dfa: Dfa, word: Iterable[Letter]) -> bool:
    return dfa.accepts(word)


def _canonical(alphabet, delta, initial, accepting) -> Dfa:
    """Renumber reachable states in breadth-first order from the initial state."""
    order = {initial: 0}
    queue = deque([initial])
    while queue:
        q = queue.popleft()
        for t in delta[q]:
            if t not in order:
                order[t] = len(order)
                queue.append(t)
    new = [None] * len(order)
    for q, i in order.items():
        new[i] = tuple(order[t] for t in delta[q])
    acc = frozenset(order[q] for q in accepting if q in order)
    return Dfa(tuple(alphabet), tuple(new), 0, acc)


def minimize(dfa: Dfa) -> Dfa:
    """Hopcroft partition refinement; the result is canonically numbered."""
    d = _canonical(dfa.alphabet, dfa.delta, dfa.initial, dfa.accepting)
    n, k = d.n_states, len(d.alphabet)
    inv = [[[] for _ in range(n)] for _ in range(k)]
    for q, row in enumerate(d.delta):
        for c, t in enumerate(row):
            inv[c][t].append(q)
    final = set(d.accepting)
    rest = set(range(n)) - final
    partition = [b for b in (final, rest) if b]
    work = [min(partition, key=len)] if len(partition) == 2 else []
    while work:
        splitter = work.pop()
        for c in range(k):
            pre = {p for t in splitter for p in inv[c][t]}
            if not pre:
                continue
            refined = []
            for block in partition:
                inside = block & pre
                if inside and len(inside) < len(block):
                    outside = block - inside
                    refined.extend((inside, outside))
                    if block in work:
                        work.remove(block)
                        work.extend((inside, outside))
                    else:
                        work.append(min(inside, outside, key=len))
                else:
                    refined.append(block)
            partition = refined
    block_of = {}
    for i, block in enumerate(partition):
        for q in block:
            block_of[q] = i
    rep = [min(b) for b in partition]
    delta = [tuple(block_of[t] for t in d.delta[r]) for r in rep]
    acc = {block_of[q] for q in final}
    return _canonical(d.alphabet, delta, block_of[d.initial], acc)


def _product(d1: Dfa, d2: Dfa, op: Callable[[bool, bool], bool]) -> Dfa:
    if d1.alphabet != d2.alphabet:
        raise ValueError("alphabets differ")
    k = len(d1.alphabet)
    ids = {(d1.initial, d2.initial): 0}
    queue = deque([(d1.initial, d2.initial)])
    delta, acc = [], set()
    while queue:
        pair = queue.popleft()
        p, q = pair
        row = []
        for c in range(k):
            t = (d1.delta[p][c], d2.delta[q][c])
            if t not in ids:
                ids[t] = len(ids)
                queue.append(t)
            row.append(ids[t])
        delta.append(tuple(row))
        if op(p in d1.accepting, q in d2.accepting):
            acc.add(ids[pair])
    return minimize(Dfa(d1.alphabet, tuple(delta), 0, frozenset(acc)))


def _drop_epsilon(d: Dfa) -> Dfa:
    """Same language minus the empty word (fresh non-accepting initial state)."""
    if d.initial not in d.accepting:
        return d
    fresh = d.n_states
    delta = d.delta + (d.delta[d.initial],)
    return minimize(Dfa(d.alphabet, delta, fresh, d.accepting))


def dfa_union(d1: Dfa, d2: Dfa) -> Dfa:
    return _product(d1, d2, lambda a, b: a or b)


def dfa_intersection(d1: Dfa, d2: Dfa) -> Dfa:
    return _product(d1, d2, lambda a, b: a and b)


def dfa_difference(d1: Dfa, d2: Dfa) -> Dfa:
    return _product(d1, d2, lambda a, b: a and not b)


def dfa_complement(d: Dfa) -> Dfa:
    """Complement within the non-empty words."""
    flipped = Dfa(d.alphabet, d.delta, d.initial,
                  frozenset(range(d.n_states)) - d.accepting)
    return minimize(_drop_epsilon(flipped))


def sigma_plus(alphabet: Sequence[Letter]) -> Dfa:
    k = len(alphabet)
    return Dfa(tuple(alphabet), ((1,) * k, (1,) * k), 0, frozenset({1}))


def empty_dfa(alphabet: Sequence[Letter]) -> Dfa:
    return Dfa(tuple(alphabet), ((0,) * len(alphabet),), 0, frozenset())


def is_empty(d: Dfa) -> bool:
    return d.initial in d.dead_states


def equivalent(d1: Dfa, d2: Dfa) -> bool:
    return minimize(d1) == minimize(d2)


def is_sigma_plus(d: Dfa) -> bool:
    return minimize(d) == sigma_plus(d.alphabet)


# ---------------------------------------------------------------------------
# Compilation: Thompson NFA -> subset construction -> Hopcroft


class _Nfa:
    def __init__(self, k: int):
        self.k = k
        self.eps: list[list[int]] = []
        self.trans: list[dict[int, list[int]]] = []

    def state(self) -> int:
        self.eps.append([])
        self.trans.append({})
        return len(self.eps) - 1

    def edge(self, s: int, c: int, t: int):
        self.trans[s].setdefault(c, []).append(t)

    def closure(self, states) -> frozenset:
        seen = set(states)
        todo = list(states)
        while todo:
            s = todo.pop()
            for t in self.eps[s]:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return frozenset(seen)

    def determinize(self, start: int, end: int, alphabet) -> Dfa:
        init = self.closure([start])
        ids = {init: 0}
        queue = deque([init])
        delta, acc = [], set()
        while queue:
            S = queue.popleft()
            row = []
            for c in range(self.k):
                T = self.closure([t for s in S for t in self.trans[s].get(c, ())])
                if T not in ids:
                    ids[T] = len(ids)
                    queue.append(T)
                row.append(ids[T])
            delta.append(tuple(row))
            if end in S:
                acc.add(ids[S])
        return minimize(Dfa(tuple(alphabet), tuple(delta), 0, frozenset(acc)))


def _letter_index(alphabet, letter) -> int:
    try:
        return alphabet.index(letter)
    except ValueError:
        raise UnknownLetterError(f"letter {letter!r} not in alphabet") from None


def _mod_dfa(e: Mod, alphabet) -> Dfa:
    c = _letter_index(alphabet, e.letter)
    p = e.modulus
    sink = p + 1

    def residue(j):
        return 1 + (j % p)

    delta = []
    for q in range(p + 2):
        if q == sink:
            delta.append((sink,) * len(alphabet))
            continue
        count = 0 if q == 0 else q - 1
        nxt = residue(count + 1)
        delta.append(tuple(nxt if i == c else sink for i in range(len(alphabet))))
    acc = frozenset(residue(r) for r in e.residues)
    return minimize(Dfa(tuple(alphabet), tuple(delta), 0, acc))


def _fragment(e, nfa: _Nfa, alphabet) -> tuple[int, int]:
    s, t = nfa.state(), nfa.state()
    if isinstance(e, Lit):
        nfa.edge(s, _letter_index(alphabet, e.letter), t)
    elif isinstance(e, AnyLetter):
        for c in range(len(alphabet)):
            nfa.edge(s, c, t)
    elif isinstance(e, Concat):
        cur = s
        for part in e.parts:
            a, b = _fragment(part, nfa, alphabet)
            nfa.eps[cur].append(a)
            cur = b
        nfa.eps[cur].append(t)
    elif isinstance(e, Union) and all(_is_regex(p) for p in e.parts):
        for part in e.parts:
            a, b = _fragment(part, nfa, alphabet)
            nfa.eps[s].append(a)
            nfa.eps[b].append(t)
    elif isinstance(e, (Star, Plus)):
        a, b = _fragment(e.inner, nfa, alphabet)
        nfa.eps[s].append(a)
        nfa.eps[b].extend((a, t))
        if isinstance(e, Star):
            nfa.eps[s].append(t)
    else:
        d = _raw_dfa(e, alphabet)
        base = len(nfa.eps)
        for _ in range(d.n_states):
            nfa.state()
        for q, row in enumerate(d.delta):
            for c, r in enumerate(row):
                nfa.edge(base + q, c, base + r)
            if q in d.accepting:
                nfa.eps[base + q].append(t)
        nfa.eps[s].append(base + d.initial)
    return s, t


def _is_regex(e) -> bool:
    if isinstance(e, (Lit, AnyLetter)):
        return True
    if isinstance(e, (Concat, Union)):
        return all(_is_regex(p) for p in e.parts)
    if isinstance(e, (Star, Plus)):
        return _is_regex(e.inner)
    return False


def _raw_dfa(e, alphabet) -> Dfa:
    """DFA for the expression, possibly accepting the empty word."""
    if isinstance(e, Mod):
        return _mod_dfa(e, alphabet)
    if isinstance(e, ExplicitDfa):
        if tuple(e.dfa.alphabet) != tuple(alphabet):
            raise ValueError("explicit DFA over a different alphabet")
        return e.dfa
    if isinstance(e, Compl):
        return dfa_complement(_raw_dfa(e.inner, alphabet))
    if isinstance(e, Inter):
        return reduce(dfa_intersection, (_raw_dfa(p, alphabet) for p in e.parts))
    if isinstance(e, Diff):
        return dfa_difference(_raw_dfa(e.left, alphabet), _raw_dfa(e.right, alphabet))
    if isinstance(e, Union) and not _is_regex(e):
        return reduce(dfa_union, (_raw_dfa(p, alphabet) for p in e.parts))
    nfa = _Nfa(len(alphabet))
    s, t = _fragment(e, nfa, alphabet)
    return nfa.determinize(s, t, alphabet)


def compile_expr(expr, alphabet: Sequence[Letter]) -> Dfa:
    """Minimal complete DFA for ``expr`` restricted to the non-empty words."""
    alphabet = check_alphabet(alphabet)
    return minimize(_drop_epsilon(_raw_dfa(expr, alphabet)))


def compile_text(text: str, alphabet: Sequence[Letter]) -> Dfa:
    return compile_expr(parse_lang_expr(text, alphabet), alphabet)


# ---------------------------------------------------------------------------
# Ultimately periodic sets and words


def _min_period(bits: tuple) -> tuple:
    p = len(bits)
    for d in range(1, p + 1):
        if p % d == 0 and all(bits[j] == bits[j % d] for j in range(p)):
            return bits[:d]
    return bits


@dataclass(frozen=True)
class UPSet:
    """Ultimately periodic set of positive integers.

    ``k < threshold`` is a member iff ``head[k - 1]``; ``k >= threshold`` iff
    ``cycle[(k - threshold) % period]``.  Instances are kept canonical (least
    period, then least threshold) so ``==`` is set equality.
    """

    head: tuple
    cycle: tuple

    def __post_init__(self):
        head = tuple(bool(b) for b in self.head)
        cycle = _min_period(tuple(bool(b) for b in self.cycle))
        if not cycle:
            raise ValueError("period must be >= 1")
        while head and head[-1] == cycle[-1]:
            head = head[:-1]
            cycle = (cycle[-1],) + cycle[:-1]
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "cycle", cycle)

    @property
    def threshold(self) -> int:
        return len(self.head) + 1

    @property
    def period(self) -> int:
        return len(self.cycle)

    def membership(self, k: int) -> bool:
        if k < 1:
            raise ValueError("members are positive integers")
        if k < self.threshold:
            return self.head[k - 1]
        return self.cycle[(k - self.threshold) % self.period]

    __contains__ = membership

    @classmethod
    def empty(cls) -> "UPSet":
        return cls((), (False,))

    @classmethod
    def everything(cls) -> "UPSet":
        return cls((), (True,))

    @classmethod
    def from_predicate(cls, pred: Callable[[int], bool], threshold: int, period: int):
        head = [pred(k) for k in range(1, threshold)]
        cycle = [pred(k) for k in range(threshold, threshold + period)]
        return cls(tuple(head), tuple(cycle))

    def is_empty(self) -> bool:
        return not any(self.head) and not any(self.cycle)

    def _combine(self, other: "UPSet", op) -> "UPSet":
        t = max(self.threshold, other.threshold)
        p = math.lcm(self.period, other.period)
        return UPSet.from_predicate(lambda k: op(self.membership(k), other.membership(k)), t, p)

    def __and__(self, other: "UPSet") -> "UPSet":
        return self._combine(other, lambda a, b: a and b)

    def __or__(self, other: "UPSet") -> "UPSet":
        return self._combine(other, lambda a, b: a or b)

    def members(self, up_to: int) -> list:
        return [k for k in range(1, up_to + 1) if self.membership(k)]

    def __str__(self):
        head = "".join("1" if b else "0" for b in self.head)
        cyc = "".join("1" if b else "0" for b in self.cycle)
        return f"{head}({cyc})^w"


def _as_letters(seq) -> tuple:
    return tuple(seq)


@dataclass(frozen=True)
class UPWord:
    """The infinite word ``prefix . period . period ...``."""

    prefix: tuple
    period: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", _as_letters(self.prefix))
        object.__setattr__(self, "period", _as_letters(self.period))
        if not self.period:
            raise ValueError("period must be non-empty")

    def letter_at(self, n: int) -> Letter:
        """Letter at 1-based position ``n`` (the move of agent ``n``)."""
        if n < 1:
            raise ValueError("positions start at 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.period[(n - len(self.prefix) - 1) % len(self.period)]

    def prefix_of(self, k: int) -> tuple:
        return tuple(self.letter_at(n) for n in range(1, k + 1))

    def letters(self) -> set:
        return set(self.prefix) | set(self.period)

    @classmethod
    def constant(cls, letter: Letter) -> "UPWord":
        return cls((), (letter,))

    def __str__(self):
        sep = "" if all(len(a) == 1 for a in self.letters()) else " "
        return f"{sep.join(self.prefix)}({sep.join(self.period)})^w"


def length_set(dfa: Dfa) -> UPSet:
    """``{k >= 1 : some word of length k is accepted}``.

    Iterates the set of states reachable in exactly ``k`` steps; that sequence
    is eventually periodic and its first repetition fixes threshold and period.
    """
    cur = frozenset(dfa.delta[dfa.initial])
    seen = {cur: 1}
    bits = [None]
    k = 1
    while True:
        bits.append(bool(cur & dfa.accepting))
        cur = frozenset(t for q in cur for t in dfa.delta[q])
        k += 1
        if cur in seen:
            start = seen[cur]
            return UPSet(tuple(bits[1:start]), tuple(bits[start:k]))
        seen[cur] = k


def prefix_membership(dfa: Dfa, w: UPWord) -> UPSet:
    """``{k >= 1 : the length-k prefix of w is accepted by dfa}``."""
    state = dfa.initial
    bits = [None]
    for a in w.prefix:
        state = dfa.step(state, a)
        bits.append(state in dfa.accepting)
    k, j = len(w.prefix), 0
    seen = {}
    while (state, j) not in seen:
        seen[(state, j)] = k
        state = dfa.step(state, w.period[j])
        k += 1
        j = (j + 1) % len(w.period)
        bits.append(state in dfa.accepting)
    start = seen[(state, j)]
    t = max(start, 1)
    p = k - start
    return UPSet(tuple(bits[1:t]), tuple(bits[t:t + p]))
