"""Acceptance criteria, one or more ``test_criterion_N_*`` functions each.

The summary hook in conftest prints one PASS/FAIL line per criterion.
"""

import itertools
import random
import time

from paracoal import cli, generators, lang, product, synthesis, verify
from paracoal.lang import UPWord
from paracoal.product import safety_lasso, solve
from paracoal.unfolding import alpha, unfold, zip_history

from oracles import (fig1_hand_strategy, lengths_by_bfs, naive_member, random_expr,
                     random_safe_history)


def synthesize(game):
    tree = unfold(game)
    result = solve(tree)
    assert result.winnable
    return tree, synthesis.build_memory(tree, synthesis.extract_strategy(tree, result.lasso))


# 1 ---------------------------------------------------------------------------

def test_criterion_1_fig1_solve_and_verify(tmp_path, capsys):
    game_file, strat_file = tmp_path / "fig1.json", tmp_path / "fig1.s.json"
    assert cli.main(["gen", "example", "fig1", "-o", str(game_file)]) == 0
    start = time.perf_counter()
    code = cli.main(["solve", str(game_file), "--emit-strategy", str(strat_file)])
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    assert code == 0 and elapsed < 5
    game = generators.gen_example("fig1")
    ms = synthesis.load_strategy(strat_file)
    assert verify.verify_all_k(game, ms).safe


def test_criterion_1_fig1_hand_strategy():
    game = generators.gen_example("fig1")
    assert verify.verify_all_k(game, fig1_hand_strategy()).safe


# 2 ---------------------------------------------------------------------------

def test_criterion_2_fig2():
    start = time.perf_counter()
    game = generators.gen_example("fig2")
    tree, ms = synthesize(game)
    root = ms.words[ms.root]
    assert isinstance(root, UPWord)
    assert [root.letter_at(k) for k in (1, 2, 3)] == ["a", "b", "a"]
    assert verify.verify_all_k(game, ms).safe
    assert not verify.brute_force_exists(game, tree, 2, 2, memoryless=True)
    assert time.perf_counter() - start < 10


# 3 ---------------------------------------------------------------------------

def test_criterion_3_fig2_counts():
    tree = unfold(generators.gen_example("fig2"))
    assert tree.m == 4 and len(tree.nodes) == 10


def test_criterion_3_fig1_shape():
    tree = unfold(generators.gen_example("fig1"))
    v3s = [n for n in tree.internal if tree.nodes[n].vertex == "v3"]
    assert len(v3s) == 2
    assert [tree.label_path(n) for n in v3s] == [("v0", "v1", "v3"), ("v0", "v2", "v3")]
    for n in v3s:
        assert [tree.nodes[c].vertex for c in tree.nodes[n].children] == ["v4", "v5"]


def test_criterion_3_fig1_leaf_count():
    leaves = len(unfold(generators.gen_example("fig1")).leaves)
    assert leaves == 6


# 4 ---------------------------------------------------------------------------

def test_criterion_4_worstcase():
    start = time.perf_counter()
    counts = []
    for n in (1, 2, 3):
        game = generators.gen_worstcase(n)
        tree, ms = synthesize(game)
        assert verify.verify_all_k(game, ms).safe
        counts.append(tree.m)
    assert all(b >= 2 * a for a, b in zip(counts, counts[1:]))
    assert time.perf_counter() - start < 60


def test_criterion_4_memoryless_impossible():
    game = generators.gen_worstcase(2)
    assert not verify.brute_force_exists(game, unfold(game), 6, memoryless=True)


# 5 ---------------------------------------------------------------------------

def test_criterion_5_qbf_soundness():
    corpus = generators.qbf_corpus()
    assert len(corpus) >= 40 and generators.FIG8 in corpus
    assert all(phi.n_vars <= 3 and len(phi.clauses) <= 2 for phi in corpus)
    start = time.perf_counter()
    mismatches = [str(phi) for phi in corpus
                  if solve(unfold(generators.gen_qbf(phi))).winnable != generators.qbf_eval(phi)]
    assert mismatches == []
    assert time.perf_counter() - start < 120


# 6 ---------------------------------------------------------------------------

AB = ("a", "b")


def test_criterion_6_membership():
    rng = random.Random(6)
    for _ in range(1000):
        e = random_expr(rng, AB, 4)
        w = tuple(rng.choice(AB) for _ in range(rng.randint(1, 7)))
        assert lang.member(lang.compile_expr(e, AB), w) == naive_member(e, w), (lang.to_text(e), w)


def test_criterion_6_prefix_membership():
    rng = random.Random(66)
    for _ in range(1000):
        d = lang.compile_expr(random_expr(rng, AB, 4), AB)
        u = tuple(rng.choice(AB) for _ in range(rng.randint(0, 4)))
        v = tuple(rng.choice(AB) for _ in range(rng.randint(1, 4)))
        word = UPWord(u, v)
        s = lang.prefix_membership(d, word)
        for k in range(1, len(u) + 2 * d.n_states * len(v) + 5):
            assert s.membership(k) == d.accepts(word.prefix_of(k))


def test_criterion_6_length_set():
    rng = random.Random(666)
    for _ in range(1000):
        d = lang.compile_expr(random_expr(rng, AB, 4), AB)
        assert set(lang.length_set(d).members(12)) == lengths_by_bfs(d, 12)


# 7 ---------------------------------------------------------------------------

def word_search(delta, accepting, n_letters):
    """Some word of length |Q| whose run stays accepting after the first letter."""
    for word in itertools.product(range(n_letters), repeat=len(delta)):
        q = 0
        for x in word:
            q = delta[q][x]
            if q not in accepting:
                break
        else:
            return True
    return False


def test_criterion_7_product_layer():
    rng = random.Random(7)
    for _ in range(200):
        n, k = rng.randint(1, 8), rng.randint(1, 3)
        delta = [[rng.randrange(n) for _ in range(k)] for _ in range(n)]
        accepting = {q for q in range(n) if rng.random() < 0.7}
        found = safety_lasso(0, lambda q: [(x, delta[q][x]) for x in range(k)],
                             lambda q: q in accepting)
        assert (found is not None) == word_search(delta, accepting, k)
        if found:
            stem, cycle = found
            q = 0
            for x in list(stem) + list(cycle) * 2:
                q = delta[q][x]
                assert q in accepting


def test_criterion_7_product_lassos():
    for game in (generators.gen_example("fig1"), generators.gen_example("fig2"),
                 generators.gen_worstcase(1)):
        tree = unfold(game)
        result = product.solve_explicit(tree)
        aut = product.ProductAutomaton(tree)
        states = aut.run(list(result.lasso.stem) + list(result.lasso.cycle) * 2)
        assert all(aut.phi_eval(q) for q in states)


# 8 ---------------------------------------------------------------------------

def test_criterion_8_memory_is_alpha_of_zip():
    true_qbfs = [phi for phi in generators.qbf_corpus() if generators.qbf_eval(phi)][:3]
    games = [generators.gen_example("fig1"), generators.gen_example("fig2"),
             generators.gen_worstcase(2)] + [generators.gen_qbf(phi) for phi in true_qbfs]
    for i, game in enumerate(games):
        tree, ms = synthesize(game)
        rng = random.Random(i)
        for _ in range(500):
            h = random_safe_history(game, rng, 25)
            assert ms.memory(h) == synthesis.node_name(tree, alpha(tree, zip_history(game, h)))
