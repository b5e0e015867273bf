import json

import pytest

from paracoal import cli, generators


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path, capsys):
    paths = {}
    for name in ("fig1", "fig2"):
        paths[name] = str(tmp_path / f"{name}.json")
        assert run(capsys, "gen", "example", name, "-o", paths[name])[0] == 0
    return paths


def test_check(capsys, files):
    code, out, _ = run(capsys, "check", files["fig2"])
    assert code == 0
    assert "complete: yes" in out and "deterministic: no" in out
    code, out, _ = run(capsys, "check", files["fig1"])
    assert "deterministic: yes" in out


def test_check_json(capsys, files):
    code, out, err = run(capsys, "--json", "check", files["fig1"])
    stats = json.loads(out)
    assert stats["vertices"] == 6 and stats["deterministic"]
    assert "vertices:" in err


def test_check_empty_alphabet(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"alphabet": [], "vertices": ["x"], "initial": "x", "edges": []}')
    code, _, err = run(capsys, "check", str(path))
    assert code == 2 and err.startswith("error:")


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "check", str(tmp_path / "nope.json"))[0] == 2


def test_solve_verify_simulate(capsys, files, tmp_path):
    strat = str(tmp_path / "s.json")
    tree_dot, prod_dot = tmp_path / "t.dot", tmp_path / "p.dot"
    code, out, _ = run(capsys, "solve", files["fig2"], "--emit-strategy", strat,
                       "--dot-tree", str(tree_dot), "--dot-product", str(prod_dot))
    assert code == 0 and "winnable" in out
    assert tree_dot.read_text().startswith("digraph")
    assert prod_dot.read_text().startswith("digraph")
    code, out, _ = run(capsys, "verify", files["fig2"], strat, "--all")
    assert code == 0 and "safe" in out
    code, out, _ = run(capsys, "verify", files["fig2"], strat, "--agents", "1..5")
    assert code == 0
    code, out, _ = run(capsys, "--json", "simulate", files["fig2"], strat, "--agents", "3",
                       "--steps", "4")
    trace = json.loads(out)
    assert code == 0 and len(trace["vertices"]) == 5


def test_solve_json_and_methods(capsys, files):
    for method in ("explicit", "compositional"):
        code, out, _ = run(capsys, "--json", "solve", files["fig1"], "--method", method)
        info = json.loads(out)
        assert code == 0 and info["winnable"] and info["method"] == method
        assert info["internal"] == 7


def test_verify_unsafe_memoryless(capsys, files, tmp_path):
    strat = tmp_path / "a.json"
    strat.write_text(json.dumps({
        "root": "m0", "dead_letter": "a",
        "nodes": [{"id": f"m{i}", "vertex": v, "prefix": "", "period": "a"}
                  for i, v in enumerate(["v0", "v1", "v2"])],
        "upd": [{"from": f"m{i}", "vertex": v, "to": f"m{j}"}
                for i in range(3) for j, v in enumerate(["v0", "v1", "v2"])]
        + [{"from": f"m{i}", "vertex": "bot", "to": "dead"} for i in range(3)],
    }))
    witness = tmp_path / "w.dot"
    code, out, _ = run(capsys, "verify", files["fig2"], str(strat), "--agents", "1",
                       "--dot-witness", str(witness))
    assert code == 1 and "unsafe" in out
    assert "color=red" in witness.read_text()
    code, out, _ = run(capsys, "--json", "verify", files["fig2"], str(strat), "--all")
    assert code == 1 and json.loads(out)["k"] == 1


def test_wrong_alphabet_strategy(capsys, files, tmp_path):
    strat = tmp_path / "c.json"
    strat.write_text(json.dumps({
        "root": "m0", "dead_letter": "c",
        "nodes": [{"id": "m0", "vertex": "v0", "prefix": "", "period": "c"}], "upd": []}))
    assert run(capsys, "verify", files["fig2"], str(strat), "--agents", "1")[0] == 2


def test_not_winnable(capsys, tmp_path):
    phi = tmp_path / "false.qdimacs"
    phi.write_text("p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n-1 2 0\n")
    game = str(tmp_path / "g.json")
    assert run(capsys, "gen", "qbf", str(phi), "-o", game)[0] == 0
    assert run(capsys, "solve", game)[0] == 1


def test_gen(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "worstcase", "2")
    assert code == 0 and len(json.loads(out)["vertices"]) == 10
    phi = tmp_path / "fig8.qdimacs"
    phi.write_text("p cnf 3 2\ne 1 0\na 2 0\ne 3 0\n1 -2 -3 0\n1 -2 3 0\n")
    code, out, _ = run(capsys, "gen", "qbf", str(phi))
    assert len(json.loads(out)["vertices"]) == 13
    assert run(capsys, "gen", "example", "fig9")[0] == 2


def test_budget_env(capsys, files, monkeypatch, tmp_path):
    monkeypatch.setenv("PARACOAL_MAX_STATES", "2")
    assert run(capsys, "solve", files["fig2"], "--method", "explicit")[0] == 3
    monkeypatch.setenv("PARACOAL_MAX_STATES", "zero")
    assert run(capsys, "solve", files["fig2"])[0] == 2


def test_lcm_cap_env(capsys, tmp_path, monkeypatch):
    game = tmp_path / "mod.json"
    game.write_text(json.dumps({
        "alphabet": ["a"], "vertices": ["x", "y", "z"], "initial": "x",
        "edges": [{"from": "x", "to": "y", "lang": "mod(a,2,{0})"},
                  {"from": "x", "to": "z", "lang": ".+ \\ mod(a,2,{0})"},
                  {"from": "y", "to": "y", "lang": ".+"}, {"from": "z", "to": "z", "lang": ".+"}]}))
    strat = tmp_path / "s.json"
    assert run(capsys, "solve", str(game), "--emit-strategy", str(strat))[0] == 0
    monkeypatch.setenv("PARACOAL_LCM_CAP", "1")
    assert run(capsys, "verify", str(game), str(strat), "--all")[0] == 3


def test_config_validation():
    with pytest.raises(ValueError):
        cli.Config(max_states=0)
    assert cli.Config.from_env({"PARACOAL_BRUTE_BUDGET": "7"}).brute_budget == 7


def test_end_to_end_builtins(capsys, tmp_path):
    specs = {"worstcase1": generators.worstcase_spec(1), "fig8": generators.qbf_spec(generators.FIG8),
             "fig1": generators.example_spec("fig1"), "fig2": generators.example_spec("fig2")}
    for name, spec in specs.items():
        game, strat = tmp_path / f"{name}.json", tmp_path / f"{name}.s.json"
        game.write_text(json.dumps(spec))
        assert run(capsys, "solve", str(game), "--emit-strategy", str(strat))[0] == 0
        assert run(capsys, "verify", str(game), str(strat), "--all")[0] == 0
