from __future__ import annotations

import json
import subprocess
import sys
from itertools import combinations

import pytest

from unfriendly.cli import main
from unfriendly.corpus import build_corpus, omega_star, t2
from unfriendly.graph import FiniteGraph, Partition, dumps, happiness, is_unfriendly
from unfriendly.presentation import to_json

CORPUS = build_corpus()


@pytest.fixture
def files(tmp_path):
    def write(name: str, obj) -> str:
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else dumps(obj))
        return str(path)

    write.dir = tmp_path
    return write


def graph_json(vertices, edges):
    return FiniteGraph.build(vertices, edges).to_json()


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------- finite commands

def test_solve_finite_triangle(files, capsys):
    g = files("triangle.json", graph_json("abc", ["ab", "bc", "ac"]))
    code, out, _ = run(capsys, "solve-finite", g)
    assert code == 0
    pi = Partition.from_json(json.loads(out))
    assert is_unfriendly(FiniteGraph.build("abc", ["ab", "bc", "ac"]), pi)


def test_solve_finite_empty_graph(files, capsys):
    g = files("empty.json", {"vertices": [], "edges": []})
    code, out, _ = run(capsys, "solve-finite", g)
    assert code == 0 and json.loads(out) == {"assignments": {}}


def test_solve_finite_k4_splits_evenly(files, capsys):
    k4 = FiniteGraph.build("abcd", list(combinations("abcd", 2)))
    out_path = files.dir / "part.json"
    trace_path = files.dir / "trace.json"
    code, _, _ = run(capsys, "solve-finite", files("k4.json", k4.to_json()), "-o", out_path, "--trace", trace_path)
    assert code == 0
    pi = Partition.from_json(json.loads(out_path.read_text()))
    assert sorted(pi.assignments.values()) == [0, 0, 1, 1]
    assert all(r.opponents == 2 and r.friends == 1 for r in happiness(k4, pi).records.values())
    trace = json.loads(trace_path.read_text())
    assert [s["potential"] for s in trace["steps"]] == sorted(s["potential"] for s in trace["steps"])


def test_solve_finite_with_seed(files, capsys):
    g = files("edge.json", graph_json("ab", ["ab"]))
    seed = files("seed.json", {"assignments": {"a": 0, "b": 1}})
    code, out, _ = run(capsys, "--seed-partition", seed, "solve-finite", g, "--json")
    assert code == 0
    data = json.loads(out)
    assert data["trace"]["steps"] == [] and data["partition"]["assignments"] == {"a": 0, "b": 1}


def test_extend_path(files, capsys):
    g = files("p3.json", graph_json("abc", ["ab", "bc"]))
    fixed = files("fixed.json", {"assignments": {"a": 0, "c": 0}})
    code, out, _ = run(capsys, "extend", g, fixed)
    assert code == 0 and json.loads(out)["assignments"]["b"] == 1


def test_rank_p7(files, capsys):
    vs = "abcdefg"
    g = files("p7.json", graph_json(vs, list(zip(vs, vs[1:]))))
    assert run(capsys, "rank", g, "--base", "edgeless", "--k", "1")[1] == "2\n"
    assert run(capsys, "rank", g, "--base", "edgeless", "--k", "1", "--naive")[1] == "2\n"
    code, out, _ = run(capsys, "rank", g, "--k", "1", "--json")
    assert code == 0 and json.loads(out)["witness"]["separator"] == ["d"]


def test_rank_missing_is_exit_1(files, capsys):
    g = files("edge.json", graph_json("ab", ["ab"]))
    code, _, err = run(capsys, "rank", g, "--k", "0")
    assert code == 1 and "no rank" in err


# ---------------------------------------------------------------- presentation commands

def test_srank_omega_star(files, capsys):
    code, out, _ = run(capsys, "srank", files("star.json", to_json(omega_star())))
    assert code == 0 and out == "1\n"


def test_atlas_t2(files, capsys):
    code, out, _ = run(capsys, "atlas", files("t2.json", to_json(t2())))
    assert code == 0
    assert "V* = Omega" in out and "in-W = false" in out


def test_atlas_json(files, capsys):
    code, out, _ = run(capsys, "atlas", files("star.json", to_json(omega_star())), "--json")
    data = json.loads(out)
    assert code == 0 and data["v_star_size"] == 1 and data["in_w"] is True


def test_solve_check_xval_pipeline(files, capsys):
    p = files("t2.json", to_json(t2()))
    sigma = files.dir / "sigma.json"
    assert run(capsys, "solve", p, "-o", sigma)[0] == 0
    code, out, _ = run(capsys, "check", p, sigma)
    assert code == 0 and out.startswith("ok")
    code, out, _ = run(capsys, "xval", p, sigma, "--n-range", "1..6")
    assert code == 0 and out.strip().endswith("pass")
    code, out, _ = run(capsys, "xval", p, sigma, "--n-range", "0", "--json")
    assert code == 0 and json.loads(out)["passed"] is True


def test_solve_with_fixed(files, capsys):
    p = files("star.json", to_json(omega_star()))
    fixed = files("fixed.json", {"assignments": {"0[5]/x": 0, "S:c": 0}})
    code, out, _ = run(capsys, "solve", p, "--fixed", fixed)
    assert code == 0
    assert json.loads(out)["families"][0]["exceptions"] == {"5": {"leaf_colours": {"x": 0}}}


def test_check_rejects_bad_sigma(files, capsys):
    p = files("star.json", to_json(omega_star()))
    bad = files("bad.json", {"s_colours": {"c": 0}, "families": [{"default": {"leaf_colours": {"x": 0}}}]})
    code, out, _ = run(capsys, "check", p, bad)
    assert code == 1 and "unhappy S:c" in out
    code, out, _ = run(capsys, "xval", p, bad, "--n-range", "1..3")
    assert code == 1 and "FAIL S:c at n=1" in out


def test_instantiate(files, capsys):
    p = files("t2.json", to_json(t2()))
    sigma = files.dir / "sigma.json"
    run(capsys, "solve", p, "-o", sigma)
    part_path = files.dir / "part.json"
    code, out, _ = run(capsys, "instantiate", p, "--n", "2", "--sigma", sigma, "--partition-out", part_path)
    assert code == 0
    g = FiniteGraph.from_json(json.loads(out))
    assert len(g.vertices) == 7
    assert is_unfriendly(g, Partition.from_json(json.loads(part_path.read_text())))


def test_xval_max_n0(files, capsys):
    p = files("star.json", to_json(omega_star()))
    sigma = files.dir / "sigma.json"
    run(capsys, "solve", p, "-o", sigma)
    assert run(capsys, "xval", p, sigma, "--max-n0", "3")[0] == 0


# ---------------------------------------------------------------- exit codes and output format

def test_exit_code_matrix(files, capsys):
    star = files("star.json", to_json(omega_star()))
    big = files("big.json", {"vertices": [f"v{i:02d}" for i in range(17)], "edges": []})
    cases = [
        (0, ["srank", star]),
        (1, ["rank", files("edge.json", graph_json("ab", ["ab"])), "--k", "0"]),
        (2, ["srank", files("broken.json", "{not json")]),
        (2, ["srank", str(files.dir / "missing.json")]),
        (2, ["srank", files("loop.json", {"type": "leaf", "graph": {"vertices": ["a"], "edges": [["a", "a"]]}})]),
        (2, ["rank", files("g.json", graph_json("ab", [])), "--k", "1", "--base", "planar"]),
        (2, ["xval", star, star, "--n-range", "x..y"]),
        (3, ["rank", big, "--k", "1"]),
        (3, ["solve", star, "--fixed", files("fx.json", {"assignments": {"0[5]/x": 0, "S:c": 0}}),
             "--max-exceptions", "0"]),
    ]
    for expected, argv in cases:
        assert run(capsys, *argv)[0] == expected, argv


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["rank"])
    assert exc.value.code == 2


def test_console_script_exit_codes(files):
    star = files("star.json", to_json(omega_star()))
    ok = subprocess.run([sys.executable, "-m", "unfriendly.cli", "srank", star], capture_output=True, text=True)
    assert ok.returncode == 0 and ok.stdout == "1\n"
    bad = subprocess.run([sys.executable, "-m", "unfriendly.cli", "srank", files("b.json", "[")],
                         capture_output=True, text=True)
    assert bad.returncode == 2 and "error:" in bad.stderr


def test_log_level_from_environment(files):
    star = files("star.json", to_json(omega_star()))
    env_run = subprocess.run([sys.executable, "-m", "unfriendly.cli", "solve", star],
                             capture_output=True, text=True, env={"WORKBENCH_LOG": "info", "PATH": ""})
    assert env_run.returncode == 0 and "solved" in env_run.stderr


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_emitted_json_is_canonical(files, capsys, name):
    p = files(f"{name}.json", to_json(CORPUS[name]))
    for argv in (["solve", p], ["atlas", p, "--json"], ["srank", p, "--json"]):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        assert dumps(json.loads(out)) == out
