import json

import pytest

from dhg import __version__, truncate
from dhg.cli import main

from conftest import make_graph
from oracles import brute_delta


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and json.loads(out) == {"toolVersion": __version__}
    code, out, _ = run(capsys, "version")
    assert code == 0


def test_delta_matches_oracle(capsys):
    code, out, _ = run(capsys, "delta", "--family", "ex-topbound", "--radius", "8")
    body = json.loads(out)
    g = truncate("ex-topbound", 8).graph
    assert code == 0 and body["delta"] == brute_delta(list(g.vertices), list(g.edges))
    assert set(body["witness"]) == {"p", "q", "r"}
    assert body["manifest"]["toolVersion"] == __version__


def test_sampled_needs_seed(capsys):
    code, _, err = run(capsys, "delta", "--family", "nat", "--mode", "sampled")
    assert code == 2 and json.loads(err)["error"]["kind"] == "usage"
    code, out, _ = run(capsys, "delta", "--family", "nat", "--mode", "sampled", "--seed", "4")
    assert code == 0 and json.loads(out)["mode"] == "sampled"


def test_boundary_classes(capsys):
    code, out, _ = run(capsys, "boundary", "classes", "--family", "ex-dist0", "--rays", "builtin",
                       "--M", "4", "--r", "6", "--N", "20")
    body = json.loads(out)
    assert code == 0 and len(body["classification"]["classes"]) == 3
    assert sorted(map(tuple, body["classification"]["order"])) == [("omega", "eta"), ("omega", "mu")]


def test_boundary_relate(capsys):
    code, out, _ = run(capsys, "boundary", "relate", "--family", "ex-topbound", "--a", "eta",
                       "--b", "mu", "--M", "2", "--r", "4", "--N", "20")
    assert code == 0 and json.loads(out)["verdict"]["outcome"] == "holds"


def test_ends_refine_from_files(capsys, tmp_path):
    args = ["--family", "ex-dist0", "--r", "4,6", "--N", "16"]
    _, b, _ = run(capsys, "boundary", "classes", *args)
    _, e, _ = run(capsys, "ends", "classes", *args)
    (tmp_path / "b.json").write_text(b)
    (tmp_path / "e.json").write_text(e)
    code, out, _ = run(capsys, "ends", "refine", "--boundary", str(tmp_path / "b.json"),
                       "--ends", str(tmp_path / "e.json"))
    body = json.loads(out)
    assert code == 0 and body["audit"]["passed"] and len(body["map"]) == 3
    assert set(body["manifest"]["inputs"]) == {str(tmp_path / "b.json"), str(tmp_path / "e.json")}


def test_refine(capsys):
    code, out, _ = run(capsys, "refine", "--family", "int", "--N", "20")
    assert code == 0 and len(json.loads(out)["map"]) == 2


def test_ingest_and_parse_errors(capsys, tmp_path):
    good = tmp_path / "g.txt"
    good.write_text("a b\nb c\n")
    code, out, _ = run(capsys, "ingest", "--input", str(good))
    assert code == 0 and len(json.loads(out)["digraph"]["vertices"]) == 3
    bad = tmp_path / "bad.txt"
    bad.write_text("a b\nb c c\n")
    code, _, err = run(capsys, "ingest", "--input", str(bad))
    error = json.loads(err)["error"]
    assert code == 2 and error["kind"] == "parse" and error["line"] == 2


def test_dist_and_bprofile(capsys):
    code, out, _ = run(capsys, "dist", "--family", "monoid-ab", "--radius", "8",
                       "--from", "a1", "--to", "ba0")
    body = json.loads(out)
    assert body["dist"] == "inf" and body["reverse"] == "inf" and body["exact"]
    code, out, _ = run(capsys, "bprofile", "--family", "nat", "--radius", "12", "--rmax", "3")
    assert json.loads(out)["values"] == [0, 1, 2, 3]


def test_triangles_audit(capsys):
    code, out, _ = run(capsys, "triangles-audit", "--family", "ex-topbound", "--radius", "8")
    body = json.loads(out)
    assert code == 0 and all(a["passed"] for a in body["audits"])


def test_vismetric_and_neighbourhood(capsys):
    code, out, _ = run(capsys, "vismetric", "--family", "ex-dist0", "--N", "12")
    body = json.loads(out)
    assert code == 0 and len(body["matrix"]["points"]) == 3
    code, out, _ = run(capsys, "neighborhood", "--family", "ex-topbound", "--radius", "20",
                       "--class", "mu", "--x", "v0", "--r", "2", "--side", "plus")
    verts = json.loads(out)["vertices"]
    assert code == 0 and "x10" in verts and not any(v.startswith("w") for v in verts)


def test_vismetric_rejects_large_eps(capsys):
    code, _, err = run(capsys, "vismetric", "--family", "ex-topbound", "--N", "8", "--eps", "1")
    assert code == 2 and "admissible" in json.loads(err)["error"]["message"]


def test_vismetric_working_set_file(capsys, tmp_path):
    ws = {"family": "ex-dist0", "points": [{"ray": "omega"}, "y3"], "window": [4, 8], "radius": 16}
    path = tmp_path / "ws.json"
    path.write_text(json.dumps(ws))
    code, out, _ = run(capsys, "vismetric", "--working", str(path))
    assert code == 0 and json.loads(out)["matrix"]["points"] == ["class:omega", "y3"]


def test_qi_check(capsys, tmp_path):
    g = make_graph(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])
    (tmp_path / "g.json").write_text(json.dumps(g.to_json()))
    spec = {"map": {"a": "a", "b": "a", "c": "a"}, "gamma": "1", "c": "0"}
    (tmp_path / "spec.json").write_text(json.dumps(spec))
    code, out, _ = run(capsys, "qi-check", "--input", str(tmp_path / "g.json"),
                       "--target", str(tmp_path / "g.json"), "--spec", str(tmp_path / "spec.json"))
    assert code == 1 and not json.loads(out)["passed"]


def test_capacity_exit_code(capsys, tmp_path):
    path = tmp_path / "long.txt"
    path.write_text("\n".join(f"{i} {i + 1}" for i in range(400)))
    code, _, err = run(capsys, "delta", "--input", str(path))
    assert code == 3 and json.loads(err)["error"]["kind"] == "capacity"


def test_usage_errors(capsys):
    assert run(capsys, "delta")[0] == 2
    assert run(capsys, "gen", "--family", "nope")[0] == 2
    assert run(capsys)[0] == 2


@pytest.mark.parametrize("name", ["nat-one-point", "int-two-points"])
def test_recipe_runs_are_identical(capsys, name):
    code, a, _ = run(capsys, "recipe", name)
    _, b, _ = run(capsys, "recipe", name)
    assert code == 0 and a == b and json.loads(a)["passed"]


def test_workers_env(capsys, monkeypatch):
    monkeypatch.setenv("DHG_WORKERS", "x")
    assert run(capsys, "boundary", "classes", "--family", "nat")[0] == 2
    monkeypatch.setenv("DHG_WORKERS", "3")
    assert run(capsys, "boundary", "classes", "--family", "nat", "--N", "12")[0] == 0
