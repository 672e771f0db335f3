from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from arboreal.cli import main
from arboreal.trees import SignedRootedTree

A3 = SignedRootedTree("r", (("r", "a"), ("a", "b")), {"a-b": 1}).to_json()
STAR = SignedRootedTree("r", (("r", "a"), ("r", "b")), {}).to_json()


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(args, stdin=None):
        return runner.invoke(main, args, input=stdin)

    return invoke


def test_version(run):
    r = run(["--version"])
    assert r.exit_code == 0 and "version" in r.output


def test_tree_canon_is_relabeling_invariant(run):
    other = SignedRootedTree("r", (("r", "q"), ("q", "z")), {"q-z": 1}).to_json()
    a, b = run(["tree", "canon", "--tree", "-"], A3), run(["tree", "canon", "--tree", "-"], other)
    assert a.exit_code == b.exit_code == 0 and a.output == b.output


def test_tree_aut(run):
    r = run(["tree", "aut", "--tree", "-"], STAR)
    assert r.exit_code == 0 and r.output.splitlines()[0] == "order: 2"
    j = json.loads(run(["tree", "aut", "--tree", "-", "--json"], STAR).output)
    assert j["order"] == 2 and len(j["generators"]) == 1


def test_tree_prune(run):
    r = run(["tree", "prune", "--tree", "-", "--leaf", "b"], A3)
    assert r.exit_code == 0
    assert SignedRootedTree.from_json(r.output) == SignedRootedTree("r", (("r", "a"),), {})
    assert run(["tree", "prune", "--tree", "-", "--leaf", "a"], A3).exit_code == 2


@pytest.mark.parametrize("text", [
    '{"root": "r", "edges": [["r","a"],["a","b"],["b","r"]], "signs": {}}',
    '{"root": "r", "edges": [["r","a"],["b","c"]], "signs": {"b-c": 1}}',
    "not json",
])
def test_malformed_trees_exit_2(run, text):
    r = run(["tree", "canon", "--tree", "-"], text)
    assert r.exit_code == 2 and "error:" in r.output


def test_front_build_then_membership(run):
    built = run(["front", "build", "--tree", "-"], A3)
    assert built.exit_code == 0
    hit = run(["front", "membership", "--front", "-", "--point", "1,-1"], built.output)
    assert hit.exit_code == 0 and hit.output.split() == ["b"]
    named = run(["front", "membership", "--tree", "-", "--point", "x_a=0,x_b=0"], A3)
    assert named.output.split() == ["a", "b"]
    miss = run(["front", "membership", "--tree", "-", "--point", "1,1"], A3)
    assert miss.exit_code == 0 and miss.output == ""
    bad = run(["front", "membership", "--tree", "-", "--point", "1"], A3)
    assert bad.exit_code == 2


def test_front_build_extended(run):
    r = run(["front", "build", "--tree", "-", "--extended"], A3)
    piece = next(p for p in json.loads(r.output)["pieces"] if p["vertex"] == "b")
    assert piece["inequalities"] == []


def test_front_sample_formats(run):
    obj = run(["front", "sample", "--tree", "-", "--res", "4"], A3)
    assert obj.exit_code == 0
    lines = obj.output.splitlines()
    assert "o piece_a" in lines and "o piece_b" in lines
    assert any(l.startswith("v ") for l in lines) and any(l.startswith("l ") for l in lines)
    pts = run(["front", "sample", "--tree", "-", "--res", "4", "--format", "points"], A3)
    assert pts.exit_code == 0 and pts.output.startswith("# piece")
    assert run(["front", "sample", "--tree", "-", "--box", "0"], A3).exit_code == 2


def test_front_sample_refuses_large_dimensions(run):
    big = SignedRootedTree("r", (("r", "a"), ("a", "b"), ("b", "c"), ("c", "d")),
                           {"a-b": 1, "b-c": 1, "c-d": 1}).to_json()
    r = run(["front", "sample", "--tree", "-", "--res", "2"], big)
    assert r.exit_code == 2 and "point-cloud" in r.output
    assert run(["front", "sample", "--tree", "-", "--res", "2", "--format", "points"], big).exit_code == 0


def test_tangency_locus(run):
    r = run(["tangency", "locus", "--n", "3", "--i", "3", "--j", "1"])
    assert r.exit_code == 0 and r.output.count("cell") == 2
    p = run(["tangency", "locus", "--n", "3", "--i", "3", "--j", "1", "--primary", "--json"])
    assert len(json.loads(p.output)) == 1
    assert run(["tangency", "locus", "--n", "1", "--i", "1", "--j", "1"]).exit_code == 2


def test_tangency_verify(run):
    r = run(["tangency", "verify", "--n", "2", "--grid", "101"])
    assert r.exit_code == 0
    assert all(l.startswith("pass") for l in r.output.splitlines())


def test_sign(run):
    neg = SignedRootedTree("r", (("r", "a"), ("a", "b")), {"a-b": -1}).to_json()
    assert run(["sign", "--tree", "-", "--edge", "a-b"], A3).output.strip() == "+1"
    assert run(["sign", "--tree", "-", "--edge", "a-b"], neg).output.strip() == "-1"
    assert run(["sign", "--tree", "-", "--edge", "r-a"], A3).exit_code == 2


def test_verify_all(run):
    r = run(["verify", "all", "--max-n", "3"])
    assert r.exit_code == 0
    assert all(l.startswith("pass") for l in r.output.splitlines())
    j = run(["verify", "all", "--max-n", "2", "--json"])
    assert all(d["status"] == "pass" for d in json.loads(j.output))


def test_verify_flow(run):
    r = run(["verify", "flow", "--json"])
    assert r.exit_code == 0
    data = json.loads(r.output)
    assert data["graph_deviation"] <= 1e-6 and data["order_ratio"] >= 12
    diverge = run(["verify", "flow", "--beta", "100", "--box", "1", "--steps", "50"])
    assert diverge.exit_code == 2 and "error:" in diverge.output
