import json

import pytest
from click.testing import CliRunner

from carnot.cli import main


@pytest.fixture()
def run(tmp_path):
    runner = CliRunner()

    def go(*args, env=None):
        return runner.invoke(main, list(args), env=env, catch_exceptions=False)
    return go


def write(run, tmp_path, name, *args):
    path = tmp_path / f"{name}.json"
    res = run("build", *args, "-o", str(path))
    assert res.exit_code == 0, res.output
    return str(path)


def test_build_and_verify(run, tmp_path):
    p = write(run, tmp_path, "n2", "n2", "--n", "13")
    doc = json.loads(open(p).read())
    assert len(doc["labels"]) == 18
    res = run("verify", p)
    assert res.exit_code == 0
    rep = json.loads(res.output.strip().splitlines()[-1])
    assert rep["jacobi"] and rep["carnot"] and rep["width_3_2"]


def test_bad_spec_exit_2(run):
    res = run("build", "m0_S", "--n", "5", "--set", "7")
    assert res.exit_code == 2


def test_verify_non_carnot(run, tmp_path):
    p = write(run, tmp_path, "w", "Wplus", "--n", "6")
    res = run("verify", p)
    assert res.exit_code == 2
    rep = json.loads(res.stdout.strip().splitlines()[-1])
    assert rep["jacobi"] and not rep["carnot"]


def test_invalid_json_exit_2(run, tmp_path):
    p = tmp_path / "bad.json"
    doc = {"name": "x", "field": "Q", "labels": ["a", "b", "c"], "degrees": [1, 1, 2],
           "brackets": [{"i": 0, "j": 1, "terms": [{"k": 2, "coeff": "1"}]},
                        {"i": 1, "j": 0, "terms": [{"k": 2, "coeff": "1"}]}]}
    p.write_text(json.dumps(doc))
    assert run("verify", str(p)).exit_code == 2


def test_cohomology(run, tmp_path):
    p = write(run, tmp_path, "l23", "L23", "--n", "3")
    res = run("cohomology", p, "--grading", "4")
    doc = json.loads(res.output)
    assert res.exit_code == 0 and doc["h_dim"] == 3
    assert all(isinstance(l, str) for r in doc["representatives"] for t in r["terms"] for l in t["labels"])
    prof = json.loads(run("cohomology", p, "--profile").output)["profile"]
    assert prof["4"] == 3
    assert run("cohomology", p, "--grading", "9").exit_code == 2


def test_iso(run, tmp_path):
    a = write(run, tmp_path, "a", "n1pm", "--n", "4", "--sign", "+")
    b = write(run, tmp_path, "b", "n1pm", "--n", "4", "--sign", "-")
    r7 = run("iso", a, b, "--strategy", "fp:7")
    assert r7.exit_code == 3 and json.loads(r7.output)["group_order"] == 2016
    assert run("iso", a, b, "--strategy", "fp:13").exit_code == 0


def test_iso_witness_file(run, tmp_path):
    from carnot.catalog import build, spec
    from carnot.morphism import find_exact_witness, witness_to_json
    a = write(run, tmp_path, "a", "m02_S", "--n", "6")
    b = write(run, tmp_path, "b", "n2", "--n", "6")
    phi = find_exact_witness(build(spec("m02_S", 6)), build(spec("n2", 6)))
    w = tmp_path / "w.json"
    w.write_text(json.dumps(witness_to_json(phi)))
    res = run("iso", a, b, "--strategy", f"witness:{w}")
    assert res.exit_code == 0 and json.loads(res.output)["verified"]


def test_growth(run, tmp_path):
    p = write(run, tmp_path, "m", "m0", "--n", "6")
    lines = run("growth", p).output.strip().splitlines()
    assert lines[0] == "n,F,width"
    assert [int(l.split(",")[1]) for l in lines[1:]] == [n + 1 for n in range(1, 7)]


def test_extend(run, tmp_path):
    p = write(run, tmp_path, "n2", "n2", "--n", "6")
    out = tmp_path / "cert.json"
    res = run("extend", p, "-o", str(out))
    assert res.exit_code == 0
    cert = json.loads(out.read_text())
    assert cert["complete"] and sorted(cert["representatives"]) == ["n2(7)", "n2,1(7)", "n2,2(7)", "n2,3(7)"]


def test_extend_frontier(run, tmp_path):
    p = write(run, tmp_path, "n", "n1pm", "--n", "4", "--sign", "-")
    assert run("extend", p).exit_code == 4
    w = write(run, tmp_path, "w", "Wplus", "--n", "4")
    assert run("extend", w).exit_code == 4


def test_tree(run, tmp_path):
    out = tmp_path / "t.dot"
    res = run("tree", "--max-len", "3", "--emit", "dot", "-o", str(out))
    assert res.exit_code == 0
    assert out.read_text().startswith("digraph")
    js = run("tree", "--max-len", "4", "--emit", "json")
    assert js.exit_code == 4     # n1-(4) leaves an uncovered orbit
    assert json.loads(js.stdout)["level_sizes"]["4"] == 4


def test_tree_config_errors(run):
    assert run("tree", "--max-len", "1").exit_code == 2
    assert run("tree", "--max-len", "3", env={"CARNOT_PRIMES": "7,8"}).exit_code == 2


def test_catalog_list(run):
    res = run("catalog", "--max-n", "4")
    assert res.exit_code == 0 and "L(2,3)\t5\t2,1,2" in res.output
