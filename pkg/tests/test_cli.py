import json
import subprocess
import sys
from fractions import Fraction

import jsonschema
import pytest

import golden
from dgscert.cli import main
from dgscert.graph import Graph, emit_graph6
from dgscert.report import load_schema

G6 = "KmZAr@YNQPHH"
G6_MATE = "KA_T?J~XXFrI"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_golden_strings():
    assert emit_graph6(Graph.from_adjacency(golden.A)) == G6
    assert emit_graph6(Graph.from_adjacency(golden.A_MATE)) == G6_MATE


def test_analyze_golden_json(capsys):
    code, out, _ = run(capsys, "analyze", G6, "--json")
    assert code == 10
    rep = json.loads(out)
    jsonschema.validate(rep, load_schema("analysis"))
    assert rep["snf"] == [str(x) for x in golden.SNF_W]
    assert rep["level_bound"]["divisor"] == "5"
    assert rep["ranks"]["2"] == 6 and rep["ranks"]["5"] == 11
    assert rep["verdict"]["kind"] == "LevelBound"
    assert int(rep["det_w"]) == -1832619200


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", G6, "--prime", "3")
    assert code == 10
    assert "every level divides 5" in out and "p=3:" in out


@pytest.mark.parametrize("g6,expected", [("@", 0), ("Bw", 11), ("Cr", 11)])
def test_analyze_exit_codes(capsys, g6, expected):
    code, out, _ = run(capsys, "analyze", g6, "--json")
    assert code == expected
    jsonschema.validate(json.loads(out), load_schema("analysis"))


@pytest.mark.parametrize("argv", [["analyze", "A"], ["analyze", "@", "--prime", "4"], ["pair", "@", "A_"]])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_analyze_stdin_and_adjlist(capsys, monkeypatch, tmp_path):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(G6 + "\n"))
    assert run(capsys, "analyze", "--json")[0] == 10
    f = tmp_path / "k2.json"
    f.write_text('{"n": 2, "edges": [[0, 1]]}')
    code, out, _ = run(capsys, "analyze", "--adjlist", str(f), "--json")
    assert code == 11 and json.loads(out)["graph6"] == "A_"


def test_dump_w_round_trip(capsys, tmp_path):
    w = tmp_path / "w.txt"
    what = tmp_path / "what.txt"
    run(capsys, "analyze", G6, "--dump-w", str(w), "--dump-what", str(what), "--json")
    code, out, _ = run(capsys, "snf", str(w))
    assert code == 0 and out.split() == [str(x) for x in golden.SNF_W]
    code, out, _ = run(capsys, "snf", str(what), "--json")
    factors = json.loads(out)
    jsonschema.validate(factors, load_schema("snf"))
    assert factors == ["1"] * 11 + [str(5**2 * 1145387)]


def test_snf_examples(capsys, tmp_path):
    f = tmp_path / "d.txt"
    f.write_text("2 2\n2 0\n0 3\n")
    assert run(capsys, "snf", str(f))[1] == "1 6\n"
    f.write_text("3 3\n1 0 0\n0 1 0\n0 0 1\n")
    assert run(capsys, "snf", str(f))[1] == "1 1 1\n"
    f.write_text("2 2\n1 2\n")
    assert run(capsys, "snf", str(f))[0] == 2
    assert run(capsys, "snf", str(tmp_path / "missing.txt"))[0] == 2


def test_pair_golden(capsys):
    code, out, _ = run(capsys, "pair", G6, G6_MATE, "--json")
    assert code == 13
    rep = json.loads(out)
    jsonschema.validate(rep, load_schema("pair"))
    assert rep["level"] == 5 and rep["isomorphic"] is False
    assert all(v for k, v in rep["checks"].items() if k != "permutation")
    assert not rep["checks"]["permutation"]
    assert [[int(5 * Fraction(x)) for x in row] for row in rep["q"]] == golden.Q5


def test_pair_self_and_errors(capsys):
    code, out, _ = run(capsys, "pair", G6, G6)
    assert code == 0 and "level       1" in out
    assert run(capsys, "pair", "Cr", "C~")[0] == 12
    assert run(capsys, "pair", "Bw", "Bw")[0] == 11


def test_census_files(capsys, tmp_path):
    code, out, _ = run(capsys, "census", "5", "--out-dir", str(tmp_path))
    assert code == 0 and "34 isomorphism classes" in out
    rep = json.loads((tmp_path / "census-n5.json").read_text())
    jsonschema.validate(rep, load_schema("census"))
    assert rep["buckets"] == []
    assert (tmp_path / "census-n5-pairs.txt").read_text() == ""
    assert run(capsys, "census", "9")[0] == 2
    assert run(capsys, "census", "8")[0] == 2


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "dgscert.conf"
    cfg.write_text("# defaults\njson = true\nprime = 3, 7\nfactor-budget = 500\n")
    code, out, _ = run(capsys, "--config", str(cfg), "analyze", G6)
    rep = json.loads(out)
    assert code == 10 and {"3", "7"} <= set(rep["ranks"])
    bad = tmp_path / "bad.conf"
    bad.write_text("colour = never\n")
    assert run(capsys, "--config", str(bad), "analyze", G6)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dgscert", "analyze", "@"], capture_output=True, text=True)
    assert proc.returncode == 0 and "CertifiedDGS" in proc.stdout
