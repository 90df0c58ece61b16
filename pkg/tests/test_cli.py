import json
from importlib import resources
import subprocess
import sys

import pytest

from ssgraph.cli import load_graph, run
from ssgraph.isograph import IsogenyGraph, graph_method


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_graph_json(capsys):
    code, out, _ = call(capsys, "graph", "--p", "11", "--ell", "2", "--method", "velu", "--format", "json")
    assert code == 0
    assert out == graph_method(11, 2).to_json()
    assert IsogenyGraph.from_json(out) == graph_method(11, 2)


def test_graph_dot_and_csv(capsys):
    _, dot, _ = call(capsys, "graph", "--p", "11", "--ell", "2", "--format", "dot")
    assert [line.strip() for line in dot.splitlines()].count("1 -> 1;") == 1
    _, csv, _ = call(capsys, "graph", "--p", "19", "--ell", "2", "--format", "csv")
    assert csv == "2,1\n2,1\n"


def test_graph_methods_agree(capsys):
    _, a, _ = call(capsys, "graph", "--p", "61", "--ell", "5", "--method", "velu")
    _, b, _ = call(capsys, "graph", "--p", "61", "--ell", "5", "--method", "modular")
    assert a == b


def test_graph_out_file(tmp_path, capsys):
    path = tmp_path / "g.json"
    code, out, _ = call(capsys, "graph", "--p", "37", "--ell", "3", "--out", str(path))
    assert code == 0 and out == ""
    assert load_graph(path) == graph_method(37, 3)


def test_ob_table_csv_matches_reference(capsys):
    code, out, _ = call(capsys, "ob-table", "--set", "supersingular", "--max", "19")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "ell\\p,2,3,5,7,11,13,17,19"
    ref = json.loads((resources.files("ssgraph") / "data" / "table1.json").read_text())
    idx = {q: i for i, q in enumerate(ref["primes"])}
    primes = [2, 3, 5, 7, 11, 13, 17, 19]
    for line, ell in zip(lines[1:], primes):
        want = ["-" if p == ell else str(ref["matrix"][idx[ell]][idx[p]]) for p in primes]
        assert line == ",".join([str(ell)] + want)


def test_ob_table_json(capsys):
    code, out, _ = call(capsys, "ob-table", "--set", "all", "--max", "13", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["symmetry"]["symmetric"]
    assert data["primes"] == [2, 3, 5, 7, 11, 13]


def test_ob_single(capsys):
    assert call(capsys, "ob", "--p", "13", "--ell", "5")[1] == "1\n"


def test_verify(capsys):
    code, out, _ = call(capsys, "verify", "--p", "19", "--ell", "2")
    report = json.loads(out)
    assert code == 0 and report["all_ok"]
    rec = report["results"][0]
    assert rec["graphs_equal"] and rec["trace_match"] and rec["loops_match"]
    assert "timings" not in rec


def test_verify_ranges_and_timings(capsys):
    code, out, _ = call(capsys, "verify", "--p", "5-13", "--ell", "2,3", "--timings")
    report = json.loads(out)
    assert code == 0
    assert [(r["p"], r["ell"]) for r in report["results"]] == [
        (5, 2), (5, 3), (7, 2), (7, 3), (11, 2), (11, 3), (13, 2), (13, 3)]
    assert "timings" in report["results"][0]


def test_verify_records_skipped_velu(capsys):
    code, out, _ = call(capsys, "verify", "--p", "73", "--ell", "19")
    rec = json.loads(out)["results"][0]
    assert code == 0
    assert rec["velu"].startswith("skipped") and rec["graphs_equal"] is None


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("SSGRAPH_SEED", "0x10")
    _, out, _ = call(capsys, "verify", "--p", "7", "--ell", "5")
    assert json.loads(out)["seed"] == 16


def test_find(capsys):
    code, out, _ = call(capsys, "find", "--p", "13")
    assert code == 0 and json.loads(out)["j0"] == "5"


def test_frobtable(capsys):
    code, out, _ = call(capsys, "frobtable", "--ell", "11")
    lines = out.splitlines()
    assert lines[0] == "j,abs_trace"
    assert "0,0" in lines and "1,0" in lines


def test_trace(capsys):
    code, out, _ = call(capsys, "trace", "--p", "5", "--ell", "19")
    rec = json.loads(out)
    assert rec["trace"] == "20" and rec["epsilon"] == 4


def test_repro_commands(capsys):
    code, _, err = call(capsys, "repro-table1")
    assert code == 0
    summary = json.loads(err.strip().splitlines()[-1])
    assert summary["pairs"] == 56 and summary["mismatches"] == []
    assert call(capsys, "repro-traces")[0] == 0
    code, out, _ = call(capsys, "repro-frobtables", "--max", "23", "--c-max", "13")
    assert code == 0
    assert all(r["agree"] for r in json.loads(out)["results"])


def test_describe(capsys):
    code, out, _ = call(capsys, "--describe")
    assert code == 0 and json.loads(out)


@pytest.mark.parametrize("argv,code", [
    (["graph", "--p", "11"], 1),
    (["bogus"], 1),
    ([], 1),
    (["graph", "--p", "15", "--ell", "2"], 2),
    (["graph", "--p", "11", "--ell", "11"], 2),
    (["graph", "--p", "29", "--ell", "17", "--method", "velu"], 2),
    (["ob", "--p", "13", "--ell", "23"], 3),
    (["verify", "--p", "7", "--ell", "7"], 2),
])
def test_exit_codes(argv, code, capsys):
    if code == 1:
        with pytest.raises(SystemExit) as exc:
            run(argv)
        assert exc.value.code == 1
    else:
        assert run(argv) == code
    capsys.readouterr()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ssgraph", "ob", "--p", "11", "--ell", "7"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "1\n"
