import io
import json
import subprocess
import sys

import pytest

from conftest import C4, NET, P4, SUN3, G
from ncpath import cli
from ncpath.graph import parse_graph, serialize
from ncpath.recognition import Verification


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, g in [("net", NET), ("sun3", SUN3), ("p4", P4), ("c4", C4), ("two", G(4, [(0, 1), (2, 3)]))]:
        p = tmp_path / f"{name}.txt"
        p.write_text(serialize(g))
        out[name] = str(p)
    return out


def run(capsys, *argv):
    code = cli.main(list(argv))
    cap = capsys.readouterr()
    lines = [json.loads(x) for x in cap.out.splitlines() if x.startswith("{")]
    return code, lines, cap


def test_recognize_net_proper_interval(capsys, files):
    code, (rep,), _ = run(capsys, "recognize", "--class", "proper-interval", files["net"])
    assert code == 1
    assert rep["result"]["verdict"] == "non-member" and rep["result"]["witness"]["kind"] == "Net"
    assert rep["verification"] == "verified" and rep["wall_ns"] >= 0 and rep["digest"]


def test_mcds_sun(capsys, files):
    code, (rep,), _ = run(capsys, "mcds", files["sun3"])
    assert code == 0 and rep["result"]["size"] == 2 and rep["result"]["optimal"]


@pytest.mark.parametrize("cmd,code", [("mds", 0), ("mids", 0), ("hamcycle", 1), ("hampath", 1), ("minleaf", 0),
                                      ("model", 0), ("claw", 0)])
def test_graph_commands_on_net(capsys, files, cmd, code):
    got, (rep,), _ = run(capsys, cmd, files["net"])
    assert got == code and rep["verification"] == "verified"


def test_steiner(capsys, files):
    code, (rep,), _ = run(capsys, "steiner", "--terminals", "0,3", files["p4"])
    assert code == 0 and rep["result"]["vertices"] == [0, 1, 2, 3]
    code, _, cap = run(capsys, "steiner", "--terminals", "9", files["p4"])
    assert code == 2 and "terminals" in cap.err


def test_non_member_exit(capsys, files):
    code, (rep,), _ = run(capsys, "mcds", files["c4"])
    assert code == 1 and rep["result"]["witness"]["kind"] == "Hole"


def test_disconnected(capsys, files):
    code, (rep,), _ = run(capsys, "recognize", files["two"])
    assert code == 0 and len(rep["result"]["components"]) == 2
    code, _, cap = run(capsys, "mcds", files["two"])
    assert code == 2 and "connected" in cap.err


def test_usage_errors(capsys, tmp_path, files):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 0\n")
    assert run(capsys, "recognize", str(bad))[0] == 2
    assert run(capsys, "recognize", str(tmp_path / "missing.txt"))[0] == 2
    assert cli.main(["frobnicate"]) == 2


def test_unverified_exit(capsys, files, monkeypatch):
    monkeypatch.setattr(cli, "verify_certificate", lambda g, c: Verification(False, "forced"))
    code, (rep,), _ = run(capsys, "recognize", files["sun3"])
    assert code == 3 and rep["verification"] == "failed"


def test_dot(capsys, files):
    code = cli.main(["model", "--dot", files["sun3"]])
    out = capsys.readouterr().out
    assert code == 0 and out.startswith("graph") and "triangle" in out


def test_jobs_preserve_order(capsys, files):
    paths = [files["net"], files["sun3"], files["p4"]]
    code, reps, _ = run(capsys, "mids", "--jobs", "2", *paths)
    assert code == 0 and [r["input"] for r in reps] == paths


def test_gen_and_stdin(capsys, monkeypatch):
    assert cli.main(["gen", "--kind", "random-proper-interval", "--n", "50", "--seed", "7"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("# {") and parse_graph(text).n == 50
    monkeypatch.setenv("NCPATH_SEED", "7")
    cli.main(["gen", "--kind", "random-proper-interval", "--n", "50"])
    assert capsys.readouterr().out == text
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    code, (rep,), _ = run(capsys, "recognize", "--class", "proper-interval", "-")
    assert code == 0 and rep["input"] == "-"
    assert cli.main(["gen", "--kind", "random-chordal", "--n", "0"]) == 2


def test_verify_round_trip(capsys, tmp_path, files):
    code, (rep,), _ = run(capsys, "recognize", files["sun3"])
    cert = tmp_path / "cert.json"
    cert.write_text(json.dumps(rep))
    code, (v,), _ = run(capsys, "verify", str(cert), files["sun3"])
    assert code == 0 and v["ok"]
    code, (v,), _ = run(capsys, "verify", str(cert), files["net"])
    assert code == 3 and not v["ok"]


def test_bench_rows(capsys, tmp_path):
    out = tmp_path / "b.csv"
    assert cli.main(["bench", "--sizes", "64,128,256", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "n,m,op,wall" and len(rows) == 1 + 3 * 3
    assert "slope" in capsys.readouterr().err
    assert cli.main(["bench", "--sizes", "128,64"]) == 2


def test_module_entry_point(files):
    r = subprocess.run([sys.executable, "-m", "ncpath", "mcds", files["p4"]], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["result"]["vertices"] == [1, 2]
