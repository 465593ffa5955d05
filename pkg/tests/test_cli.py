import io
import json
import subprocess
import sys

import pytest

from typforge import __version__
from typforge.cli import main
from typforge.graphs import emn, graph_to_spec


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


def test_graph_simple():
    code, rep = run_json("graph", "simple", "--name", "rose", "--n", "1")
    assert code == 0
    assert rep["result"]["verdict"] is False
    assert rep["tool_version"] == __version__
    assert "timing_ms" not in rep


def test_typ_le_emits_cyclic_certificate():
    code, rep = run_json("typ", "le", "--name", "emn", "--m", "2", "--n", "3", "--x", "2*w", "--y", "w")
    assert code == 0
    assert rep["result"]["verdict"] == "NotLeq"
    assert rep["result"]["proof"]["certificate"]["kind"] == "CyclicHom"


def test_unknown_exit_code():
    code, rep = run_json("monoid", "eq", "--name", "emn", "--m", "2", "--n", "3",
                         "--x", "2*w", "--y", "3*w", "--depth", "1", "--frontier", "2")
    assert code == 3
    assert rep["result"]["verdict"] == "Unknown"


@pytest.mark.parametrize("argv", [
    ("graph", "simple", "--name", "nope"),
    ("graph", "simple", "--name", "emn", "--m", "2"),
    ("graph", "simple", "--graph", "/nonexistent.json"),
    ("monoid", "eq", "--name", "emn", "--m", "2", "--n", "3", "--x", "q", "--y", "w"),
    ("monoid", "type", "--name", "rose", "--n", "2", "--x", "v", "--format", "dot"),
    ("configspace", "count", "--name", "rose", "--n", "2"),
])
def test_input_errors_exit_2(argv, capsys):
    code, _ = run(*argv)
    assert code == 2
    assert capsys.readouterr().err.startswith("error:")


def test_malformed_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("graph", "info", "--graph", str(bad))[0] == 2


def test_graph_file_input(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(graph_to_spec(emn(2, 3))))
    code, rep = run_json("graph", "bipartite", "--graph", str(path))
    assert code == 0 and rep["result"]["verdict"] is True and rep["result"]["three_twos"]
    code, rep = run_json("monoid", "eq", "--presentation", str(path), "--x", "2*w", "--y", "3*w")
    assert rep["result"]["verdict"] == "Equal"


def test_threads_do_not_change_output():
    base = ("typ", "le", "--name", "emn", "--m", "2", "--n", "3", "--x", "2*w", "--y", "w")
    one = run(*base, "--threads", "1")[1]
    four = run(*base, "--threads", "4")[1]
    assert one == four


def test_timing_is_opt_in():
    _, rep = run_json("shift", "monoid", "-n", "2", "--timing")
    assert rep["timing_ms"] >= 0
    assert "--timing" not in rep["command"]


def test_verify_cert_round_trip(tmp_path):
    _, text = run("monoid", "cancellation", "--name", "emn", "--m", "2", "--n", "3", "--max-degree", "3")
    report = tmp_path / "r.json"
    report.write_text(text)
    code, rep = run_json("verify-cert", str(report))
    assert code == 0 and rep["result"]["verdict"] == "Verified" and rep["result"]["claims"] > 0
    data = json.loads(text)
    data["result"]["cancellative"]["proof"]["parts"][0]["x"] = [5, 0]
    report.write_text(json.dumps(data))
    code, rep = run_json("verify-cert", str(report))
    assert code == 1 and rep["result"]["failed"]


def test_text_and_dot_formats():
    code, text = run("ktheory", "graph", "--name", "rose", "--n", "3", "--format", "text")
    assert code == 0 and 'K0_text: "Z/2"' in text
    code, dot = run("resolve", "--name", "fullshift", "--depth", "1", "--emit", "dot")
    assert code == 0 and dot.startswith("digraph bratteli")


def test_selfsim_commands(tmp_path):
    spec = tmp_path / "k.json"
    spec.write_text(json.dumps({"A": [[2]], "B": [[0]]}))
    code, rep = run_json("selfsim", "pseudofree", "--spec", str(spec))
    assert code == 0 and rep["result"]["verdict"] == "No"
    code, rep = run_json("selfsim", "check", "--builtin", "lamplighter")
    assert rep["result"]["ok"]
    code, rep = run_json("ktheory", "katsura", "--spec", str(spec))
    assert (rep["result"]["K0_text"], rep["result"]["K1_text"]) == ("0", "0")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "typforge", "shift", "monoid", "-n", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["n"] == 1
