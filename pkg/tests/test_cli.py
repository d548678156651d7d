import io
import json
import subprocess
import sys

import pytest
from conftest import FIXTURES

from qedpoly.cli import RunConfig, main, parse_graph, run
from qedpoly.errors import ParseError, SchemaError


def fixture(name: str) -> str:
    return str(FIXTURES / f"{name}.json")


def test_psi_text(capsys):
    assert main(["psi", fixture("gamma2")]) == 0
    assert capsys.readouterr().out.strip() == "a1 + a2 + a3"


def test_phi_json_with_momenta(capsys):
    assert main(["phi", fixture("gamma1"), "--momenta", "--output", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [item["q"] for item in doc["phi"]] == [["q1", "q1"]]


def test_chi_entries():
    status, text = run(RunConfig("chi", fixture("ws3"), edge=1, edge2=6))
    assert status == 0 and text == "-a2*a4 + a3*a5"
    status, text = run(RunConfig("chi", fixture("ws3")))
    assert len(text.splitlines()) == 21


def test_xpoly_and_numerator():
    status, text = run(RunConfig("xpoly", fixture("gamma1"), edge=5, momenta=True))
    assert status == 0 and text.startswith("q1^mu_e5*(-")
    status, text = run(RunConfig("numerator", fixture("gamma2"), gauge="feynman", output="json"))
    assert len(json.loads(text)["terms"]) == 2
    status, text = run(RunConfig("numerator", fixture("gamma2"), momenta=True))
    assert status == 0 and "q1^{mu_e2}" in text


def test_verify_theorem(capsys):
    assert main(["verify-theorem", fixture("gamma2")]) == 0
    assert capsys.readouterr().out.strip() == "ok"
    assert main(["verify-theorem", fixture("gamma1"), "--gauge", "feynman", "--output", "json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"equal": True}


def test_check_identities_small(capsys):
    argv = ["check-identities", "--max-edges", "3", "--samples", "5", "--random-max-edges", "5"]
    assert main(argv + ["--output", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["failures"] == [] and doc["graphs"]["random"] == 5


def test_stdin_input(monkeypatch, capsys):
    data = open(fixture("banana3"), "rb").read()
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(data)))
    assert main(["psi", "-"]) == 0
    assert capsys.readouterr().out.strip() == "a1*a2 + a1*a3 + a2*a3"


def test_errors_go_to_stderr(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [1],\n "edges": [}')
    assert main(["psi", str(bad)]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ParseError" and err["line"] == 2
    assert main(["psi", str(tmp_path / "missing.json")]) == 2
    assert main(["xpoly", fixture("gamma2")]) == 2
    assert main(["numerator", fixture("ws3")]) == 2
    assert json.loads(capsys.readouterr().err.splitlines()[-1])["error"] == "InvalidQed"


@pytest.mark.parametrize("doc, message", [
    ([], "top level"),
    ({"edges": []}, "vertices"),
    ({"vertices": [1, 1], "edges": []}, "duplicate vertex"),
    ({"vertices": [1], "edges": [{"id": 1, "source": 1, "target": 2, "kind": "scalar"}]}, "endpoint"),
    ({"vertices": [1], "edges": [{"id": 1, "source": 1, "target": 1, "kind": "gluon"}]}, "unknown kind"),
    ({"vertices": [1], "edges": [{"id": "1", "source": 1, "target": 1, "kind": "scalar"}]}, "integer"),
    ({"vertices": [1], "edges": [], "externals": [{"vertex": 2, "momentum": "q"}]}, "not declared"),
])
def test_schema_errors(doc, message):
    with pytest.raises(SchemaError, match=message):
        parse_graph(json.dumps(doc))


def test_parse_error_is_not_schema_error():
    with pytest.raises(ParseError):
        parse_graph(b"\xff")
    graph = parse_graph(open(fixture("gamma1")).read())
    assert graph.externals == ((1, "q1"), (3, "q2"))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qedpoly", "psi", fixture("gamma2")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "a1 + a2 + a3"
