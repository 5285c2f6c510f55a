import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from modalqt.cli import main, render, run
from modalqt.fixtures import list_fixtures

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "modalqt" / "fixtures"


def strip_timing(report):
    return {k: v for k, v in report.items() if k != "timing"}


def cli(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "modalqt.cli", *argv], capture_output=True, text=True, check=False
    )
    return proc.returncode, proc.stdout


def test_end_to_end_exit_codes():
    code, out = cli("distinguish", "min-copies", "--p", "2", "--states", "all-rays")
    assert code == 0
    assert json.loads(out)["result"]["M"] == 2
    code, out = cli("hide", "verify", "--fixture", "paper-z3")
    assert code == 2
    assert json.loads(out)["result"]["witness"]["pair"] == [0, 1]
    code, out = cli("hide", "verify")
    assert code == 1
    code, _ = cli("no-such-command")
    assert code == 1


def test_min_copies_gf3():
    code, rep = run(["distinguish", "min-copies", "--fixture", "gf3-all-rays", "--strategy", "double"])
    assert code == 0 and rep["result"]["M"] == 3 and rep["result"]["strategy"] == "double"


def test_distinguish_check():
    code, rep = run(["distinguish", "check", "--p", "2", "--states", "[[1,0],[0,1],[1,1]]"])
    assert code == 2
    assert rep["result"]["witness"] == [1, 1, 1]
    code, _ = run(["distinguish", "check", "--p", "2", "--states", "[[1,0],[0,1]]"])
    assert code == 0


def test_states_from_file(tmp_path):
    path = tmp_path / "states.json"
    path.write_text("[[1, 0], [0, 1], [1, 1], [1, 2]]", encoding="utf-8")
    code, rep = run(["distinguish", "min-copies", "--p", "3", "--states", str(path)])
    assert code == 0 and rep["result"]["M"] == 3


def test_hide_construct():
    code, rep = run(["hide", "construct", "--p", "3"])
    assert code == 0
    assert rep["result"]["spec"]["M1"] == [[0, 2], [1, 0]]
    code, rep = run(["hide", "construct", "--p", "3", "--poly", "[1,1,1]"])
    assert code == 1
    assert rep["error"]["witness"] == 1


def test_hide_locate_and_spec():
    spec = json.dumps({"p": 3, "M0": [[1, 0], [0, 1]], "M1": [[0, 2], [1, 0]]})
    code, rep = run(["hide", "locate", "--spec", spec])
    assert code == 0 and rep["result"]["witnesses"] == []
    code, rep = run(["hide", "locate", "--fixture", "paper-z3"])
    assert code == 2 and len(rep["result"]["witnesses"]) == 1


def test_aqt_demo():
    code, rep = run(["hide", "aqt-demo", "--lambda", "0.5", "--c", "[[0, 0.7071067811865476], [0.7071067811865476, 0]]"])
    assert code == 0
    assert rep["result"]["singular_ratio"] < 1e-8
    code, _ = run(["hide", "aqt-demo", "--c", "[[1, 0], [0, 0]]"])
    assert code == 1


def test_clone_commands():
    code, rep = run(["clone", "build", "--p", "2", "--states", "all-rays"])
    assert code == 0 and rep["result"]["copies"] == 2 and len(rep["result"]["cloner"]) == 8
    code, rep = run(["clone", "check", "--p", "2", "--states", "all-rays", "--copies", "1"])
    assert code == 2 and rep["verdict"] in ("infeasible", "degenerate")
    code, rep = run(["clone", "check", "--p", "2", "--states", "[[1,0],[0,1]]", "--copies", "1", "--exact"])
    assert code == 0
    assert all(not any(r) for r in rep["result"]["residuals"])
    code, rep = run(["clone", "witness", "--p", "3", "--states", "[[1,0],[0,1]]"])
    assert code == 2 and rep["result"]["witness"]["sigma"] == [1, 1]
    code, rep = run(["clone", "build", "--p", "2", "--states", "all-rays", "--copies", "1"])
    assert code == 1 and rep["error"]["type"] == "NoCloningError"


def test_delete_commands():
    code, rep = run(["delete", "check", "--p", "2", "--states", "all-rays", "--copies", "1"])
    assert code == 2
    code, rep = run(["delete", "check", "--p", "2", "--states", "all-rays", "--copies", "1", "--allow-singular"])
    assert code == 0
    code, rep = run(["delete", "witness", "--p", "2", "--states", "[[1,0],[0,1]]", "--sigma", "[1,1]"])
    assert code == 2 and rep["verdict"] == "leaks"
    code, rep = run(["delete", "with-record", "--fixture", "gf3-all-rays"])
    assert code == 0 and rep["result"]["copies"] == 3
    code, rep = run(["delete", "build", "--p", "2", "--states", "[[1,0],[0,1]]"])
    assert code == 0


def test_bad_input_is_an_error():
    assert run(["distinguish", "min-copies", "--p", "4", "--states", "all-rays"])[0] == 1
    assert run(["distinguish", "min-copies", "--p", "3", "--states", "[[1,0],[2,0]]"])[0] == 1
    assert run(["distinguish", "min-copies", "--fixture", "nope"])[0] == 1
    assert run(["distinguish", "min-copies", "--p", "3", "--states", "{not json"])[0] == 1


def test_fixtures_listing():
    code, rep = run(["fixtures"])
    assert code == 0
    assert sorted(rep["result"]) == list_fixtures()
    assert {"paper-z3", "gf2-all-rays", "gf3-all-rays", "companion-gf2", "companion-gf3"} <= set(rep["result"])


def test_json_is_deterministic():
    argv = ["hide", "verify", "--fixture", "companion-gf3"]
    a, b = run(argv)[1], run(argv)[1]
    assert render(strip_timing(a)) == render(strip_timing(b))


def test_text_format(capsys):
    assert main(["hide", "verify", "--fixture", "paper-z3", "--format", "text"]) == 2
    out = capsys.readouterr().out
    assert "verdict: fails" in out


def test_reproduce_only_filter():
    code, rep = run(["reproduce", "--only", "hiding"])
    assert code == 0
    groups = {i["group"] for i in rep["result"]["items"]}
    assert groups == {"hiding"}
    assert set(rep["timing"]["items"]) == {i["name"] for i in rep["result"]["items"]}
    code, rep = run(["reproduce", "--only", "k-quadratic,erratum-z3"])
    assert [i["name"] for i in rep["result"]["items"]] == ["k-quadratic", "erratum-z3"]
    assert run(["reproduce", "--only", "bogus"])[0] == 1


def test_reproduce_workers_env(monkeypatch):
    monkeypatch.setenv("MQT_WORKERS", "2")
    code, rep = run(["reproduce", "--only", "remarks,k-quadratic"])
    assert code == 0
    serial = run(["reproduce", "--only", "remarks,k-quadratic", "--workers", "1"])[1]
    assert strip_timing(rep)["result"] == strip_timing(serial)["result"]


@pytest.mark.parametrize(
    "fixture,edit,item",
    [
        ("paper-z3", lambda d: d["expected"].update(verdict="hides"), "erratum-z3"),
        ("gf3-all-rays", lambda d: d["expected"].update(M=2), "min-copies"),
    ],
)
def test_tampered_fixture_fails(tmp_path, fixture, edit, item):
    d = tmp_path / "fixtures"
    shutil.copytree(FIXTURES, d, ignore=shutil.ignore_patterns("*.py", "__pycache__"))
    data = json.loads((d / f"{fixture}.json").read_text(encoding="utf-8"))
    edit(data)
    (d / f"{fixture}.json").write_text(json.dumps(data), encoding="utf-8")
    code, rep = run(["reproduce", "--only", item, "--fixtures-dir", str(d)])
    assert code != 0
    assert item in rep["result"]["failed"]
    assert item in rep["verdict"]
