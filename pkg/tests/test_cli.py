import io
import json
import subprocess
import sys

import pytest

from qmeasure.cli import main

R2 = 2**-0.5
HAD = [[[R2, 0], [R2, 0]], [[R2, 0], [-R2, 0]]]

PLAIN = {
    "space": {"weights": [0.5, 0.5]},
    "events": {"A": [0], "B": [1], "Omega": [0, 1]},
    "random_variables": {"f": [1, 2], "g": [-1, 0], "chiA": [1, 0]},
    "state": {"kind": "pure", "vector": [[R2, 0], [R2, 0]]},
}
WALK = {
    "system": {"dim": 2, "steps": [HAD, HAD]},
    "psi": [[1, 0], [0, 0]],
    "horizon": 2,
    "path_events": {"F0": {"type": "final_site", "value": 0}, "F1": {"type": "final_site", "value": 1}},
}


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)

    return write


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run("--format", "json", *argv)
    return code, json.loads(out)


def test_eval_example(files):
    code, rep = run_json("eval", "--scenario", files("s.json", PLAIN), "--events", "A,B,Omega")
    assert code == 0
    assert [r["event"] for r in rep["rows"]] == ["A", "B", "Omega"]
    assert [r["mu_rho"] for r in rep["rows"]] == pytest.approx([0.25, 0.25, 1.0], abs=1e-12)
    assert [r["nu"] for r in rep["rows"]] == [0.5, 0.5, 1.0]
    assert rep["decoherence"][0][1] == pytest.approx([0.25, 0.0])
    assert rep["rows"][2]["mu_rho"] <= 1 + 1e-12


def test_eval_empty_event_list(files):
    code, rep = run_json("eval", "--scenario", files("s.json", PLAIN))
    assert code == 0 and rep["rows"] == [] and rep["decoherence"] == []
    code, out, _ = run("eval", "--scenario", files("s.json", PLAIN))
    assert code == 0 and "mu_rho" in out


@pytest.mark.parametrize("rv,value", [("f", 1.25), ("g", -0.25), ("chiA", 0.25)])
def test_integrate_examples(files, rv, value):
    code, rep = run_json("integrate", "--scenario", files("s.json", PLAIN), "--rv", rv)
    assert code == 0
    assert rep["trace_value"] == pytest.approx(value, abs=1e-12)
    assert rep["tail_sum_value"] == pytest.approx(value, abs=1e-12)
    assert rep["abs_difference"] < 1e-10


def test_integrate_restricted_to_event(files):
    code, rep = run_json("integrate", "--scenario", files("s.json", PLAIN), "--rv", "f", "--event", "B")
    assert code == 0
    # 2 chi_B quantizes to 2 mu(B), and mu_rho(B) = 1/4
    assert rep["trace_value"] == pytest.approx(0.5, abs=1e-12)


def test_paths_example(files):
    code, rep = run_json("paths", "--scenario", files("w.json", WALK), "--events", "F0,F1", "--dense")
    assert code == 0
    assert [r["mu"] for r in rep["rows"]] == pytest.approx([1.0, 0.0], abs=1e-12)
    assert all(r["bridge_residual"] <= 1e-12 for r in rep["rows"])
    assert rep["bridge_ok"] is True


def test_paths_trivial_examples(files):
    doc = {"system": {"dim": 2, "steps": []}, "psi": [[1, 0], [0, 0]], "horizon": 0,
           "path_events": {"I0": {"type": "initial_site", "value": 0}}}
    code, rep = run_json("paths", "--scenario", files("h0.json", doc), "--events", "I0")
    assert code == 0 and rep["rows"][0]["mu"] == pytest.approx(1.0)
    ident = [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
    doc = {"system": {"dim": 2, "steps": [ident, ident]}, "psi": [[1, 0], [0, 0]], "horizon": 2,
           "path_events": {"F1": {"type": "final_site", "value": 1}}}
    code, rep = run_json("paths", "--scenario", files("id.json", doc), "--events", "F1")
    assert code == 0 and rep["rows"][0]["mu"] == 0


def test_paths_dense_cap_reports_partial_output(files):
    code, rep = run_json("paths", "--scenario", files("w.json", WALK), "--events", "F0", "--dense", "--dense-cap", "4")
    assert code == 3
    assert rep["error"]["code"] == "CAP_EXCEEDED"
    assert rep["partial"]["rows"][0]["mu"] == pytest.approx(1.0)
    code, out, err = run("paths", "--scenario", files("w.json", WALK), "--events", "F0", "--dense", "--dense-cap", "4")
    assert code == 3 and "CAP_EXCEEDED" in err and "F0" in out


def test_paths_ensemble_cap(files):
    code, rep = run_json("paths", "--scenario", files("w.json", WALK), "--events", "F0", "--max-paths", "4")
    assert code == 3 and rep["error"]["code"] == "CAP_EXCEEDED" and "partial" not in rep


def test_paths_workers_agree(files):
    path = files("w.json", WALK)
    _, one = run_json("paths", "--scenario", path, "--events", "F0,F1")
    _, many = run_json("paths", "--scenario", path, "--events", "F0,F1", "--workers", "3")
    assert one == many


def test_validation_errors_exit_3(files):
    bad = dict(PLAIN, state={"kind": "density", "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]})
    code, rep = run_json("eval", "--scenario", files("bad.json", bad), "--events", "A")
    assert code == 3 and rep["error"]["code"] == "STATE_TRACE"
    code, out, err = run("eval", "--scenario", files("bad.json", bad))
    assert code == 3 and out == "" and "STATE_TRACE" in err
    code, rep = run_json("eval", "--scenario", files("s.json", PLAIN), "--events", "A,nope")
    assert code == 3 and rep["error"]["code"] == "UNKNOWN_NAME"
    code, rep = run_json("paths", "--scenario", files("s.json", PLAIN))
    assert code == 3 and rep["error"]["code"] == "WRONG_SCENARIO_KIND"


def test_usage_errors_exit_2(files, capsys):
    assert run("check", "--cases", "0")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("eval")[0] == 2
    assert run("eval", "--scenario", "/nonexistent/file.json")[0] == 2
    assert run("check", "--families", "no_such_family")[0] == 2


def test_format_flag_position_is_free(files):
    path = files("s.json", PLAIN)
    a = run("--format", "json", "eval", "--scenario", path, "--events", "A")
    b = run("eval", "--scenario", path, "--events", "A", "--format", "json")
    assert a == b


def test_tol_controls_integrate_exit(files):
    code, rep = run_json("--tol", "-1", "integrate", "--scenario", files("s.json", PLAIN), "--rv", "f")
    assert code == 1 and rep["ok"] is False


def test_check_small_run_is_deterministic():
    args = ("check", "--seed", "7", "--cases", "5", "--dim-max", "4")
    a, b = run("--format", "json", *args), run("--format", "json", *args)
    assert a == b and a[0] == 0
    rep = json.loads(a[1])
    assert rep["all_passed"] and all(f["passed"] == 5 for f in rep["families"])
    assert "time" not in a[1] and "numba" not in a[1]


def test_check_failure_exits_1():
    code, rep = run_json("check", "--cases", "3", "--tol", "-1", "--families", "norm_law")
    assert code == 1 and not rep["all_passed"]


def test_console_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "qmeasure", "--format", "json", "eval", "--scenario", files("s.json", PLAIN), "--events", "Omega"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["rows"][0]["mu_rho"] == pytest.approx(1.0)
