import json

import pytest
from click.testing import CliRunner

from aperiodica.cli import main


@pytest.fixture
def run():
    runner = CliRunner()
    return lambda *args, **kw: runner.invoke(main, list(args), **kw)


def test_sin_log_exit_codes(run, tmp_path):
    out = tmp_path / "r.json"
    r = run("classify", "quasi-ap", "--func", "sin-log", "--spec", '{"c": 1}', "--out", str(out),
            "--csv", str(tmp_path / "m.csv"))
    assert r.exit_code == 0
    assert json.loads(out.read_text())["verdict"] == "pass"
    assert (tmp_path / "m.csv").read_text().startswith("T,margin")
    assert run("classify", "quasi-ap", "--func", "sin-log", "--spec", '{"c": -1}').exit_code == 1


def test_malformed_json_reports_position(run, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text('{\n  "c": 1,\n}\n')
    r = run("classify", "quasi-ap", "--func", "sin-log", "--spec", str(spec))
    assert r.exit_code == 3 and "line 3 column 1" in r.output


@pytest.mark.parametrize("args, field", [
    (["classify", "quasi-ap", "--func", "no-such-entry"], "func.corpus"),
    (["classify", "quasi-ap", "--func", "sin", "--grid-res", "-1"], "func.step"),
    (["classify", "quasi-ap", "--func", '{"corpus": "sin", "n": 7}'], "func.n"),
    (["classify", "fancy", "--func", "sin"], "class"),
    (["classify", "s-asymptotic", "--func", "sin"], "spec.omega"),
    (["classify", "weyl", "--func", "sin", "--spec", '{"ladder": [8, 4]}'], "spec"),
    (["verify", "nonsense"], "suite"),
])
def test_configuration_errors_exit_3(run, args, field):
    r = run(*args)
    assert r.exit_code == 3 and field in r.output


def test_data_dir_override(run, tmp_path, monkeypatch):
    (tmp_path / "short-sine.json").write_text(json.dumps({"corpus": "sin", "radius": 200, "step": 0.25}))
    monkeypatch.setenv("APERIODICA_DATA_DIR", str(tmp_path))
    assert run("classify", "uniform-recurrence", "--func", "short-sine").exit_code == 0


def test_periodic_and_spectrum(run, tmp_path):
    r = run("periodic", "--func", "sin", "--window", "40", "--spec", '{"omega": [3.141592653589793], "c": -1}')
    assert r.exit_code == 0 and json.loads(r.output)["verdict"] == "pass"
    r = run("periodic", "--func", "identity", "--window", "40", "--spec", '{"omega": [1.0]}')
    assert r.exit_code == 1
    csv = tmp_path / "p.csv"
    assert run("spectrum", "--func", "trig", "--csv", str(csv)).exit_code == 0
    assert csv.read_text().splitlines()[0] == "lambda_1,re,im,magnitude"


def test_weyl_sigma_sweep(run, tmp_path):
    csv = tmp_path / "w.csv"
    args = ["--spec", '{"ladder": [8, 16, 32, 64]}', "--window", "128", "--csv", str(csv)]
    r = run("weyl", "--sigma-sweep", "0.25,1.0", *args)
    assert r.exit_code == 0 and json.loads(r.output)["bracket"] == [0.25, 1.0]
    assert csv.read_text().splitlines()[0] == "sigma,l,value,verdict"
    # every sigma passes, so there is no crossover to report
    assert run("weyl", "--sigma-sweep", "1.0,1.2", *args).exit_code == 2


def test_solve_hammerstein(run, tmp_path):
    prob = {"forcing": {"terms": [{"kind": "sin"}]}, "alpha": 0.5, "radius": 50}
    p = tmp_path / "h.json"
    p.write_text(json.dumps(prob))
    r = run("solve", "hammerstein", "--problem", str(p), "--csv", str(tmp_path / "y.csv"))
    assert r.exit_code == 0 and json.loads(r.output)["solver"]["q"] <= 0.5 + 1e-9
    prob["alpha"] = 2.0
    p.write_text(json.dumps(prob))
    r = run("solve", "hammerstein", "--problem", str(p))
    assert r.exit_code == 3 and "problem.alpha" in r.output


def test_solve_wave_reports_residual(run):
    prob = {"a": 1.0, "f": {"terms": [{"kind": "sin"}]}, "g": {"terms": [{"kind": "const", "amp": 0}]},
            "radius": 10, "step": 0.1}
    r = run("solve", "wave", "--problem", json.dumps(prob))
    assert r.exit_code == 0 and json.loads(r.output)["residual"] < 1e-10
    bad = dict(prob, f={"terms": [{"kind": "tan"}]})
    r = run("solve", "wave", "--problem", json.dumps(bad))
    assert r.exit_code == 3 and "problem.f.terms[0].kind" in r.output


def test_verify_suite_json_and_table(run, tmp_path):
    out = tmp_path / "v.json"
    r = run("verify", "periodicity", "--out", str(out))
    assert r.exit_code == 0 and "checks:" in r.output
    d = json.loads(out.read_text())
    assert d["status"] == "pass" and all("runtime" not in c for c in d["checks"])
