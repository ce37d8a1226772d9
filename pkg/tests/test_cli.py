import json
import subprocess
import sys
from fractions import Fraction

import pytest

from polyineq.cli import EXIT_INDETERMINATE, EXIT_INFEASIBLE, EXIT_OK, EXIT_PARSE, EXIT_USAGE, interval_json, main
from polyineq.interval import Interval

from conftest import data_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gb_prints_reduced_basis(capsys):
    code, out, _ = run(capsys, "gb", data_path("circle_line.json"))
    assert code == EXIT_OK
    assert out.splitlines() == ["y^2 - 1/2", "x - y"]


def test_gb_is_deterministic(capsys):
    a = run(capsys, "gb", data_path("circle_line.json"), "--order", "grevlex")
    b = run(capsys, "gb", data_path("circle_line.json"), "--order", "grevlex")
    assert a == b


def test_gb_parametric_guards(capsys):
    code, out, _ = run(capsys, "gb", data_path("parametric_circle.json"))
    assert code == EXIT_OK
    assert any(line.startswith("# guard:") for line in out.splitlines())


def test_gb_needs_equations(tmp_path, capsys):
    f = tmp_path / "empty.json"
    f.write_text(json.dumps({"vars": ["x"], "equations": []}))
    assert run(capsys, "gb", f)[0] == EXIT_USAGE


@pytest.mark.parametrize("alg", ["eigen", "rur", "pur"])
def test_solve_sqrt2(capsys, alg):
    code, out, _ = run(capsys, "solve", data_path("sqrt2.json"), "--algorithm", alg)
    assert code == EXIT_OK
    result = json.loads(out)
    assert result["status"] == "ok"
    got = sorted(float((Fraction(s["coordinates"][0]["lo"]) + Fraction(s["coordinates"][0]["hi"])) / 2)
                 for s in result["solutions"])
    assert got == pytest.approx([-1.41421356237, 1.41421356237], abs=1e-9)


def test_solve_algorithms_agree(capsys):
    boxes = {}
    for alg in ("eigen", "rur", "pur"):
        _, out, _ = run(capsys, "solve", data_path("circle_line.json"), "--algorithm", alg)
        sols = json.loads(out)["solutions"]
        boxes[alg] = sorted([[(Fraction(c["lo"]), Fraction(c["hi"])) for c in s["coordinates"]] for s in sols])
    for alg in ("rur", "pur"):
        for a, b in zip(boxes["eigen"], boxes[alg]):
            assert all(x[0] <= y[1] and y[0] <= x[1] for x, y in zip(a, b))


def test_solve_decimals_contain_exact_endpoints(capsys):
    _, out, _ = run(capsys, "solve", data_path("sqrt2.json"))
    for s in json.loads(out)["solutions"]:
        for c in s["coordinates"]:
            lo, hi = (Fraction(x) for x in c["decimal"])
            assert lo <= Fraction(c["lo"]) and Fraction(c["hi"]) <= hi


def test_solve_representation(capsys):
    _, out, _ = run(capsys, "solve", data_path("circle_line.json"), "--algorithm", "pur", "--representation")
    rep = json.loads(out)["representation"]
    assert rep["kind"] == "pur" and len(rep["eta"]) == 3


def test_solve_positive_dimensional(capsys):
    code, out, err = run(capsys, "solve", data_path("positive_dimensional.json"))
    assert code == EXIT_INDETERMINATE
    assert json.loads(out)["status"] == "not zero-dimensional"
    assert "not zero-dimensional" in err


@pytest.mark.parametrize("name", ["infeasible_strict.json", "infeasible_nonneg.json", "infeasible_pair.json"])
def test_feasible_infeasible_fixtures(capsys, name):
    code, out, _ = run(capsys, "feasible", data_path(name))
    assert code == EXIT_INFEASIBLE
    assert json.loads(out)["status"] == "infeasible"


def test_feasible_seed_reproducible(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"vars": ["x", "y"], "nonneg": ["1 - x^2 - y^2"], "strict": ["x - y"]}))
    a = json.loads(run(capsys, "feasible", f, "--seed", "3")[1])
    b = json.loads(run(capsys, "feasible", f, "--seed", "3")[1])
    assert a["status"] == "feasible"
    strip = lambda r: [{k: v for k, v in run_.items() if k != "seconds"} for run_ in r["runs"]]  # noqa: E731
    assert strip(a) == strip(b)


def test_feasible_scatter_and_runs(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"vars": ["x"], "nonneg": ["4 - x^2"]}))
    csv = tmp_path / "pts.csv"
    code, out, _ = run(capsys, "feasible", f, "--runs", "3", "--scatter", csv)
    assert code == EXIT_OK
    assert len(json.loads(out)["runs"]) == 3
    lines = csv.read_text().splitlines()
    assert lines[0] == "run,x" and len(lines) >= 4
    assert all(-2 - 1e-6 <= float(l.split(",")[1]) <= 2 + 1e-6 for l in lines[1:])


def test_exit_codes_for_bad_input(tmp_path, capsys):
    assert run(capsys, "solve", tmp_path / "missing.json")[0] == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vars": ["x"], "equations": ["x^^2"]}))
    code, _, err = run(capsys, "solve", bad)
    assert code == EXIT_PARSE and "equations[0]" in err
    bad.write_text("{not json")
    assert run(capsys, "solve", bad)[0] == EXIT_PARSE
    bad.write_text(json.dumps({"vars": ["x"], "equations": ["x"], "colour": 1}))
    assert run(capsys, "solve", bad)[0] == EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE


def test_sof_theta_rows(capsys):
    plant = data_path("synthetic_plant.json")
    code, out, _ = run(capsys, "sof", plant, "--theta=-9,10", "--numeric")
    assert code == EXIT_OK
    row = json.loads(out)["rows"][0]
    assert row["certified"] is False and row["K"] is None
    code, out, _ = run(capsys, "sof", plant, "--theta=0,0", "--numeric", "--lambda", "15")
    row = json.loads(out)["rows"][0]
    assert row["certified"] is True


def test_sof_simulate_from_rest(capsys):
    code, out, _ = run(capsys, "sof", data_path("synthetic_plant.json"), "--theta=0,0",
                       "--simulate", "0,0", "0.01", "5")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "t,alpha,q,K"
    assert all(l.split(",")[1:3] == ["0.0", "0.0"] for l in lines[1:])


def test_interval_json_rounds_outward():
    iv = Interval(Fraction(1, 3), Fraction(2, 3))
    d = interval_json(iv)["decimal"]
    assert Fraction(d[0]) < Fraction(1, 3) and Fraction(d[1]) > Fraction(2, 3)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polyineq", "gb", str(data_path("circle_line.json"))],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "y^2 - 1/2"
