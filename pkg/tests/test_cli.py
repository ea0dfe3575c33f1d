import json
import subprocess
import sys

import pytest
from jsonschema import validate

from freeelastica import cli, export


def run(tmp_path, *args):
    return cli.main([*args, "--out", str(tmp_path)])


def test_constants(tmp_path, capsys):
    assert run(tmp_path, "constants") == cli.EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["h_star"] == pytest.approx(1.66925368334815, abs=1e-14)
    assert (tmp_path / "constants_na.json").read_text() == json.dumps(out, indent=2) + "\n"


def test_elastica_artifacts(tmp_path):
    assert run(tmp_path, "elastica") == cli.EXIT_OK
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["elastica_na.csv", "elastica_na.svg", "elastica_na_branch.csv",
                     "elastica_na_branch.svg"]
    rows = (tmp_path / "elastica_na.csv").read_text().splitlines()
    assert rows[0] == "x,U,dU,kappa"
    assert len(rows) - 1 >= 512 * 6 / 4  # at least 512 points per period of U
    branch = (tmp_path / "elastica_na_branch.csv").read_text().splitlines()
    assert branch[0] == "s,x,y,kappa,omega_star" and len(branch) == 2049


def test_solve_unique(tmp_path, capsys):
    assert run(tmp_path, "solve", "--h", "1.0") == cli.EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert rec["classification"] == "unique_symmetric"
    assert set(rec) == {"h", "h_star", "classification", "s_root", "lambda", "phi", "energy",
                        "residuals"}
    assert set(rec["residuals"]) == {"u_bc", "u2_bc", "apex", "ode"}
    assert {p.name for p in tmp_path.iterdir()} == {"solve_1.json", "solve_1.csv", "solve_1.svg"}


@pytest.mark.parametrize("h", ["1.6692536800001", "1.66925368"])
def test_solve_just_below_critical(tmp_path, capsys, h):
    assert run(tmp_path, "solve", "--h", h) == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["classification"] == "unique_symmetric"


@pytest.mark.parametrize("h", ["1.6692537", "2"])
def test_solve_no_minimizer(tmp_path, capsys, h):
    assert run(tmp_path, "solve", "--h", h) == cli.EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert rec["classification"] == "no_minimizer" and rec["energy"] is None
    assert [p.suffix for p in tmp_path.iterdir()] == [".json"]


def test_format_selection(tmp_path):
    assert run(tmp_path, "solve", "--h", "0.5", "--format", "csv") == cli.EXIT_OK
    assert [p.name for p in tmp_path.iterdir()] == ["solve_0.5.csv"]


@pytest.mark.parametrize("args", [["solve"], ["oracle-compare"], ["bogus"], ["constants", "--samples", "8"],
                                  ["constants", "--format", "png"], ["solve", "--h", "abc"]])
def test_usage_errors(tmp_path, args):
    with pytest.raises(SystemExit) as exc:
        code = run(tmp_path, *args)
        raise SystemExit(code)
    assert exc.value.code == cli.EXIT_USAGE


@pytest.mark.parametrize("h", ["-1", "0", "nan", "inf"])
def test_domain_errors(tmp_path, h):
    assert run(tmp_path, "solve", "--h", h) == cli.EXIT_DOMAIN


def test_oracle_compare_above_critical(tmp_path):
    assert run(tmp_path, "oracle-compare", "--h", "1.7") == cli.EXIT_DOMAIN


def test_oracle_compare(tmp_path, capsys):
    assert run(tmp_path, "oracle-compare", "--h", "1.0") == cli.EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert set(rec) == {"h", "grids", "extrapolated_energy", "analytic_energy", "rel_gap",
                        "shape_sup_gap"}
    assert [g["n"] for g in rec["grids"]] == [201, 401, 801]
    assert rec["rel_gap"] < 5e-3


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert cli.main(["constants", "--out", str(blocker / "sub")]) == cli.EXIT_IO


def test_verify(tmp_path, capsys):
    assert run(tmp_path, "verify") == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out and "suites passed" in out
    rec = json.loads((tmp_path / "verify_na.json").read_text())
    assert rec["seed"] == 0 and all(s["passed"] for s in rec["suites"])


def test_verify_failure_exit_code(tmp_path, monkeypatch):
    from freeelastica import verify

    monkeypatch.setattr(verify, "run_all",
                        lambda seed: [verify.SuiteResult("x", False, 1.0, 0.5)])
    assert run(tmp_path, "verify") == cli.EXIT_VERIFY


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "freeelastica.cli", "constants", "--out",
                           str(tmp_path)], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "theta_star" in proc.stdout


@pytest.mark.parametrize("args,name,schema", [
    (["constants"], "constants_na.json", export.CONSTANTS_SCHEMA),
    (["solve", "--h", "1.5"], "solve_1.5.json", export.SOLUTION_SCHEMA),
    (["solve", "--h", "3"], "solve_3.json", export.SOLUTION_SCHEMA),
    (["oracle-compare", "--h", "0.5"], "oracle-compare_0.5.json", export.ORACLE_SCHEMA),
    (["verify"], "verify_na.json", export.VERIFY_SCHEMA),
])
def test_json_matches_schema(tmp_path, capsys, args, name, schema):
    assert run(tmp_path, *args) == cli.EXIT_OK
    validate(json.loads((tmp_path / name).read_text()), schema)
