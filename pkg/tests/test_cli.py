import csv
import io
import json
import math

import pytest

from plasmarefl import __version__
from plasmarefl.cli import EXIT_INVALID, EXIT_OK, EXIT_SOLVER, read_config, run
from plasmarefl.sweep import CSV_COLUMNS


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_single_point_specular(capsys):
    code, out, _ = _run(capsys, "reflect", "--k", "0.1", "--eps", "0.01", "--alpha", "0")
    rec = json.loads(out)
    assert code == EXIT_OK
    assert rec["R"] == 1.0 and rec["phi"] == math.pi and rec["n_zeros"] == 2


def test_single_point_golden(capsys):
    code, out, _ = _run(capsys, "reflect", "--k", "0.1", "--eps", "0.01", "--alpha", "0.5")
    rec = json.loads(out)
    assert rec["R"] == pytest.approx(0.9794729391749188, rel=1e-12)
    assert rec["dual_rel_diff"] < 1e-12


def test_single_point_diagnostics(capsys):
    code, out, _ = _run(capsys, "reflect", "--k", "0.1", "--eps", "0.01", "--alpha", "0.5",
                        "--diagnostics")
    diag = json.loads(out)["diagnostics"]
    assert code == EXIT_OK and diag["momentum_balance_rel"] < 1e-8


def test_longwave_flag(capsys):
    code, out, _ = _run(capsys, "reflect", "--k", "0.05", "--eps", "0.001", "--alpha", "1",
                        "--longwave")
    assert code == EXIT_OK and json.loads(out)["gamma"][0] == pytest.approx(0.3 * 0.05**2)


def test_invalid_alpha(capsys):
    code, _, err = _run(capsys, "reflect", "--k", "0.1", "--eps", "0.01", "--alpha", "1.5")
    assert code == EXIT_INVALID
    assert json.loads(err)["error"]["status"] == "invalid"


def test_invalid_number(capsys):
    code, _, _ = _run(capsys, "reflect", "--k", "abc", "--eps", "0.01", "--alpha", "0.5")
    assert code == EXIT_INVALID


def test_solver_failure(capsys):
    code, out, _ = _run(capsys, "reflect", "--k", "10", "--eps", "0.01", "--alpha", "0.5")
    assert code == EXIT_SOLVER
    assert json.loads(out)["error"]["type"] in ("ConvergenceError", "ModeAbsentError")


def test_range_sweep_csv(capsys):
    code, out, _ = _run(capsys, "sweep", "--k-range", "0.05:0.15:3", "--eps", "0.01",
                        "--alpha", "0.5")
    rows = _csv(out)
    assert code == EXIT_OK and len(rows) == 3
    assert tuple(rows[0].keys()) == CSV_COLUMNS
    assert all(r["status"] == "ok" for r in rows)


def test_figure5_monotone_in_alpha(tmp_path, capsys):
    out = tmp_path / "fig5.csv"
    code, _, _ = _run(capsys, "sweep", "--figure", "5", "--out", str(out), "--jobs", "1")
    rows = _csv(out.read_text())
    assert code == EXIT_OK and all(r["status"] == "ok" for r in rows)
    for k in {r["k"] for r in rows}:
        curve = sorted((float(r["alpha_p"]), float(r["R"])) for r in rows if r["k"] == k)
        assert all(a[1] > b[1] for a, b in zip(curve, curve[1:]))


def test_json_format(capsys):
    code, out, _ = _run(capsys, "sweep", "--k", "0.1", "--eps", "0.01", "--alpha", "0:1:3",
                        "--format", "json")
    rows = json.loads(out)
    assert [r["alpha_p"] for r in rows] == [0.0, 0.5, 1.0]
    assert rows[0]["R"] == 1.0


def test_zeros_grid(capsys):
    code, out, _ = _run(capsys, "zeros", "--gamma-range=-0.5:8.5:3", "--eps", "0.1")
    rows = _csv(out)
    assert [r["n_zeros"] for r in rows] == ["2", "2", "0"]
    assert rows[-1]["domain"] == "D-"


def test_domain_curve(capsys):
    code, out, _ = _run(capsys, "domain-curve", "--tau-range", "0.5:0.99:5")
    rows = _csv(out)
    assert code == EXIT_OK
    assert all(float(r["tau"]) > 0.83 for r in rows) and len(rows) == 2


def test_dispersion_grid(capsys):
    code, out, _ = _run(capsys, "dispersion-grid", "--k", "0.1", "--eps", "0.01")
    row = _csv(out)[0]
    assert float(row["gamma_re"]) == pytest.approx(0.0029863995483794, rel=1e-12)


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nk = 0.2\neps = 0.01\nalpha = 0\n")
    code, out, _ = _run(capsys, "reflect", "--config", str(cfg), "--k", "0.1")
    rec = json.loads(out)
    assert rec["k"] == 0.1 and rec["alpha_p"] == 0.0


def test_config_rejects_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    with pytest.raises(ValueError):
        read_config(str(cfg))


def test_plot_script(tmp_path, capsys):
    out = tmp_path / "fig.csv"
    code, _, _ = _run(capsys, "sweep", "--k-range", "0.05:0.1:2", "--eps", "0.01",
                      "--alpha", "0.5", "--out", str(out), "--plot-script")
    script = tmp_path / "fig.gp"
    assert code == EXIT_OK and script.exists()
    assert "fig.csv" in script.read_text()


def test_jobs_do_not_change_output(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["sweep", "--k-range", "0.05:0.25:5", "--eps-range", "0.001:0.1:3:log",
            "--alpha", "0:1:3"]
    assert run(base + ["--jobs", "1", "--out", str(a)]) == EXIT_OK
    assert run(base + ["--jobs", "3", "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_version(capsys):
    with pytest.raises(SystemExit):
        run(["--version"])
    assert __version__ in capsys.readouterr().out
