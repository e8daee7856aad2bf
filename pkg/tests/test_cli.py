import csv
import io
import json
import math
import subprocess
import sys

import pytest

from phasebell import checks, cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_single_analytic(capsys):
    code, out, _ = run(capsys, "single", "--analytic", "--phi1", "0", "--phi2", "22.5")
    assert code == 0
    (r,) = rows(out)
    assert float(r["E"]) == pytest.approx(0.7071068, abs=1e-7)
    assert float(r["p_joint"]) == pytest.approx(math.cos(math.radians(22.5)) ** 2, abs=1e-9)


def test_single_equal_angles(capsys):
    _, out, _ = run(capsys, "single", "--analytic", "--phi1", "10", "--phi2", "10", "--delta", "0")
    assert float(rows(out)[0]["E"]) == 1


def test_single_monte_carlo_perfect_correlation(capsys):
    code, out, _ = run(capsys, "single", "--model", "phase", "--phi1", "0", "--phi2", "0",
                       "--trials", "1000", "--seed", "7")
    (r,) = rows(out)
    assert code == 0
    assert r["E_hat"] == "1" and int(r["n"]) == 1000 and r["n_pm"] == r["n_mp"] == "0"


def test_chsh_analytic_defaults(capsys):
    _, out, _ = run(capsys, "chsh", "--analytic")
    (r,) = rows(out)
    assert float(r["S"]) == pytest.approx(2.8284271, abs=1e-7)
    assert [r[k] for k in ("phi1_deg", "phi1p_deg", "phi2_deg", "phi2p_deg")] == ["0", "45", "22.5", "67.5"]


def test_chsh_degenerate(capsys):
    _, out, _ = run(capsys, "chsh", "--analytic", "--phi1", "0", "--phi1p", "0", "--phi2", "0", "--phi2p", "0")
    assert float(rows(out)[0]["S"]) == 2


def test_chsh_bell_det(capsys):
    code, out, _ = run(capsys, "chsh", "--model", "bell-det", "--trials", "1000000", "--seed", "1")
    (r,) = rows(out)
    assert code == 0
    assert abs(float(r["S"]) - 2.0) <= 0.01
    assert float(r["S_std_err"]) > 0


def test_sweep_analytic(capsys):
    _, out, _ = run(capsys, "sweep", "--analytic", "--start", "0", "--stop", "90", "--step", "22.5")
    rs = rows(out)
    assert [float(r["angle_deg"]) for r in rs] == [0, 22.5, 45, 67.5, 90]
    expected = [1, 0.7071068, 0, -0.7071068, -1]
    for r, e in zip(rs, expected):
        assert float(r["E_analytic"]) == pytest.approx(e, abs=1e-7)


def test_sweep_step_larger_than_range(capsys):
    _, out, _ = run(capsys, "sweep", "--analytic", "--start", "10", "--stop", "20", "--step", "50")
    rs = rows(out)
    assert len(rs) == 1 and float(rs[0]["angle_deg"]) == 10


def test_sweep_monte_carlo(capsys):
    _, out, _ = run(capsys, "sweep", "--start", "0", "--stop", "180", "--step", "15", "--trials", "100000")
    rs = rows(out)
    angles = [float(r["angle_deg"]) for r in rs]
    assert angles == sorted(angles)
    for r in rs:
        assert abs(float(r["E_hat"]) - float(r["E_analytic"])) <= 5 * float(r["std_err"]) + 1e-9


def test_scan_analytic(capsys):
    _, out, _ = run(capsys, "scan", "--analytic")
    by_model = {r["model"]: r for r in rows(out)}
    assert float(by_model["phase"]["max_abs_S"]) == pytest.approx(2.8284271, abs=1e-7)
    assert float(by_model["bell-det"]["max_abs_S"]) == pytest.approx(2.0, abs=1e-9)
    quad = [float(by_model["phase"][k]) for k in ("phi1_deg", "phi1p_deg", "phi2_deg", "phi2p_deg")]
    assert quad == [0, 45, 22.5, 67.5]


def test_scan_coarse_grid(capsys):
    _, out, _ = run(capsys, "scan", "--analytic", "--model", "phase", "--grid-step", "90")
    assert float(rows(out)[0]["max_abs_S"]) == pytest.approx(2.0, abs=1e-12)


def test_scan_monte_carlo(capsys):
    _, out, _ = run(capsys, "scan", "--model", "bell-det", "--trials", "20000", "--grid-step", "45")
    (r,) = rows(out)
    assert float(r["max_abs_S"]) <= 2 + 5 * float(r["std_err"])


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify")
    rs = rows(out)
    assert code == 0
    assert {r["check"] for r in rs} == set(checks.CHECKS)
    assert all(r["passed"] == "1" for r in rs)


def test_verify_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setitem(checks.CHECKS, "broken", lambda rng: (False, "forced"))
    code, _, err = run(capsys, "verify")
    assert code == 1
    assert "broken" in err


def test_json_output(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, out, _ = run(capsys, "single", "--trials", "500", "--seed", "9", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    doc = json.loads(path.read_text())
    assert set(doc) == {"config", "results", "checks"}
    cfg = doc["config"]
    assert cfg["seed"] == 9 and cfg["trials"] == 500 and cfg["model"] == "phase"
    assert cfg["delta"] == 0 and cfg["phi0"] == 0 and cfg["partitions"] >= 1
    assert doc["results"]["n"] == 500


def test_json_reproduces_run(capsys):
    _, out, _ = run(capsys, "chsh", "--trials", "2000", "--seed", "5", "--format", "json")
    doc = json.loads(out)
    cfg = doc["config"]
    argv = ["chsh", "--model", cfg["model"], "--trials", str(cfg["trials"]), "--seed", str(cfg["seed"]),
            "--partitions", str(cfg["partitions"]), "--format", "json"]
    for k in ("phi1", "phi1p", "phi2", "phi2p", "delta", "phi0"):
        argv += [f"--{k}", repr(cfg[k])]
    _, out2, _ = run(capsys, *argv)
    assert json.loads(out2)["results"] == doc["results"]


def test_verify_json_has_checks(capsys):
    _, out, _ = run(capsys, "verify", "--format", "json")
    doc = json.loads(out)
    assert doc["results"]["passed"] is True
    assert len(doc["checks"]) == len(checks.CHECKS)


def test_csv_line_endings_and_precision(capsys, tmp_path):
    path = tmp_path / "o.csv"
    cli.main(["chsh", "--analytic", "--out", str(path)])
    raw = path.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    assert b"2.82842712\n" in raw


@pytest.mark.parametrize("argv", [
    ["nosuch"],
    ["single", "--phi1", "abc"],
    ["sweep", "--step", "0"],
    ["sweep", "--step", "-1"],
    ["single", "--trials", "0"],
    ["single", "--trials", "10", "--partitions", "11"],
    ["scan", "--grid-step", "0.5"],
    ["single", "--model", "bogus"],
    ["single", "--phi1", "nan"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "phasebell", "chsh", "--analytic"],
                          capture_output=True, text=True, check=True)
    assert rows(proc.stdout)[0]["S"] == "2.82842712"
