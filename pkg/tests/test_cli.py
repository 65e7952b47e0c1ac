import json
import subprocess
import sys

import numpy as np
import pytest

from twinbeam.analysis import simulate_shot_spectra, write_spectra_csv
from twinbeam.cli import main
from twinbeam.sweeps import read_table, table_body


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_qpm_solve(capsys):
    code, out, _ = run(capsys, "qpm-solve")
    data = json.loads(out)
    assert code == 0
    assert data["signal"] == pytest.approx(1.3700321, abs=1e-6)
    assert data["gvm_pump_signal_fs_per_mm"] * data["gvm_pump_idler_fs_per_mm"] < 0
    code, out, _ = run(capsys, "qpm-solve", "--signal", 1.37)
    assert json.loads(out)["signal"] == pytest.approx(1.37, abs=1e-8)


def test_numerical_failure_exit_code(capsys):
    code, _, err = run(capsys, "qpm-solve", "--poling-period", 10)
    assert code == 3 and "not phase-matchable" in err


def test_config_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[crystal]\nlength = -1\n")
    assert run(capsys, "qpm-solve", "--config", bad)[0] == 2
    assert run(capsys, "qpm-solve", "--config", tmp_path / "missing.ini")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["gdd-sweep", "--gain-mode", "bogus"])
    assert exc.value.code == 2


def test_resource_refusal_exit_code(capsys):
    code, _, err = run(capsys, "condition", "--r", ",".join(["0.5"] * 9), "--n", 2)
    assert code == 4 and "refusing" in err


def test_jsa_and_schmidt(capsys, tmp_path):
    code, out, _ = run(capsys, "jsa", "--n-points", 128, "--out", tmp_path / "jsa.csv")
    assert code == 0 and json.loads(out)["shape"] == [128, 128]
    assert (tmp_path / "jsa.csv").stat().st_size > 0
    code, out, _ = run(capsys, "schmidt", "--modes", 3, "--out", tmp_path / "modes.csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[3] == "n,lambda,pi_HG,N" and len(lines) == 7
    header = (tmp_path / "modes.csv").read_text().splitlines()[0]
    assert header == "omega_s,mode_1,mode_2,mode_3"


def test_gdd_sweep_flag_overrides_file(capsys, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[sweep]\nstart = -1000\nstop = 1000\npoints = 9\n\n[pump]\ntau_fwhm = 200\n")
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "gdd-sweep", "--config", cfg, "--sweep-points", 3, "--tau-fwhm", 260, "--out", out)
    assert code == 0
    meta, rows = read_table(out)
    assert len(rows) == 3 and float(rows[1]["tau_pump"]) == 260.0
    assert meta["command"] == "gdd-sweep" and len(meta["config_sha256"]) == 64


def test_gdd_sweep_deterministic_across_workers(capsys, tmp_path):
    args = ["gdd-sweep", "--sweep-points", 4, "--n-points", 128, "--seed", 17]
    run(capsys, *args, "--workers", 1, "--out", tmp_path / "a.csv")
    run(capsys, *args, "--workers", 3, "--out", tmp_path / "b.csv")
    a, b = (tmp_path / "a.csv").read_text(), (tmp_path / "b.csv").read_text()
    assert table_body(a) == table_body(b)
    assert a == b


def test_power_sweep_with_fit(capsys, tmp_path):
    data = tmp_path / "brightness.csv"
    n_p = np.geomspace(1e11, 1e13, 6)
    data.write_text("N_P,N_S\n" + "".join(f"{float(x)!r},{float(np.sinh(4e-6 * np.sqrt(x)) ** 2)!r}\n" for x in n_p))
    code, out, _ = run(capsys, "power-sweep", "--sweep-points", 5, "--data", data)
    assert code == 0
    assert float(out.split("# fitted_a: ")[1].split()[0]) == pytest.approx(4e-6, rel=1e-8)
    assert len(table_body(out).splitlines()) == 6
    code, out, _ = run(capsys, "fit", "--brightness", data)
    assert json.loads(out)["a"] == pytest.approx(4e-6, rel=1e-8)


def test_g2_sim(capsys, tmp_path):
    code, out, _ = run(capsys, "g2-sim", "--modes", 2, "--shots", 200_000, "--hist", tmp_path / "h.csv", "--bins", 10)
    data = json.loads(out)
    assert code == 0
    assert abs(data["g2"] - 1.5) < 5 * data["stderr"]
    assert set(data) >= {"mean", "std", "g2", "K_g2", "stderr"}
    assert len((tmp_path / "h.csv").read_text().splitlines()) == 11
    code, out, _ = run(capsys, "g2-sim", "--weights", "3,1", "--shots", 1000)
    assert json.loads(out)["g2_theory"] == pytest.approx(1.625)
    code, out, _ = run(capsys, "g2-sim", "--from-jsa", "--n-points", 128, "--shots", 1000)
    assert code == 0 and json.loads(out)["g2_theory"] > 1.99


def test_condition(capsys):
    code, out, _ = run(capsys, "condition", "--mu", "0.5,0.5", "--n", 2)
    assert code == 0 and json.loads(out)["purity"] == pytest.approx(1 / 3)
    code, out, _ = run(capsys, "condition", "--r", "0.5", "--n", 3)
    assert json.loads(out)["purity"] == pytest.approx(1.0)
    assert run(capsys, "condition", "--n", 1)[0] == 2
    assert run(capsys, "condition", "--mu", "abc", "--n", 1)[0] == 2


def test_analyze_simulated_and_file(capsys, tmp_path):
    code, out, _ = run(capsys, "analyze", "--target-k", 1.1, "--shots", 30_000, "--bins", 96)
    data = json.loads(out)
    assert code == 0 and data["K"] == pytest.approx(data["K_true"], abs=0.03)
    x = np.arange(64) - 31.5
    mode = np.exp(-(x**2) / 50)
    path = tmp_path / "spectra.csv"
    write_spectra_csv(path, simulate_shot_spectra(mode / np.linalg.norm(mode), [1.0], 300, seed=1))
    code, out, err = run(capsys, "analyze", "--spectra", path, "--subsets", 2)
    assert code == 0 and json.loads(out)["K"] == pytest.approx(1.0, abs=1e-9)
    assert "few shots" in err


def test_fit_offset_from_sweep_output(capsys, tmp_path):
    model = tmp_path / "model.csv"
    run(capsys, "gdd-sweep", "--sweep-points", 5, "--n-points", 128, "--out", model)
    _, rows = read_table(model)
    data = tmp_path / "data.csv"
    data.write_text("gdd,S_mod\n" + "".join(f"{r['gdd']},{float(r['S_mod']) + 0.02!r}\n" for r in rows))
    code, out, _ = run(capsys, "fit", "--model", model, "--data", data)
    assert code == 0 and json.loads(out)["offset"] == pytest.approx(0.02, abs=1e-9)
    assert run(capsys, "fit")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "twinbeam", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "twinbeam" in res.stdout
