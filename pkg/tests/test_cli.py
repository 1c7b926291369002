import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from gaussevo.cli import ThresholdSpec, cmd_threshold, main
from gaussevo.config import FIGURES, preset_config
from gaussevo.errors import NoSignChange
from gaussevo.evolution import min_nu_scan
from gaussevo.stationary import stationary_params


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, text, name="cfg.txt"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_evolve_csv_format(capsys):
    code, out, _ = run(capsys, "evolve", "--preset", "fig1-left-solid", "--samples", "5", "--t-max", "2")
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "t,mu,kappa,nu" and lines[-1] == ""
    assert "\r" not in out
    table = rows(out)[1:]
    assert len(table) == 5
    for row in table:
        for cell in row:
            float(cell)
            assert "," not in cell
            digits = cell.lstrip("-").split("e")[0].replace(".", "").lstrip("0")
            assert len(digits) <= 12


def test_evolve_fig1_left_solid_positive_and_stationary(capsys):
    code, out, err = run(capsys, "evolve", "--preset", "fig1-left-solid", "--t-max", "40", "--samples", "401", "--check-stationary")
    assert code == 0
    data = np.array(rows(out)[1:], dtype=float)
    assert data[:, 3].min() >= 0
    rep = json.loads(run(capsys, "analyze", "--preset", "fig1-left-solid")[1])
    assert np.allclose(data[-1, 1:], [rep["mu_st"], rep["kappa_st"], rep["nu_st"]], atol=1e-4)
    assert "deviation" in err


def test_evolve_rejects_zero_t_max(capsys, tmp_path):
    path = write(tmp_path, "class = KL\ngamma = 1\nomega0 = 1\nb = 1\nb0 = 1\nt_max = 0\n")
    code, _, err = run(capsys, "evolve", "--config", path)
    assert code == 1 and "t_max" in err
    assert run(capsys, "evolve", "--preset", "fig1-left-solid", "--t-max", "0")[0] == 1


def test_evolve_exit_3_without_stationary_state(capsys, tmp_path):
    path = write(tmp_path, "gamma = 0.5\ntheta0 = 2\ntheta1 = 1.9\ntheta2 = 2\neta0 = -1\nmu0 = 1\nkappa0 = 0\nnu0 = 1\n")
    code, out, err = run(capsys, "evolve", "--config", path, "--check-stationary")
    assert code == 3 and out == "" and "does not exist" in err


def test_analyze_kl(capsys, tmp_path):
    path = write(tmp_path, '{"class": "KL", "gamma": 1, "omega0": 1, "b": 1, "b0": 1}')
    code, out, _ = run(capsys, "analyze", "--config", path)
    doc = json.loads(out)
    assert code == 0
    keys = {"class", "omega_sq", "regime", "exists", "gamma_vec", "mu_st", "kappa_st", "nu_st", "well_behaved",
            "positive", "factorized_residual", "gibbs", "dekker_ok", "generic_positive_ok", "cp_witness"}
    assert keys <= set(doc)
    assert doc["class"] == "KL" and doc["gamma_vec"] == [2.0, 0.0, 0.0]
    assert doc["positive"] is True and doc["cp_witness"] is not None


def test_analyze_cl_dekker(capsys):
    doc = json.loads(run(capsys, "analyze", "--preset", "fig2-left-dotted")[1])
    assert doc["class"] == "CL" and doc["dekker_ok"] is False and doc["generic_positive_ok"] is True
    assert doc["cp_witness"] is None


def test_analyze_negative_gamma(capsys, tmp_path):
    path = write(tmp_path, "gamma = -1\ntheta0 = 2\neta0 = -1\nmu0 = 1\nkappa0 = 0\nnu0 = 1\n")
    code, out, _ = run(capsys, "analyze", "--config", path, "--raw")
    doc = json.loads(out)
    assert code == 0 and doc["exists"] is False and doc["reason"] == "gamma_nonpositive"


def test_analyze_singular_gamma_exit_2(capsys, tmp_path):
    g = math.sqrt(-4 + 1.9**2 + 1.5**2)
    path = write(tmp_path, f"gamma = {g!r}\ntheta0 = 2\ntheta1 = 1.9\ntheta2 = 1.5\neta0 = -1\nmu0 = 1\nkappa0 = 0\nnu0 = 1\n")
    code, _, err = run(capsys, "analyze", "--config", path)
    assert code == 2 and "numeric error" in err


def test_config_errors_exit_1(capsys, tmp_path):
    assert run(capsys, "evolve", "--config", write(tmp_path, ""))[0] == 1
    assert run(capsys, "evolve", "--config", str(tmp_path / "missing.txt"))[0] == 1
    assert run(capsys, "evolve")[0] == 1
    assert run(capsys, "evolve", "--preset", "nope")[0] == 1
    assert run(capsys, "threshold", "--preset", "fig1-left-solid", "--scan", "eta2", "--lo", "2", "--hi", "3")[0] == 1


def test_classify(capsys):
    assert run(capsys, "classify", "--preset", "fig3-right-long-dashed")[1].strip() == "GeneralizedKL2"
    assert run(capsys, "classify", "--preset", "fig1-right-solid")[1].strip() == "ConjugateHPZ"


@pytest.mark.parametrize(
    "preset, scan, lo, hi, crit, target",
    [
        ("fig1-left-solid", "eta2", 0, 2, "stationary_nu_zero", 0.875),
        ("fig1-right-solid", "eta2", -4, 0, "stationary_nu_zero", -2.125),
        ("fig3-right-solid", "theta1", 1, 2, "overdamped_boundary", 4 / math.sqrt(5)),
    ],
)
def test_threshold_command(capsys, preset, scan, lo, hi, crit, target):
    code, out, _ = run(capsys, "threshold", "--preset", preset, "--scan", scan, "--lo", str(lo), "--hi", str(hi), "--criterion", crit)
    assert code == 0 and abs(float(out) - target) < 1e-3


def test_threshold_deterministic_and_bracket_check():
    spec = ThresholdSpec("eta2", 0.0, 2.0)
    base = preset_config("fig1-left-solid")
    assert cmd_threshold(spec, base) == cmd_threshold(spec, base)
    with pytest.raises(NoSignChange):
        cmd_threshold(ThresholdSpec("eta2", 1.0, 2.0), base)


def test_min_traj_criterion():
    # fig1-left: somewhere between eta2 = -1 and -1.5 the trajectory starts dipping below zero
    root = cmd_threshold(ThresholdSpec("eta2", -1.5, -1.0, "min_traj_nu_zero", 1e-6), preset_config("fig1-left-solid"))
    assert -1.5 < root < -1.0


def test_figure_bundle(tmp_path, capsys):
    code, out, _ = run(capsys, "figure", "--preset", "fig3-left", "--out", str(tmp_path))
    assert code == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert len(files) == 5 and all(f.startswith("fig3-left_theta1=") for f in files)
    assert "fig3-left_theta1=1.106.csv" in files
    assert len(out.strip().split("\n")) == 5


@pytest.mark.parametrize("figure", sorted(FIGURES))
def test_every_preset_terminal_nu_matches_stationary(tmp_path, capsys, figure):
    assert run(capsys, "figure", "--preset", figure, "--out", str(tmp_path))[0] == 0
    for style, tag, _ in FIGURES[figure]:
        data = np.array(rows((tmp_path / f"{figure}_{tag}.csv").read_text())[1:], dtype=float)
        rep = stationary_params(preset_config(f"{figure}-{style}").coefficients)
        assert abs(data[-1, 3] - rep.nu_st) <= 1e-4, tag


def test_fig1_left_companion_curves():
    dip = preset_config("fig1-left-dot-dashed")
    companion = preset_config("fig1-left-short-dashed")
    assert dip.coefficients.theta_arr[1] == 0.5 and companion.coefficients.theta_arr[1] == -0.5
    nu_dip = min_nu_scan(dip.coefficients, dip.init)[1]
    nu_comp = min_nu_scan(companion.coefficients, companion.init)[1]
    assert nu_dip < 0
    # flipping theta1 reduces the early-time dip; the companion still dips slightly (about -0.034)
    assert nu_comp > nu_dip


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gaussevo", "classify", "--preset", "fig2-right-long-dashed"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "GeneralizedCL"
