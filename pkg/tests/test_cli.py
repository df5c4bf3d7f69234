import csv
import io
import json
import subprocess
import sys

import pytest

from conftest import perturbed, planted_coefficients, synthetic_observations
from coldjet.cli import main
from coldjet.io import dump_coefficients, observations_csv, read_observations
from coldjet.model import FluidSpec, ThermalEnvironment, nu_radial, paper_coefficients


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def planted_file(tmp_path):
    path = tmp_path / "planted.json"
    path.write_text(dump_coefficients(planted_coefficients()))
    return path


@pytest.fixture
def obs_file(tmp_path):
    obs = synthetic_observations(planted_coefficients(), FluidSpec(), ThermalEnvironment())
    path = tmp_path / "obs.csv"
    path.write_text(observations_csv(obs))
    return path


def test_props_defaults(capsys):
    code, out, err = run(capsys, "props")
    assert code == 0
    assert abs(float(kv(out)["re"]) - 5851) <= 10
    assert err == ""


def test_props_low_flow_warns(capsys):
    code, out, err = run(capsys, "props", "--flow-lpm", 1)
    assert code == 0
    assert float(kv(out)["re"]) < 2e3
    assert "warning" in err


def test_props_bad_diameter(capsys):
    code, _, err = run(capsys, "props", "--d0-mm", 0)
    assert code == 2
    assert "d0" in err


def test_predict_center_row(capsys):
    code, out, _ = run(capsys, "predict", "--coeffs", "paper", "--h-mm", "10", "--r-mm", "0")
    assert code == 0
    assert out.splitlines()[0] == "h_mm,r_mm,nu,delta_t_c"
    assert float(rows(out)[0]["nu"]) == pytest.approx(61.1, abs=0.1)


def test_predict_origin(capsys):
    code, out, _ = run(capsys, "predict", "--coeffs", "paper", "--h-mm", "0", "--r-mm", "0")
    assert code == 0
    assert float(rows(out)[0]["nu"]) == pytest.approx(61.1, abs=0.1)


def test_predict_grid(capsys):
    code, out, _ = run(capsys, "predict", "--coeffs", "conventional",
                       "--h-mm", "10,30", "--r-mm", "0,20,40")
    assert code == 0
    assert len(rows(out)) == 6


def test_predict_missing_key(capsys, tmp_path):
    doc = paper_coefficients().as_dict()
    del doc["gamma"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "predict", "--coeffs", path, "--h-mm", "10", "--r-mm", "0")
    assert code == 2
    assert "gamma" in err


def test_fit_zero_noise(capsys, tmp_path, obs_file):
    init = tmp_path / "init.json"
    init.write_text(dump_coefficients(perturbed(planted_coefficients())))
    out_path = tmp_path / "fitted.json"
    code, out, _ = run(capsys, "fit", "--obs", obs_file, "--init", init, "--out", out_path)
    assert code == 0
    summary = kv(out)
    assert summary["r_squared"] == "1.000000"
    assert float(summary["rmse_c"]) < 1e-6
    assert float(summary["n"]) == 4.0
    fitted = json.loads(out_path.read_text())
    assert set(fitted) == {"alpha", "beta", "gamma", "n", "a", "b", "c", "f", "g", "fluid", "env"}


def test_fit_noisy(capsys, tmp_path):
    obs = synthetic_observations(planted_coefficients(), FluidSpec(), ThermalEnvironment(),
                                 sigma=0.05, seed=5)
    obs_path = tmp_path / "noisy.csv"
    obs_path.write_text(observations_csv(obs))
    init = tmp_path / "init.json"
    init.write_text(dump_coefficients(perturbed(planted_coefficients())))
    code, out, _ = run(capsys, "fit", "--obs", obs_path, "--init", init,
                       "--out", tmp_path / "f.json")
    assert code == 0
    assert float(kv(out)["r_squared"]) >= 0.95


def test_fit_too_few_rows(capsys, tmp_path, obs_file):
    small = tmp_path / "small.csv"
    small.write_text("\n".join(obs_file.read_text().splitlines()[:6]) + "\n")
    code, _, err = run(capsys, "fit", "--obs", small, "--out", tmp_path / "f.json")
    assert code == 2
    assert "at least 9" in err


def test_fit_nonconvergence_exit_3(capsys, tmp_path, obs_file):
    out_path = tmp_path / "f.json"
    code, _, err = run(capsys, "fit", "--obs", obs_file, "--init", "conventional",
                       "--max-iter", 1, "--n-grid", "4", "--out", out_path)
    assert code == 3
    assert out_path.exists()


def test_threshold_planted(capsys, planted_file):
    code, out, _ = run(capsys, "threshold", "--coeffs", planted_file, "--nu-star", 10)
    assert code == 0
    assert out.splitlines()[0] == "h_mm,nu_star,r_star_mm,lcsgdt_mm,status"
    c = planted_coefficients()
    for row in rows(out):
        assert row["status"] == "ok"
        r = float(row["r_star_mm"]) * 1e-3
        assert float(row["lcsgdt_mm"]) == 2 * float(row["r_star_mm"])
        assert nu_radial(c, FluidSpec(), r, float(row["h_mm"]) * 1e-3) == pytest.approx(10, rel=1e-6)


def test_threshold_zero_nu_star(capsys):
    code, _, _ = run(capsys, "threshold", "--coeffs", "conventional", "--nu-star", 0)
    assert code == 2


def test_threshold_paper_no_crossing(capsys):
    code, out, err = run(capsys, "threshold", "--coeffs", "paper", "--diagnostic")
    assert code == 0
    table = rows(out)
    assert [r["status"] for r in table] == ["no-crossing"] * 5
    assert [float(r["paper_table1_value"]) for r in table] == [0.923, 0.925, 0.924, 0.920, 0.919]


def test_plan_line(capsys):
    code, out, _ = run(capsys, "plan", "--length-mm", 400, "--lcsgdt-mm", 131.4)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x_mm"
    assert [float(x) for x in lines[1:5]] == pytest.approx([50, 150, 250, 350])
    assert lines[-1] == "# count=4 spacing_x=100.0"


def test_plan_grid(capsys):
    code, out, _ = run(capsys, "plan", "--width-mm", 400, "--height-mm", 300, "--lcsgdt-mm", 131.4)
    assert code == 0
    assert out.splitlines()[-1].startswith("# count=12 ")


def test_plan_bad_args(capsys):
    assert run(capsys, "plan", "--lcsgdt-mm", 131.4)[0] == 2
    assert run(capsys, "plan", "--length-mm", -1, "--lcsgdt-mm", 131.4)[0] == 2


def test_synth_ingest_fit_round_trip(capsys, tmp_path, planted_file):
    obs_paths = []
    for h in (10, 16, 22, 25, 30, 40, 50):
        prefix = tmp_path / f"h{h}"
        assert run(capsys, "synth", "--coeffs", planted_file, "--h-mm", h, "--size", 81,
                   "--sigma", 0, "--out", prefix)[0] == 0
        obs = tmp_path / f"obs{h}.csv"
        code, _, err = run(capsys, "ingest", "--before", f"{prefix}_before.csv",
                           "--after", f"{prefix}_after.csv", "--pitch-mm", 1,
                           "--h-mm", h, "--out", obs)
        assert code == 0
        assert "center_px=40.0000,40.0000" in err
        obs_paths.append(obs)
    init = tmp_path / "init.json"
    init.write_text(dump_coefficients(perturbed(planted_coefficients())))
    code, out, _ = run(capsys, "fit", "--obs", *obs_paths, "--init", init,
                       "--out", tmp_path / "fit.json")
    assert code == 0
    assert float(kv(out)["rmse_c"]) < 1e-6


def test_synth_deterministic(capsys, tmp_path):
    for name in ("a", "b"):
        assert run(capsys, "synth", "--coeffs", "conventional", "--h-mm", 30, "--size", 21,
                   "--seed", 9, "--out", tmp_path / name)[0] == 0
    assert (tmp_path / "a_after.csv").read_bytes() == (tmp_path / "b_after.csv").read_bytes()
    assert (tmp_path / "a_before.csv").read_bytes() == (tmp_path / "b_before.csv").read_bytes()


def test_ingest_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "ingest", "--before", tmp_path / "nope.csv",
                     "--after", tmp_path / "nope.csv", "--pitch-mm", 1, "--h-mm", 10)
    assert code == 2


def test_diagnose_paper(capsys):
    code, out, _ = run(capsys, "diagnose", "--coeffs", "paper")
    assert code == 0
    info = kv(out.split("[table1]")[0])
    assert float(info["h_switch_mm"]) == pytest.approx(24.0)
    assert float(info["gap"]) == pytest.approx(2256 - 61.1, abs=2)
    for section in ("[continuity]", "[table1]", "[tails]", "[center_dt]"):
        assert section in out


def test_diagnose_conventional(capsys):
    code, out, _ = run(capsys, "diagnose", "--coeffs", "conventional")
    assert code == 0
    assert "[center_dt]" in out


def test_diagnose_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "diagnose", "--coeffs", tmp_path / "none.json")
    assert code == 2
    assert "not found" in err


def test_outputs_reproducible(capsys):
    a = run(capsys, "diagnose", "--coeffs", "paper")[1]
    b = run(capsys, "diagnose", "--coeffs", "paper")[1]
    assert a == b


def test_help_documents_formats():
    out = subprocess.run([sys.executable, "-m", "coldjet", "fit", "--help"],
                         capture_output=True, text=True, check=True).stdout
    for token in ("--obs", "--init", "--out", "r_mm,h_mm,delta_t_c", "--flow-lpm"):
        assert token in out
    out = subprocess.run([sys.executable, "-m", "coldjet", "--help"],
                         capture_output=True, text=True, check=True).stdout
    for cmd in ("props", "predict", "fit", "threshold", "plan", "ingest", "synth", "diagnose"):
        assert cmd in out
