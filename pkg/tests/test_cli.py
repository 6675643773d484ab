import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from waveguide_memory import AmplitudeTrace, ReservoirSpec, blp_measure
from waveguide_memory.cli import main
from waveguide_memory.sweeps import interior_minimum, is_monotone


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


def read_long_csv(path):
    rows = {}
    with open(path) as fh:
        for r in csv.DictReader(fh):
            rows.setdefault(r["kind"], []).append((float(r["axis_value"]), float(r["observable"])))
    return {k: np.array(v) for k, v in rows.items()}


# --- solve -------------------------------------------------------------------


def test_solve_hermitian(tmp_path, capsys):
    assert run(tmp_path, "solve", "--kind", "hermitian", "--alphaL", "3.14159") == 0
    assert "hermitian: alpha L = 3.14159" in capsys.readouterr().out
    tr = AmplitudeTrace.from_csv(tmp_path / "trace.csv")
    assert abs(tr.f[-1]) ** 2 == pytest.approx(1.0, abs=1e-5)
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["kind"] == "hermitian" and report["gamma"] == 0.0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["files"] == ["report.json", "trace.csv"] and manifest["command"] == "solve"


def test_solve_lorentzian_value(tmp_path):
    assert run(tmp_path, "solve", "--kind", "lorentzian", "--gamma", "2", "--alphaL", "1") == 0
    tr = AmplitudeTrace.from_csv(tmp_path / "trace.csv")
    assert tr.f[-1] == pytest.approx(0.6597, abs=1e-4)


def test_solve_svg(tmp_path):
    assert run(tmp_path, "solve", "--kind", "uniform", "--alphaL", "2", "--format", "svg") == 0
    text = (tmp_path / "trace.svg").read_text()
    assert text.startswith("<svg") or text.startswith("<?xml")
    assert not (tmp_path / "trace.csv").exists()


def test_solve_csv_report_roundtrip(tmp_path):
    assert run(tmp_path, "solve", "--kind", "gaussian", "--alphaL", "12") == 0
    report = json.loads((tmp_path / "report.json").read_text())
    spec = ReservoirSpec("gaussian", 1.0, 2.0)
    tr = AmplitudeTrace.from_csv(tmp_path / "trace.csv", spec)
    assert blp_measure(tr) == pytest.approx(report["blp"], abs=1e-10)
    assert report["L"] == pytest.approx(tr.length, rel=1e-12)


def test_solve_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(d, "solve", "--kind", "uniform", "--alphaL", "5", "--detuning", "0.5") == 0
    for name in ("trace.csv", "report.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["solve"],
        ["solve", "--kind", "cauchy"],
        ["solve", "--kind", "uniform", "--gamma", "-1"],
        ["solve", "--kind", "hermitian", "--gamma", "1"],
        ["solve", "--kind", "uniform", "--format", "png"],
        ["solve", "--kind", "gaussian", "--gamma", "500"],
        ["series", "--kind", "uniform", "--order", "1"],
    ],
)
def test_usage_errors_exit_two(tmp_path, argv, capsys):
    try:
        code = run(tmp_path, *argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


# --- series ------------------------------------------------------------------


def test_series_lorentzian(tmp_path, capsys):
    assert run(tmp_path, "series", "--kind", "lorentzian", "--gamma", "2", "--order", "4") == 0
    doc = json.loads((tmp_path / "series.json").read_text())
    re = [c[0] for c in doc["coefficients"]]
    assert re == pytest.approx([1, 0, -0.5, 1 / 6, 0], abs=1e-15)
    assert doc["max_abs_diff"] < 1e-12


def test_series_hermitian_cosine(tmp_path):
    assert run(tmp_path, "series", "--kind", "hermitian", "--order", "6") == 0
    lines = (tmp_path / "series.csv").read_text().splitlines()
    assert lines[0] == "n,re_f,im_f,reference,abs_diff"
    re = [float(l.split(",")[1]) for l in lines[1:]]
    assert re == pytest.approx([1, 0, -1 / 2, 0, 1 / 24, 0, -1 / 720], abs=1e-15)


def test_series_gaussian_quartic(tmp_path):
    assert run(tmp_path, "series", "--kind", "gaussian", "--gamma", "2", "--order", "4") == 0
    doc = json.loads((tmp_path / "series.json").read_text())
    assert doc["coefficients"][4][0] == pytest.approx((1 + 4 / math.log(256)) / 24, rel=1e-14)


def test_series_mismatch_exits_one(tmp_path, monkeypatch):
    import waveguide_memory.cli as cli

    monkeypatch.setattr(cli, "closed_form_coefficients", lambda spec, order: [1.0, 0.0, 0.0])
    assert run(tmp_path, "series", "--kind", "uniform", "--order", "4") == 1
    assert (tmp_path / "manifest.json").exists()


# --- sweep -------------------------------------------------------------------


def test_sweep_fig2(tmp_path):
    assert run(tmp_path, "sweep", "fig2", "--alphaL", "3", "--format", "csv,svg") == 0
    rows = read_long_csv(tmp_path / "fig2.csv")
    assert set(rows) == {"lorentzian", "gaussian", "uniform", "hermitian"}
    z, T = rows["hermitian"].T
    assert np.max(np.abs(T - np.cos(z) ** 2)) < 1e-5
    assert (tmp_path / "fig2.svg").exists()


def test_sweep_fig3(tmp_path):
    assert run(tmp_path, "sweep", "fig3", "--kind", "lorentzian", "--alphaL", "2") == 0
    rows = read_long_csv(tmp_path / "fig3.csv")
    assert set(rows) == {"lorentzian", "markov_lorentzian"}


def test_sweep_fig4_monotone(tmp_path):
    assert run(tmp_path, "sweep", "fig4", "--alphaz", "0.785398", "--points", "12") == 0
    rows = read_long_csv(tmp_path / "fig4_az0.785398.csv")
    for label, data in rows.items():
        assert is_monotone(data[:, 1], tol=1e-6), label


def test_sweep_fig4_minimum(tmp_path):
    assert run(tmp_path, "sweep", "fig4", "--alphaz", "3.14159", "--alphaz", "2.356194", "--points", "16") == 0
    for name in ("fig4_az2.356194.csv", "fig4_az3.141590.csv"):
        for label, data in read_long_csv(tmp_path / name).items():
            assert interior_minimum(data[:, 0], data[:, 1], log_axis=True) is not None, (name, label)


def test_sweep_fig5_hermitian_point(tmp_path):
    argv = ["sweep", "fig5", "--kind", "lorentzian", "--alphaL", "314.159265358979", "--points", "2",
            "--gamma-min", "4", "--gamma-max", "8", "--step", "2e-3", "--jobs", "2"]
    assert run(tmp_path, *argv) == 0
    data = read_long_csv(tmp_path / "fig5.csv")["lorentzian"]
    assert data[0, 0] == 0.0
    assert data[0, 1] == pytest.approx(100.0, abs=1e-2)
    assert is_monotone(data[:, 1], increasing=False)


def test_sweep_is_deterministic(tmp_path):
    for d in ("a", "b"):
        assert run(tmp_path / d, "sweep", "fig4", "--alphaz", "1.0", "--points", "4") == 0
    name = "fig4_az1.000000.csv"
    assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_module_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "waveguide_memory", "series", "--kind", "uniform", "--order", "4",
         "--out", str(tmp_path), "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert out.returncode == 0, out.stderr
    assert "f_4" in out.stdout
