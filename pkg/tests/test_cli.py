import json
import os
import subprocess
import sys

import pytest

from primecorr import io
from primecorr.cli import main

FIT_KEYS = ["decay_scale", "fit_hi", "fit_lo", "log_intercept", "n_points", "r_squared"]


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


def load(path):
    return json.loads(path.read_text())


def test_acf_outputs(tmp_path, capsys):
    assert run(tmp_path, "acf", "--center", "100000", "--width", "10000") == 0
    cfg, cols = io.read_csv(tmp_path / "acf.csv")
    assert list(cols) == ["lag", "acf"]
    assert float(cols["acf"][0]) == 1.0 and len(cols["lag"]) == 51
    assert cfg["center"] == 100000 and cfg["max_lag"] == 50 and cfg["fit_threshold"] == 0.4
    fit = load(tmp_path / "acf_fit.json")
    assert sorted(fit["fit"]) == FIT_KEYS
    assert fit["config"] == cfg
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["zeta"] == pytest.approx(4.5, rel=0.15)


def test_reruns_are_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["gaps", "--center", "18000", "--width", "4000", "--out", str(d), "--plot", "svg"]) == 0
    for name in ("gaps.csv", "gaps_fit.json", "gap_series.csv", "gaps.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_gaps_schema(tmp_path):
    assert run(tmp_path, "gaps", "--center", "100000", "--width", "10000") == 0
    _, cols = io.read_csv(tmp_path / "gaps.csv")
    assert list(cols) == ["tau", "count", "density"]
    _, series = io.read_csv(tmp_path / "gap_series.csv")
    assert list(series) == ["index", "gap"]
    assert load(tmp_path / "gaps_fit.json")["fit"]["decay_scale"] == pytest.approx(9, rel=0.15)


def test_json_format(tmp_path):
    assert run(tmp_path, "acf", "--center", "18000", "--width", "4000", "--format", "json") == 0
    payload = load(tmp_path / "acf.json")
    assert set(payload) == {"config", "columns"}
    assert payload["config"]["format"] == "json"
    assert list(payload["columns"]) == ["lag", "acf"]


def test_gap_spectrum(tmp_path):
    assert run(tmp_path, "gap-spectrum") == 0
    _, resid = io.read_csv(tmp_path / "gap_residuals.csv")
    assert list(resid) == ["tau", "residual"]
    _, spec = io.read_csv(tmp_path / "gap_spectrum.csv")
    assert list(spec) == ["frequency", "power"]
    peak = load(tmp_path / "gap_peak.json")["peak"]
    assert abs(peak["frequency"] - 1 / 6) <= peak["frequency_resolution"]


def test_vspec(tmp_path):
    assert run(tmp_path, "vspec", "--plot", "svg") == 0
    fit = load(tmp_path / "vspec_fit.json")["fit"]
    assert fit["r_squared"] >= 0.9
    assert (tmp_path / "vspec.svg").read_text().startswith("<?xml")


def test_ky_small(tmp_path):
    argv = ["ky", "--modulus", "1009", "--steps", "4096", "--burn-in", "10", "--alpha", "0.2"]
    assert run(tmp_path, *argv) == 0
    cfg, orbit = io.read_csv(tmp_path / "ky_orbit.csv")
    assert list(orbit) == ["n", "x", "y"] and len(orbit["n"]) == 4096
    assert orbit["n"][0] == "10"
    fit = load(tmp_path / "ky_fit.json")
    assert fit["params"] == {"alpha": 0.2, "modulus": 1009, "seed": 1, "steps": 4096, "burn_in": 10, "y0": 0.0}
    assert cfg["modulus"] == 1009


def test_ky_rejects_composite(tmp_path, capsys):
    assert run(tmp_path, "ky", "--modulus", "1001", "--steps", "600") == 1
    assert "not prime" in capsys.readouterr().err


def test_report_study_windows(tmp_path, capsys):
    assert run(tmp_path, "report", "--jobs", "3") == 0
    _, cols = io.read_csv(tmp_path / "report.csv")
    assert cols["verdict"] == ["poissonian", "poissonian", "anomalous"]
    assert cols["label"] == ["100000:10000", "10000000:100000", "18000:4000"]
    recs = load(tmp_path / "report_records.json")["records"]
    assert all(sorted(r["zeta"]) == FIT_KEYS for r in recs)


def test_report_single_and_synthetic(tmp_path):
    assert run(tmp_path, "report", "--windows", "100000:10000") == 0
    _, cols = io.read_csv(tmp_path / "report.csv")
    assert cols["verdict"] == ["poissonian"]
    assert run(tmp_path, "report", "--windows", "synthetic:14:1000000:5") == 0
    _, cols = io.read_csv(tmp_path / "report.csv")
    assert cols["verdict"] == ["poissonian"] and cols["n0"] == [""]


def test_report_partial_failure(tmp_path, capsys):
    # a synthetic run too short for the ACF fails while the prime window succeeds
    assert run(tmp_path, "report", "--windows", "100000:10000", "synthetic:10:50") == 1
    err = capsys.readouterr().err
    assert "synthetic:10:50:0" in err and "100000:10000" not in err
    _, cols = io.read_csv(tmp_path / "report.csv")
    assert cols["verdict"] == ["poissonian", ""]


def test_invalid_window_exit_code(tmp_path, capsys):
    assert run(tmp_path, "acf", "--center", "100", "--width", "200") == 1
    assert capsys.readouterr().err.startswith("error:")


def test_stationarity_warning(tmp_path):
    with pytest.warns(UserWarning, match="stationarity defect"):
        run(tmp_path, "acf", "--center", "2000", "--width", "1500")


def test_primes_export(tmp_path):
    assert run(tmp_path, "primes", "--lo", "10", "--hi", "30") == 0
    assert (tmp_path / "primes.txt").read_text() == "11\n13\n17\n19\n23\n29\n"
    _, cols = io.read_csv(tmp_path / "primes.csv")
    assert cols["prime"] == ["11", "13", "17", "19", "23", "29"]
    _, gaps = io.read_csv(tmp_path / "gap_series.csv")
    assert gaps == {"index": ["0", "1", "2", "3", "4"], "gap": ["2", "4", "2", "4", "6"]}


def test_signal_csv(tmp_path):
    from primecorr import Window
    from primecorr.telegraph import telegraph_for_window

    sig = telegraph_for_window(Window(15, 10))
    io.write_signal_csv(tmp_path / "v.csv", sig)
    _, cols = io.read_csv(tmp_path / "v.csv")
    assert cols["n"][0] == "10" and set(cols["v"]) == {"1", "-1"}


def test_out_env_and_module_entry(tmp_path):
    env = dict(os.environ, PRIMECORR_OUT=str(tmp_path / "envout"))
    r = subprocess.run(
        [sys.executable, "-m", "primecorr", "acf", "--center", "18000", "--width", "4000"],
        env=env, capture_output=True, text=True,
    )
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "envout" / "acf.csv").exists()


def test_bad_argument_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(tmp_path, "acf", "--format", "xml")
    assert exc.value.code == 2
