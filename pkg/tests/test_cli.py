import json
import math
import shutil
import subprocess

import numpy as np
import pytest

from diffrakt.cli import EXIT_CONFIG, EXIT_OK, EXIT_VERIFY, main, parse_grid, ConfigError
from diffrakt.estimators import read_curve_csv
from diffrakt.samplers import read_points_csv


def run(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_density(path):
    rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return rows[:, 0], rows[:, 1]


def test_analytic_thinned_sine(tmp_path, capsys):
    code, _, _ = run(["analytic", "--process", "sine", "--p", "0.5", "--tgrid", "0:3:31", "--out", str(tmp_path)], capsys)
    assert code == EXIT_OK
    t, dens = read_density(tmp_path / "diffraction_density.csv")
    np.testing.assert_allclose(dens, 1 - 0.5 * np.maximum(0, 1 - 0.5 * t), atol=1e-15)
    r, gam = read_density(tmp_path / "gamma_density.csv")
    np.testing.assert_allclose(gam, 1 - np.sinc(r / 0.5) ** 2, atol=1e-15)  # K_p(x) = K(x / p)
    assert (tmp_path / "atoms.csv").read_text().splitlines() == ["location,mass", "0.0,1.0"]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "analytic" and manifest["config"]["p"] == 0.5
    assert set(manifest["files"]) == {"gamma_density.csv", "diffraction_density.csv", "atoms.csv"}
    assert manifest["version"].startswith("0.1.0")


def test_analytic_other_processes(tmp_path, capsys):
    for proc, extra in (("gaf", []), ("cox_cosine", []), ("perm:gauss", ["--d", "2"]), ("renewal", ["--alpha", "0.25"]),
                        ("ginibre", []), ("poisson", [])):
        out = tmp_path / proc.replace(":", "_")
        code, _, err = run(["analytic", "--process", proc, *extra, "--tgrid", "0.5,1,2", "--out", str(out)], capsys)
        assert code == EXIT_OK, err
    _, dens = read_density(tmp_path / "renewal" / "diffraction_density.csv")
    t = np.array([0.5, 1, 2])
    np.testing.assert_allclose(dens, 1 - 0.25 / (1 + math.pi**2 * 0.0625 * t**2), atol=1e-15)
    atoms = (tmp_path / "cox_cosine" / "atoms.csv").read_text().splitlines()
    assert atoms[1:] == ["0.0,1.0", "-1.0,0.25", "1.0,0.25"]


@pytest.mark.parametrize(
    "args",
    [
        ["analytic", "--process", "exp", "--alpha", "0.6"],
        ["analytic", "--process", "bessel"],
        ["analytic", "--process", "sine", "--p", "-1"],
        ["analytic", "--tgrid", "a:b:c"],
        ["sample", "--process", "sine", "--window", "interval:3,3"],
        ["sample", "--process", "sine", "--window", "disk:3"],
        ["sample", "--process", "cpA", "--window", "interval:0,5"],
        ["sample", "--process", "gaf", "--window", "disk:8", "--N", "64"],
        ["sample", "--realizations", "0"],
        ["estimate", "--process", "poisson", "--window", "interval:0,10", "--rmax", "5"],
        ["frobnicate"],
        ["analytic", "--unknown-flag", "1"],
    ],
)
def test_invalid_input_exit_code_and_json_error(tmp_path, capsys, args):
    code, _, err = run([*args, "--out", str(tmp_path)] if args[0] != "frobnicate" else args, capsys)
    assert code == EXIT_CONFIG
    payload = json.loads(err.strip().splitlines()[-1])
    assert set(payload) == {"error", "message"} and payload["message"]


def test_sample_is_byte_identical_for_a_seed(tmp_path, capsys):
    args = ["sample", "--process", "sine", "--window", "interval:0,40", "--realizations", "3", "--seed", "9"]
    assert run([*args, "--out", str(tmp_path / "a")], capsys)[0] == EXIT_OK
    assert run([*args, "--out", str(tmp_path / "b")], capsys)[0] == EXIT_OK
    names = sorted(p.name for p in (tmp_path / "a").glob("points_*.csv"))
    assert names == ["points_0000.csv", "points_0001.csv", "points_0002.csv"]
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    cfg = read_points_csv(tmp_path / "a" / "points_0000.csv")
    assert cfg.window.describe() == "interval:0,40" and cfg.count > 0


def test_threads_do_not_change_output(tmp_path, capsys, monkeypatch):
    args = ["estimate", "--process", "poisson", "--d", "2", "--window", "rect:0,10,0,10", "--realizations", "6",
            "--rmax", "2", "--bins", "10", "--tgrid", "0.5:2:4"]
    assert run([*args, "--out", str(tmp_path / "a")], capsys)[0] == EXIT_OK
    monkeypatch.setenv("DIFFRAKT_THREADS", "4")
    assert run([*args, "--out", str(tmp_path / "b")], capsys)[0] == EXIT_OK
    for name in ("pair_correlation.csv", "scattering.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_config_file_round_trip(tmp_path, capsys):
    args = ["sample", "--process", "gaf", "--window", "disk:2", "--N", "64", "--realizations", "2", "--seed", "5"]
    assert run([*args, "--out", str(tmp_path / "a")], capsys)[0] == EXIT_OK
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    config = dict(manifest["config"], out=str(tmp_path / "b"))
    (tmp_path / "cfg.json").write_text(json.dumps(config))
    assert run(["sample", "--config", str(tmp_path / "cfg.json")], capsys)[0] == EXIT_OK
    for name in manifest["files"]:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    # explicit flags override the file
    assert run(["sample", "--config", str(tmp_path / "cfg.json"), "--seed", "6", "--out", str(tmp_path / "c")],
               capsys)[0] == EXIT_OK
    assert (tmp_path / "c" / "points_0000.csv").read_bytes() != (tmp_path / "a" / "points_0000.csv").read_bytes()


def test_config_file_errors(tmp_path, capsys):
    (tmp_path / "bad.json").write_text('{"procss": "sine"}')
    assert run(["sample", "--config", str(tmp_path / "bad.json")], capsys)[0] == EXIT_CONFIG
    assert run(["sample", "--config", str(tmp_path / "missing.json")], capsys)[0] == EXIT_CONFIG


def test_estimate_outputs(tmp_path, capsys):
    args = ["estimate", "--process", "cox_cosine", "--window", "interval:0,200", "--realizations", "20",
            "--rmax", "3", "--bins", "12", "--tgrid", "0:2:41", "--out", str(tmp_path)]
    assert run(args, capsys)[0] == EXIT_OK
    scat = read_curve_csv(tmp_path / "scattering.csv")
    # the grid points below 2 / diam(W) are dropped
    assert scat.abscissa[0] == pytest.approx(0.05)
    assert scat.n_realizations == 20 and scat.metadata["process"] == "cox_cosine"
    pair = read_curve_csv(tmp_path / "pair_correlation.csv")
    assert len(pair) == 12
    np.testing.assert_allclose(pair.values, 1 + 0.5 * np.cos(2 * np.pi * pair.abscissa), atol=6 * pair.stderr.max())


def test_nystrom_via_grid_size(tmp_path, capsys):
    args = ["sample", "--process", "sine", "--window", "interval:0,10", "--N", "100", "--out", str(tmp_path)]
    assert run(args, capsys)[0] == EXIT_OK


def test_parse_grid():
    np.testing.assert_allclose(parse_grid("0:1:3"), [0, 0.5, 1])
    np.testing.assert_allclose(parse_grid("0.1, 0.2"), [0.1, 0.2])
    with pytest.raises(ConfigError):
        parse_grid("")


def test_verify_and_mutation(capsys):
    code, out, _ = run(["verify"], capsys)
    assert code == EXIT_OK
    assert out.strip().splitlines()[-1] == "14/14 invariants passed"
    code, out, _ = run(["verify", "--mutate", "gaf_h"], capsys)
    assert code == EXIT_VERIFY
    failed = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert any("gaf transform" in line for line in failed)


@pytest.mark.skipif(shutil.which("diffrakt") is None, reason="console script not installed")
def test_console_script(tmp_path):
    proc = subprocess.run(["diffrakt", "analytic", "--process", "gaf", "--tgrid", "1", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    proc = subprocess.run(["diffrakt", "analytic", "--process", "exp", "--alpha", "0.9", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and json.loads(proc.stderr)["error"] == "InvalidProcessError"
