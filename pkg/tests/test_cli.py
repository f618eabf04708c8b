"""Command-line tests driven through Typer's runner."""

from pathlib import Path

import numpy as np
import pytest
from typer.testing import CliRunner

from paraxial_tomo import __version__
from paraxial_tomo.cli import app
from paraxial_tomo.core import ComplexField, Grid2D
from paraxial_tomo.formats import read_pgm, read_report, read_rf64, read_wvsg, write_rf64
from paraxial_tomo.inversion import DotTest

runner = CliRunner()


@pytest.fixture(autouse=True)
def quiet_environment(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    for name in ("THREADS", "LOG_FILE", "JSON_LOGS"):
        monkeypatch.delenv(f"PARAXIAL_TOMO_{name}", raising=False)
    monkeypatch.setenv("PARAXIAL_TOMO_LOG_LEVEL", "WARNING")


def verdicts(output: str) -> list[str]:
    return [line for line in output.splitlines() if line.startswith(("PASS", "FAIL"))]


@pytest.fixture
def phantom_file(tmp_path) -> Path:
    path = tmp_path / "disk.rf64"
    result = runner.invoke(app, ["phantom", "--kind", "disk", "--n", "32", "--out", str(path)])
    assert result.exit_code == 0, result.output
    return path


def test_version():
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_phantom_with_rendering(tmp_path):
    result = runner.invoke(
        app,
        ["phantom", "--kind", "shepp-logan", "--n", "48", "--out", "sl.rf64", "--pgm", "sl.pgm"],
    )
    assert result.exit_code == 0, result.output
    field = read_rf64(tmp_path / "sl.rf64")
    assert field.grid == Grid2D.square(48)
    assert (tmp_path / "sl.pgm").read_bytes()[:2] == b"P5"


def test_phantom_requires_output():
    result = runner.invoke(app, ["phantom", "--kind", "disk"])
    assert result.exit_code == 2


def test_forward_reconstruct_metrics_pipeline(tmp_path, phantom_file):
    result = runner.invoke(
        app,
        [
            "forward", "--phantom", str(phantom_file), "--angles", "12",
            "--l-over-lambda", "50", "--out", "s.wvsg", "--threads", "2",
        ],
    )
    assert result.exit_code == 0, result.output
    sino = read_wvsg(tmp_path / "s.wvsg")
    assert (sino.n_angles, sino.n_y) == (12, 32)
    assert sino.params.l_over_lambda == 50.0

    result = runner.invoke(
        app,
        [
            "reconstruct", "--sino", "s.wvsg", "--truth", str(phantom_file), "--out", "r.rf64",
            "--report", "r.txt", "--pgm", "r.pgm", "--filter", "ramlak_hann",
        ],
    )
    assert result.exit_code == 0, result.output
    assert "ncc=" in result.stdout
    report = read_report(tmp_path / "r.txt")
    assert report["angles"] == "12"
    assert report["filter_kind"] == "ramlak_hann"
    assert -1.0 <= float(report["ncc"]) <= 1.0
    assert (tmp_path / "r.window.txt").exists()

    result = runner.invoke(
        app, ["metrics", "--recon", "r.rf64", "--truth", str(phantom_file), "--report", "m.txt"]
    )
    assert result.exit_code == 0, result.output
    assert float(read_report(tmp_path / "m.txt")["ncc"]) == pytest.approx(float(report["ncc"]))


def test_forward_renders_measurements_and_envelope(tmp_path, phantom_file):
    result = runner.invoke(
        app,
        [
            "forward", "--phantom", str(phantom_file), "--angles", "10", "--out", "s.wvsg",
            "--sino-pgm", "s.pgm", "--field-pgm", "v.pgm",
        ],
    )
    assert result.exit_code == 0, result.output
    assert read_pgm(tmp_path / "s.pgm").shape == (10, 32)
    assert read_pgm(tmp_path / "v.pgm").shape == (32, 32)

    sino = read_wvsg(tmp_path / "s.wvsg")
    sino_window = read_report(tmp_path / "s.window.txt")
    assert float(sino_window["window_max"]) == np.abs(sino.values).max()
    # the exit slice of the angle-0 envelope is the first sinogram row
    field_window = read_report(tmp_path / "v.window.txt")
    assert float(field_window["window_min"]) == 0.0
    assert float(field_window["window_max"]) >= np.abs(sino.values[0]).max() * (1 - 1e-12)


def test_thread_count_gives_identical_files(tmp_path, phantom_file):
    outputs = []
    for threads in ("1", "8"):
        sino = f"s{threads}.wvsg"
        recon = f"r{threads}.rf64"
        result = runner.invoke(
            app,
            ["forward", "--phantom", str(phantom_file), "--angles", "72", "--out", sino, "--threads", threads],
        )
        assert result.exit_code == 0, result.output
        result = runner.invoke(app, ["reconstruct", "--sino", sino, "--out", recon, "--threads", threads])
        assert result.exit_code == 0, result.output
        outputs.append(((tmp_path / sino).read_bytes(), (tmp_path / recon).read_bytes()))
    assert outputs[0] == outputs[1]


def test_reconstruct_rejects_complex_truth(tmp_path, phantom_file):
    runner.invoke(app, ["forward", "--phantom", str(phantom_file), "--angles", "4", "--out", "s.wvsg"])
    write_rf64(tmp_path / "c.rf64", ComplexField.zeros(Grid2D.square(32)))
    result = runner.invoke(app, ["reconstruct", "--sino", "s.wvsg", "--truth", "c.rf64", "--out", "r.rf64"])
    assert result.exit_code == 2


def test_forward_missing_phantom_file():
    result = runner.invoke(app, ["forward", "--phantom", "absent.rf64", "--out", "s.wvsg"])
    assert result.exit_code == 2


def test_adjoint_test_passes():
    result = runner.invoke(app, ["adjoint-test", "--n", "24", "--angles", "4", "--seed", "1"])
    assert result.exit_code == 0, result.output
    assert verdicts(result.stdout)[0].startswith("PASS adjoint relative_gap=")


def test_adjoint_test_requires_seed():
    result = runner.invoke(app, ["adjoint-test", "--n", "24", "--angles", "4"])
    assert result.exit_code == 2


def test_adjoint_test_failure_exit_code(mocker):
    mocker.patch("paraxial_tomo.cli.adjoint_dot_test", return_value=DotTest(1j, 0j, 0.5))
    result = runner.invoke(app, ["adjoint-test", "--seed", "3", "--report", "a.txt"])
    assert result.exit_code == 1
    assert "FAIL" in result.stdout
    assert read_report(Path("a.txt"))["passed"] == "false"


def test_internal_error_exit_code(mocker):
    mocker.patch("paraxial_tomo.cli.adjoint_dot_test", side_effect=RuntimeError("boom"))
    result = runner.invoke(app, ["adjoint-test", "--seed", "3"])
    assert result.exit_code == 1


def test_threads_from_environment(monkeypatch, mocker):
    monkeypatch.setenv("PARAXIAL_TOMO_THREADS", "3")
    check = mocker.patch("paraxial_tomo.cli.adjoint_dot_test", return_value=DotTest(0j, 0j, 0.0))
    result = runner.invoke(app, ["adjoint-test", "--seed", "5", "--threads", "8"])
    assert result.exit_code == 0, result.output
    assert check.call_args.args[4] == 3


def test_config_file_and_flag_precedence(tmp_path, mocker):
    (tmp_path / "run.cfg").write_text("grid.n = 40\nangles.count = 6\nseed = 11\n", encoding="utf-8")
    check = mocker.patch("paraxial_tomo.cli.adjoint_dot_test", return_value=DotTest(0j, 0j, 0.0))
    result = runner.invoke(app, ["adjoint-test", "--config", "run.cfg", "--angles", "9"])
    assert result.exit_code == 0, result.output
    grid, angles, _, seed, _ = check.call_args.args
    assert grid.n_x == 40
    assert angles.size == 9
    assert seed == 11


def test_config_unknown_key(tmp_path):
    (tmp_path / "bad.cfg").write_text("seed = 1\ngrid.points = 3\n", encoding="utf-8")
    result = runner.invoke(app, ["adjoint-test", "--config", "bad.cfg"])
    assert result.exit_code == 2
    assert "grid.points" in result.output


def test_riccati_check_flat(tmp_path):
    result = runner.invoke(app, ["riccati-check", "--step", "0.01", "--report", "ric.txt"])
    assert result.exit_code == 0, result.output
    lines = verdicts(result.stdout)
    assert lines[0].startswith("PASS riccati c0_drift=")
    assert lines[1].startswith("PASS riccati closed_form_error=")
    assert read_report(tmp_path / "ric.txt")["profile"] == "flat"


def test_riccati_check_constant_curvature():
    result = runner.invoke(app, ["riccati-check", "--profile", "constant:2.0", "--step", "0.001"])
    assert result.exit_code == 0, result.output
    assert "closed_form" not in result.stdout


def test_riccati_check_bad_profile():
    result = runner.invoke(app, ["riccati-check", "--profile", "curved"])
    assert result.exit_code == 2


def test_xray_single_line(phantom_file):
    result = runner.invoke(app, ["xray", "--phantom", str(phantom_file), "--offset", "0.0"])
    assert result.exit_code == 0, result.output
    assert "intersects=true" in result.stdout
    value = float(result.stdout.split("value=")[1].split()[0])
    assert value == pytest.approx(0.5, abs=0.05)


def test_xray_unit_disk(tmp_path):
    result = runner.invoke(app, ["xray", "--n", "401", "--tolerance", "1e-2", "--report", "x.txt"])
    assert result.exit_code == 0, result.output
    assert len(verdicts(result.stdout)) == 4
    assert all(line.startswith("PASS xray") for line in verdicts(result.stdout))
    assert read_report(tmp_path / "x.txt")["passed"] == "true"


def test_westervelt_check_rejects_coarse_grid():
    result = runner.invoke(app, ["westervelt-check", "--n-x", "100"])
    assert result.exit_code == 2


@pytest.mark.slow
def test_westervelt_check_full():
    result = runner.invoke(app, ["westervelt-check", "--threads", "4"])
    assert result.exit_code == 0, result.output
    assert verdicts(result.stdout) and all(v.startswith("PASS") for v in verdicts(result.stdout))
    assert np.isfinite(float(result.stdout.split("relative_gap=")[-1].split()[0]))
