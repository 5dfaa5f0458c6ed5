import math
import os

import pytest

from bingham_filter.bingham import BinghamParams
from bingham_filter.cli import run
from bingham_filter.evalsuite import ScenarioConfig


@pytest.fixture
def scenario(tmp_path):
    cfg = ScenarioConfig(
        steps=8,
        runs=3,
        seed=11,
        system_noise=BinghamParams.from_mode(0.1, -20.0),
        meas_noise=BinghamParams.from_mode(0.0, -4.0),
    )
    path = tmp_path / "scenario.cfg"
    path.write_text(cfg.to_text())
    return path


def test_figures_uniform(tmp_path):
    out = tmp_path / "pdf.csv"
    assert run(["figures", "--z1", "0", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "theta_rad,z1,pdf"
    assert {float(ln.split(",")[2]) for ln in lines[1:]} == {float(f"{1 / (2 * math.pi):.15g}")}


def test_figures_default_and_kld(tmp_path):
    out, kld = tmp_path / "pdf.csv", tmp_path / "kld.csv"
    assert run(["figures", "--resolution", "36", "--out", str(out), "--kld-out", str(kld)]) == 0
    assert len(out.read_text().splitlines()) == 1 + 3 * 36
    assert kld.read_text().splitlines()[0] == "z1,kld_nats"
    assert len(kld.read_text().splitlines()) == 4


def test_simulate_twice_identical(tmp_path, scenario, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["simulate", "--config", str(scenario), "--out", str(a)]) == 0
    assert run(["simulate", "--config", str(scenario), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "mean_err_bingham_rad" in capsys.readouterr().out


def test_seed_override(tmp_path, scenario):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["simulate", "--config", str(scenario), "--out", str(a)])
    run(["simulate", "--config", str(scenario), "--out", str(b), "--seed", "99", "-q"])
    assert a.read_bytes() != b.read_bytes()


def test_unknown_flag(tmp_path, capsys):
    out = tmp_path / "x.csv"
    assert run(["figures", "--out", str(out), "--nope"]) == 1
    assert "usage" in capsys.readouterr().err
    assert not out.exists()


def test_missing_command():
    assert run([]) == 1


def test_missing_output_dir(tmp_path):
    assert run(["figures", "--out", str(tmp_path / "no" / "x.csv")]) == 1


def test_simulate_requires_config(tmp_path):
    assert run(["simulate", "--out", str(tmp_path / "x.csv")]) == 1


def test_config_parse_failure(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("steps = ten\n")
    assert run(["simulate", "--config", str(bad), "--out", str(tmp_path / "x.csv")]) == 2
    assert run(["simulate", "--config", str(tmp_path / "absent.cfg"), "--out", str(tmp_path / "x.csv")]) == 2


def test_numeric_failure_leaves_no_output(tmp_path, monkeypatch, scenario, capsys):
    from bingham_filter import cli
    from bingham_filter.errors import ConcentrationOverflowError

    def boom(*args, **kwargs):
        raise ConcentrationOverflowError("synthetic")

    monkeypatch.setattr(cli, "write_errors_csv", boom)
    out = tmp_path / "x.csv"
    assert run(["simulate", "--config", str(scenario), "--out", str(out)]) == 3
    assert "simulate" in capsys.readouterr().err
    assert os.listdir(tmp_path) == ["scenario.cfg"]


def test_threads_env(tmp_path, monkeypatch, scenario):
    monkeypatch.setenv("BINGHAM_THREADS", "0")
    assert run(["simulate", "--config", str(scenario), "--out", str(tmp_path / "x.csv")]) == 1
    monkeypatch.setenv("BINGHAM_THREADS", "4")
    assert run(["simulate", "--config", str(scenario), "--out", str(tmp_path / "x.csv")]) == 0


def test_selftest(tmp_path, capsys):
    report = tmp_path / "report.txt"
    assert run(["selftest", "--out", str(report)]) == 0
    out = capsys.readouterr().out
    assert "composed covariance vs Monte Carlo" in out
    assert all(line.startswith("PASS") for line in out.splitlines())
    assert report.read_text() == out


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
