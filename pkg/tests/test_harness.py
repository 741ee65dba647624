import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlsasym import cli
from nlsasym.harness import SCHEMA_VERSION, ConfigError, ExperimentConfig, fit_rate


@given(st.floats(-5, 0.5), st.floats(0.01, 100), st.integers(4, 8))
def test_fit_recovers_power_law(p, c, n):
    ts = np.geomspace(10, 1000, n)
    f = fit_rate(ts, c * ts**p)
    assert abs(f.slope - p) < 1e-10 and f.r_squared > 1 - 1e-12


def test_fit_exact_three_quarters():
    ts = [25.0, 50.0, 100.0, 200.0, 400.0]
    f = fit_rate(ts, [t**-0.75 for t in ts])
    assert abs(f.slope + 0.75) <= 1e-12 and f.n_fit == 5


def test_fit_uses_largest_times():
    ts = [1.0, 10.0, 100.0, 1000.0, 1e4]
    errs = [1.0, 0.5, 1e-2, 1e-3, 1e-4]  # first point off the power law
    f = fit_rate(ts, errs, fit_last=4)
    assert f.n_fit == 4 and f.slope < -0.9


def test_fit_rejects_bad_input():
    with pytest.raises(ValueError):
        fit_rate([1, 2, 3], [1, 2, 3])
    with pytest.raises(ValueError):
        fit_rate([1, 2, 3, 4], [1, 0, 1, 1])


def test_degenerate_flag():
    f = fit_rate([1, 2, 3, 4, 5], [1, 3, 0.5, 2, 1])
    assert f.degenerate and np.isfinite(f.slope)


def test_config_defaults_and_overrides():
    cfg = ExperimentConfig.from_dict({"initial_data": {"family": "gaussian"}}, "rates-nls")
    assert cfg["initial_data"]["amplitude"] == 0.5 and cfg["scattering"]["n_z"] == 601
    cfg2 = cfg.override(quad_tol=1e-9)
    assert cfg2["quad_tol"] == 1e-9 and cfg["quad_tol"] == 1e-12


@pytest.mark.parametrize("bad", [
    {"initial_data": {"family": "sech", "amplitude": 1.5}},
    {"quad_tol": 0},
    {"unknown": 1},
    {"schema_version": "2.0"},
    {"pde": {"dt": -1}},
])
def test_config_rejects(bad):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(bad)


def test_cli_scatter_writes_outputs(tmp_path):
    rc = cli.main(["scatter", "--out", str(tmp_path), "--tol", "1e-9"])
    assert rc == 0
    summary = json.loads((tmp_path / "scatter_summary.json").read_text())
    assert summary["schema_version"] == SCHEMA_VERSION and summary["passed"]
    assert summary["config"]["scattering"]["tol"] == 1e-9
    assert "kernel_backend" in summary["provenance"]
    header = (tmp_path / "scatter_data.csv").read_text().splitlines()[0]
    assert header.startswith("z,re_a")


def test_cli_failed_check_gives_exit_1(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"thresholds": {"unitarity": 1e-30}}))
    assert cli.main(["scatter", "--config", str(cfg), "--out", str(tmp_path)]) == 1


def test_cli_bad_config_gives_exit_2(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"quad_tol": "small"}))
    assert cli.main(["alpha", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert "invalid config" in capsys.readouterr().err
    assert cli.main(["scatter", "--tol", "-1", "--out", str(tmp_path)]) == 2


def test_cli_alpha(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"z0_values": [0.3, -0.45]}))
    assert cli.main(["alpha", "--config", str(cfg), "--out", str(tmp_path), "--threads", "2"]) == 0
    rows = (tmp_path / "alpha_coefficients.csv").read_text().splitlines()
    assert len(rows) == 1 + 2 * 12


def test_cli_evolve_small(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"initial_data": {"family": "gaussian"}, "t_schedule": [1.0, 2.0],
                               "pde": {"half_width": 100.0, "n": 2048, "dt": 0.01, "snapshot_stride": 16}}))
    assert cli.main(["evolve", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    s = json.loads((tmp_path / "evolve_summary.json").read_text())
    assert s["results"]["mass_drift_rel"] < 1e-12


def test_cli_requires_command():
    with pytest.raises(SystemExit):
        cli.main([])


def test_fit_constant_errors():
    f = fit_rate(np.geomspace(10, 1000, 5), np.full(5, 1.5))
    assert abs(f.slope) < 1e-12 and f.r_squared == 1.0
