import json

import numpy as np
import pytest

from thzhybrid.errors import SweepError
from thzhybrid.schema import Engines, Metric, RunConfig
from thzhybrid.sweep import (
    CSV_COLUMNS,
    build_sweep,
    metadata_path,
    parse_sweep,
    parse_tau_list,
    run_sweep,
    write_csv,
    write_metadata,
)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def test_list_form():
    assert parse_sweep("array_size_thz=8,16,32") == ("array_size_thz", (8.0, 16.0, 32.0))
    assert parse_sweep("tx_power_thz=70dBm, 43 dBW") == ("tx_power_thz", (70.0, 73.0))


def test_range_forms():
    key, values = parse_sweep("frequency_thz=275GHz:400GHz:6")
    assert key == "frequency_thz"
    assert values == pytest.approx([275e9, 300e9, 325e9, 350e9, 375e9, 400e9])
    assert parse_sweep("density_thz=1e-3:1e-1:3:log")[1] == pytest.approx([1e-3, 1e-2, 1e-1])
    assert parse_sweep("bias_thz=0:20:3:db")[1] == pytest.approx([1.0, 10.0, 100.0])
    assert parse_sweep("tx_power_mm=40dBm:50dBm:3")[1] == pytest.approx([40.0, 45.0, 50.0])


@pytest.mark.parametrize(
    "arg",
    [
        "nokey=1,2",
        "bias_thz",
        "bias_thz=",
        "bias_thz=1:2",
        "bias_thz=1:2:x",
        "bias_thz=1:2:0",
        "bias_thz=1:2:3:cubic",
        "tx_power_thz=60:70:3:db",
        "tx_power_thz=60,70",
        "association_model=1,2",
        "density_thz=0:1:3:log",
    ],
)
def test_malformed_sweeps(arg):
    with pytest.raises(SweepError):
        parse_sweep(arg)


def test_tau_list():
    assert parse_tau_list("-10, 0,20") == (-10.0, 0.0, 20.0)
    assert parse_tau_list("100 lin") == pytest.approx((20.0,))
    assert parse_tau_list(None) == ()
    with pytest.raises(SweepError):
        parse_tau_list("10 W")


def test_metric_engine_mismatch():
    with pytest.raises(SweepError, match="analytic-only"):
        build_sweep(None, Metric.ABSORPTION_COEFFICIENT, None, Engines.BOTH)
    with pytest.raises(SweepError, match="tau"):
        build_sweep(None, Metric.COVERAGE_HYBRID, None, Engines.ANALYTIC)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def test_absorption_sweep_peaks():
    sweep = build_sweep("frequency_thz=275GHz:400GHz:251", Metric.ABSORPTION_COEFFICIENT, None, Engines.ANALYTIC)
    rows = run_sweep(RunConfig(), sweep)
    assert len(rows) == 251
    assert all(r.mc_mean is None and r.n_trials is None for r in rows)
    freqs = np.array([r.sweep_value for r in rows]) / 1e9
    k = np.array([r.analytic_value for r in rows])
    assert np.all(k > 0)
    peaks = freqs[1:-1][(k[1:-1] > k[:-2]) & (k[1:-1] > k[2:])]
    for line in (324.8, 379.7):
        assert np.min(np.abs(peaks - line)) <= 1.0


def test_coverage_rows_follow_sweep_then_tau():
    sweep = build_sweep("array_size_thz=16,64", Metric.COVERAGE_THZ, "0,20", Engines.ANALYTIC)
    rows = run_sweep(RunConfig(), sweep)
    assert [(r.sweep_value, r.tau_db) for r in rows] == [(16.0, 0.0), (16.0, 20.0), (64.0, 0.0), (64.0, 20.0)]
    assert all(0.0 <= r.analytic_value <= 1.0 for r in rows)
    assert rows[1].analytic_value <= rows[0].analytic_value


def test_both_engines_are_deterministic():
    cfg = RunConfig(n_trials=200, master_seed=99)
    sweep = build_sweep("density_thz=1e-3,0.05", Metric.ASSOCIATION, None, Engines.BOTH)
    first = run_sweep(cfg, sweep)
    assert first == run_sweep(cfg, sweep)
    for row in first:
        assert row.n_trials == 200 and row.seed == 99
        assert 0.0 <= row.analytic_value <= 1.0
        assert 0.0 <= row.mc_mean <= 1.0
        assert row.mc_stderr >= 0.0
    assert first[1].analytic_value > first[0].analytic_value


def test_degenerate_tier_leaves_cell_empty():
    cfg = RunConfig(bias_thz=1e30)
    rows = run_sweep(cfg, build_sweep(None, Metric.SE_MM, None, Engines.ANALYTIC))
    assert len(rows) == 1
    assert rows[0].analytic_value is None
    assert rows[0].sweep_key == ""


def test_invalid_point_is_a_sweep_error():
    sweep = build_sweep("frequency_thz=350GHz,450GHz", Metric.ABSORPTION_COEFFICIENT, None, Engines.ANALYTIC)
    with pytest.raises(SweepError, match="frequency_thz"):
        run_sweep(RunConfig(), sweep)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def test_csv_and_metadata(tmp_path):
    cfg = RunConfig()
    sweep = build_sweep("frequency_thz=300GHz,350GHz", Metric.ABSORPTION_COEFFICIENT, None, Engines.ANALYTIC)
    rows = run_sweep(cfg, sweep)
    out = tmp_path / "nested" / "absorption.csv"
    write_csv(rows, out)

    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3
    cells = lines[2].split(",")
    assert cells[0] == "frequency_thz"
    assert float(cells[1]) == 350e9
    assert float(cells[3]) == pytest.approx(0.002115, rel=1e-2)
    assert cells[2] == cells[4] == cells[5] == cells[6] == cells[7] == ""

    meta_file = write_metadata(cfg, sweep, out, "0.1.0")
    assert meta_file == metadata_path(out)
    meta = json.loads(meta_file.read_text(encoding="utf-8"))
    assert meta["csv"] == "absorption.csv"
    assert meta["seed"] == cfg.master_seed
    assert meta["sweep"]["swept_key"] == "frequency_thz"
    assert RunConfig.model_validate(meta["config"]) == cfg
