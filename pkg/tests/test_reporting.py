import csv
import json
import random

import numpy as np
import pytest

from spectrum_statics.errors import ConfigError
from spectrum_statics.reporting import (
    ScenarioConfig,
    emit,
    figure_suite,
    load_config,
    render,
    run_sweep,
    solve_config,
    sweep_records,
)


def _config(**kw):
    base = dict(market="monopoly", C=1.0, sweep="C", sweep_mode="add", lo=0.0, hi=2.0, steps=201)
    base.update(kw)
    return ScenarioConfig.from_mapping(base)


def test_monopoly_sweep_starts_at_reference_and_rises():
    rows = run_sweep(_config())
    assert len(rows) == 201
    assert rows[0].T == pytest.approx(0.15625, abs=1e-12)
    T = [r.T for r in rows]
    assert all(b >= a - 1e-12 for a, b in zip(T, T[1:]))
    assert [r.value for r in rows] == sorted(r.value for r in rows)


def test_whitespace_sweep_initially_falls():
    cfg = _config(market="monopoly_whitespace", sweep="W", sweep_mode="set", W=0.0, hi=0.01,
                  steps=11, derivatives=True)
    rows = run_sweep(cfg)
    assert rows[1].T < rows[0].T
    assert rows[0].derivatives["dT_dvalue"] == pytest.approx(-1 / 32, abs=1e-6)


def test_pc_whitespace_sweep_flat_then_rising():
    cfg = _config(market="pc_whitespace", sweep="W", sweep_mode="set", W=0.0, steps=21,
                  derivatives=True)
    rows = run_sweep(cfg)
    T = [r.T for r in rows]
    assert all(b >= a - 1e-12 for a, b in zip(T, T[1:]))
    assert abs(rows[0].derivatives["dT_dvalue"]) < 1e-6
    assert T[-1] > T[0]


def test_rows_satisfy_invariants():
    cfg = _config(market="duopoly_whitespace", C1=0.5, C2=0.5, W=0.0, sweep="W", sweep_mode="set")
    rows = run_sweep(cfg)
    for row in random.Random(0).sample(rows, 10):
        assert row.T == pytest.approx(row.R_total + row.S, abs=1e-9)
        out = solve_config(cfg, W=row.value)
        out.check()
        assert all(np.isfinite(list(row.as_dict().values())))


def test_parallel_sweep_matches_serial():
    cfg = _config(market="pc_whitespace", sweep="W", sweep_mode="set", W=0.0, steps=17)
    assert render(sweep_records(cfg, run_sweep(cfg, workers=4))) == render(sweep_records(cfg, run_sweep(cfg)))


def test_multi_parameter_sweep():
    cfg = _config(market="duopoly", C1=0.5, C2=0.5, sweep="C1,C2", sweep_scale=0.5, steps=3)
    rows = run_sweep(cfg)
    assert rows[0].T == pytest.approx(8 / 49, abs=1e-12)
    assert rows[1].T == pytest.approx(0.24, abs=1e-12)


@pytest.mark.parametrize(
    "change,field",
    [
        (dict(market="oligopoly"), "market"),
        (dict(C=None, sweep=None), "C"),
        (dict(steps=1), "steps"),
        (dict(lo=3.0), "hi"),
        (dict(format="xml"), "format"),
        (dict(sweep="z"), "sweep"),
        (dict(colour="red"), "colour"),
        (dict(C="one"), "C"),
    ],
)
def test_config_validation_names_field(change, field):
    with pytest.raises(ConfigError, match=f"^{field}:"):
        _config(**change)


def test_power_latency_needs_exponent():
    cfg = ScenarioConfig.from_mapping(dict(market="monopoly", C=1.0, latency="power-latency"))
    with pytest.raises(ConfigError, match="latency_k"):
        solve_config(cfg)
    cfg = cfg.replace(latency_k=2.0)
    assert solve_config(cfg).wardrop_residual() < 1e-12


def test_load_config(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text("market: duopoly\nC1: 1\nC2: 0.5\n")
    cfg = ScenarioConfig.from_mapping(load_config(path))
    assert solve_config(cfg).quantities["1"] == pytest.approx(5 / 23)
    with pytest.raises(ConfigError, match="config"):
        load_config(tmp_path / "missing.yaml")
    (tmp_path / "bad.yaml").write_text("- a\n- b\n")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "bad.yaml")


def test_emit_csv_shape(tmp_path):
    cfg = _config(steps=3)
    path = emit(sweep_records(cfg, run_sweep(cfg)), "csv", tmp_path / "out.csv")
    text = path.read_bytes().decode()
    assert text.endswith("\n")
    lines = text.splitlines()
    assert len(lines) == 4
    assert lines[0] == "value,q_m,p_m,lambda,R_total,S,T"
    assert lines[1].split(",")[-1] == "0.15625"


def test_emit_is_byte_identical(tmp_path):
    cfg = _config(market="monopoly_whitespace", sweep="W", sweep_mode="set", W=0.0, steps=9)
    a = emit(sweep_records(cfg, run_sweep(cfg)), "csv", tmp_path / "a.csv").read_bytes()
    b = emit(sweep_records(cfg, run_sweep(cfg)), "csv", tmp_path / "b.csv").read_bytes()
    assert a == b


def test_json_roundtrip_exact(tmp_path):
    cfg = _config(market="pc_whitespace", sweep="W", sweep_mode="set", W=0.0, steps=5)
    records = sweep_records(cfg, run_sweep(cfg))
    path = emit(records, "json", tmp_path / "out.json")
    assert json.loads(path.read_text()) == records


def test_emit_reports_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match=str(blocker)):
        emit([{"a": 1.0}], "csv", blocker / "sub" / "out.csv")


def test_csv_uses_twelve_digits():
    text = render([{"x": 1 / 3}], "csv")
    assert text == "x\n0.333333333333\n"
    assert list(csv.reader(text.splitlines()))[1] == ["0.333333333333"]


def test_figure_columns():
    expected = {
        1: ["w", "T_monopoly", "T_monopoly_whitespace", "T_duopoly", "T_duopoly_whitespace",
            "T_pc", "T_pc_whitespace"],
        2: ["w", "T_monopoly", "T_duopoly_entrant"],
        3: ["w", "R_total_monopoly", "R_total_duopoly_entrant"],
        4: ["w", "S_monopoly", "S_duopoly_entrant"],
        5: ["w", "pe_monopoly", "pe_planner_1", "pe_planner_2"],
    }
    grid = np.linspace(0, 2, 5)
    for fig, cols in expected.items():
        assert list(figure_suite(fig, grid=grid).columns) == cols


def test_figure_limits_at_zero():
    f2 = figure_suite(2, grid=[0.0])
    assert f2.columns["T_monopoly"][0] == pytest.approx(0.15625, abs=1e-12)
    assert f2.columns["T_duopoly_entrant"][0] == pytest.approx(0.15625, abs=1e-6)
    f5 = figure_suite(5, grid=[0.0, 1.0])
    assert f5.columns["pe_monopoly"][0] == pytest.approx(1 / 16)
    assert f5.columns["pe_monopoly"][1] == pytest.approx(1 / 36)


def test_figure_rejects_unknown_id():
    with pytest.raises(ConfigError):
        figure_suite(6)
