import io
import json

import pytest

from spectrum_statics.cli import main


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def test_solve_prints_json():
    code, text = run(["solve", "--market", "monopoly", "--C", "1"])
    assert code == 0
    data = json.loads(text)
    assert data["q_m"] == pytest.approx(0.25)
    assert data["T"] == pytest.approx(0.15625)


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "s.yaml"
    cfg.write_text("market: monopoly\nC: 5\np_max: 1\n")
    _, text = run(["solve", "--config", str(cfg), "--C", "1"])
    assert json.loads(text)["q_m"] == pytest.approx(0.25)


def test_sweep_writes_file(tmp_path):
    out = tmp_path / "sweep.csv"
    code, text = run(["sweep", "--market", "pc_whitespace", "--C", "1", "--sweep", "W",
                      "--lo", "0", "--hi", "1", "--steps", "5", "--output", str(out)])
    assert code == 0
    assert out.read_text().count("\n") == 6
    assert str(out) in text


def test_sweep_to_stdout_json():
    code, text = run(["sweep", "--market", "duopoly", "--C1", "0.5", "--C2", "0.5",
                      "--sweep", "C1,C2", "--sweep-mode", "add", "--lo", "0", "--hi", "1",
                      "--steps", "2", "--format", "json"])
    assert code == 0
    assert json.loads(text)[0]["T"] == pytest.approx(8 / 49)


def test_figures_write_file_set(tmp_path):
    code, _ = run(["figures", "1", "2", "--output-dir", str(tmp_path), "--points", "11"])
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["figure1.csv", "figure2.csv"]


def test_invest_defaults_to_clearing_price():
    code, text = run(["invest", "--C", "1", "--Ce", "1"])
    data = json.loads(text)
    assert code == 0
    assert data["unit_prices"][0] == pytest.approx(1 / 36)
    assert data["clears"]


def test_invest_game():
    code, text = run(["invest", "--mode", "game", "--pe1", "0.02", "--pe2", "0.05",
                      "--Ce1", "3", "--Ce2", "3"])
    assert code == 0
    assert len(json.loads(text)["purchases"]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--market", "monopoly"],
        ["solve", "--market", "monopoly", "--C", "-1"],
        ["solve", "--market", "monopoly", "--C", "abc"],
        ["sweep", "--market", "monopoly", "--C", "1", "--sweep", "C", "--lo", "0", "--hi", "1",
         "--steps", "1"],
        ["figures", "9"],
        ["solve", "--config", "/nonexistent/x.yaml"],
        ["bogus"],
    ],
)
def test_validation_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        code, _ = run(argv)
        raise SystemExit(code)
    assert exc.value.code == 1
    assert capsys.readouterr().err


def test_convergence_error_exits_2(monkeypatch, capsys):
    from spectrum_statics import cli
    from spectrum_statics.errors import ConvergenceError

    def boom(*a, **k):
        raise ConvergenceError("did not settle")

    monkeypatch.setattr(cli, "solve_investment_game", boom)
    code, _ = run(["invest", "--mode", "game"])
    assert code == 2
    assert "did not settle" in capsys.readouterr().err
