import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectrum_statics.curves import make_linear_demand, make_power_latency
from spectrum_statics.errors import DomainError
from spectrum_statics.monopoly import (
    MonopolyScenario,
    MonopolyWhitespaceScenario,
    fixed_point_residual,
    marginal_whitespace,
    monopoly_closed_form_linear,
    monopoly_sensitivity,
    monopoly_whitespace_closed_form_linear,
    solve_monopoly,
    solve_monopoly_whitespace,
    whitespace_bounds,
)
from spectrum_statics.curves import make_linear_latency


def test_reference_point():
    out = solve_monopoly(MonopolyScenario.linear(1.0, 1.0))
    assert out.quantities["m"] == pytest.approx(0.25, abs=1e-12)
    assert out.prices["m"] == pytest.approx(0.5, abs=1e-12)
    assert out.total_welfare == pytest.approx(0.15625, abs=1e-12)
    out.check()


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 5.0), st.floats(0.1, 5.0))
def test_solver_matches_closed_form(p_max, C):
    num = solve_monopoly(MonopolyScenario.linear(p_max, C))
    ref = monopoly_closed_form_linear(p_max, C)
    assert num.quantities["m"] == pytest.approx(ref.quantities["m"], abs=1e-10)
    assert num.prices["m"] == pytest.approx(ref.prices["m"], abs=1e-10)


def test_fixed_point_residual_vanishes():
    s = MonopolyScenario.linear(2.0, 0.7)
    q = solve_monopoly(s).quantities["m"]
    assert abs(fixed_point_residual(s, q)) < 1e-10


def test_power_latency_monopoly_is_wardrop():
    s = MonopolyScenario(make_linear_demand(1.0), make_power_latency(2.0), 1.0)
    out = solve_monopoly(s)
    assert out.wardrop_residual() < 1e-12
    assert abs(fixed_point_residual(s, out.quantities["m"])) < 1e-10


def test_sensitivity_reference():
    sens = monopoly_sensitivity(MonopolyScenario.linear())
    assert sens.dq_dC == pytest.approx(0.125)
    assert sens.dp_dC == 0.0
    assert sens.dT_dC == pytest.approx(0.09375, abs=1e-12)
    assert sens.beta == pytest.approx(8.0)


def test_sensitivity_matches_differences_for_power_latency():
    D, L = make_linear_demand(1.5), make_power_latency(1.7)
    T = lambda C: solve_monopoly(MonopolyScenario(D, L, C)).total_welfare
    h = 1e-5
    fd = (T(0.8 + h) - T(0.8 - h)) / (2 * h)
    assert monopoly_sensitivity(MonopolyScenario(D, L, 0.8)).dT_dC == pytest.approx(fd, rel=1e-6)


def test_scenario_validation():
    with pytest.raises(DomainError):
        MonopolyScenario.linear(1.0, 0.0)
    with pytest.raises(DomainError):
        MonopolyWhitespaceScenario.linear(1.0, 1.0, -0.1)


def test_whitespace_reference():
    s = MonopolyWhitespaceScenario.linear(1.0, 1.0, 1.0)
    lo, hi = whitespace_bounds(s)
    assert lo == pytest.approx(1 / 3, abs=1e-10)
    assert hi == pytest.approx(0.5, abs=1e-12)
    out = solve_monopoly_whitespace(s)
    assert out.quantities["m"] == pytest.approx(1 / 6, abs=1e-10)
    assert out.quantities["w"] == pytest.approx(5 / 12, abs=1e-10)
    assert out.prices["w"] == 0.0
    out.check()


def test_whitespace_zero_delegates():
    out = solve_monopoly_whitespace(MonopolyWhitespaceScenario.linear(1.0, 1.0, 0.0))
    assert out.total_welfare == pytest.approx(0.15625, abs=1e-12)


@pytest.mark.parametrize("W", [0.01, 0.3, 2.0, 7.0])
def test_whitespace_solver_matches_closed_form(W):
    num = solve_monopoly_whitespace(MonopolyWhitespaceScenario.linear(1.3, 0.9, W))
    ref = monopoly_whitespace_closed_form_linear(1.3, 0.9, W)
    assert num.quantities["m"] == pytest.approx(ref.quantities["m"], abs=1e-10)
    assert num.quantities["w"] == pytest.approx(ref.quantities["w"], abs=1e-10)
    assert num.total_welfare == pytest.approx(ref.total_welfare, abs=1e-10)


def test_whitespace_welfare_at_two():
    out = solve_monopoly_whitespace(MonopolyWhitespaceScenario.linear(1.0, 1.0, 2.0))
    assert out.total_welfare == pytest.approx(0.2717013888888889, abs=1e-10)


def test_marginal_whitespace_reference():
    rep = marginal_whitespace(MonopolyScenario.linear(), make_linear_latency())
    assert rep.dT == pytest.approx(-1 / 32, abs=1e-12)
    assert rep.dR == pytest.approx(-0.1875, abs=1e-12)
    assert rep.dp == pytest.approx(-0.5, abs=1e-12)
    assert rep.dq_m == pytest.approx(-0.125, abs=1e-12)
    assert rep.dS == pytest.approx(0.15625, abs=1e-12)
    assert rep.dR + rep.dS == pytest.approx(rep.dT, abs=1e-12)


def test_marginal_whitespace_matches_solver_slopes():
    C, p_max = 0.8, 1.7
    rep = marginal_whitespace(MonopolyScenario.linear(p_max, C), make_linear_latency())
    h = 1e-4
    f = lambda W: solve_monopoly_whitespace(MonopolyWhitespaceScenario.linear(p_max, C, W))
    o0, o1, o2 = f(0.0), f(h), f(2 * h)
    slope = lambda g: (-3 * g(o0) + 4 * g(o1) - g(o2)) / (2 * h)
    assert slope(lambda o: o.total_welfare) == pytest.approx(rep.dT, rel=1e-4)
    assert slope(lambda o: o.total_revenue) == pytest.approx(rep.dR, rel=1e-4)
    assert slope(lambda o: o.prices["m"]) == pytest.approx(rep.dp, rel=1e-4)


def test_more_whitespace_never_raises_price():
    prices = [solve_monopoly_whitespace(MonopolyWhitespaceScenario.linear(1.0, 1.0, W)).prices["m"]
              for W in np.linspace(0, 3, 13)]
    assert all(b <= a + 1e-12 for a, b in zip(prices, prices[1:]))
