import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectrum_statics.errors import DomainError
from spectrum_statics.investment import (
    RevenueDecomposition,
    SpectrumOffer,
    deviation_gain,
    duopoly_revenue_in_capacity,
    marginal_revenue_in_capacity,
    monopoly_clearing_price,
    monopoly_purchase,
    monopoly_revenue_in_capacity,
    planner_prices,
    solve_investment_game,
)


def test_offer_broadcasts_price():
    offer = SpectrumOffer((0.5, 0.7), 0.03)
    assert offer.unit_price == (0.03, 0.03)
    with pytest.raises(DomainError):
        SpectrumOffer((0.5, 0.7), (0.1, 0.2, 0.3))
    with pytest.raises(DomainError):
        SpectrumOffer(-1.0, 0.1)


def test_clearing_prices():
    assert monopoly_clearing_price(1.0, 1.0) == pytest.approx(1 / 36, abs=1e-15)
    assert monopoly_clearing_price(1.0, 1.0, W=1.0) == pytest.approx(1 / 64, abs=1e-15)


def test_purchase_edges():
    assert monopoly_purchase(1.0, SpectrumOffer(1.0, 1 / 36)).purchases[0] == pytest.approx(1.0)
    assert monopoly_purchase(1.0, SpectrumOffer(1.0, 1 / 16)).purchases == (0.0,)
    assert monopoly_purchase(1.0, SpectrumOffer(1.0, 1e9)).purchases == (0.0,)
    free = monopoly_purchase(1.0, SpectrumOffer(2.0, 0.0))
    assert free.purchases == (2.0,) and free.note


def test_decomposition_matches_revenue():
    dec = RevenueDecomposition.of(0.7, 1.3)
    for C in (0.2, 1.0, 2.5):
        assert dec.revenue(C) == pytest.approx(duopoly_revenue_in_capacity(C, 0.7, 1.3), rel=1e-12)
        h = 1e-6
        fd = (dec.revenue(C + h) - dec.revenue(C - h)) / (2 * h)
        assert dec.derivative(C) == pytest.approx(fd, rel=1e-7)
        fd2 = (dec.derivative(C + h) - dec.derivative(C - h)) / (2 * h)
        assert dec.second_derivative(C) == pytest.approx(fd2, rel=1e-6)
    assert 0.75 < dec.d <= 1.0


def test_reference_revenues():
    assert duopoly_revenue_in_capacity(0.5, 0.5) == pytest.approx(3 / 49)
    assert monopoly_revenue_in_capacity(1.0, 1.0) == pytest.approx(0.125)


def test_marginal_revenue_with_whitespace():
    f = lambda c: duopoly_revenue_in_capacity(c, 0.8, 1.0, 0.3)
    h = 1e-6
    fd = (f(1.1 + h) - f(1.1 - h)) / (2 * h)
    assert marginal_revenue_in_capacity(1.1, 0.8, 1.0, 0.3) == pytest.approx(fd, rel=1e-7)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 2.0), st.floats(0.2, 2.0), st.floats(0.0, 1.5), st.floats(0.0, 1.5))
def test_planner_prices_clear_the_game(C1, C2, Ce1, Ce2):
    prices = planner_prices(C1, C2, Ce1, Ce2)
    offer = SpectrumOffer((Ce1, Ce2), prices)
    result = solve_investment_game(C1, C2, offer)
    assert result.purchases == pytest.approx((Ce1, Ce2), abs=1e-8)
    assert deviation_gain(result, C1, C2, offer) <= 1e-8


def test_interior_purchases():
    offer = SpectrumOffer((3.0, 3.0), (0.02, 0.05))
    result = solve_investment_game(0.5, 0.5, offer)
    c1, c2 = result.purchases
    assert 0 < c1 < 3.0 and 0 <= c2 < 3.0
    assert not result.clears
    assert deviation_gain(result, 0.5, 0.5, offer) <= 1e-8
    assert marginal_revenue_in_capacity(0.5 + c1, 0.5 + c2) == pytest.approx(0.02, abs=1e-10)


def test_game_input_validation():
    with pytest.raises(DomainError):
        solve_investment_game(0.5, 0.5, SpectrumOffer(1.0, 0.1))
    with pytest.raises(DomainError):
        solve_investment_game(0.0, 0.5, SpectrumOffer((1.0, 1.0), 0.1))
