"""Selling new spectrum: what will providers pay for it?

Run: python3 demos/03_investment.py
"""

from spectrum_statics import (
    SpectrumOffer,
    monopoly_clearing_price,
    monopoly_purchase,
    planner_prices,
    solve_investment_game,
)
from spectrum_statics.investment import deviation_gain

# One extra unit offered to a monopolist that already holds one.
pe = monopoly_clearing_price(C=1.0, C_e=1.0)
print(f"monopolist buys all of it up to a unit price of {pe:.5f}")
print(f"  with one unit of whitespace around: {monopoly_clearing_price(1.0, 1.0, W=1.0):.5f}")
for price in (0.01, pe, 0.04, 0.07):
    r = monopoly_purchase(1.0, SpectrumOffer(1.0, price))
    print(f"  unit price {price:.4f}: buys {r.purchases[0]:.4f}, net revenue {r.net_revenues[0]:.5f}")

# Two providers with half a unit each; the regulator wants each to take half a unit.
prices = planner_prices(0.5, 0.5, 0.5, 0.5)
offer = SpectrumOffer((0.5, 0.5), prices)
game = solve_investment_game(0.5, 0.5, offer)
print(f"\nplanner prices {prices[0]:.6f}, {prices[1]:.6f}")
print(f"equilibrium purchases {game.purchases} after {game.iterations} rounds")
print(f"best unilateral deviation gain: {deviation_gain(game, 0.5, 0.5, offer):.2e}")
