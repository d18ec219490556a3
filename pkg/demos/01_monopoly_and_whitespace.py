"""A monopolist, more licensed capacity, and a sliver of open-access whitespace.

Run: python3 demos/01_monopoly_and_whitespace.py
"""

from spectrum_statics import (
    MonopolyScenario,
    MonopolyWhitespaceScenario,
    make_linear_latency,
    marginal_whitespace,
    monopoly_sensitivity,
    solve_monopoly,
    solve_monopoly_whitespace,
)

# Linear demand P(q) = 1 - q, latency l(x) = x, one unit of licensed capacity.
base = MonopolyScenario.linear(p_max=1.0, C=1.0)
out = solve_monopoly(base)
print(f"monopoly: q={out.quantities['m']:.4f} p={out.prices['m']:.4f} "
      f"R={out.total_revenue:.5f} S={out.consumer_surplus:.5f} T={out.total_welfare:.5f}")

# Extra licensed capacity helps everyone; with linear curves the price does not move.
sens = monopoly_sensitivity(base)
print(f"dT/dC = {sens.dT_dC:.5f}, dp/dC = {sens.dp_dC:.1f}")

# A tiny whitespace band lowers welfare: the monopolist cuts its price to
# keep users off the free band and loses more revenue than users gain.
rep = marginal_whitespace(base, make_linear_latency())
print(f"dT/dW at W=0: {rep.dT:+.5f}  (dR={rep.dR:+.4f}, dS={rep.dS:+.4f})")

print("\n   W       q_m      q_w      p_m       T")
for W in (0.0, 0.01, 0.1, 0.5, 1.0, 2.0):
    o = solve_monopoly_whitespace(MonopolyWhitespaceScenario.linear(1.0, 1.0, W))
    print(f"{W:5.2f}  {o.quantities['m']:.5f}  {o.quantities.get('w', 0):.5f}  "
          f"{o.prices['m']:.5f}  {o.total_welfare:.5f}")
