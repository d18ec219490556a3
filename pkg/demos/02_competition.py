"""Duopoly, perfect competition and the many-provider limit.

Run: python3 demos/02_competition.py
"""

from spectrum_statics import (
    DuopolyScenario,
    PerfectCompetitionScenario,
    SymmetricNScenario,
    best_response_fixed_point,
    pc_efficiency_check,
    solve_duopoly,
    solve_duopoly_whitespace,
    solve_pc_whitespace,
    solve_perfect_competition,
    solve_symmetric_n,
)

# Two providers with half a unit each.
duo = solve_duopoly(DuopolyScenario.linear(1.0, 0.5, 0.5))
print(f"duopoly: q_i={duo.quantities['1']:.5f} p_i={duo.prices['1']:.5f} T={duo.total_welfare:.5f}")
print("best-response iteration lands on", best_response_fixed_point(1.0, 0.5, 0.5))

# Whitespace hurts here too, at least at first.
for W in (0.01, 0.5, 2.0):
    o = solve_duopoly_whitespace(DuopolyScenario.linear(1.0, 0.5, 0.5, W))
    print(f"  + whitespace W={W}: T={o.total_welfare:.6f}")

# Price-taking providers: the outcome is efficient.
pc = PerfectCompetitionScenario.linear(1.0, 1.0)
out = solve_perfect_competition(pc)
print(f"\nperfect competition: alpha={out.extras['alpha']:.6f} T={out.total_welfare:.6f}")
print(f"largest welfare gain over 100 perturbations: {pc_efficiency_check(pc):.2e}")
for W in (0.5, 1.0):
    o = solve_pc_whitespace(PerfectCompetitionScenario.linear(1.0, 1.0, W))
    print(f"  + whitespace W={W}: alpha_w={o.extras['alpha']:.4f} q_w={o.quantities['w']:.4f}")

# n symmetric providers sharing C=1 approach the competitive load 1/3.
print("\n      n   aggregate load")
for n in (1, 2, 5, 100, 10**6):
    _, agg, _ = solve_symmetric_n(SymmetricNScenario.linear(1.0, 1.0, n))
    print(f"{n:7d}   {agg:.8f}")
