"""Comparative statics of congested spectrum markets with unlicensed whitespace."""

from .competition import (
    DuopolyScenario,
    PerfectCompetitionScenario,
    SymmetricNScenario,
    best_response_fixed_point,
    duopoly_best_response,
    duopoly_closed_form,
    duopoly_whitespace_closed_form,
    pc_efficiency_check,
    pc_sensitivity,
    perfect_competition_closed_form_linear,
    solve_duopoly,
    solve_duopoly_whitespace,
    solve_pc_whitespace,
    solve_perfect_competition,
    solve_symmetric_n,
)
from .curves import (
    DemandCurve,
    LatencyCurve,
    curve_from_spec,
    make_linear_demand,
    make_linear_latency,
    make_power_latency,
)
from .errors import (
    BracketError,
    ConfigError,
    ConvergenceError,
    DegeneracyError,
    DomainError,
    UnsupportedConfigurationError,
)
from .investment import (
    InvestmentOutcome,
    SpectrumOffer,
    monopoly_clearing_price,
    monopoly_purchase,
    planner_prices,
    solve_investment_game,
)
from .monopoly import (
    MonopolyScenario,
    MonopolyWhitespaceScenario,
    marginal_whitespace,
    monopoly_closed_form_linear,
    monopoly_sensitivity,
    monopoly_whitespace_closed_form_linear,
    solve_monopoly,
    solve_monopoly_whitespace,
    whitespace_bounds,
)
from .outcomes import EquilibriumOutcome
from .reporting import ScenarioConfig, SweepRow, emit, figure_suite, run_sweep
from .solver import Bracket, SolverSettings, find_root, maximize_concave

__version__ = "0.1.0"
