"""Duopoly, symmetric n-provider and perfectly competitive markets.

Duopoly results exist only for linear demand (``q_max = 1``) and the shared
latency ``l(x) = x``; other curves are rejected. The n-provider and perfectly
competitive markets accept general curves.

In the duopoly each provider picks the load it serves, taking the rival's
load as given; prices then follow from the users' indifference condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .curves import DemandCurve, LatencyCurve, make_linear_demand, make_linear_latency
from .errors import ConvergenceError, DomainError, UnsupportedConfigurationError
from .outcomes import COMPETITIVE, PROVIDER_1, PROVIDER_2, WHITESPACE, EquilibriumOutcome
from .solver import DEFAULT_SETTINGS, SolverSettings, find_root


# --------------------------------------------------------------------------
# Duopoly
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DuopolyScenario:
    demand: DemandCurve
    latency: LatencyCurve
    C1: float
    C2: float
    W: float = 0.0

    def __post_init__(self):
        if not (self.C1 > 0 and self.C2 > 0):
            raise DomainError(f"capacities must be positive, got {self.C1}, {self.C2}")
        if not self.W >= 0:
            raise DomainError(f"whitespace W must be non-negative, got {self.W}")

    @classmethod
    def linear(cls, p_max=1.0, C1=0.5, C2=0.5, W=0.0) -> "DuopolyScenario":
        return cls(make_linear_demand(p_max), make_linear_latency(), C1, C2, W)

    @property
    def p_max(self) -> float:
        return self.demand.p_max


def _require_linear(s: DuopolyScenario) -> None:
    if not (s.demand.is_linear and s.demand.q_max == 1.0 and s.latency.is_linear):
        raise UnsupportedConfigurationError(
            "duopoly equilibria are only available for linear demand with q_max=1 "
            "and linear latency"
        )


def duopoly_best_response(q_other: float, p_max: float, C_i: float, W: float = 0.0,
                          exact_elimination: bool = False) -> float:
    """Load that maximizes provider ``i``'s revenue given the rival's load.

    With whitespace the closed-form equilibrium uses the response
    ``(p/2)(1 - q_o) / (W p + (p + 1/C_i)(1 + W p))``. Substituting the
    whitespace balance ``q_w = (1 - q_1 - q_2) W p / (1 + W p)`` directly into
    the provider's revenue instead gives ``(p/2)(1 - q_o) / (p + (1 + W p)/C_i)``;
    ``exact_elimination=True`` selects that one. Both agree at ``W = 0``.
    """
    if not 0.0 <= q_other <= 1.0:
        raise DomainError(f"rival load {q_other} outside [0, 1]")
    p = p_max
    if exact_elimination:
        return 0.5 * p * (1.0 - q_other) / (p + (1.0 + W * p) / C_i)
    return 0.5 * p * (1.0 - q_other) / (W * p + (p + 1.0 / C_i) * (1.0 + W * p))


def best_response_fixed_point(p_max: float, C1: float, C2: float, W: float = 0.0,
                              exact_elimination: bool = False, tol: float = 1e-13,
                              max_iterations: int = 10_000) -> Tuple[float, float]:
    """Iterate simultaneous best responses from ``(0, 0)`` until they settle."""
    q1 = q2 = 0.0
    for _ in range(max_iterations):
        n1 = duopoly_best_response(q2, p_max, C1, W, exact_elimination)
        n2 = duopoly_best_response(q1, p_max, C2, W, exact_elimination)
        if abs(n1 - q1) <= tol and abs(n2 - q2) <= tol:
            return n1, n2
        q1, q2 = n1, n2
    raise ConvergenceError("best-response iteration did not settle", last=(q1, q2))


def _duopoly_outcome(p, C1, C2, W, q1, q2, q_w, p1, p2, market) -> EquilibriumOutcome:
    total = q1 + q2 + q_w
    lam = p * (1.0 - total)
    quantities = {PROVIDER_1: q1, PROVIDER_2: q2}
    prices = {PROVIDER_1: p1, PROVIDER_2: p2}
    latencies = {PROVIDER_1: q1 / C1, PROVIDER_2: q2 / C2}
    if W > 0:
        quantities[WHITESPACE] = q_w
        prices[WHITESPACE] = 0.0
        latencies[WHITESPACE] = q_w / W
    revenues = {PROVIDER_1: p1 * q1, PROVIDER_2: p2 * q2}
    surplus = 0.5 * p * total * total
    return EquilibriumOutcome(
        market=market,
        quantities=quantities,
        prices=prices,
        latencies=latencies,
        delivered_price=lam,
        revenues=revenues,
        consumer_surplus=surplus,
        total_welfare=revenues[PROVIDER_1] + revenues[PROVIDER_2] + surplus,
    )


def duopoly_closed_form(p_max: float, C1: float, C2: float):
    """Equilibrium ``(q1, q2, p1, p2)`` of the linear duopoly without whitespace."""
    p = p_max
    den = 3 * p * p + 4 * p * (1 / C1 + 1 / C2) + 4 / (C1 * C2)
    q1 = (p * p + 2 * p / C2) / den
    q2 = (p * p + 2 * p / C1) / den
    p1 = p * (p * p + p / C1 + 2 * p / C2 + 2 / (C1 * C2)) / den
    p2 = p * (p * p + p / C2 + 2 * p / C1 + 2 / (C1 * C2)) / den
    return q1, q2, p1, p2


def solve_duopoly(s: DuopolyScenario) -> EquilibriumOutcome:
    _require_linear(s)
    if s.W != 0:
        raise DomainError("scenario has whitespace; use solve_duopoly_whitespace")
    q1, q2, p1, p2 = duopoly_closed_form(s.p_max, s.C1, s.C2)
    return _duopoly_outcome(s.p_max, s.C1, s.C2, 0.0, q1, q2, 0.0, p1, p2, "duopoly")


def duopoly_denominator(p_max: float, C1: float, C2: float, W: float):
    p = p_max
    return (
        3 * p * p
        + 4 * p * (1 / C1 + 1 / C2)
        + 4 * W * p * p * (2 + 2 * p + 1 / C1 + 1 / C2)
        + 4 * (1 / C1 + W * p * (1 + p + 1 / C1)) * (1 / C2 + W * p * (1 + p + 1 / C2))
    )


def duopoly_whitespace_closed_form(p_max, C1, C2, W):
    """Equilibrium ``(q1, q2, q_w, p1, p2)`` with a whitespace band of size ``W``.

    Plain arithmetic only, so complex arguments pass through (used for
    complex-step derivatives in the investment game).
    """
    p = p_max
    den = duopoly_denominator(p, C1, C2, W)
    wp = W * p

    def load(C_other):
        return (2 * p / C_other + p * p + 2 * W * p * p * (1 + p + 1 / C_other)) / den

    def price(C_own, C_other):
        own = 2 * wp + wp * p + (1 + wp) * (p + 1 / C_own)
        other = 2 * wp + wp * p + (1 + wp) * (p + 2 / C_other)
        return p * own * other / ((1 + wp) * den)

    def factor(C):
        return p + 2 / C + 2 * wp * (1 + p + 1 / C)

    q_w = wp / (1 + wp) * factor(C1) * factor(C2) / den
    return load(C2), load(C1), q_w, price(C1, C2), price(C2, C1)


def solve_duopoly_whitespace(s: DuopolyScenario, exact_elimination: bool = False) -> EquilibriumOutcome:
    """Duopoly equilibrium with a zero-price whitespace band.

    The default is the closed-form equilibrium built on the first response in
    :func:`duopoly_best_response`. ``exact_elimination=True`` solves the
    fixed point of the second response and sets prices from the users'
    indifference condition. ``W = 0`` reduces to :func:`solve_duopoly`.
    """
    _require_linear(s)
    if s.W == 0:
        return solve_duopoly(s)
    p, C1, C2, W = s.p_max, s.C1, s.C2, s.W
    if not exact_elimination:
        q1, q2, q_w, p1, p2 = duopoly_whitespace_closed_form(p, C1, C2, W)
    else:
        # q_i = a_i (1 - q_o) with a_i the best-response slope; solve the 2x2 system
        a1 = 0.5 * p / (p + (1 + W * p) / C1)
        a2 = 0.5 * p / (p + (1 + W * p) / C2)
        q1 = a1 * (1 - a2) / (1 - a1 * a2)
        q2 = a2 * (1 - a1) / (1 - a1 * a2)
        q_w = (1 - q1 - q2) * W * p / (1 + W * p)
        lam = p * (1 - q1 - q2 - q_w)
        p1, p2 = lam - q1 / C1, lam - q2 / C2
    return _duopoly_outcome(p, C1, C2, W, q1, q2, q_w, p1, p2, "duopoly_whitespace")


# --------------------------------------------------------------------------
# Perfect competition
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PerfectCompetitionScenario:
    """A unit mass of price-taking providers holding total capacity ``C``.

    Equilibrium load per unit capacity is the same for every provider, so
    only the total matters.
    """

    demand: DemandCurve
    latency: LatencyCurve
    C: float
    whitespace_latency: Optional[LatencyCurve] = None
    W: float = 0.0

    def __post_init__(self):
        if not self.C > 0:
            raise DomainError(f"capacity C must be positive, got {self.C}")
        if not self.W >= 0:
            raise DomainError(f"whitespace W must be non-negative, got {self.W}")
        if self.W > 0 and self.whitespace_latency is None:
            raise DomainError("whitespace W > 0 needs a whitespace latency")

    @classmethod
    def linear(cls, p_max=1.0, C=1.0, W=0.0) -> "PerfectCompetitionScenario":
        lat = make_linear_latency()
        return cls(make_linear_demand(p_max), lat, C, lat, W)


@dataclass(frozen=True)
class PCSensitivity:
    dalpha_dC: float
    dserved_dC: float
    dT_dC: float


def _pc_outcome(D, L, C, alpha, q_w=0.0, Lw=None, W=0.0, market="perfect_competition"):
    served = alpha * C
    total = served + q_w
    price = alpha * L.derivative(alpha)
    lat = L(alpha)
    lam = price + lat
    revenue = price * served
    surplus = D.gross_utility(total) - total * lam
    quantities = {COMPETITIVE: served}
    prices = {COMPETITIVE: price}
    latencies = {COMPETITIVE: lat}
    if W > 0:
        quantities[WHITESPACE] = q_w
        prices[WHITESPACE] = 0.0
        latencies[WHITESPACE] = Lw(q_w / W)
    return EquilibriumOutcome(
        market=market,
        quantities=quantities,
        prices=prices,
        latencies=latencies,
        delivered_price=lam,
        revenues={COMPETITIVE: revenue},
        consumer_surplus=surplus,
        total_welfare=revenue + surplus,
        extras={"alpha": alpha},
    )


def competitive_load_ratio(D: DemandCurve, L: LatencyCurve, C: float,
                           settings: SolverSettings = DEFAULT_SETTINGS) -> float:
    """Root of ``P(alpha C) = l(alpha) + alpha l'(alpha)`` on ``[0, q_max / C]``."""
    return find_root(lambda a: D(a * C) - L.marginal_cost(a), (0.0, D.q_max / C), settings)


def solve_perfect_competition(s: PerfectCompetitionScenario,
                              settings: SolverSettings = DEFAULT_SETTINGS) -> EquilibriumOutcome:
    if s.W != 0:
        raise DomainError("scenario has whitespace; use solve_pc_whitespace")
    alpha = competitive_load_ratio(s.demand, s.latency, s.C, settings)
    return _pc_outcome(s.demand, s.latency, s.C, alpha)


def pc_sensitivity(s: PerfectCompetitionScenario, alpha: Optional[float] = None) -> PCSensitivity:
    """Capacity derivatives of the load ratio, the served load and welfare."""
    D, L, C = s.demand, s.latency, s.C
    if alpha is None:
        alpha = competitive_load_ratio(D, L, C)
    dP = D.derivative(alpha * C)
    curv = 2 * L.derivative(alpha) + alpha * L.second_derivative(alpha)
    dalpha = alpha * dP / (curv - C * dP)
    return PCSensitivity(
        dalpha_dC=dalpha,
        dserved_dC=C * dalpha + alpha,
        dT_dC=alpha * alpha * L.derivative(alpha),
    )


def solve_pc_whitespace(s: PerfectCompetitionScenario,
                        settings: SolverSettings = DEFAULT_SETTINGS) -> EquilibriumOutcome:
    """Perfect competition next to a whitespace band.

    The load ratio ``alpha_w`` lies in ``[0, alpha_bar]`` and equates the
    whitespace latency with the providers' marginal latency cost; whitespace
    absorbs the demand left over at that delivered price.
    """
    if s.W == 0:
        return solve_perfect_competition(s, settings)
    D, L, Lw, C, W = s.demand, s.latency, s.whitespace_latency, s.C, s.W
    alpha_bar = competitive_load_ratio(D, L, C, settings)

    def leftover(a):
        # rounding can leave this a hair below zero at alpha_bar
        return max(D.inverse(L.marginal_cost(a)) - a * C, 0.0)

    alpha = find_root(lambda a: Lw(leftover(a) / W) - L.marginal_cost(a), (0.0, alpha_bar), settings)
    out = _pc_outcome(D, L, C, alpha, leftover(alpha), Lw, W, market="pc_whitespace")
    out.extras["alpha_bar"] = alpha_bar
    return out


def perfect_competition_closed_form_linear(p_max: float, C: float, W: float = 0.0) -> EquilibriumOutcome:
    """Linear-curve perfect competition, with optional whitespace ``W``.

    ``extras`` carries the welfare derivatives ``dT_dC`` and ``dT_dW``.
    """
    if not (p_max > 0 and C > 0 and W >= 0):
        raise DomainError("need p_max, C > 0 and W >= 0")
    k = C + 2 * W + 2 / p_max
    alpha = 1 / k
    served, q_w = C / k, 2 * W / k
    revenue = C / k**2
    surplus = 0.5 * p_max * ((C + 2 * W) / k) ** 2
    lam = p_max * (1 - served - q_w)
    quantities = {COMPETITIVE: served}
    prices = {COMPETITIVE: alpha}
    latencies = {COMPETITIVE: alpha}
    if W > 0:
        quantities[WHITESPACE] = q_w
        prices[WHITESPACE] = 0.0
        latencies[WHITESPACE] = q_w / W
    return EquilibriumOutcome(
        market="pc_whitespace" if W > 0 else "perfect_competition",
        quantities=quantities,
        prices=prices,
        latencies=latencies,
        delivered_price=lam,
        revenues={COMPETITIVE: revenue},
        consumer_surplus=surplus,
        total_welfare=revenue + surplus,
        extras={
            "alpha": alpha,
            "dT_dC": (C + 6 * W + 2 / p_max) / k**3,
            "dT_dW": 8 * W / k**3,
        },
    )


def pc_welfare_functional(s: PerfectCompetitionScenario, loads: Sequence[float],
                          capacities: Optional[Sequence[float]] = None) -> float:
    """Total welfare of a binned load profile over the provider mass.

    The mass is split into ``len(loads)`` equal bins; ``loads[j]`` and
    ``capacities[j]`` are densities on bin ``j`` (``capacities`` defaults to
    ``C`` everywhere).
    """
    loads = np.asarray(loads, dtype=float)
    n = loads.size
    caps = np.full(n, s.C) if capacities is None else np.asarray(capacities, dtype=float)
    served = loads.sum() / n
    cost = sum(q * s.latency(q / c) for q, c in zip(loads, caps)) / n
    return s.demand.gross_utility(served) - cost


def pc_efficiency_check(s: PerfectCompetitionScenario, perturbation_count: int = 100,
                        epsilon: float = 1e-3, bins: int = 10, seed: int = 0,
                        capacities: Optional[Sequence[float]] = None) -> float:
    """Largest welfare gain from perturbing the competitive load profile.

    Directions alternate between zero-sum reallocations across bins and
    unrestricted ones, each scaled to max-norm ``epsilon``. A value at or
    below zero (up to rounding) means no feasible direction improves on the
    equilibrium.
    """
    if perturbation_count <= 0:
        return 0.0
    caps = np.full(bins, s.C) if capacities is None else np.asarray(capacities, dtype=float)
    if caps.size != bins or not np.isclose(caps.mean(), s.C):
        raise DomainError("capacity profile must have one entry per bin and average C")
    alpha = competitive_load_ratio(s.demand, s.latency, s.C)
    base = alpha * caps
    t0 = pc_welfare_functional(s, base, caps)
    rng = np.random.default_rng(seed)
    gain = -np.inf
    for k in range(perturbation_count):
        h = rng.standard_normal(bins)
        if k % 2 == 0:
            h -= h.mean()
        h *= epsilon / np.max(np.abs(h))
        trial = base + h
        if trial.min() <= 0 or trial.mean() > s.demand.q_max:
            continue
        gain = max(gain, pc_welfare_functional(s, trial, caps) - t0)
    return float(gain)


# --------------------------------------------------------------------------
# Symmetric n providers
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetricNScenario:
    demand: DemandCurve
    latency: LatencyCurve
    C: float
    n: int

    def __post_init__(self):
        if not self.C > 0:
            raise DomainError(f"capacity C must be positive, got {self.C}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"provider count must be a positive integer, got {self.n}")

    @classmethod
    def linear(cls, p_max=1.0, C=1.0, n=2) -> "SymmetricNScenario":
        return cls(make_linear_demand(p_max), make_linear_latency(), C, n)


def symmetric_n_residual(s: SymmetricNScenario, per_provider: float) -> float:
    """``P(nq) + q P'(nq) - (nq/C) l'(nq/C) - l(nq/C)`` at per-provider load ``q``."""
    total = s.n * per_provider
    return (s.demand(total) + per_provider * s.demand.derivative(total)
            - s.latency.marginal_cost(total / s.C))


def solve_symmetric_n(s: SymmetricNScenario, settings: SolverSettings = DEFAULT_SETTINGS):
    """Symmetric equilibrium of ``n`` providers each holding ``C / n``.

    Returns ``(per_provider_load, aggregate_load, outcome)``. The equation is
    solved in the aggregate load so that the tolerance does not degrade as
    ``n`` grows.
    """
    D, L, C, n = s.demand, s.latency, s.C, int(s.n)
    total = find_root(
        lambda Q: D(Q) + (Q / n) * D.derivative(Q) - L.marginal_cost(Q / C),
        (0.0, D.q_max), settings,
    )
    lam = D(total)
    lat = L(total / C)
    price = lam - lat
    revenue = price * total
    surplus = D.gross_utility(total) - total * lam
    out = EquilibriumOutcome(
        market="symmetric_n",
        quantities={COMPETITIVE: total},
        prices={COMPETITIVE: price},
        latencies={COMPETITIVE: lat},
        delivered_price=lam,
        revenues={COMPETITIVE: revenue},
        consumer_surplus=surplus,
        total_welfare=revenue + surplus,
        extras={"n": float(n), "per_provider": total / n},
    )
    return total / n, total, out
