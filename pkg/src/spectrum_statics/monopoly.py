"""Monopoly provider, alone or facing a zero-price whitespace band."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .curves import DemandCurve, LatencyCurve, make_linear_demand, make_linear_latency
from .errors import DegeneracyError, DomainError
from .outcomes import MONOPOLY, WHITESPACE, EquilibriumOutcome
from .solver import DEFAULT_SETTINGS, SolverSettings, find_root, maximize_concave


@dataclass(frozen=True)
class MonopolyScenario:
    demand: DemandCurve
    latency: LatencyCurve
    C: float

    def __post_init__(self):
        if not self.C > 0:
            raise DomainError(f"capacity C must be positive, got {self.C}")

    @classmethod
    def linear(cls, p_max: float = 1.0, C: float = 1.0) -> "MonopolyScenario":
        return cls(make_linear_demand(p_max), make_linear_latency(), C)


@dataclass(frozen=True)
class MonopolyWhitespaceScenario:
    demand: DemandCurve
    latency: LatencyCurve
    whitespace_latency: LatencyCurve
    C: float
    W: float

    def __post_init__(self):
        if not self.C > 0:
            raise DomainError(f"capacity C must be positive, got {self.C}")
        if not self.W >= 0:
            raise DomainError(f"whitespace W must be non-negative, got {self.W}")

    @classmethod
    def linear(cls, p_max: float = 1.0, C: float = 1.0, W: float = 0.0):
        lat = make_linear_latency()
        return cls(make_linear_demand(p_max), lat, lat, C, W)

    @property
    def licensed(self) -> MonopolyScenario:
        return MonopolyScenario(self.demand, self.latency, self.C)


@dataclass(frozen=True)
class MonopolySensitivity:
    dq_dC: float
    dp_dC: float
    dT_dC: float
    beta: float


@dataclass(frozen=True)
class MarginalWhitespaceReport:
    """First-order response of the monopoly outcome to a sliver of whitespace.

    ``q_hat_w`` is the whitespace load ratio ``q_w / W`` as ``W -> 0``; the
    remaining fields are derivatives in ``W`` at ``W = 0``.
    """

    q_hat_w: float
    dq_m: float
    dp: float
    dR: float
    dS: float
    dT: float


def _tightened(settings: SolverSettings, width: float) -> SolverSettings:
    # keep the argument tolerance relative when the search interval is tiny
    if width >= 1.0:
        return settings
    return SolverSettings(settings.tolerance * max(width, 1e-300), settings.max_iterations)


def max_served_quantity(demand: DemandCurve, latency: LatencyCurve, C: float,
                        settings: SolverSettings = DEFAULT_SETTINGS) -> float:
    """Load served at zero price: the root of ``l(q / C) = P(q)``."""
    return find_root(lambda q: latency(q / C) - demand(q), (0.0, demand.q_max), settings)


def monopoly_revenue(s: MonopolyScenario, q: float) -> float:
    """Revenue ``q (P(q) - l(q / C))`` when the price is set to serve load ``q``."""
    return q * (s.demand(q) - s.latency(q / s.C))


def fixed_point_residual(s: MonopolyScenario, q: float) -> float:
    """Residual of ``q = -(P - l) / (P' - l'/C)``, the monopoly first-order condition."""
    P, l = s.demand(q), s.latency(q / s.C)
    slope = s.demand.derivative(q) - s.latency.derivative(q / s.C) / s.C
    return q + (P - l) / slope


def _monopoly_outcome(demand, latency, C, q, market="monopoly") -> EquilibriumOutcome:
    lam = demand(q)
    lat = latency(q / C)
    price = lam - lat
    revenue = price * q
    surplus = demand.gross_utility(q) - q * lam
    return EquilibriumOutcome(
        market=market,
        quantities={MONOPOLY: q},
        prices={MONOPOLY: price},
        latencies={MONOPOLY: lat},
        delivered_price=lam,
        revenues={MONOPOLY: revenue},
        consumer_surplus=surplus,
        total_welfare=revenue + surplus,
    )


def solve_monopoly(s: MonopolyScenario, settings: SolverSettings = DEFAULT_SETTINGS) -> EquilibriumOutcome:
    """Revenue-maximizing monopoly price and the load it attracts.

    Revenue ``q (P(q) - l(q/C))`` is strictly concave on ``[0, q_hat]``, where
    ``q_hat`` is the zero-price load, so the optimum is the unique root of its
    derivative there.
    """
    D, L, C = s.demand, s.latency, s.C
    q_hat = max_served_quantity(D, L, C, settings)

    def marginal_revenue(q):
        return D(q) - L(q / C) + q * (D.derivative(q) - L.derivative(q / C) / C)

    q, _ = maximize_concave(lambda q: monopoly_revenue(s, q), 0.0, q_hat,
                            _tightened(settings, q_hat), derivative=marginal_revenue)
    return _monopoly_outcome(D, L, C, q)


def monopoly_closed_form_linear(p_max: float, C: float) -> EquilibriumOutcome:
    """Monopoly outcome for ``P(q) = p_max (1 - q)`` and ``l(x) = x``."""
    if not (p_max > 0 and C > 0):
        raise DomainError("p_max and C must be positive")
    r = C * p_max / (1.0 + C * p_max)
    q = 0.5 * r
    price = 0.5 * p_max
    revenue = 0.25 * p_max * r
    surplus = p_max / 8.0 * r * r
    return EquilibriumOutcome(
        market="monopoly",
        quantities={MONOPOLY: q},
        prices={MONOPOLY: price},
        latencies={MONOPOLY: q / C},
        delivered_price=p_max * (1.0 - q),
        revenues={MONOPOLY: revenue},
        consumer_surplus=surplus,
        total_welfare=revenue + surplus,
        extras={"dT_dC": p_max / (4.0 * (1.0 + C * p_max) ** 2) * (1.0 + r)},
    )


def monopoly_sensitivity(s: MonopolyScenario, outcome: Optional[EquilibriumOutcome] = None) -> MonopolySensitivity:
    """Derivatives of the monopoly load, price and welfare in capacity ``C``.

    Obtained by implicit differentiation of the first-order condition. The
    welfare derivative is ``-q P'(q) dq/dC + q**2 l'(q/C) / C**2``.
    """
    if outcome is None:
        outcome = solve_monopoly(s)
    D, L, C = s.demand, s.latency, s.C
    q = outcome.quantities[MONOPOLY]
    x = q / C
    P, dP, d2P = D(q), D.derivative(q), D.second_derivative(q)
    l, dl, d2l = L(x), L.derivative(x), L.second_derivative(x)
    margin = P - l
    slope = dP - dl / C
    beta = 2.0 * slope**2 - margin * (d2P - d2l / C**2)
    if not beta > 0:
        raise DegeneracyError(f"non-positive curvature term beta={beta}")
    dq = margin * (2.0 * dl / C**2 + q * d2l / C**3) / beta
    dp = dq * slope + q * dl / C**2
    dT = -q * dP * dq + q * q * dl / C**2
    return MonopolySensitivity(dq_dC=dq, dp_dC=dp, dT_dC=dT, beta=beta)


def _whitespace_split(s: MonopolyWhitespaceScenario, q_w: float):
    """Monopoly load and price implied by whitespace load ``q_w``.

    Users are indifferent between bands, so ``l_w(q_w/W)`` is the delivered
    price and the total load is ``Q`` of it.
    """
    y = s.whitespace_latency(q_w / s.W)
    # rounding at the upper endpoint can push this a hair below zero
    q_m = max(s.demand.inverse(y) - q_w, 0.0)
    return y, q_m, y - s.latency(q_m / s.C)


def whitespace_bounds(s: MonopolyWhitespaceScenario,
                      settings: SolverSettings = DEFAULT_SETTINGS) -> Tuple[float, float]:
    """Range ``(q_tilde, q_hat)`` of whitespace loads reachable with prices in ``[0, P(q_hat)]``.

    ``q_hat`` is the load when whitespace serves everyone; ``q_tilde`` is the
    load when the monopolist prices at zero. Both are solved in the common
    delivered price ``y``, which keeps every evaluation inside the demand
    curve's domain.
    """
    if not s.W > 0:
        raise DomainError("whitespace bounds need W > 0")
    D, Lm, Lw, C, W = s.demand, s.latency, s.whitespace_latency, s.C, s.W
    y_hat = find_root(lambda y: D.inverse(y) - W * Lw.inverse(y), (0.0, D.p_max), settings)
    y_tilde = find_root(lambda y: D.inverse(y) - W * Lw.inverse(y) - C * Lm.inverse(y),
                        (0.0, D.p_max), settings)
    return W * Lw.inverse(y_tilde), W * Lw.inverse(y_hat)


def solve_monopoly_whitespace(s: MonopolyWhitespaceScenario,
                              settings: SolverSettings = DEFAULT_SETTINGS) -> EquilibriumOutcome:
    """Monopolist's revenue-maximizing price against a whitespace band of size ``W``.

    The whitespace load ``q_w`` is the single degree of freedom; revenue is
    maximized over ``[q_tilde, q_hat]`` using its analytic derivative.
    """
    if s.W == 0:
        return solve_monopoly(s.licensed, settings)
    D, Lm, Lw, C, W = s.demand, s.latency, s.whitespace_latency, s.C, s.W
    lo, hi = whitespace_bounds(s, settings)

    def revenue(q_w):
        _, q_m, p = _whitespace_split(s, q_w)
        return p * q_m

    def marginal_revenue(q_w):
        y, q_m, p = _whitespace_split(s, q_w)
        dy = Lw.derivative(q_w / W) / W
        dq_m = dy / D.derivative(D.inverse(y)) - 1.0
        dp = dy - Lm.derivative(q_m / C) * dq_m / C
        return dp * q_m + p * dq_m

    q_w, _ = maximize_concave(revenue, lo, hi, _tightened(settings, hi - lo),
                              derivative=marginal_revenue)
    y, q_m, p = _whitespace_split(s, q_w)
    total = q_m + q_w
    revenue_m = p * q_m
    surplus = D.gross_utility(total) - total * y
    return EquilibriumOutcome(
        market="monopoly_whitespace",
        quantities={MONOPOLY: q_m, WHITESPACE: q_w},
        prices={MONOPOLY: p, WHITESPACE: 0.0},
        latencies={MONOPOLY: Lm(q_m / C), WHITESPACE: y},
        delivered_price=y,
        revenues={MONOPOLY: revenue_m},
        consumer_surplus=surplus,
        total_welfare=revenue_m + surplus,
    )


def monopoly_whitespace_closed_form_linear(p_max: float, C: float, W: float) -> EquilibriumOutcome:
    """Monopoly-plus-whitespace outcome for linear demand and ``l_m = l_w = x``."""
    if not (p_max > 0 and C > 0 and W >= 0):
        raise DomainError("need p_max, C > 0 and W >= 0")
    cp, wp = C * p_max, W * p_max
    den = cp + wp + 1.0
    q_w = (0.5 * cp + wp + 1.0) / den * wp / (wp + 1.0)
    q_m = 0.5 * cp / den
    price = 0.5 * p_max / (1.0 + wp)
    revenue = 0.25 * p_max * cp / den / (1.0 + wp)
    surplus = 0.5 * p_max * ((wp + cp - cp / (2.0 * (1.0 + wp))) / den) ** 2
    lam = p_max * (1.0 - q_m - q_w)
    return EquilibriumOutcome(
        market="monopoly_whitespace",
        quantities={MONOPOLY: q_m, WHITESPACE: q_w},
        prices={MONOPOLY: price, WHITESPACE: 0.0},
        latencies={MONOPOLY: q_m / C, WHITESPACE: q_w / W if W > 0 else lam},
        delivered_price=lam,
        revenues={MONOPOLY: revenue},
        consumer_surplus=surplus,
        total_welfare=revenue + surplus,
        extras={"dT_dW_at_0": -(p_max**2) / 4.0 * cp**2 / (1.0 + cp) ** 3},
    )


def marginal_whitespace(s: MonopolyScenario, whitespace_latency: LatencyCurve,
                        outcome: Optional[EquilibriumOutcome] = None) -> MarginalWhitespaceReport:
    """Welfare effect of adding an infinitesimal whitespace band to a monopoly.

    Second-order expansion of the monopolist's revenue around the no-whitespace
    optimum; the revenue must stay concave in the load change, which requires
    ``P' - l_m'/C + q P''/2 < 0``.
    """
    if outcome is None:
        outcome = solve_monopoly(s)
    D, L, C = s.demand, s.latency, s.C
    q = outcome.quantities[MONOPOLY]
    dP, d2P = D.derivative(q), D.second_derivative(q)
    q_hat = whitespace_latency.inverse(D(q))
    curvature = dP - L.derivative(q / C) / C + 0.5 * q * d2P
    if not curvature < 0:
        raise DegeneracyError(f"revenue not concave in the load change (term={curvature})")
    tilt = (q_hat + q * dP / whitespace_latency.derivative(q_hat)) * dP + q * q_hat * d2P
    dq_m = -0.5 * tilt / curvature
    dp = dq_m * (dP - L.derivative(q / C) / C) + q_hat * dP
    dR = q * q_hat * dP
    dS = -(dq_m + q_hat) * q * dP
    dT = 0.5 * tilt / curvature * q * dP
    return MarginalWhitespaceReport(q_hat_w=q_hat, dq_m=dq_m, dp=dp, dR=dR, dS=dS, dT=dT)
