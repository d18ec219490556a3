"""Paid capacity: optimal purchases, market-clearing unit prices and the duopoly investment game.

Everything here uses linear demand ``P(q) = p_max (1 - q)`` and ``l(x) = x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .competition import (
    DuopolyScenario,
    duopoly_closed_form,
    duopoly_whitespace_closed_form,
    solve_duopoly_whitespace,
)
from .errors import ConvergenceError, DomainError
from .monopoly import monopoly_closed_form_linear, monopoly_whitespace_closed_form_linear
from .outcomes import EquilibriumOutcome
from .solver import DEFAULT_SETTINGS, SolverSettings, complex_step, maximize_concave


def _pair(v):
    if np.ndim(v) == 0:
        return (float(v),)
    return tuple(float(x) for x in v)


@dataclass(frozen=True)
class SpectrumOffer:
    """Capacity put up for sale and its unit price, one entry per buyer."""

    capacity: Tuple[float, ...]
    unit_price: Tuple[float, ...]

    def __post_init__(self):
        cap, price = _pair(self.capacity), _pair(self.unit_price)
        if len(price) == 1 and len(cap) > 1:
            price = price * len(cap)
        if len(cap) != len(price):
            raise DomainError("capacity and unit_price need one entry per buyer")
        if min(cap) < 0 or min(price) < 0:
            raise DomainError("offered capacity and unit prices must be non-negative")
        object.__setattr__(self, "capacity", cap)
        object.__setattr__(self, "unit_price", price)


@dataclass(frozen=True)
class InvestmentOutcome:
    purchases: Tuple[float, ...]
    equilibrium: EquilibriumOutcome
    gross_revenues: Tuple[float, ...]
    net_revenues: Tuple[float, ...]
    unit_prices: Tuple[float, ...]
    clears: bool
    iterations: int = 0
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "purchases": list(self.purchases),
            "unit_prices": list(self.unit_prices),
            "gross_revenues": list(self.gross_revenues),
            "net_revenues": list(self.net_revenues),
            "clears": self.clears,
            "iterations": self.iterations,
            "note": self.note,
            "equilibrium": self.equilibrium.as_dict(),
        }


# --------------------------------------------------------------------------
# Monopoly
# --------------------------------------------------------------------------


def monopoly_revenue_in_capacity(C, p_max, W=0.0):
    """Monopoly revenue as a function of held capacity (array-friendly)."""
    C = np.asarray(C, dtype=float)
    cp, wp = C * p_max, W * p_max
    return 0.25 * p_max * cp / (cp + wp + 1.0) / (1.0 + wp)


def monopoly_purchase(C: float, offer: SpectrumOffer, p_max: float = 1.0, W: float = 0.0) -> InvestmentOutcome:
    """Net-revenue-maximizing purchase for a monopolist holding ``C`` (plus whitespace ``W``).

    Marginal revenue ``p^2 / (4 ((C + W + c) p + 1)^2)`` falls in ``c``, so the
    purchase is the point where it meets the unit price, clipped to the offer.
    A unit price at or above the marginal revenue of the first unit buys
    nothing.
    """
    if not (C > 0 and p_max > 0 and W >= 0):
        raise DomainError("need C, p_max > 0 and W >= 0")
    C_e, p_e = offer.capacity[0], offer.unit_price[0]
    note = ""
    if p_e == 0.0:
        c = C_e
        note = "free capacity: marginal revenue is positive everywhere, buying the whole offer"
    else:
        c = min(max(1.0 / (2.0 * math.sqrt(p_e)) - 1.0 / p_max - C - W, 0.0), C_e)
    if W > 0:
        eq = monopoly_whitespace_closed_form_linear(p_max, C + c, W)
    else:
        eq = monopoly_closed_form_linear(p_max, C + c)
    gross = eq.total_revenue
    return InvestmentOutcome(
        purchases=(c,),
        equilibrium=eq,
        gross_revenues=(gross,),
        net_revenues=(gross - p_e * c,),
        unit_prices=(p_e,),
        clears=c >= C_e,
        note=note,
    )


def monopoly_clearing_price(C: float, C_e: float, W: float = 0.0, p_max: float = 1.0) -> float:
    """Highest unit price at which the monopolist still buys all of ``C_e``."""
    return p_max**2 / (4.0 * ((C + C_e + W) * p_max + 1.0) ** 2)


# --------------------------------------------------------------------------
# Duopoly
# --------------------------------------------------------------------------


def duopoly_revenue_in_capacity(C_own, C_other, p_max=1.0, W=0.0):
    """Equilibrium revenue of a duopolist as a function of the two capacities.

    Plain arithmetic, so complex capacities pass through.
    """
    if W == 0:
        q1, _, p1, _ = duopoly_closed_form(p_max, C_own, C_other)
    else:
        q1, _, _, p1, _ = duopoly_whitespace_closed_form(p_max, C_own, C_other, W)
    return p1 * q1


@dataclass(frozen=True)
class RevenueDecomposition:
    """``R(C) = scale * (a C / (a C + b)) * ((a C + b d) / (a C + b))`` for fixed rival capacity.

    ``a, b > 0`` and ``d`` lies in ``(3/4, 1]``, which makes ``R`` strictly
    concave and increasing in own capacity.
    """

    a: float
    b: float
    d: float
    scale: float

    @classmethod
    def of(cls, C_other: float, p_max: float = 1.0) -> "RevenueDecomposition":
        p = p_max
        a = 3 * p * p + 4 * p / C_other
        b = 4 * p + 4 / C_other
        k = (p + 2 / C_other) / (3 * p + 4 / C_other)
        return cls(a=a, b=b, d=1 - p / b, scale=p * k * k)

    def revenue(self, C):
        a, b, d = self.a, self.b, self.d
        return self.scale * a * C * (a * C + b * d) / (a * C + b) ** 2

    def derivative(self, C):
        a, b, d = self.a, self.b, self.d
        return self.scale * a * b * ((2 - d) * a * C + b * d) / (a * C + b) ** 3

    def second_derivative(self, C):
        a, b, d = self.a, self.b, self.d
        return -2 * self.scale * a * a * b * ((2 - d) * a * C + b * (2 * d - 1)) / (a * C + b) ** 4


def marginal_revenue_in_capacity(C_own: float, C_other: float, p_max: float = 1.0, W: float = 0.0) -> float:
    """``dR/dC_own`` at the duopoly equilibrium."""
    if W == 0:
        return RevenueDecomposition.of(C_other, p_max).derivative(C_own)
    return complex_step(lambda c: duopoly_revenue_in_capacity(c, C_other, p_max, W), C_own)


def planner_prices(C1: float, C2: float, Ce1: float, Ce2: float, p_max: float = 1.0,
                   W: float = 0.0) -> Tuple[float, float]:
    """Unit prices at which each provider's best response is to buy exactly its allocation.

    Each price is the provider's marginal revenue at post-purchase capacities.
    """
    K1, K2 = C1 + Ce1, C2 + Ce2
    return (marginal_revenue_in_capacity(K1, K2, p_max, W),
            marginal_revenue_in_capacity(K2, K1, p_max, W))


def _best_purchase(C_own, C_other, C_e, p_e, p_max, W, settings):
    if C_e == 0:
        return 0.0
    c, _ = maximize_concave(
        lambda c: duopoly_revenue_in_capacity(C_own + c, C_other, p_max, W) - p_e * c,
        0.0, C_e, settings,
        derivative=lambda c: marginal_revenue_in_capacity(C_own + c, C_other, p_max, W) - p_e,
    )
    return c


def solve_investment_game(C1: float, C2: float, offer: SpectrumOffer, p_max: float = 1.0,
                          W: float = 0.0, settings: SolverSettings = DEFAULT_SETTINGS,
                          tol: float = 1e-12) -> InvestmentOutcome:
    """Pure-strategy equilibrium of the two-provider capacity purchase game.

    Sequential best responses from zero purchases. Each best response is a
    concave scalar problem, solved through its marginal condition. With
    ``W > 0`` the revenue comes from the whitespace duopoly closed form and
    equilibrium is only verified numerically (see :func:`deviation_gain`).
    """
    if len(offer.capacity) != 2:
        raise DomainError("the investment game needs an offer for each of two providers")
    if not (C1 > 0 and C2 > 0 and p_max > 0 and W >= 0):
        raise DomainError("need C1, C2, p_max > 0 and W >= 0")
    (Ce1, Ce2), (pe1, pe2) = offer.capacity, offer.unit_price
    c1 = c2 = 0.0
    for it in range(1, settings.max_iterations + 1):
        n1 = _best_purchase(C1, C2 + c2, Ce1, pe1, p_max, W, settings)
        n2 = _best_purchase(C2, C1 + n1, Ce2, pe2, p_max, W, settings)
        done = abs(n1 - c1) <= tol and abs(n2 - c2) <= tol
        c1, c2 = n1, n2
        if done:
            break
    else:
        raise ConvergenceError("investment best responses did not settle", last=(c1, c2))

    eq = solve_duopoly_whitespace(DuopolyScenario.linear(p_max, C1 + c1, C2 + c2, W))
    gross = (eq.revenues["1"], eq.revenues["2"])
    return InvestmentOutcome(
        purchases=(c1, c2),
        equilibrium=eq,
        gross_revenues=gross,
        net_revenues=(gross[0] - pe1 * c1, gross[1] - pe2 * c2),
        unit_prices=(pe1, pe2),
        clears=abs(c1 - Ce1) <= 1e-9 and abs(c2 - Ce2) <= 1e-9,
        iterations=it,
    )


def deviation_gain(result: InvestmentOutcome, C1: float, C2: float, offer: SpectrumOffer,
                   p_max: float = 1.0, W: float = 0.0, grid: int = 1001) -> float:
    """Best net-revenue gain either provider gets by deviating alone onto a purchase grid."""
    c = result.purchases
    own = (C1, C2)
    best = -np.inf
    for i in (0, 1):
        other = own[1 - i] + c[1 - i]
        p_e = offer.unit_price[i]
        current = duopoly_revenue_in_capacity(own[i] + c[i], other, p_max, W) - p_e * c[i]
        trial = np.linspace(0.0, offer.capacity[i], grid)
        values = duopoly_revenue_in_capacity(own[i] + trial, other, p_max, W) - p_e * trial
        best = max(best, float(np.max(values) - current))
    return best
