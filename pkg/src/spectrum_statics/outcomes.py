"""Equilibrium outcome record shared by every market structure."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

from .errors import DomainError

# Channel keys used in the per-channel dictionaries.
MONOPOLY = "m"
WHITESPACE = "w"
PROVIDER_1 = "1"
PROVIDER_2 = "2"
COMPETITIVE = "c"


@dataclass(frozen=True)
class EquilibriumOutcome:
    """Provider prices and user loads at a Wardrop equilibrium.

    ``latencies`` holds the congestion cost users see on each channel, so the
    Wardrop condition ``price + latency == delivered_price`` can be checked
    on every channel carrying traffic. Whitespace carries price 0 and no
    revenue. ``extras`` collects model-specific scalars such as the load
    ratio of a competitive market.
    """

    market: str
    quantities: Dict[str, float]
    prices: Dict[str, float]
    latencies: Dict[str, float]
    delivered_price: float
    revenues: Dict[str, float]
    consumer_surplus: float
    total_welfare: float
    extras: Dict[str, float] = field(default_factory=dict)

    @property
    def total_revenue(self) -> float:
        return sum(self.revenues.values())

    @property
    def total_quantity(self) -> float:
        return sum(self.quantities.values())

    def wardrop_residual(self) -> float:
        """Largest ``|price + latency - delivered price|`` over used channels."""
        res = 0.0
        for ch, q in self.quantities.items():
            if q > 0.0:
                gap = self.prices[ch] + self.latencies[ch] - self.delivered_price
                res = max(res, abs(gap))
        return res

    def check(self, tol: float = 1e-9, q_max: float = 1.0) -> None:
        """Raise :class:`DomainError` if an outcome invariant is violated."""
        if abs(self.total_welfare - self.total_revenue - self.consumer_surplus) > tol:
            raise DomainError("welfare is not revenue plus consumer surplus")
        if self.wardrop_residual() > tol:
            raise DomainError(f"Wardrop residual {self.wardrop_residual():.3e}")
        if any(q < -tol for q in self.quantities.values()):
            raise DomainError("negative channel quantity")
        if self.total_quantity > q_max + tol:
            raise DomainError("served demand exceeds q_max")
        if self.prices.get(WHITESPACE, 0.0) != 0.0:
            raise DomainError("whitespace must be priced at zero")

    def as_dict(self) -> dict:
        """Flat record with stable keys, for JSON emission."""
        row = {"market": self.market}
        for ch in self.quantities:
            row[f"q_{ch}"] = self.quantities[ch]
        for ch in self.prices:
            row[f"p_{ch}"] = self.prices[ch]
        for ch in self.revenues:
            row[f"R_{ch}"] = self.revenues[ch]
        row["lambda"] = self.delivered_price
        row["R_total"] = self.total_revenue
        row["S"] = self.consumer_surplus
        row["T"] = self.total_welfare
        row.update(self.extras)
        return row
