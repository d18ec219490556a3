"""Demand and latency curves.

A curve bundles a map with its first two derivatives and its inverse. Nothing
is differentiated automatically: a user-supplied curve provides every map.
Evaluation outside the domain raises :class:`DomainError` instead of clamping,
so a solver that wanders off the feasible set fails loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from scipy.integrate import quad

from .errors import ConfigError, DomainError

ScalarMap = Callable[[float], float]

# slack on domain checks, relative to the domain width; absorbs rounding only
_SLACK = 1e-12


@dataclass(frozen=True)
class DemandCurve:
    """Concave decreasing price-vs-quantity map on ``[0, q_max]``.

    ``Q`` is the inverse (quantity demanded at a price). ``U`` is the gross
    utility ``q -> integral of P over [0, q]``; when omitted it is computed by
    quadrature.
    """

    P: ScalarMap
    dP: ScalarMap
    d2P: ScalarMap
    Q: ScalarMap
    p_max: float
    q_max: float = 1.0
    U: Optional[ScalarMap] = None
    kind: str = "custom"
    params: Mapping[str, float] = field(default_factory=dict)

    def _check_quantity(self, q):
        if not (-_SLACK * self.q_max <= q <= self.q_max * (1 + _SLACK)):
            raise DomainError(f"quantity {q!r} outside [0, {self.q_max}]")

    def _check_price(self, p):
        if not (-_SLACK * self.p_max <= p <= self.p_max * (1 + _SLACK)):
            raise DomainError(f"price {p!r} outside [0, {self.p_max}]")

    def __call__(self, q: float) -> float:
        self._check_quantity(q)
        return self.P(q)

    def derivative(self, q: float) -> float:
        self._check_quantity(q)
        return self.dP(q)

    def second_derivative(self, q: float) -> float:
        self._check_quantity(q)
        return self.d2P(q)

    def inverse(self, p: float) -> float:
        self._check_price(p)
        return self.Q(p)

    def gross_utility(self, q: float) -> float:
        self._check_quantity(q)
        if self.U is not None:
            return self.U(q)
        return quad(self.P, 0.0, q, epsabs=1e-14, epsrel=1e-13)[0]

    def consumer_surplus(self, q: float) -> float:
        """Area between the curve and the price it clears at ``q``."""
        return self.gross_utility(q) - q * self(q)

    @property
    def is_linear(self) -> bool:
        return self.kind == "linear"


@dataclass(frozen=True)
class LatencyCurve:
    """Convex increasing congestion cost ``l(x)`` of load ratio ``x = q / C``."""

    l: ScalarMap
    dl: ScalarMap
    d2l: ScalarMap
    inv: ScalarMap
    kind: str = "custom"
    params: Mapping[str, float] = field(default_factory=dict)

    @staticmethod
    def _check(x, what):
        if not x >= -_SLACK:
            raise DomainError(f"{what} {x!r} is negative")

    def __call__(self, x: float) -> float:
        self._check(x, "load ratio")
        return self.l(x)

    def derivative(self, x: float) -> float:
        self._check(x, "load ratio")
        return self.dl(x)

    def second_derivative(self, x: float) -> float:
        self._check(x, "load ratio")
        return self.d2l(x)

    def inverse(self, y: float) -> float:
        self._check(y, "latency")
        return self.inv(y)

    def marginal_cost(self, x: float) -> float:
        """``x l'(x) + l(x)``, the derivative of the total latency cost ``x l(x)``."""
        return x * self.derivative(x) + self(x)

    @property
    def is_linear(self) -> bool:
        return self.kind == "linear" or (
            self.kind == "power" and self.params.get("k") == 1.0
        )


def make_linear_demand(p_max: float = 1.0, q_max: float = 1.0) -> DemandCurve:
    """``P(q) = p_max (1 - q / q_max)``."""
    if not (p_max > 0 and q_max > 0):
        raise DomainError(f"p_max and q_max must be positive, got {p_max}, {q_max}")
    p_max = float(p_max)
    q_max = float(q_max)
    slope = -p_max / q_max
    return DemandCurve(
        P=lambda q: p_max * (1.0 - q / q_max),
        dP=lambda q: slope,
        d2P=lambda q: 0.0,
        Q=lambda p: q_max * (1.0 - p / p_max),
        U=lambda q: p_max * (q - 0.5 * q * q / q_max),
        p_max=p_max,
        q_max=q_max,
        kind="linear",
        params={"p_max": p_max, "q_max": q_max},
    )


def make_linear_latency() -> LatencyCurve:
    return LatencyCurve(
        l=lambda x: x,
        dl=lambda x: 1.0,
        d2l=lambda x: 0.0,
        inv=lambda y: y,
        kind="linear",
    )


def make_power_latency(k: float) -> LatencyCurve:
    """``l(x) = x**k`` for ``k >= 1``."""
    if not k >= 1:
        raise DomainError(f"exponent must be >= 1 for a convex latency, got {k}")
    k = float(k)

    def d2l(x):
        if k == 1.0:
            return 0.0
        if x == 0.0 and k < 2.0:
            return float("inf")
        return k * (k - 1.0) * x ** (k - 2.0)

    return LatencyCurve(
        l=lambda x: x**k,
        dl=lambda x: k * x ** (k - 1.0) if k != 1.0 else 1.0,
        d2l=d2l,
        inv=lambda y: y ** (1.0 / k),
        kind="power",
        params={"k": k},
    )


def curve_from_spec(spec):
    """Build a curve from a config record such as ``{"kind": "power-latency", "k": 2}``.

    A bare string is accepted as a kind with default parameters.
    """
    if isinstance(spec, str):
        spec = {"kind": spec}
    spec = dict(spec)
    kind = spec.pop("kind", None)
    try:
        if kind == "linear-demand":
            return make_linear_demand(**{k: float(v) for k, v in spec.items()})
        if kind == "linear-latency":
            if spec:
                raise ConfigError(f"unexpected parameters {sorted(spec)}", "latency")
            return make_linear_latency()
        if kind == "power-latency":
            return make_power_latency(float(spec.pop("k")))
    except (TypeError, KeyError) as exc:
        raise ConfigError(f"bad parameters for {kind}: {exc}", "curve") from exc
    raise ConfigError(f"unknown curve kind {kind!r}", "curve")
