"""Scalar numerics shared by the market models.

Every equilibrium equation in this package comes with a monotonicity argument
that guarantees a sign change on a known interval, so plain bisection is used
throughout. The concave maximizer is golden-section search, or bisection on
the derivative when the caller can supply one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from .errors import BracketError, ConvergenceError, DomainError

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise BracketError(f"bracket endpoints out of order: [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class SolverSettings:
    tolerance: float = 1e-12
    max_iterations: int = 200

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be at least 1")


DEFAULT_SETTINGS = SolverSettings()


def find_root(
    f: Callable[[float], float],
    bracket,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float:
    """Bisection for a root of ``f`` inside ``bracket``.

    ``bracket`` is a :class:`Bracket` or a ``(lo, hi)`` pair with
    ``f(lo) * f(hi) <= 0``. Iteration stops once the bracket is narrower than
    ``settings.tolerance`` or can no longer be split in floating point.
    """
    if not isinstance(bracket, Bracket):
        bracket = Bracket(*bracket)
    lo, hi = float(bracket.lo), float(bracket.hi)
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")

    for _ in range(settings.max_iterations):
        mid = 0.5 * (lo + hi)
        if hi - lo <= settings.tolerance or mid <= lo or mid >= hi:
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid < 0.0) == (flo < 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    raise ConvergenceError(
        f"bisection did not reach tolerance {settings.tolerance} in "
        f"{settings.max_iterations} iterations",
        last=0.5 * (lo + hi),
    )


def maximize_concave(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
    derivative: Optional[Callable[[float], float]] = None,
) -> Tuple[float, float]:
    """Return ``(argmax, max)`` of a concave ``f`` over ``[lo, hi]``.

    Without ``derivative`` this is golden-section search, whose argmax is only
    accurate to about the square root of machine precision. With
    ``derivative`` the stationarity condition is bisected instead, which pins
    the argmax to ``settings.tolerance``; boundary maxima are detected from
    the derivative's sign at the endpoints.
    """
    if not lo < hi:
        raise DomainError(f"empty interval [{lo}, {hi}]")

    if derivative is not None:
        dlo, dhi = derivative(lo), derivative(hi)
        if dlo <= 0.0:
            x = lo
        elif dhi >= 0.0:
            x = hi
        else:
            x = find_root(derivative, (lo, hi), settings)
        return x, f(x)

    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(settings.max_iterations):
        if b - a <= settings.tolerance:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    # endpoints are never sampled by the interior search; compare explicitly
    candidates = [(fc, c), (fd, d), (f(lo), float(lo)), (f(hi), float(hi))]
    best_val, best_x = max(candidates, key=lambda t: t[0])
    return best_x, best_val


def central_difference(f: Callable[[float], float], x: float, h: Optional[float] = None) -> float:
    """Symmetric difference quotient; ``h`` defaults to ``1e-6 * max(1, |x|)``."""
    if h is None:
        h = 1e-6 * max(1.0, abs(x))
    return (f(x + h) - f(x - h)) / (2.0 * h)


def complex_step(f: Callable[[complex], complex], x: float, h: float = 1e-30) -> float:
    """Derivative of a real-analytic ``f`` via ``Im f(x + ih) / h``.

    Exact to rounding for rational closed forms, with no subtractive
    cancellation, so it can drive bisection where a difference quotient
    would be too noisy.
    """
    return f(complex(x, h)).imag / h
