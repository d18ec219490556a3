import math

import pytest

from spectrum_statics.errors import BracketError, ConvergenceError, DomainError
from spectrum_statics.solver import (
    Bracket,
    SolverSettings,
    central_difference,
    complex_step,
    find_root,
    maximize_concave,
)


def test_find_root_bisection():
    r = find_root(lambda x: x * x - 2.0, (0.0, 2.0))
    assert r == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_find_root_endpoint_root():
    assert find_root(lambda x: x, (0.0, 1.0)) == 0.0


def test_find_root_needs_sign_change():
    with pytest.raises(BracketError):
        find_root(lambda x: x * x + 1.0, (-1.0, 1.0))


def test_bracket_order():
    with pytest.raises(BracketError):
        Bracket(1.0, 0.0)


def test_find_root_iteration_cap():
    with pytest.raises(ConvergenceError):
        find_root(lambda x: x - 0.3, (0.0, 1.0), SolverSettings(tolerance=1e-15, max_iterations=5))


def test_settings_validation():
    with pytest.raises(DomainError):
        SolverSettings(tolerance=0.0)


def test_maximize_golden_section():
    x, fx = maximize_concave(lambda x: -(x - 0.3) ** 2, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-6)
    assert fx == pytest.approx(0.0, abs=1e-12)


def test_maximize_with_derivative_hits_boundary():
    x, _ = maximize_concave(lambda x: x, 0.0, 1.0, derivative=lambda x: 1.0)
    assert x == 1.0
    x, _ = maximize_concave(lambda x: -(x - 0.3) ** 2, 0.0, 1.0, derivative=lambda x: -2 * (x - 0.3))
    assert x == pytest.approx(0.3, abs=1e-12)


def test_derivative_helpers():
    assert central_difference(math.sin, 0.4) == pytest.approx(math.cos(0.4), rel=1e-9)
    assert complex_step(lambda z: z ** 3, 2.0) == pytest.approx(12.0, rel=1e-15)
