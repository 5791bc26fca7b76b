"""Test the grid and golden-section minimizer"""
import math

import numpy as np
import pytest

from witbench.bounds.bounds import mmse_lower_bound
from witbench.bounds.minimize import NumericError, golden_section, minimize_scalar
from witbench.core.constants import SQRT3
from witbench.core.core import InvalidInputError


def test_quadratic():
    argmin, value = minimize_scalar(lambda p: (p - 2.0) ** 2, 0.0, 10.0)
    assert argmin == pytest.approx(2.0, abs=1e-9)
    assert value == pytest.approx(0.0, abs=1e-15)


def test_boundary_minimum():
    """The grid point at the boundary wins over any refinement"""
    assert minimize_scalar(lambda p: p, 0.0, 1.0) == (0.0, 0.0)


def test_degenerate_interval():
    assert minimize_scalar(lambda p: p + 1.0, 3.0, 3.0) == (3.0, 4.0)


def test_scalar_objective():
    """Objectives that only take floats are evaluated point by point"""
    argmin, _ = minimize_scalar(lambda p: (math.sqrt(p) - 1.0) ** 2, 0.0, 4.0)
    assert argmin == pytest.approx(1.0, abs=1e-8)


def test_lower_bound_objective_grid_oracle():
    """Bayesian lower bound objective at k = 1, sigma0 = 1, uniform noise"""
    h_bits = math.log2(2 * SQRT3)

    def objective(root_power):
        power = np.asarray(root_power, dtype=float) ** 2
        return power + mmse_lower_bound(power, 1.0, h_bits)

    _, value = minimize_scalar(objective, 0.0, 1.0)
    oracle = np.min(objective(np.linspace(0.0, 1.0, 10 ** 6)))
    assert value <= oracle + 1e-10
    assert value == pytest.approx(oracle, abs=1e-6)


def test_golden_section():
    argmin, value = golden_section(lambda p: (p - 0.3) ** 2 + 1.0, 0.0, 1.0, 1e-10)
    assert argmin == pytest.approx(0.3, abs=1e-8)
    assert value == pytest.approx(1.0)


def test_invalid_interval():
    with pytest.raises(InvalidInputError):
        minimize_scalar(lambda p: p, 1.0, 0.0)
    with pytest.raises(InvalidInputError):
        minimize_scalar(lambda p: p, 0.0, 1.0, grid_points=2)


def test_non_finite_objective():
    """The numeric error carries the offending point"""
    with pytest.raises(NumericError) as err:
        minimize_scalar(lambda p: np.where(p > 0.5, np.nan, p), 0.0, 1.0)
    assert err.value.point > 0.5
    assert math.isnan(err.value.value)
