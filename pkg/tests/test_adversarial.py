"""Test the worst-case search in the adversarial model"""
import numpy as np
import pytest

from witbench.core.constants import SQRT3
from witbench.core.core import (
    InvalidInputError,
    ProblemParams,
    Realization,
    evaluate_cost,
)
from witbench.sim.adversarial import default_x0_range, worst_case_cost
from witbench.strategies.strategies import (
    LinearStrategySpec,
    linear_strategy,
    quantizer_strategy,
    zero_forcing_strategy,
    zero_input_passthrough_strategy,
    zero_input_strategy,
)


@pytest.mark.parametrize("k", [0.1, 0.5, 1.0, 2.0])
def test_quantizer_worst_case(k):
    """The worst initial state is a bin edge, costing 3 k^2"""
    params = ProblemParams(k=k, sigma0=1)
    strategy = quantizer_strategy(2 * SQRT3)
    worst = worst_case_cost(params, strategy)
    assert worst.value == pytest.approx(3 * k ** 2, rel=1e-12)
    assert not worst.on_x0_boundary

    cost = evaluate_cost(params, strategy, Realization(x0=worst.at_x0, z=worst.at_z))
    assert cost.second_stage == 0.0
    assert cost.total == pytest.approx(worst.value)


def test_quantizer_worst_case_small_box():
    worst = worst_case_cost(
        ProblemParams(k=1, sigma0=1),
        quantizer_strategy(2 * SQRT3),
        x0_range=(-2 * SQRT3, 2 * SQRT3),
    )
    assert worst.value == pytest.approx(3.0, rel=1e-12)
    assert abs(worst.at_x0) == pytest.approx(SQRT3, rel=1e-9)
    assert not worst.on_x0_boundary


def test_passthrough_worst_case():
    """The error is the noise itself, approaching 3 at the noise bound"""
    worst = worst_case_cost(
        ProblemParams(k=2, sigma0=1), zero_input_passthrough_strategy()
    )
    assert 3 - 1e-6 <= worst.value <= 3
    assert abs(worst.at_z) == pytest.approx(SQRT3, rel=1e-9)
    assert not worst.on_x0_boundary


def test_bounded_linear_strategy():
    """alpha = 0, beta = 1 is the pass-through strategy"""
    worst = worst_case_cost(
        ProblemParams(k=1, sigma0=1),
        linear_strategy(LinearStrategySpec(alpha=0.0, beta=1.0)),
    )
    assert not worst.on_x0_boundary
    assert worst.value == pytest.approx(3.0, abs=1e-6)


@pytest.mark.parametrize(
    "strategy",
    [
        linear_strategy(LinearStrategySpec(alpha=-0.5, beta=0.5)),
        zero_forcing_strategy(),
        zero_input_strategy(1.0),
    ],
)
def test_unbounded_strategies(strategy):
    """Costs growing with |x0| peak on the edge of any search box"""
    x0_range = (-50.0, 50.0)
    worst = worst_case_cost(ProblemParams(k=1, sigma0=1), strategy, x0_range=x0_range)
    assert worst.on_x0_boundary
    assert worst.at_x0 in x0_range


def test_boundary_warning(caplog):
    worst_case_cost(
        ProblemParams(k=1, sigma0=1),
        linear_strategy(LinearStrategySpec(alpha=-0.5, beta=0.5)),
        grid=101,
    )
    assert "edge of the x0 range" in caplog.text


def test_results_independent_of_workers():
    params = ProblemParams(k=0.7, sigma0=1)
    strategy = quantizer_strategy(2 * SQRT3)
    assert worst_case_cost(params, strategy, workers=1) == worst_case_cost(
        params, strategy, workers=4
    )


def test_default_x0_range():
    lower, upper = default_x0_range(
        ProblemParams(k=1, sigma0=2), quantizer_strategy(2 * SQRT3)
    )
    assert upper == pytest.approx(40 * SQRT3)
    assert lower == -upper
    assert default_x0_range(
        ProblemParams(k=1, sigma0=0.5), zero_input_passthrough_strategy()
    ) == (-10.0, 10.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"grid": 2},
        {"z_margin": 0.0},
        {"z_margin": 1.0},
        {"x0_range": (1.0, 1.0)},
        {"x0_range": (2.0, -2.0)},
    ],
)
def test_invalid_search(kwargs):
    with pytest.raises(InvalidInputError):
        worst_case_cost(ProblemParams(k=1, sigma0=1), zero_forcing_strategy(), **kwargs)


def test_scalar_search_covers_vectors():
    """Vector problems report the worst scalar realization"""
    scalar = worst_case_cost(
        ProblemParams(k=1, sigma0=1), zero_input_passthrough_strategy()
    )
    vector = worst_case_cost(
        ProblemParams(k=1, sigma0=1, m=3), zero_input_passthrough_strategy()
    )
    assert vector == scalar
    assert np.isfinite(vector.value)


@pytest.mark.parametrize("sigma0", [100.0, 1000.0])
def test_quantizer_worst_case_wide_box(sigma0):
    """Far from the origin the largest noise still decodes to the right point"""
    params = ProblemParams(k=0.5, sigma0=sigma0)
    strategy = quantizer_strategy(2 * SQRT3)
    worst = worst_case_cost(params, strategy, grid=201)
    assert worst.value == pytest.approx(0.75, rel=1e-9)
    assert not worst.on_x0_boundary

    cost = evaluate_cost(params, strategy, Realization(x0=worst.at_x0, z=worst.at_z))
    assert cost.second_stage == pytest.approx(0.0, abs=1e-18)


def test_noise_bound_too_small_for_box():
    with pytest.raises(InvalidInputError):
        worst_case_cost(
            ProblemParams(k=1, sigma0=1),
            zero_input_passthrough_strategy(),
            x0_range=(-1e20, 1e20),
            noise_bound=1e-6,
        )


@pytest.mark.parametrize(
    "strategy",
    [
        quantizer_strategy(2 * SQRT3),
        quantizer_strategy(3.0, offset=0.4),
        zero_input_passthrough_strategy(),
        linear_strategy(LinearStrategySpec(alpha=-0.3, beta=0.6)),
    ],
)
@pytest.mark.parametrize(
    "x0, z",
    [(0.0, 0.0), (SQRT3, 1.7), (-2.9, -1.2), (7.5, 0.3), (-9.99, 1.73)],
)
def test_worst_case_dominates_admissible_points(strategy, x0, z):
    """The reported supremum is never below the cost of any admissible point
    inside the search box"""
    params = ProblemParams(k=0.7, sigma0=1)
    worst = worst_case_cost(params, strategy, x0_range=(-10.0, 10.0), grid=401)
    cost = evaluate_cost(params, strategy, Realization(x0=x0, z=z))
    assert worst.value >= cost.total * (1 - 1e-9)
