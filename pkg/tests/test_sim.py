"""Test Monte Carlo cost estimation and ratio reports"""
from multiprocessing import cpu_count

import numpy as np
import pytest

from witbench.bounds.bounds import lower_bound_bayes
from witbench.core.constants import SQRT3
from witbench.core.core import InvalidInputError, ProblemParams
from witbench.core.noise import uniform_noise
from witbench.sim import sim
from witbench.sim.sim import monte_carlo_cost, ratio_report, sample_costs
from witbench.strategies.strategies import (
    linear_strategy,
    optimal_linear_cost,
    optimal_linear_strategy,
    quantizer_strategy,
    zero_forcing_strategy,
    zero_input_passthrough_strategy,
    zero_input_strategy,
)

# pylint: disable=redefined-outer-name


@pytest.fixture
def uniform():
    return uniform_noise()


@pytest.mark.parametrize(
    "value, expected", [("3", 3), ("0", 1), ("not-a-number", cpu_count())]
)
def test_worker_count(monkeypatch, value, expected):
    monkeypatch.setenv(sim.THREADS_ENV, value)
    assert sim.worker_count() == expected


def test_worker_count_default(monkeypatch):
    monkeypatch.delenv(sim.THREADS_ENV, raising=False)
    assert sim.worker_count() == cpu_count()


def test_sample_costs_preconditions(uniform):
    params = ProblemParams(k=1, sigma0=1)
    with pytest.raises(InvalidInputError):
        sample_costs(params, zero_forcing_strategy(), uniform, n=99, seed=0)
    with pytest.raises(InvalidInputError):
        sample_costs(params, zero_forcing_strategy(), uniform, n=1000, seed=-1)


def test_results_independent_of_workers(uniform):
    """Chunks are seeded by index, so the worker count never changes results"""
    params = ProblemParams(k=0.3, sigma0=5, m=2)
    strategy = quantizer_strategy(2 * SQRT3)
    n = 2 * 65536 + 500
    single = sample_costs(params, strategy, uniform, n, seed=42, workers=1)
    threaded = sample_costs(params, strategy, uniform, n, seed=42, workers=3)
    assert len(single[0]) == n
    np.testing.assert_array_equal(single[0], threaded[0])
    np.testing.assert_array_equal(single[1], threaded[1])

    assert monte_carlo_cost(
        params, strategy, uniform, n, seed=42, workers=1
    ) == monte_carlo_cost(params, strategy, uniform, n, seed=42, workers=4)


def test_seed_changes_samples(uniform):
    params = ProblemParams(k=1, sigma0=1)
    first, _ = sample_costs(params, zero_forcing_strategy(), uniform, 1000, seed=1)
    other, _ = sample_costs(params, zero_forcing_strategy(), uniform, 1000, seed=2)
    assert not np.array_equal(first, other)


def test_zero_input_cost(uniform):
    """sigma0^2 / (sigma0^2 + 1) at sigma0 = 1"""
    estimate = monte_carlo_cost(
        ProblemParams(k=1, sigma0=1), zero_input_strategy(1.0), uniform, 10 ** 5, 7
    )
    assert estimate.n == 10 ** 5
    assert estimate.seed == 7
    assert 0 < estimate.ci_halfwidth < 0.01
    assert abs(estimate.mean - 0.5) <= estimate.ci_halfwidth


def test_zero_forcing_cost(uniform):
    """k^2 sigma0^2, whatever the noise"""
    estimate = monte_carlo_cost(
        ProblemParams(k=0.5, sigma0=2), zero_forcing_strategy(), uniform, 10 ** 5, 3
    )
    assert abs(estimate.mean - 1.0) <= estimate.ci_halfwidth


def test_quantizer_cost_wide_state(uniform):
    """For a wide Gaussian the quantization error is close to uniform on a bin,
    with variance (2 sqrt(3))^2 / 12 = 1"""
    estimate = monte_carlo_cost(
        ProblemParams(k=1, sigma0=100),
        quantizer_strategy(2 * SQRT3),
        uniform,
        10 ** 5,
        5,
    )
    assert abs(estimate.mean - 1.0) <= estimate.ci_halfwidth


@pytest.mark.parametrize("k, sigma0", [(0.5, 2.0), (0.1, 10.0), (3.0, 0.5)])
def test_optimal_linear_strategy_cost(uniform, k, sigma0):
    """Simulating the optimal linear gains reproduces the optimal linear cost"""
    params = ProblemParams(k=k, sigma0=sigma0)
    spec, cost = optimal_linear_strategy(params)
    estimate = monte_carlo_cost(params, linear_strategy(spec), uniform, 10 ** 5, 13, 1)
    assert abs(estimate.mean - cost) <= estimate.ci_halfwidth


def test_vector_cost(uniform):
    """Per-dimension normalization keeps the cost independent of m"""
    estimate = monte_carlo_cost(
        ProblemParams(k=0.5, sigma0=2, m=4),
        zero_forcing_strategy(),
        uniform,
        10 ** 4,
        9,
    )
    assert abs(estimate.mean - 1.0) <= estimate.ci_halfwidth


def test_quantizer_hard_bound(uniform):
    """Bounded noise never makes the second controller decode wrongly"""
    first_stage, second_stage = sample_costs(
        ProblemParams(k=1, sigma0=10),
        quantizer_strategy(2 * SQRT3),
        uniform,
        10 ** 6,
        seed=11,
    )
    assert np.all(second_stage == 0.0)
    assert np.all(first_stage + second_stage <= 3.0 * (1 + 1e-12))


def test_linear_cost_diverges(uniform):
    """The optimal linear cost exceeds the quantizer cost by at least
    sigma0^2 / (4 a^2)"""
    quantizer = quantizer_strategy(2 * SQRT3)
    for k, sigma0, ratio in [(1e-2, 1e2, 833), (1e-3, 1e3, 8.3e4)]:
        params = ProblemParams(k=k, sigma0=sigma0)
        linear, _ = optimal_linear_cost(params)
        estimate = monte_carlo_cost(params, quantizer, uniform, 10 ** 5, 13)
        assert linear / (estimate.mean + estimate.ci_halfwidth) >= ratio


@pytest.mark.parametrize("k, sigma0", [(1e-2, 1e2), (1e-3, 1e3)])
def test_ratio_report_divergence(uniform, k, sigma0):
    report = ratio_report(ProblemParams(k=k, sigma0=sigma0), uniform, 10 ** 4, 1)
    assert report.best_label == "quantizer"
    assert report.divergence_bound == pytest.approx(sigma0 ** 2 / 12)
    assert report.linear_ratio >= report.divergence_bound
    assert report.bounds.ratio <= 50


def test_ratio_report_degenerate(uniform):
    report = ratio_report(ProblemParams(k=1, sigma0=0), uniform, 1000, 1)
    assert report.mc_best.mean == 0.0
    assert report.linear_cost == 0.0
    assert report.bounds.ratio == 1.0
    assert report.linear_ratio == 1.0
    assert report.noise_label == "uniform"


def test_sandwich(uniform):
    """Every strategy costs at least the lower bound, on the certification grid"""
    for k in np.geomspace(1e-3, 10, 25):
        for sigma0 in np.geomspace(1e-2, 1e3, 25):
            params = ProblemParams(k=k, sigma0=sigma0)
            lower, _ = lower_bound_bayes(params, uniform.h_bits)
            spec, _ = optimal_linear_strategy(params)
            strategies = [
                quantizer_strategy(2 * uniform.a),
                zero_input_strategy(sigma0),
                zero_forcing_strategy(),
                zero_input_passthrough_strategy(),
                linear_strategy(spec),
            ]
            for strategy in strategies:
                estimate = monte_carlo_cost(
                    params, strategy, uniform, 2000, seed=17, workers=1
                )
                assert estimate.mean + estimate.ci_halfwidth >= lower, (
                    strategy.label,
                    k,
                    sigma0,
                )
