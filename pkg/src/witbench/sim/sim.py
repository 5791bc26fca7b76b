"""Monte Carlo estimation of expected costs in the Bayesian model.

Samples are drawn in chunks. Chunk number i draws from a generator seeded with
(seed, i), and the chunks are reduced in index order, so results only depend on
(seed, n) and never on how many workers evaluated the chunks.
"""
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from multiprocessing import cpu_count
from typing import Optional, Tuple

import numpy as np

from witbench import getLogger
from witbench.bounds.bounds import (
    BoundReport,
    bayes_report,
    bound_ratio,
    divergence_lower_bound,
)
from witbench.core.constants import CI_MULTIPLIER, MC_CHUNK_SIZE, MIN_MC_SAMPLES
from witbench.core.core import InvalidInputError, ProblemParams, evaluate_cost_samples
from witbench.core.noise import NoiseModel
from witbench.strategies.strategies import (
    Strategy,
    best_strategy,
    optimal_linear_cost,
)

logger = getLogger(__name__)

THREADS_ENV = "WITBENCH_THREADS"


def worker_count() -> int:
    """Number of workers, capped by the WITBENCH_THREADS environment variable"""
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            return max(int(cap), 1)
        except ValueError:
            logger.warning("Ignoring non-integer %s=%s", THREADS_ENV, cap)
    return cpu_count()


@dataclass(frozen=True)
class McEstimate:
    """Sample mean of the total cost with a confidence half-width of three
    standard errors"""

    mean: float
    ci_halfwidth: float
    n: int
    seed: int


@dataclass(frozen=True)
class RatioReport:
    """Bounds, the Monte Carlo cost of the best strategy and the optimal
    linear cost for one parameter point"""

    params: ProblemParams
    noise_label: str
    bounds: BoundReport
    best_label: str
    mc_best: McEstimate
    linear_cost: float
    linear_p_star: float
    linear_ratio: float
    divergence_bound: float


def _chunk_sizes(n: int) -> list:
    full, rest = divmod(n, MC_CHUNK_SIZE)
    return [MC_CHUNK_SIZE] * full + ([rest] if rest else [])


def sample_costs(
    params: ProblemParams,
    strategy: Strategy,
    noise: NoiseModel,
    n: int,
    seed: int,
    workers: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """First and second stage cost of n sampled realizations.

    x0 is Normal(0, sigma0^2) per coordinate, z is drawn from the noise model.

    Args:
        params: Problem parameters
        strategy: Strategy to evaluate
        noise: Observation noise model
        n: Number of samples
        seed: Non-negative integer seed
        workers: Number of threads, defaults to worker_count()

    Returns:
        Tuple of arrays of length n
    """
    if n < MIN_MC_SAMPLES:
        raise InvalidInputError(f"Need at least {MIN_MC_SAMPLES} samples, got {n}")
    if seed < 0:
        raise InvalidInputError(f"Seed must be non-negative, got {seed}")

    sizes = _chunk_sizes(int(n))

    def run_chunk(index: int) -> Tuple[np.ndarray, np.ndarray]:
        rng = np.random.default_rng([int(seed), index])
        shape = (sizes[index], params.m)
        x_0 = rng.normal(0.0, params.sigma0, shape)
        z = noise.draw(rng, shape)
        return evaluate_cost_samples(params, strategy, x_0, z)

    workers = workers or worker_count()
    logger.debug("Evaluating %d chunks on %d workers", len(sizes), workers)
    if workers == 1 or len(sizes) == 1:
        chunks = [run_chunk(index) for index in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            chunks = list(executor.map(run_chunk, range(len(sizes))))

    first_stage = np.concatenate([chunk[0] for chunk in chunks])
    second_stage = np.concatenate([chunk[1] for chunk in chunks])
    return first_stage, second_stage


def monte_carlo_cost(
    params: ProblemParams,
    strategy: Strategy,
    noise: NoiseModel,
    n: int,
    seed: int,
    workers: Optional[int] = None,
) -> McEstimate:
    """Estimate the expected total cost of a strategy"""
    first_stage, second_stage = sample_costs(params, strategy, noise, n, seed, workers)
    total = first_stage + second_stage
    halfwidth = CI_MULTIPLIER * float(np.std(total, ddof=1)) / np.sqrt(len(total))
    estimate = McEstimate(
        mean=float(np.mean(total)), ci_halfwidth=float(halfwidth), n=int(n), seed=seed
    )
    logger.info("%s: %s", strategy.label, estimate)
    return estimate


def ratio_report(
    params: ProblemParams,
    noise: NoiseModel,
    n: int,
    seed: int,
    workers: Optional[int] = None,
) -> RatioReport:
    """Tie the bounds, the best nonlinear strategy and the optimal linear
    strategy together for one parameter point.

    The linear ratio is the optimal linear cost over the smaller of the best
    strategy's Monte Carlo cost and the upper bound. It is 1 when both vanish.
    """
    bounds = bayes_report(params, noise)
    strategy = best_strategy(params, noise)
    mc_best = monte_carlo_cost(params, strategy, noise, n, seed, workers)
    lin_cost, lin_p_star = optimal_linear_cost(params)
    nonlinear_cost = min(mc_best.mean, bounds.upper)
    return RatioReport(
        params=params,
        noise_label=noise.label,
        bounds=bounds,
        best_label=strategy.label,
        mc_best=mc_best,
        linear_cost=lin_cost,
        linear_p_star=lin_p_star,
        linear_ratio=bound_ratio(lin_cost, nonlinear_cost),
        divergence_bound=divergence_lower_bound(params.sigma0, noise.a),
    )
