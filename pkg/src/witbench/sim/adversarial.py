"""Worst-case cost search in the adversarial model.

The adversary picks any initial state and noise with |z| < sqrt(3). The search
runs on a finite x0 box; a maximum attained on the edge of the box is reported
as a sign that the cost grows without bound in x0.

Strategies act coordinate-wise and the cost averages over coordinates, so the
worst vector realization repeats the worst scalar one. The search is scalar.
"""
import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from witbench import getLogger
from witbench.core.constants import ADVERSARIAL_NOISE_BOUND, DEFAULT_Z_MARGIN
from witbench.core.core import InvalidInputError, ProblemParams, evaluate_cost_samples
from witbench.sim.sim import worker_count
from witbench.strategies.strategies import Strategy

logger = getLogger(__name__)

DEFAULT_SEARCH_GRID = 1001

# Relative amount by which the box edge must beat the interior to count as
# attaining the maximum there
BOUNDARY_TOLERANCE = 1e-9

ROWS_PER_BLOCK = 256


@dataclass(frozen=True)
class WorstCase:
    """Largest cost found, where it was found, and whether the x0 coordinate
    sits on the edge of the search box"""

    value: float
    at_x0: float
    at_z: float
    on_x0_boundary: bool


def default_x0_range(params: ProblemParams, strategy: Strategy) -> Tuple[float, float]:
    """Symmetric box of ten times max(sigma0, 1) lattice spacings (unit scale
    for strategies without a lattice)"""
    scale = strategy.spacing if strategy.spacing is not None else 1.0
    half_width = 10.0 * max(params.sigma0, 1.0) * scale
    return -half_width, half_width


def worst_case_cost(
    params: ProblemParams,
    strategy: Strategy,
    x0_range: Optional[Tuple[float, float]] = None,
    grid: int = DEFAULT_SEARCH_GRID,
    z_margin: float = DEFAULT_Z_MARGIN,
    noise_bound: float = ADVERSARIAL_NOISE_BOUND,
    workers: Optional[int] = None,
) -> WorstCase:
    """Exhaustive grid search for the supremum of the cost.

    x0 runs over grid points of x0_range, endpoints included, together with
    every quantization bin edge inside the range. z runs over grid points of
    [-b (1 - z_margin), b (1 - z_margin)] with b the noise bound, approaching
    the open interval from inside. The edge is pulled in further to a few ulps
    of the box magnitude, so that x1 + z keeps its side of every decision
    boundary after rounding.

    Args:
        params: Problem parameters, only k enters the cost
        strategy: Strategy under attack
        x0_range: (lower, upper) search box, see default_x0_range
        grid: Number of grid points in each direction, at least 3
        z_margin: Relative distance kept from the noise bound, in (0, 1)
        noise_bound: Half-width of the open noise interval
        workers: Number of threads, defaults to worker_count()
    """
    if grid < 3:
        raise InvalidInputError(f"Search grid needs at least 3 points, got {grid}")
    if not 0 < z_margin < 1:
        raise InvalidInputError(f"z_margin must be in (0, 1), got {z_margin}")
    if x0_range is None:
        x0_range = default_x0_range(params, strategy)
    lower, upper = float(x0_range[0]), float(x0_range[1])
    if not lower < upper:
        raise InvalidInputError(f"Empty x0 range [{lower}, {upper}]")

    x0_points = np.unique(
        np.concatenate(
            [np.linspace(lower, upper, int(grid)), strategy.bin_edges(lower, upper)]
        )
    )
    # x1 + z is rounded at the magnitude of the box, z must stay decodable after it
    magnitude = max(abs(lower), abs(upper)) + 2.0 * noise_bound
    z_edge = min(
        noise_bound * (1.0 - z_margin),
        noise_bound - 8.0 * float(np.spacing(magnitude)),
    )
    if z_edge <= 0:
        raise InvalidInputError(
            f"x0 range [{lower}, {upper}] is too wide to resolve noise "
            f"bounded by {noise_bound}"
        )
    z_points = np.linspace(-z_edge, z_edge, int(grid))
    scalar_params = dataclasses.replace(params, m=1)
    logger.info(
        "Searching %d x0 points on [%g, %g] and %d z points",
        len(x0_points),
        lower,
        upper,
        len(z_points),
    )

    def run_block(start: int) -> np.ndarray:
        rows = x0_points[start : start + ROWS_PER_BLOCK]
        x_0, z = np.meshgrid(rows, z_points, indexing="ij")
        first_stage, second_stage = evaluate_cost_samples(
            scalar_params, strategy, x_0.reshape(-1, 1), z.reshape(-1, 1)
        )
        return (first_stage + second_stage).reshape(len(rows), len(z_points))

    starts = range(0, len(x0_points), ROWS_PER_BLOCK)
    workers = workers or worker_count()
    if workers == 1 or len(starts) == 1:
        blocks = [run_block(start) for start in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            blocks = list(executor.map(run_block, starts))
    costs = np.vstack(blocks)

    row_max = costs.max(axis=1)
    interior_max = float(row_max[1:-1].max())
    edge_max = float(max(row_max[0], row_max[-1]))
    on_boundary = edge_max > interior_max + BOUNDARY_TOLERANCE * max(
        1.0, abs(interior_max)
    )

    if on_boundary:
        row, col = np.unravel_index(int(np.argmax(costs)), costs.shape)
    else:
        interior_row, col = np.unravel_index(
            int(np.argmax(costs[1:-1])), costs[1:-1].shape
        )
        row = interior_row + 1

    worst = WorstCase(
        value=float(costs[row, col]),
        at_x0=float(x0_points[row]),
        at_z=float(z_points[col]),
        on_x0_boundary=bool(on_boundary),
    )
    if on_boundary:
        logger.warning(
            "Worst case for %s found on the edge of the x0 range, "
            "the cost may be unbounded",
            strategy.label,
        )
    return worst
