"""One-dimensional minimization by dense grid scan and golden-section refinement.

All the infima over the input power P in witbench go through minimize_scalar.
The objectives are not known to be unimodal, so the golden-section search only
refines inside the bracket around the best grid point.
"""
import math
from typing import Callable, Tuple

import numpy as np

from witbench import getLogger
from witbench.core.constants import DEFAULT_MINIMIZER_GRID, DEFAULT_MINIMIZER_TOL
from witbench.core.core import InvalidInputError

logger = getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


class NumericError(ArithmeticError):
    """An objective produced a non-finite value"""

    def __init__(self, point: float, value: float):
        super().__init__(f"Objective is not finite at {point}: {value}")
        self.point = point
        self.value = value


def _evaluate_grid(
    objective: Callable[[np.ndarray], np.ndarray], grid: np.ndarray
) -> np.ndarray:
    """Evaluate objective on all grid points, vectorized when possible"""
    try:
        values = np.asarray(objective(grid), dtype=float)
    except (TypeError, ValueError):
        values = np.array([objective(point) for point in grid], dtype=float)
    if values.shape != grid.shape:
        values = np.array([objective(point) for point in grid], dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        idx = int(np.argmax(bad))
        raise NumericError(float(grid[idx]), float(values[idx]))
    return values


def _checked(objective: Callable[[float], float], point: float) -> float:
    value = float(objective(point))
    if not math.isfinite(value):
        raise NumericError(point, value)
    return value


def golden_section(
    objective: Callable[[float], float], lower: float, upper: float, tol: float
) -> Tuple[float, float]:
    """Golden-section search on [lower, upper] until the bracket is narrower
    than tol.

    Returns:
        Tuple with the argmin and the objective value there.
    """
    dist = upper - lower
    if dist <= tol:
        mid = (lower + upper) / 2
        return mid, _checked(objective, mid)

    iterations = int(math.ceil(math.log(tol / dist) / math.log(INV_PHI)))

    left = lower + INV_PHI_SQ * dist
    right = lower + INV_PHI * dist
    f_left = _checked(objective, left)
    f_right = _checked(objective, right)

    for _ in range(iterations - 1):
        if f_left < f_right:
            upper = right
            right = left
            f_right = f_left
            dist = INV_PHI * dist
            left = lower + INV_PHI_SQ * dist
            f_left = _checked(objective, left)
        else:
            lower = left
            left = right
            f_left = f_right
            dist = INV_PHI * dist
            right = lower + INV_PHI * dist
            f_right = _checked(objective, right)

    if f_left < f_right:
        return left, f_left
    return right, f_right


def minimize_scalar(
    objective: Callable,
    lo: float,
    hi: float,
    grid_points: int = DEFAULT_MINIMIZER_GRID,
    tol: float = DEFAULT_MINIMIZER_TOL,
) -> Tuple[float, float]:
    """Minimize a scalar function on [lo, hi].

    A uniform grid of grid_points is scanned first, then the bracket formed by
    the neighbours of the best grid point is refined by golden-section search
    down to a width of tol. The better of the grid point and the refined point
    is returned, ties going to the grid point.

    Args:
        objective: Function of one real variable. It may be vectorized, in
            which case the grid is evaluated in one call.
        lo: Lower end of the search interval
        hi: Upper end of the search interval
        grid_points: Number of grid points, endpoints included
        tol: Width of the final golden-section bracket

    Returns:
        Tuple of (argmin, minimum value)

    Raises:
        NumericError: if the objective is not finite at an evaluated point
    """
    if not lo <= hi:
        raise InvalidInputError(f"Need lo <= hi, got [{lo}, {hi}]")
    if lo == hi:
        return float(lo), _checked(objective, float(lo))
    if grid_points < 3:
        raise InvalidInputError("Need at least three grid points")

    grid = np.linspace(lo, hi, int(grid_points))
    values = _evaluate_grid(objective, grid)
    best = int(np.argmin(values))
    best_point, best_value = float(grid[best]), float(values[best])

    bracket_lo = float(grid[max(best - 1, 0)])
    bracket_hi = float(grid[min(best + 1, len(grid) - 1)])
    refined_point, refined_value = golden_section(
        lambda point: float(objective(point)), bracket_lo, bracket_hi, tol
    )
    logger.debug(
        "Grid best %g at %g, refined %g at %g",
        best_value,
        best_point,
        refined_value,
        refined_point,
    )
    if refined_value < best_value:
        return refined_point, refined_value
    return best_point, best_value
