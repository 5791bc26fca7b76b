"""Problem definitions and per-realization cost evaluation.

The plant has two controllers. The first observes the initial state x0 and
applies u1, moving the state to x1 = x0 + u1. The second observes
y2 = x1 + z and applies u2, leaving x2 = x1 - u2. The cost of a realization is

    k^2 ||u1||^2 / m  +  ||x2||^2 / m

where m is the vector length. Strategies act coordinate-wise.
"""
from dataclasses import dataclass
from typing import TYPE_CHECKING, Tuple

import numpy as np

from witbench import getLogger

if TYPE_CHECKING:
    from witbench.strategies.strategies import Strategy

logger = getLogger(__name__)


class InvalidInputError(ValueError):
    """Raised for inputs violating a documented precondition"""


@dataclass(frozen=True)
class ProblemParams:
    """Input-cost weight k, initial state standard deviation sigma0 and
    vector length m"""

    k: float
    sigma0: float
    m: int = 1

    def __post_init__(self):
        if not np.isfinite(self.k) or self.k <= 0:
            raise InvalidInputError(f"k must be > 0, got {self.k}")
        if not np.isfinite(self.sigma0) or self.sigma0 < 0:
            raise InvalidInputError(f"sigma0 must be >= 0, got {self.sigma0}")
        if not np.isfinite(self.m) or int(self.m) != self.m or self.m < 1:
            raise InvalidInputError(f"m must be a positive integer, got {self.m}")


@dataclass(frozen=True)
class Realization:
    """Initial state and observation noise, both of length m"""

    x0: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x0", np.atleast_1d(np.asarray(self.x0, float)))
        object.__setattr__(self, "z", np.atleast_1d(np.asarray(self.z, float)))
        if self.x0.ndim != 1 or self.x0.shape != self.z.shape:
            raise InvalidInputError(
                f"x0 and z must be vectors of equal length, got shapes "
                f"{self.x0.shape} and {self.z.shape}"
            )


@dataclass(frozen=True)
class CostBreakdown:
    """Per-dimension first stage cost, second stage cost and their sum"""

    first_stage: float
    second_stage: float

    @property
    def total(self) -> float:
        return self.first_stage + self.second_stage


def evaluate_cost_samples(
    params: ProblemParams, strategy: "Strategy", x0: np.ndarray, z: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Evaluate the cost for a batch of realizations.

    Args:
        params: Problem parameters
        strategy: Control strategy, applied coordinate-wise
        x0: Initial states, shape (samples, m)
        z: Observation noise, shape (samples, m)

    Returns:
        Tuple of arrays (first stage cost, second stage cost), one value
        per sample.
    """
    x0 = np.asarray(x0, dtype=float)
    z = np.asarray(z, dtype=float)
    if x0.shape != z.shape or x0.ndim != 2:
        raise InvalidInputError(
            f"x0 and z must be matrices of equal shape, got {x0.shape} and {z.shape}"
        )
    if x0.shape[1] != params.m:
        raise InvalidInputError(
            f"Realization length {x0.shape[1]} does not match m={params.m}"
        )

    u_1 = strategy.gamma1(x0)
    x_1 = x0 + u_1
    u_2 = strategy.gamma2(x_1 + z)
    x_2 = x_1 - u_2

    first_stage = params.k ** 2 * np.sum(u_1 ** 2, axis=1) / params.m
    second_stage = np.sum(x_2 ** 2, axis=1) / params.m
    return first_stage, second_stage


def evaluate_cost(
    params: ProblemParams, strategy: "Strategy", realization: Realization
) -> CostBreakdown:
    """Exact cost of one realization under a strategy"""
    first_stage, second_stage = evaluate_cost_samples(
        params, strategy, realization.x0[np.newaxis, :], realization.z[np.newaxis, :]
    )
    return CostBreakdown(float(first_stage[0]), float(second_stage[0]))


def empirical_l2_distance(samples_a: np.ndarray, samples_b: np.ndarray) -> float:
    """Root mean squared Euclidean distance between paired sample vectors.

    This is a norm on the concatenated samples, so it obeys the triangle
    inequality for any three sample matrices of equal shape.

    Args:
        samples_a: shape (samples, m)
        samples_b: shape (samples, m)
    """
    samples_a = np.asarray(samples_a, dtype=float)
    samples_b = np.asarray(samples_b, dtype=float)
    if samples_a.shape != samples_b.shape:
        raise InvalidInputError(
            f"Sample matrices differ in shape: {samples_a.shape} vs {samples_b.shape}"
        )
    return float(np.sqrt(np.mean(np.sum((samples_a - samples_b) ** 2, axis=-1))))
