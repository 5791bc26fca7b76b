"""Control strategies: the pair of maps applied by the two controllers.

Every map is vectorized and applied coordinate-wise to arrays of any shape.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from witbench import getLogger
from witbench.bounds.bounds import upper_bound_bayes
from witbench.bounds.minimize import minimize_scalar
from witbench.core.constants import (
    BEST,
    LINEAR,
    QUANTIZER,
    SQRT3,
    ZERO_FORCING,
    ZERO_INPUT,
    ZERO_INPUT_PASSTHROUGH,
)
from witbench.core.core import InvalidInputError, ProblemParams
from witbench.core.noise import NoiseModel

logger = getLogger(__name__)

ControlMap = Callable[[np.ndarray], np.ndarray]

STRATEGY_NAMES = [
    QUANTIZER,
    ZERO_INPUT,
    ZERO_FORCING,
    ZERO_INPUT_PASSTHROUGH,
    LINEAR,
    BEST,
]


@dataclass(frozen=True)
class Strategy:
    """Maps gamma1: x0 -> u1 and gamma2: y2 -> u2.

    Lattice strategies also carry their spacing and offset so that searches
    can visit the bin edges.
    """

    gamma1: ControlMap
    gamma2: ControlMap
    label: str
    spacing: Optional[float] = None
    offset: float = 0.0

    def bin_edges(self, lower: float, upper: float) -> np.ndarray:
        """Quantization bin edges inside [lower, upper], empty for strategies
        without a lattice"""
        if self.spacing is None:
            return np.array([])
        first = math.ceil((lower - self.offset) / self.spacing - 0.5)
        last = math.floor((upper - self.offset) / self.spacing - 0.5)
        edges = self.offset + self.spacing * (np.arange(first, last + 1) + 0.5)
        return edges[(edges >= lower) & (edges <= upper)]


@dataclass(frozen=True)
class LinearStrategySpec:
    """u1 = alpha x0, u2 = beta y2"""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise InvalidInputError(f"Linear gains must be finite: {self}")


def quantizer_strategy(spacing: float, offset: float = 0.0) -> Strategy:
    """Move the state to the nearest point of offset + spacing*Z, and let the
    second controller decode to the nearest point.

    Points halfway between two lattice points go to the even-indexed one.
    """
    if not spacing > 0:
        raise InvalidInputError(f"Quantizer spacing must be > 0, got {spacing}")

    def nearest(values: np.ndarray) -> np.ndarray:
        # np.rint rounds halves to even
        return offset + spacing * np.rint((np.asarray(values) - offset) / spacing)

    def gamma1(x_0: np.ndarray) -> np.ndarray:
        return nearest(x_0) - x_0

    return Strategy(
        gamma1=gamma1, gamma2=nearest, label=QUANTIZER, spacing=spacing, offset=offset
    )


def zero_input_strategy(sigma0: float, sigma_z2: float = 1.0) -> Strategy:
    """No first stage input, linear least-squares estimate at the second stage"""
    if not sigma_z2 > 0:
        raise InvalidInputError(f"Noise variance must be > 0, got {sigma_z2}")
    coefficient = sigma0 ** 2 / (sigma0 ** 2 + sigma_z2)

    return Strategy(
        gamma1=np.zeros_like,
        gamma2=lambda y_2: coefficient * np.asarray(y_2),
        label=ZERO_INPUT,
    )


def zero_input_passthrough_strategy() -> Strategy:
    """No first stage input, the observation itself as the estimate"""
    return Strategy(
        gamma1=np.zeros_like,
        gamma2=lambda y_2: np.array(y_2, dtype=float),
        label=ZERO_INPUT_PASSTHROUGH,
    )


def zero_forcing_strategy() -> Strategy:
    """Cancel the state at the first stage, nothing left for the second"""
    return Strategy(gamma1=np.negative, gamma2=np.zeros_like, label=ZERO_FORCING)


def linear_strategy(spec: LinearStrategySpec) -> Strategy:
    return Strategy(
        gamma1=lambda x_0: spec.alpha * np.asarray(x_0),
        gamma2=lambda y_2: spec.beta * np.asarray(y_2),
        label=LINEAR,
    )


def linear_cost(params: ProblemParams, power):
    """Expected cost of the best linear strategy spending power P at the first
    stage: k^2 P + s^2/(s^2 + 1) with s = (sigma0 - sqrt(P))^+"""
    power = np.asarray(power, dtype=float)
    remaining = np.maximum(params.sigma0 - np.sqrt(power), 0.0) ** 2
    value = params.k ** 2 * power + remaining / (remaining + 1.0)
    return float(value) if value.ndim == 0 else value


def optimal_linear_cost(params: ProblemParams) -> Tuple[float, float]:
    """Minimum over P in [0, sigma0^2] of linear_cost.

    Returns:
        Tuple with the cost and the minimizing power P*
    """

    def objective(root_power):
        return linear_cost(params, np.asarray(root_power, dtype=float) ** 2)

    root_p_star, cost = minimize_scalar(objective, 0.0, params.sigma0)
    return float(cost), root_p_star ** 2


def optimal_linear_strategy(
    params: ProblemParams,
) -> Tuple[LinearStrategySpec, float]:
    """Gains attaining optimal_linear_cost.

    alpha = -sqrt(P*)/sigma0 and beta is the least-squares coefficient for the
    remaining state variance (sigma0 (1 + alpha))^2.
    """
    cost, p_star = optimal_linear_cost(params)
    alpha = -math.sqrt(p_star) / params.sigma0 if params.sigma0 > 0 else 0.0
    remaining = (params.sigma0 * (1.0 + alpha)) ** 2
    return LinearStrategySpec(alpha=alpha, beta=remaining / (remaining + 1.0)), cost


def linear_cost_lower_bound(params: ProblemParams) -> float:
    """min(sigma0^2/(sigma0^2 + 4), k^2 sigma0^2/4).

    Either P < sigma0^2/4, leaving a state variance of at least sigma0^2/4 to
    estimate, or the input power alone costs k^2 sigma0^2/4.
    """
    sigma0_sq = params.sigma0 ** 2
    return min(sigma0_sq / (sigma0_sq + 4.0), params.k ** 2 * sigma0_sq / 4.0)


def best_strategy(params: ProblemParams, noise: NoiseModel) -> Strategy:
    """The strategy attaining the Bayesian upper bound, chosen analytically"""
    _, winner = upper_bound_bayes(params, noise)
    logger.info("Best strategy for %s with %s noise: %s", params, noise.label, winner)
    if winner == QUANTIZER:
        return quantizer_strategy(2.0 * noise.a)
    if winner == ZERO_INPUT:
        return zero_input_strategy(params.sigma0)
    return zero_forcing_strategy()


def adversarial_strategy(k: float) -> Strategy:
    """Quantization with bins of width 2 sqrt(3) when k <= 1, otherwise zero
    input with y2 passed through"""
    if k ** 2 <= 1:
        return quantizer_strategy(2.0 * SQRT3)
    return zero_input_passthrough_strategy()


def strategy_by_name(
    name: str,
    params: ProblemParams,
    noise: NoiseModel,
    alpha: Optional[float] = None,
    beta: Optional[float] = None,
) -> Strategy:
    """Resolve a strategy name as used on the command line.

    The quantizer uses bins of width 2a for the given noise.
    """
    if name == QUANTIZER:
        return quantizer_strategy(2.0 * noise.a)
    if name == ZERO_INPUT:
        return zero_input_strategy(params.sigma0)
    if name == ZERO_FORCING:
        return zero_forcing_strategy()
    if name == ZERO_INPUT_PASSTHROUGH:
        return zero_input_passthrough_strategy()
    if name == LINEAR:
        if alpha is None or beta is None:
            raise InvalidInputError("The linear strategy needs both alpha and beta")
        return linear_strategy(LinearStrategySpec(alpha=alpha, beta=beta))
    if name == BEST:
        return best_strategy(params, noise)
    raise InvalidInputError(
        f"Unknown strategy {name}, choose from {', '.join(STRATEGY_NAMES)}"
    )
