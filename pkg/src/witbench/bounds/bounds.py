"""Analytic upper and lower bounds on the optimal cost.

Bayesian model: Gaussian initial state with standard deviation sigma0, bounded
unit variance noise with differential entropy h (bits). The achievable cost is
bounded above by the best of quantization, zero-input and zero-forcing, and
below by

    inf_{P >= 0}  k^2 P + ((sqrt(kappa(P)) - sqrt(P))^+)^2

    kappa(P) = sigma0^2 2^(2h) / (2 pi e ((sigma0 + sqrt(P))^2 + 1))

Adversarial model: arbitrary initial state, noise confined to (-sqrt(3),
sqrt(3)). Upper bound min(3k^2, 3), lower bound as above with kappa replaced by
its sigma0 -> infinity limit 6/(pi e).

Infima are computed over s = sqrt(P) with bounds.minimize.minimize_scalar.
"""
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from witbench import getLogger
from witbench.bounds.minimize import minimize_scalar
from witbench.core.constants import (
    QUANTIZER,
    TWO_PI_E,
    ZERO_FORCING,
    ZERO_INPUT,
    ZERO_INPUT_PASSTHROUGH,
)
from witbench.core.core import InvalidInputError, ProblemParams
from witbench.core.noise import NoiseModel

logger = getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

MU_NUMERATOR = 200.0

ADVERSARIAL_KAPPA = 6.0 / (math.pi * math.e)


@dataclass(frozen=True)
class BoundReport:
    """Upper and lower bound on the optimal cost, the power minimizing the lower
    bound objective, their ratio and the strategy attaining the upper bound"""

    upper: float
    lower: float
    p_star: float
    ratio: float
    winning_strategy: str


def _check_power(power: ArrayLike) -> np.ndarray:
    power = np.asarray(power, dtype=float)
    if np.any(power < 0):
        raise InvalidInputError(f"Power P must be non-negative, got {power}")
    return power


def _as_output(value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(value) == 0 else value


def bound_ratio(upper: float, lower: float) -> float:
    """upper/lower, 1 when both vanish and infinity when only lower does"""
    if lower == 0:
        return 1.0 if upper == 0 else math.inf
    return upper / lower


def upper_bound_bayes(params: ProblemParams, noise: NoiseModel) -> Tuple[float, str]:
    """Smallest of the quantization (k^2 a^2), zero-input (sigma0^2/(sigma0^2+1))
    and zero-forcing (k^2 sigma0^2) costs.

    Ties go to the first in that order.

    Returns:
        Tuple with the bound and the label of the strategy attaining it
    """
    sigma0_sq = params.sigma0 ** 2
    candidates = [
        (params.k ** 2 * noise.a ** 2, QUANTIZER),
        (sigma0_sq / (sigma0_sq + 1.0), ZERO_INPUT),
        (params.k ** 2 * sigma0_sq, ZERO_FORCING),
    ]
    bound, winner = min(candidates, key=lambda candidate: candidate[0])
    return bound, winner


def kappa(power: ArrayLike, sigma0: float, h_bits: float) -> ArrayLike:
    """Lower bound kernel, the smallest distortion the second controller can
    reach when the first uses power P"""
    power = _check_power(power)
    value = (
        sigma0 ** 2
        * 2.0 ** (2.0 * h_bits)
        / (TWO_PI_E * ((sigma0 + np.sqrt(power)) ** 2 + 1.0))
    )
    return _as_output(value)


def mmse_lower_bound(power: ArrayLike, sigma0: float, h_bits: float) -> ArrayLike:
    """((sqrt(kappa(P)) - sqrt(P))^+)^2"""
    power = _check_power(power)
    gap = np.maximum(np.sqrt(kappa(power, sigma0, h_bits)) - np.sqrt(power), 0.0)
    return _as_output(gap ** 2)


def lower_bound_bayes(params: ProblemParams, h_bits: float) -> Tuple[float, float]:
    """Information theoretic lower bound on the expected cost.

    The objective k^2 P + mmse_lower_bound(P) equals k^2 P for P >= kappa(0),
    so the search covers P in [0, 2 kappa(0)], clipped to [0, max(sigma0^2, 1)].

    Returns:
        Tuple with the bound and the minimizing power P*
    """
    k_sq = params.k ** 2
    power_hi = min(
        max(params.sigma0 ** 2, 1.0), 2.0 * kappa(0.0, params.sigma0, h_bits)
    )

    def objective(root_power):
        power = np.asarray(root_power, dtype=float) ** 2
        return k_sq * power + mmse_lower_bound(power, params.sigma0, h_bits)

    root_p_star, bound = minimize_scalar(objective, 0.0, math.sqrt(power_hi))
    logger.debug("Bayes lower bound %g at P*=%g", bound, root_p_star ** 2)
    return max(float(bound), 0.0), root_p_star ** 2


def capacity_bound(power: ArrayLike, sigma0: float, h_bits: float) -> ArrayLike:
    """Upper bound in bits per dimension on the mutual information between the
    state x1 and the second observation y2, for input power P"""
    power = _check_power(power)
    variance = (sigma0 + np.sqrt(power)) ** 2 + 1.0
    return _as_output(0.5 * np.log2(TWO_PI_E * variance) - h_bits)


def distortion_rate_gaussian(sigma0_sq: ArrayLike, rate: ArrayLike) -> ArrayLike:
    """Smallest mean squared error for a Gaussian source of variance sigma0_sq
    described at rate R bits"""
    rate = np.asarray(rate, dtype=float)
    if np.any(rate < 0):
        raise InvalidInputError(f"Rate must be non-negative, got {rate}")
    return _as_output(np.asarray(sigma0_sq, dtype=float) * 2.0 ** (-2.0 * rate))


def mu_bound(a: float, h_bits: float) -> float:
    """Guaranteed ratio between the Bayesian upper and lower bound,
    200 a^2 / 2^(2h)"""
    if a < 1:
        raise InvalidInputError(f"Noise half-width a must be >= 1, got {a}")
    return MU_NUMERATOR * a ** 2 / 2.0 ** (2.0 * h_bits)


def divergence_lower_bound(sigma0: float, a: float) -> float:
    """sigma0^2 / (4 a^2), below which the optimal linear cost cannot fall
    relative to the quantization upper bound k^2 a^2"""
    return sigma0 ** 2 / (4.0 * a ** 2)


def bayes_report(params: ProblemParams, noise: NoiseModel) -> BoundReport:
    """Both Bayesian bounds for one parameter point"""
    upper, winner = upper_bound_bayes(params, noise)
    lower, p_star = lower_bound_bayes(params, noise.h_bits)
    return BoundReport(
        upper=upper,
        lower=lower,
        p_star=p_star,
        ratio=bound_ratio(upper, lower),
        winning_strategy=winner,
    )


def _check_weight(k: float) -> None:
    if not k > 0:
        raise InvalidInputError(f"k must be > 0, got {k}")


def upper_bound_adversarial(k: float) -> float:
    """min(3k^2, 3): quantization with bins of width 2 sqrt(3) costs at most 3k^2,
    zero input with y2 taken as the estimate costs at most 3"""
    _check_weight(k)
    return min(3.0 * k ** 2, 3.0)


def lower_bound_adversarial(k: float) -> Tuple[float, float]:
    """Lower bound on the worst-case cost.

    Returns:
        Tuple with the bound and the minimizing power P*
    """
    _check_weight(k)
    k_sq = k ** 2
    root_kappa = math.sqrt(ADVERSARIAL_KAPPA)

    def objective(root_power):
        root_power = np.asarray(root_power, dtype=float)
        return k_sq * root_power ** 2 + np.maximum(root_kappa - root_power, 0.0) ** 2

    root_p_star, bound = minimize_scalar(objective, 0.0, root_kappa)
    return float(bound), root_p_star ** 2


def adversarial_report(k: float) -> BoundReport:
    """Both adversarial bounds for one input-cost weight"""
    upper = upper_bound_adversarial(k)
    lower, p_star = lower_bound_adversarial(k)
    return BoundReport(
        upper=upper,
        lower=lower,
        p_star=p_star,
        ratio=bound_ratio(upper, lower),
        winning_strategy=QUANTIZER if k ** 2 <= 1 else ZERO_INPUT_PASSTHROUGH,
    )
