"""Bounded, zero-mean, unit variance observation noise models"""
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy import integrate, special

from witbench import getLogger
from witbench.core.constants import DEFAULT_ENTROPY_GRID, GAUSSIAN_H_BITS, SQRT3

logger = getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-6


class InvalidDensityError(ValueError):
    """Raised when a tabulated or user supplied density is not a density"""


@dataclass(frozen=True)
class NoiseModel:
    """Noise law with support inside (-a, a) and differential entropy h_bits.

    The draw function maps a numpy Generator and a sample shape to noise values.
    """

    a: float
    h_bits: float
    draw: Callable[[np.random.Generator, Union[int, Tuple[int, ...]]], np.ndarray]
    label: str

    def __post_init__(self):
        if self.a < 1.0:
            raise InvalidDensityError(
                f"A unit variance law needs support half-width a >= 1, got {self.a}"
            )
        if self.h_bits > GAUSSIAN_H_BITS + 1e-9:
            raise InvalidDensityError(
                f"Entropy {self.h_bits} bits exceeds the unit variance Gaussian "
                f"entropy {GAUSSIAN_H_BITS}"
            )

    @property
    def entropy_power(self) -> float:
        """2^(2 h(Z))"""
        return 2.0 ** (2.0 * self.h_bits)

    def sample(self, seed: int, count: int) -> np.ndarray:
        """Draw count noise values, a deterministic function of the seed"""
        return self.draw(np.random.default_rng(seed), count)


def _open_interval_clip(values: np.ndarray, half_width: float) -> np.ndarray:
    """Pull samples sitting exactly on +/- half_width one ulp inwards"""
    inner = np.nextafter(half_width, 0.0)
    return np.clip(values, -inner, inner)


def uniform_noise() -> NoiseModel:
    """Uniform law on (-sqrt(3), sqrt(3)), the unit variance uniform"""

    def draw(rng: np.random.Generator, size) -> np.ndarray:
        return _open_interval_clip(rng.uniform(-SQRT3, SQRT3, size), SQRT3)

    return NoiseModel(
        a=SQRT3, h_bits=math.log2(2.0 * SQRT3), draw=draw, label="uniform"
    )


def triangular_noise() -> NoiseModel:
    """Symmetric triangular law on (-sqrt(6), sqrt(6)), unit variance.

    Its entropy is 1/2 + ln(sqrt(6)) nats.
    """
    half_width = math.sqrt(6.0)

    def draw(rng: np.random.Generator, size) -> np.ndarray:
        return _open_interval_clip(
            rng.triangular(-half_width, 0.0, half_width, size), half_width
        )

    return NoiseModel(
        a=half_width,
        h_bits=0.5 * math.log2(6.0 * math.e),
        draw=draw,
        label="triangular",
    )


def entropy_oracle(
    pdf: Callable[[np.ndarray], np.ndarray],
    support: Tuple[float, float],
    grid_points: int = DEFAULT_ENTROPY_GRID,
) -> float:
    """Differential entropy in bits of a bounded density, by trapezoidal
    integration of -f log2 f on a uniform grid over the support.

    Args:
        pdf: Vectorized density function
        support: (lower, upper) end of the support
        grid_points: Number of grid points, endpoints included

    Raises:
        InvalidDensityError: if the density is negative, non-finite or does not
            integrate to 1 within 1e-6.
    """
    lower, upper = float(support[0]), float(support[1])
    if not upper > lower:
        raise InvalidDensityError(f"Empty support ({lower}, {upper})")
    if grid_points < 2:
        raise InvalidDensityError("Need at least two grid points")

    grid = np.linspace(lower, upper, int(grid_points))
    try:
        values = np.asarray(pdf(grid), dtype=float)
    except (TypeError, ValueError):
        values = np.vectorize(pdf, otypes=[float])(grid)
    if values.shape != grid.shape:
        values = np.vectorize(pdf, otypes=[float])(grid)
    if not np.all(np.isfinite(values)) or np.any(values < 0):
        raise InvalidDensityError("Density must be finite and non-negative")

    mass = integrate.trapezoid(values, grid)
    if abs(mass - 1.0) > NORMALIZATION_TOLERANCE:
        raise InvalidDensityError(f"Density integrates to {mass}, not 1")

    # entr(f) = -f ln f, with entr(0) = 0
    entropy_nats = integrate.trapezoid(special.entr(values), grid)
    logger.debug("Entropy on %d points: %g nats", grid_points, entropy_nats)
    return float(entropy_nats / math.log(2.0))


def tabulated_noise(
    x: np.ndarray,
    density: np.ndarray,
    label: str = "custom",
    grid_points: int = DEFAULT_ENTROPY_GRID,
) -> NoiseModel:
    """Noise model from a tabulated density.

    The table is linearly interpolated onto a uniform grid, normalized, centred
    and rescaled to unit variance. Sampling is by inverse CDF.

    Args:
        x: Strictly increasing abscissas
        density: Density values (need not be normalized)
        label: Name used in reports
        grid_points: Resolution of the working grid
    """
    x = np.asarray(x, dtype=float)
    density = np.asarray(density, dtype=float)
    if x.ndim != 1 or x.shape != density.shape or len(x) < 2:
        raise InvalidDensityError("Need two equally long columns with 2+ rows")
    if np.any(np.diff(x) <= 0):
        raise InvalidDensityError("Abscissas must be strictly increasing")
    if not np.all(np.isfinite(density)) or np.any(density < 0):
        raise InvalidDensityError("Density values must be finite and non-negative")

    grid = np.linspace(x[0], x[-1], int(grid_points))
    values = np.interp(grid, x, density)
    mass = integrate.trapezoid(values, grid)
    if mass <= 0:
        raise InvalidDensityError("Density has zero mass")
    values = values / mass

    mean = integrate.trapezoid(grid * values, grid)
    std = math.sqrt(integrate.trapezoid((grid - mean) ** 2 * values, grid))
    if std == 0:
        raise InvalidDensityError("Density has zero variance")
    logger.info("Rescaling tabulated density: mean %g, std %g", mean, std)

    grid = (grid - mean) / std
    values = values * std
    # Interpolated density stays positive up to the neighbouring grid points
    positive = np.flatnonzero(values > 0)
    first = max(positive[0] - 1, 0)
    last = min(positive[-1] + 1, len(grid) - 1)
    half_width = max(abs(float(grid[first])), abs(float(grid[last])), 1.0)

    def pdf(points: np.ndarray) -> np.ndarray:
        return np.interp(points, grid, values, left=0.0, right=0.0)

    h_bits = entropy_oracle(pdf, (grid[0], grid[-1]), len(grid))

    cdf = integrate.cumulative_trapezoid(values, grid, initial=0.0)
    cdf = cdf / cdf[-1]

    def draw(rng: np.random.Generator, size) -> np.ndarray:
        return _open_interval_clip(
            np.interp(rng.uniform(0.0, 1.0, size), cdf, grid), half_width
        )

    return NoiseModel(a=half_width, h_bits=h_bits, draw=draw, label=label)


def load_density_file(
    path: Union[str, Path], label: Optional[str] = None
) -> NoiseModel:
    """Load a two-column text file with x and f(x) into a noise model.

    Columns may be separated by whitespace or commas, lines starting with #
    are ignored.
    """
    try:
        lines = Path(path).read_text(encoding="utf8").splitlines()
        table = pd.read_csv(
            io.StringIO("\n".join(line.strip() for line in lines)),
            sep=r"[\s,]+",
            header=None,
            comment="#",
            engine="python",
        ).dropna(axis=1, how="all")
        if table.shape[1] >= 2:
            table = table.iloc[:, 0:2].astype(float)
    except (ValueError, pd.errors.ParserError) as err:
        raise InvalidDensityError(f"Could not read {path}: {err}") from err
    if table.shape[1] < 2:
        raise InvalidDensityError(f"{path} does not contain two columns")
    table.columns = ["x", "density"]
    table = table.sort_values("x")
    return tabulated_noise(
        table["x"].to_numpy(),
        table["density"].to_numpy(),
        label=label if label is not None else Path(path).stem,
    )


NOISE_MODELS = {"uniform": uniform_noise, "triangular": triangular_noise}


def noise_by_name(selector: str) -> NoiseModel:
    """Resolve a noise selector: a built-in law by name, otherwise the path to a
    density file"""
    if selector in NOISE_MODELS:
        return NOISE_MODELS[selector]()
    if not Path(selector).is_file():
        raise InvalidDensityError(
            f"{selector} is neither a density file nor one of "
            f"{', '.join(NOISE_MODELS)}"
        )
    return load_density_file(selector)
