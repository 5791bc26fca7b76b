"""Sweep configuration: configsuite schema and conversion to SweepConfig"""
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import configsuite  # lgtm [py/import-and-import-from]
import numpy as np
from configsuite import MetaKeys as MK  # lgtm [py/import-and-import-from]
from configsuite import types  # lgtm [py/import-and-import-from]

from witbench import getLogger
from witbench.core.constants import DEFAULT_MC_SAMPLES, MIN_MC_SAMPLES
from witbench.core.core import InvalidInputError

logger = getLogger(__name__)

MODELS = ["bayes", "adversarial"]
FORMATS = ["csv", "json"]


@dataclass(frozen=True)
class SweepConfig:
    """Grids and settings for a parameter sweep. The noise is a selector:
    uniform, triangular or the path to a two-column density file"""

    k_grid: List[float]
    sigma0_grid: List[float]
    noise: str
    n: int
    seed: int
    m: int
    out_path: Optional[str]
    format: str = "csv"
    model: str = "bayes"


@configsuite.validator_msg("Is a positive number")
def _is_positive(value) -> bool:
    return value > 0


@configsuite.validator_msg("Is a non-negative number")
def _is_non_negative(value) -> bool:
    return value >= 0


@configsuite.validator_msg(f"Has at least {MIN_MC_SAMPLES} samples")
def _is_enough_samples(value) -> bool:
    return value >= MIN_MC_SAMPLES


@configsuite.validator_msg("Is a supported output format")
def _is_valid_format(value) -> bool:
    return value in FORMATS


@configsuite.validator_msg("Is a supported model")
def _is_valid_model(value) -> bool:
    return value in MODELS


@configsuite.validator_msg("Has lo <= hi and count >= 1")
def _is_valid_range(value) -> bool:
    if value is None:
        return True
    return 0 < value["lo"] <= value["hi"] and value["count"] >= 1


def _entry(config, key):
    return config[key] if key in config else None


@configsuite.validator_msg("Has a grid, given as a list or a range")
def _has_grids(config) -> bool:
    has_k = bool(_entry(config, "k_grid")) or _entry(config, "k_range") is not None
    if _entry(config, "model") == "adversarial":
        return has_k
    return has_k and (
        bool(_entry(config, "sigma0_grid"))
        or _entry(config, "sigma0_range") is not None
    )


def _range_schema(description: str) -> Dict[Any, Any]:
    return {
        MK.Type: types.NamedDict,
        MK.Description: description,
        MK.AllowNone: True,
        MK.ElementValidators: (_is_valid_range,),
        MK.Content: {
            "lo": {MK.Type: types.Number},
            "hi": {MK.Type: types.Number},
            "count": {MK.Type: types.Integer},
        },
    }


def get_cfg_schema() -> dict:
    """Schema for sweep configuration files (JSON or YAML)"""
    return {
        MK.Type: types.NamedDict,
        MK.ElementValidators: (_has_grids,),
        MK.Content: {
            "k_grid": {
                MK.Type: types.List,
                MK.Description: "Explicit list of input-cost weights",
                MK.Content: {
                    MK.Item: {
                        MK.Type: types.Number,
                        MK.ElementValidators: (_is_positive,),
                    }
                },
            },
            "k_range": _range_schema("Log-spaced k grid, lo/hi/count"),
            "sigma0_grid": {
                MK.Type: types.List,
                MK.Description: "Explicit list of initial state standard deviations",
                MK.Content: {
                    MK.Item: {
                        MK.Type: types.Number,
                        MK.ElementValidators: (_is_non_negative,),
                    }
                },
            },
            "sigma0_range": _range_schema("Log-spaced sigma0 grid, lo/hi/count"),
            "noise": {MK.Type: types.String, MK.Default: "uniform"},
            "n": {
                MK.Type: types.Integer,
                MK.Default: DEFAULT_MC_SAMPLES,
                MK.ElementValidators: (_is_enough_samples,),
            },
            "seed": {
                MK.Type: types.Integer,
                MK.Default: 0,
                MK.ElementValidators: (_is_non_negative,),
            },
            "m": {
                MK.Type: types.Integer,
                MK.Default: 1,
                MK.ElementValidators: (_is_positive,),
            },
            "out_path": {MK.Type: types.String, MK.AllowNone: True},
            "format": {
                MK.Type: types.String,
                MK.Default: "csv",
                MK.ElementValidators: (_is_valid_format,),
            },
            "model": {
                MK.Type: types.String,
                MK.Default: "bayes",
                MK.ElementValidators: (_is_valid_model,),
            },
        },
    }


def log_grid(lo: float, hi: float, count: int) -> List[float]:
    """count log-spaced points from lo to hi, both included"""
    return [float(value) for value in np.geomspace(lo, hi, int(count))]


def _grid(explicit, range_spec) -> List[float]:
    values = [float(value) for value in explicit or ()]
    if range_spec is not None:
        values += log_grid(range_spec.lo, range_spec.hi, range_spec.count)
    return values


def sweep_config_from_dict(cfg: Dict[str, Any]) -> SweepConfig:
    """Validate a configuration dictionary and turn it into a SweepConfig.

    Raises:
        InvalidInputError: with the configsuite error messages if the
            configuration is invalid.
    """
    cfg = {key: value for key, value in cfg.items() if value is not None}
    cfg.setdefault("k_grid", [])
    cfg.setdefault("sigma0_grid", [])
    suite = configsuite.ConfigSuite(cfg, get_cfg_schema(), deduce_required=True)
    if not suite.valid:
        for error in suite.errors:
            logger.error(str(error))
        raise InvalidInputError(f"Invalid sweep configuration: {suite.errors}")

    snapshot = suite.snapshot
    sigma0_grid = _grid(snapshot.sigma0_grid, snapshot.sigma0_range)
    return SweepConfig(
        k_grid=_grid(snapshot.k_grid, snapshot.k_range),
        sigma0_grid=sigma0_grid or [0.0],
        noise=snapshot.noise,
        n=snapshot.n,
        seed=snapshot.seed,
        m=snapshot.m,
        out_path=snapshot.out_path,
        format=snapshot.format,
        model=snapshot.model,
    )
