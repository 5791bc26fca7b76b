"""Command line interface: bounds, simulations, adversarial searches and sweeps"""
import argparse
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
import yaml

from witbench import __version__, getLogger
from witbench.bounds.bounds import adversarial_report, bayes_report, mu_bound
from witbench.cli.config import (
    FORMATS,
    MODELS,
    SweepConfig,
    sweep_config_from_dict,
)
from witbench.core.constants import (
    BEST,
    DEFAULT_MC_SAMPLES,
    QUANTIZER,
    TWO_PI_E,
)
from witbench.core.core import InvalidInputError, ProblemParams
from witbench.core.noise import InvalidDensityError, NoiseModel, noise_by_name
from witbench.sim.adversarial import DEFAULT_SEARCH_GRID, worst_case_cost
from witbench.sim.sim import monte_carlo_cost, ratio_report, worker_count
from witbench.strategies.strategies import (
    STRATEGY_NAMES,
    adversarial_strategy,
    strategy_by_name,
)

DESCRIPTION = """
Bounds and simulations for the two-controller benchmark with bounded
observation noise.

Sub-commands:

* ``bounds``: upper and lower bound on the optimal Bayesian cost, their ratio
  and the strategy attaining the upper bound.
* ``simulate``: Monte Carlo estimate of the expected cost of one strategy.
* ``adversarial``: worst-case cost of one strategy by grid search, with the
  adversarial bounds for reference.
* ``sweep``: bounds, Monte Carlo costs and linear costs over a grid of
  parameters, written to CSV or JSON. Exits with code 1 if any bound ratio
  exceeds its guaranteed constant.

Exit codes: 0 success, 1 certification failure, 2 invalid input, 3 I/O error.
"""

EXAMPLES = """
.. code-block:: console

  witbench bounds --k 0.2 --sigma0 5
  witbench simulate --k 0.2 --sigma0 5 --strategy best --n 100000 --seed 1
  witbench adversarial --k 0.5 --strategy quantizer
  witbench sweep --k-range 0.01 10 25 --sigma0-range 0.01 100 25 --out sweep.csv
"""

logger = getLogger(__name__)

EXIT_CERTIFICATION = 1
EXIT_USAGE = 2
EXIT_IO = 3

FLOAT_FORMAT = "{:.12g}"

BAYES_COLUMNS = [
    "k",
    "sigma0",
    "noise",
    "m",
    "upper",
    "lower",
    "p_star",
    "ratio",
    "mu_bound",
    "mc_best_mean",
    "mc_best_ci",
    "linear_cost",
    "linear_ratio",
    "winner",
]

ADVERSARIAL_COLUMNS = ["k", "upper", "lower", "p_star", "ratio", "ratio_cap", "winner"]

SUMMARY_LABEL = "max"

# Guaranteed ceiling on the ratio of the adversarial bounds
ADVERSARIAL_RATIO_CAP = TWO_PI_E


class CustomFormatter(
    argparse.ArgumentDefaultsHelpFormatter, argparse.RawDescriptionHelpFormatter
):
    """
    Multiple inheritance used for argparse to get both
    defaults and raw description formatter
    """

    # pylint: disable=unnecessary-pass

    pass


def _add_logging_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Be verbose, log progress"
    )
    parser.add_argument("--debug", action="store_true", help="Debug mode")


def _add_problem_options(parser: argparse.ArgumentParser, sigma0_required=True):
    parser.add_argument("--k", type=float, required=True, help="Input-cost weight")
    parser.add_argument(
        "--sigma0",
        type=float,
        required=sigma0_required,
        default=None if sigma0_required else 1.0,
        help="Standard deviation of the initial state",
    )
    parser.add_argument("--m", type=int, default=1, help="Vector length")


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out", type=str, help="File to write, the table goes to stdout if not given"
    )
    parser.add_argument(
        "--format", type=str, choices=FORMATS, default="csv", help="Output format"
    )


def _add_strategy_options(parser: argparse.ArgumentParser, default: str) -> None:
    parser.add_argument(
        "--strategy",
        type=str,
        choices=STRATEGY_NAMES,
        default=default,
        help="Strategy to evaluate",
    )
    parser.add_argument("--alpha", type=float, help="First stage gain, linear only")
    parser.add_argument("--beta", type=float, help="Second stage gain, linear only")


NOISE_HELP = (
    "Observation noise: uniform, triangular, or the path to a two-column "
    "text file with a tabulated density"
)


def get_parser() -> argparse.ArgumentParser:
    """A parser for command line argument parsing and for documentation."""
    parser = argparse.ArgumentParser(
        prog="witbench",
        formatter_class=CustomFormatter,
        description=DESCRIPTION,
        epilog=EXAMPLES,
    )
    parser.add_argument(
        "--version",
        action="version",
        version="%(prog)s (witbench version " + __version__ + ")",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    bounds_parser = subparsers.add_parser(
        "bounds",
        formatter_class=CustomFormatter,
        help="Upper and lower bound on the optimal Bayesian cost",
    )
    _add_problem_options(bounds_parser)
    bounds_parser.add_argument("--noise", type=str, default="uniform", help=NOISE_HELP)
    _add_output_options(bounds_parser)
    _add_logging_options(bounds_parser)

    simulate_parser = subparsers.add_parser(
        "simulate",
        formatter_class=CustomFormatter,
        help="Monte Carlo estimate of the expected cost of a strategy",
    )
    _add_problem_options(simulate_parser)
    simulate_parser.add_argument(
        "--noise", type=str, default="uniform", help=NOISE_HELP
    )
    _add_strategy_options(simulate_parser, default=BEST)
    simulate_parser.add_argument(
        "--n", type=int, default=DEFAULT_MC_SAMPLES, help="Number of samples"
    )
    simulate_parser.add_argument("--seed", type=int, default=0, help="Random seed")
    _add_output_options(simulate_parser)
    _add_logging_options(simulate_parser)

    adversarial_parser = subparsers.add_parser(
        "adversarial",
        formatter_class=CustomFormatter,
        help="Worst-case cost of a strategy under bounded noise",
    )
    _add_problem_options(adversarial_parser, sigma0_required=False)
    _add_strategy_options(adversarial_parser, default=QUANTIZER)
    adversarial_parser.add_argument(
        "--x0-range",
        type=float,
        nargs=2,
        metavar=("LO", "HI"),
        help="Search box for the initial state, scaled from sigma0 if not given",
    )
    adversarial_parser.add_argument(
        "--grid",
        type=int,
        default=DEFAULT_SEARCH_GRID,
        help="Grid points in each search direction",
    )
    _add_output_options(adversarial_parser)
    _add_logging_options(adversarial_parser)

    # Sweep settings may come from --config, defaults are applied after merging
    sweep_parser = subparsers.add_parser(
        "sweep",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        help="Bounds and costs over a parameter grid",
    )
    sweep_parser.add_argument(
        "--config", type=str, help="YAML or JSON file with sweep settings"
    )
    sweep_parser.add_argument(
        "--model", type=str, choices=MODELS, default=None, help="Cost model [bayes]"
    )
    sweep_parser.add_argument("--k", type=float, nargs="+", help="k values")
    sweep_parser.add_argument(
        "--k-range",
        type=float,
        nargs=3,
        metavar=("LO", "HI", "COUNT"),
        help="Log-spaced k values",
    )
    sweep_parser.add_argument("--sigma0", type=float, nargs="+", help="sigma0 values")
    sweep_parser.add_argument(
        "--sigma0-range",
        type=float,
        nargs=3,
        metavar=("LO", "HI", "COUNT"),
        help="Log-spaced sigma0 values",
    )
    sweep_parser.add_argument(
        "--noise", type=str, default=None, help=NOISE_HELP + " [uniform]"
    )
    sweep_parser.add_argument(
        "--n",
        type=int,
        default=None,
        help=f"Monte Carlo samples per point [{DEFAULT_MC_SAMPLES}]",
    )
    sweep_parser.add_argument("--seed", type=int, default=None, help="Random seed [0]")
    sweep_parser.add_argument("--m", type=int, default=None, help="Vector length [1]")
    sweep_parser.add_argument(
        "--out", type=str, help="File to write, the table goes to stdout if not given"
    )
    sweep_parser.add_argument(
        "--format", type=str, choices=FORMATS, default=None, help="Output format [csv]"
    )
    _add_logging_options(sweep_parser)

    return parser


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return ""
        return FLOAT_FORMAT.format(float(value))
    return str(value)


def _json_cell(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            return None if math.isnan(value) else str(float(value))
        return float(FLOAT_FORMAT.format(float(value)))
    return value


def render_table(rows: List[Dict[str, Any]], columns: List[str], fmt: str) -> str:
    """Render rows as CSV with a header, or as a JSON array of flat objects.

    Floats are written with 12 significant digits.
    """
    if fmt == "json":
        records = [{col: _json_cell(row.get(col)) for col in columns} for row in rows]
        return json.dumps(records, indent=2) + "\n"
    dframe = pd.DataFrame(
        [[_format_cell(row.get(col)) for col in columns] for row in rows],
        columns=columns,
    )
    return dframe.to_csv(index=False)


def write_table(
    rows: List[Dict[str, Any]], columns: List[str], fmt: str, out: Optional[str]
) -> None:
    """Write the table to out, or print it if out is None. An unwritable
    destination exits with code 3"""
    text = render_table(rows, columns, fmt)
    if out is None:
        print(text, end="")
        return
    try:
        Path(out).write_text(text, encoding="utf8")
    except OSError as err:
        logger.error("Could not write %s: %s", out, err)
        sys.exit(EXIT_IO)
    logger.info("Wrote %d rows to %s", len(rows), out)


def bounds_row(params: ProblemParams, noise: NoiseModel) -> Dict[str, Any]:
    """Bayesian bounds for one parameter point"""
    report = bayes_report(params, noise)
    return {
        "k": params.k,
        "sigma0": params.sigma0,
        "noise": noise.label,
        "m": params.m,
        "upper": report.upper,
        "lower": report.lower,
        "p_star": report.p_star,
        "ratio": report.ratio,
        "mu_bound": mu_bound(noise.a, noise.h_bits),
        "winner": report.winning_strategy,
    }


def simulate_row(
    params: ProblemParams,
    noise: NoiseModel,
    strategy_name: str,
    n: int,
    seed: int,
    alpha: Optional[float] = None,
    beta: Optional[float] = None,
) -> Dict[str, Any]:
    """Monte Carlo cost of one strategy, with the Bayesian bounds for context"""
    strategy = strategy_by_name(strategy_name, params, noise, alpha=alpha, beta=beta)
    estimate = monte_carlo_cost(params, strategy, noise, n, seed)
    report = bayes_report(params, noise)
    return {
        "strategy": strategy.label,
        "k": params.k,
        "sigma0": params.sigma0,
        "noise": noise.label,
        "m": params.m,
        "n": estimate.n,
        "seed": estimate.seed,
        "mc_mean": estimate.mean,
        "mc_ci": estimate.ci_halfwidth,
        "upper": report.upper,
        "lower": report.lower,
    }


def adversarial_row(
    params: ProblemParams,
    strategy_name: str,
    alpha: Optional[float] = None,
    beta: Optional[float] = None,
    x0_range: Optional[List[float]] = None,
    grid: int = DEFAULT_SEARCH_GRID,
) -> Dict[str, Any]:
    """Worst-case cost of one strategy, with the adversarial bounds for context.

    The quantizer uses bins of width 2 sqrt(3), matching the noise interval,
    and "best" picks the strategy attaining the adversarial upper bound.
    """
    if strategy_name == BEST:
        strategy = adversarial_strategy(params.k)
    else:
        strategy = strategy_by_name(
            strategy_name, params, noise_by_name("uniform"), alpha=alpha, beta=beta
        )
    worst = worst_case_cost(
        params,
        strategy,
        x0_range=tuple(x0_range) if x0_range is not None else None,
        grid=grid,
    )
    report = adversarial_report(params.k)
    return {
        "strategy": strategy.label,
        "k": params.k,
        "sigma0": params.sigma0,
        "worst_case": worst.value,
        "at_x0": worst.at_x0,
        "at_z": worst.at_z,
        "on_x0_boundary": worst.on_x0_boundary,
        "upper": report.upper,
        "lower": report.lower,
    }


def bayes_sweep_row(
    params: ProblemParams, noise: NoiseModel, n: int, seed: int
) -> Dict[str, Any]:
    """One row of a Bayesian sweep. The Monte Carlo run is single threaded,
    sweep points run concurrently instead"""
    report = ratio_report(params, noise, n, seed, workers=1)
    return {
        "k": params.k,
        "sigma0": params.sigma0,
        "noise": report.noise_label,
        "m": params.m,
        "upper": report.bounds.upper,
        "lower": report.bounds.lower,
        "p_star": report.bounds.p_star,
        "ratio": report.bounds.ratio,
        "mu_bound": mu_bound(noise.a, noise.h_bits),
        "mc_best_mean": report.mc_best.mean,
        "mc_best_ci": report.mc_best.ci_halfwidth,
        "linear_cost": report.linear_cost,
        "linear_ratio": report.linear_ratio,
        "winner": report.bounds.winning_strategy,
    }


def adversarial_sweep_row(k: float) -> Dict[str, Any]:
    report = adversarial_report(k)
    return {
        "k": k,
        "upper": report.upper,
        "lower": report.lower,
        "p_star": report.p_star,
        "ratio": report.ratio,
        "ratio_cap": ADVERSARIAL_RATIO_CAP,
        "winner": report.winning_strategy,
    }


def run_sweep(config: SweepConfig) -> List[Dict[str, Any]]:
    """Evaluate every grid point, k outermost, and append a summary row with
    the largest ratios observed.

    Points are evaluated concurrently, rows come back in grid order.
    """
    workers = worker_count()
    if config.model == "adversarial":
        logger.info("Adversarial sweep over %d k values", len(config.k_grid))
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(adversarial_sweep_row, config.k_grid))
        rows.append(
            {
                "k": SUMMARY_LABEL,
                "ratio": max(row["ratio"] for row in rows),
                "ratio_cap": ADVERSARIAL_RATIO_CAP,
            }
        )
        return rows

    noise = noise_by_name(config.noise)
    points = [
        ProblemParams(k=k, sigma0=sigma0, m=config.m)
        for k in config.k_grid
        for sigma0 in config.sigma0_grid
    ]
    logger.info(
        "Bayesian sweep over %d points with %s noise, %d samples per point",
        len(points),
        noise.label,
        config.n,
    )

    def run_point(params: ProblemParams) -> Dict[str, Any]:
        return bayes_sweep_row(params, noise, config.n, config.seed)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        rows = list(executor.map(run_point, points))
    rows.append(
        {
            "k": SUMMARY_LABEL,
            "noise": noise.label,
            "m": config.m,
            "ratio": max(row["ratio"] for row in rows),
            "mu_bound": mu_bound(noise.a, noise.h_bits),
            "linear_ratio": max(row["linear_ratio"] for row in rows),
        }
    )
    return rows


def certification_failures(rows: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """Rows whose bound ratio exceeds the guaranteed constant"""
    failures = []
    for row in rows:
        if row["k"] == SUMMARY_LABEL:
            continue
        cap = row["ratio_cap"] if "ratio_cap" in row else row["mu_bound"]
        if row["ratio"] > cap:
            failures.append(row)
    return failures


def load_config_file(path: str) -> Dict[str, Any]:
    """Parse a YAML (or JSON, which YAML reads) sweep configuration file"""
    return yaml.safe_load(Path(path).read_text(encoding="utf8")) or {}


def sweep_cli_config(args: argparse.Namespace) -> Dict[str, Any]:
    """Sweep settings given on the command line, overriding the config file"""
    cli_config: Dict[str, Any] = {
        "model": args.model,
        "k_grid": args.k,
        "sigma0_grid": args.sigma0,
        "noise": args.noise,
        "n": args.n,
        "seed": args.seed,
        "m": args.m,
        "out_path": args.out,
        "format": args.format,
    }
    for key, values in (("k_range", args.k_range), ("sigma0_range", args.sigma0_range)):
        if values is not None:
            cli_config[key] = {
                "lo": values[0],
                "hi": values[1],
                "count": int(values[2]),
            }
    return {key: value for key, value in cli_config.items() if value is not None}


def _params(args: argparse.Namespace) -> ProblemParams:
    return ProblemParams(k=args.k, sigma0=args.sigma0, m=args.m)


def main() -> None:
    """Entry point from command line"""
    parser = get_parser()
    args = parser.parse_args()

    if args.verbose:
        logging.getLogger("witbench").setLevel(logging.INFO)
    if args.debug:
        logging.getLogger("witbench").setLevel(logging.DEBUG)

    try:
        if args.command == "bounds":
            rows = [bounds_row(_params(args), noise_by_name(args.noise))]
            columns = list(rows[0])
        elif args.command == "simulate":
            rows = [
                simulate_row(
                    _params(args),
                    noise_by_name(args.noise),
                    args.strategy,
                    args.n,
                    args.seed,
                    alpha=args.alpha,
                    beta=args.beta,
                )
            ]
            columns = list(rows[0])
        elif args.command == "adversarial":
            rows = [
                adversarial_row(
                    _params(args),
                    args.strategy,
                    alpha=args.alpha,
                    beta=args.beta,
                    x0_range=args.x0_range,
                    grid=args.grid,
                )
            ]
            columns = list(rows[0])
        else:
            file_config = {}
            if args.config:
                try:
                    file_config = load_config_file(args.config)
                except OSError as err:
                    logger.error("Could not read %s: %s", args.config, err)
                    sys.exit(EXIT_IO)
                except yaml.YAMLError as err:
                    parser.error(f"Could not parse {args.config}: {err}")
            if not isinstance(file_config, dict):
                parser.error(f"{args.config} must contain a mapping of settings")
            config = sweep_config_from_dict({**file_config, **sweep_cli_config(args)})
            rows = run_sweep(config)
            columns = (
                ADVERSARIAL_COLUMNS if config.model == "adversarial" else BAYES_COLUMNS
            )
            write_table(rows, columns, config.format, config.out_path)
            failures = certification_failures(rows)
            for row in failures:
                logger.error(
                    "Ratio %g exceeds its guaranteed bound at k=%g, sigma0=%s",
                    row["ratio"],
                    row["k"],
                    row.get("sigma0", "-"),
                )
            if failures:
                sys.exit(EXIT_CERTIFICATION)
            return
    except (InvalidInputError, InvalidDensityError) as err:
        parser.error(str(err))

    write_table(rows, columns, args.format, args.out)


if __name__ == "__main__":
    main()
