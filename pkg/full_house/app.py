"""
Main entry point for the full_house application.

Parses the command line, assembles the effective configuration and runs one
command. Errors are reported on one line of stderr and mapped to exit codes:
0 on success, 2 for invalid input, 3 for numerical failures and 1 otherwise.

Author: Ron Webb
Since: 1.0.0
"""

import argparse
import json
import sys
from typing import Any, Sequence

from . import __version__
from .config import load_run_config, load_sim_config
from .errors import FullHouseError
from .service import (
    KINDS,
    InputPaths,
    cmd_adjust,
    cmd_chance,
    cmd_ingest,
    cmd_rank,
    cmd_replacement_curve,
    cmd_sensitivity,
    cmd_simulate,
)
from .util import setup_logger

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2


def _add_inputs(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("inputs")
    group.add_argument("--batting", help="batting.csv")
    group.add_argument("--pitching", help="pitching.csv")
    group.add_argument("--park-factors", help="park_factors.csv")
    group.add_argument("--population", help="population.csv (default: built-in)")
    group.add_argument("--gamelogs", help="gamelogs.csv for rotation sizes")
    group.add_argument("--rotations", help="rotations.csv fallback table")


def _add_model(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument(
        "--talent-dist", help="pareto, pareto:<alpha>, normal or folded-normal"
    )
    parser.add_argument("--start-year", type=int, help="first trajectory season")
    parser.add_argument(
        "--ba-mode",
        choices=("parametric", "nonparametric"),
        help="batting average season model",
    )
    parser.add_argument(
        "--no-smoothing", action="store_true", help="skip career smoothing"
    )
    parser.add_argument("--workers", type=int, help="threads for season models")
    _add_inputs(parser)


def build_parser() -> argparse.ArgumentParser:
    """The full command-line grammar."""
    parser = argparse.ArgumentParser(
        prog="full-house",
        description="Era-adjusted statistics from latent talent.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    parser.add_argument("--config", help="extra ini file layered over config.ini")
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", help="validate input files")
    _add_inputs(ingest)

    adjust = commands.add_parser("adjust", help="era-adjust seasons and careers")
    _add_model(adjust)
    adjust.add_argument("--output-dir", default="output")

    rank = commands.add_parser("rank", help="leaderboard with chance footer")
    _add_model(rank)
    rank.add_argument("--stat", default="bwar_adj", help="career column to rank")
    rank.add_argument("--top", type=int, help="leaderboard size")
    rank.add_argument("--peak", action="store_true", help="rank by best season")
    rank.add_argument("--careers", help="careers CSV from a previous adjust")
    rank.add_argument("--cutoff-year", type=int)
    rank.add_argument("--proportion", type=float, help="override the proportion")
    rank.add_argument("--output", help="write the table as CSV")

    chance = commands.add_parser("chance", help="odds of x or more in the top k")
    chance.add_argument("x", type=int, help="players before the cutoff")
    chance.add_argument("k", type=int, help="leaderboard size")
    chance.add_argument("p", type=float, help="population proportion")

    curve = commands.add_parser(
        "replacement-curve", help="reference value projected into every season"
    )
    _add_model(curve)
    curve.add_argument("--stat", default="bwar_pg", help="modeled statistic")
    curve.add_argument("--reference-year", type=int, required=True)
    curve.add_argument("--value", type=float, default=0.0)
    curve.add_argument("--output", help="write the curve as CSV")

    simulate = commands.add_parser("simulate", help="Monte Carlo validation")
    simulate.add_argument("--iterations", type=int)
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--top", type=int)
    simulate.add_argument("--true-law", help="talent law generating the leagues")
    simulate.add_argument("--assumed-law", help="talent law assumed by the model")
    simulate.add_argument("--all-laws", action="store_true")
    simulate.add_argument("--workers", type=int)
    simulate.add_argument("--output-dir")

    sensitivity = commands.add_parser("sensitivity", help="law or start-year sweep")
    _add_model(sensitivity)
    sensitivity.add_argument("--sweep", choices=("laws", "start-year"), default="laws")
    sensitivity.add_argument("--stat", default="bwar_adj")
    sensitivity.add_argument("--top", type=int)
    sensitivity.add_argument("--peak", action="store_true")
    sensitivity.add_argument("--output", help="write the report as CSV")
    return parser


def _inputs(args: argparse.Namespace) -> InputPaths:
    return InputPaths(
        batting=args.batting,
        pitching=args.pitching,
        park_factors=args.park_factors,
        population=args.population,
        gamelogs=args.gamelogs,
        rotations=args.rotations,
    )


def _run_overrides(args: argparse.Namespace) -> dict[str, Any]:
    values = vars(args)
    return {
        "talent_law": values.get("talent_dist"),
        "start_year": values.get("start_year"),
        "batting_average_mode": values.get("ba_mode"),
        "smoothing": False if values.get("no_smoothing") else None,
        "workers": values.get("workers"),
        "top": values.get("top"),
        "cutoff_year": values.get("cutoff_year"),
        "proportion": values.get("proportion"),
    }


def run_command(args: argparse.Namespace) -> None:
    """Dispatch a parsed command line."""
    if args.command == "ingest":
        for summary in cmd_ingest(_inputs(args)):
            print(summary.describe())
        return
    if args.command == "chance":
        print(cmd_chance(args.x, args.k, args.p))
        return
    if args.command == "simulate":
        config = load_sim_config(
            args.config,
            {
                "iterations": args.iterations,
                "seed": args.seed,
                "top": args.top,
                "true_law": args.true_law,
                "assumed_law": args.assumed_law,
                "workers": args.workers,
            },
        )
        summary = cmd_simulate(config, args.all_laws, args.output_dir)
        print(json.dumps(summary["table"], indent=2, sort_keys=True))
        return

    config = load_run_config(args.config, _run_overrides(args))
    inputs = _inputs(args)
    if args.command == "adjust":
        for path in cmd_adjust(args.kind, config, inputs, args.output_dir):
            print(f"Wrote {path}")
    elif args.command == "rank":
        table, footer = cmd_rank(
            args.kind, args.stat, config, inputs, args.peak, args.careers, args.output
        )
        print(table.to_string(index=False))
        for line in footer.lines():
            print(line)
    elif args.command == "replacement-curve":
        curve = cmd_replacement_curve(
            args.kind,
            args.stat,
            config,
            inputs,
            args.reference_year,
            args.value,
            args.output,
        )
        print(curve.to_string(index=False))
    elif args.command == "sensitivity":
        report = cmd_sensitivity(
            args.kind, args.sweep, args.stat, config, inputs, args.peak, args.output
        )
        print(report.to_string(index=False))


def main(argv: Sequence[str] | None = None) -> int:
    """
    Main entry point for the application.

    Args:
        argv: Command-line arguments; defaults to ``sys.argv[1:]``.
    Returns:
        The process exit code.
    """
    args = build_parser().parse_args(argv)
    logger.info("full-house v%s: %s", __version__, args.command)
    try:
        run_command(args)
    except FullHouseError as error:
        logger.error("%s failed [%s]: %s", args.command, error.code, error)
        print(f"Error [{error.code}]: {error}", file=sys.stderr)
        return error.exit_code
    except FileNotFoundError as error:
        logger.error("%s failed: %s", args.command, error)
        print(f"Error [E_FILE]: {error}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as error:  # pylint: disable=broad-exception-caught
        logger.exception("%s failed unexpectedly", args.command)
        print(f"Error [E_UNEXPECTED]: {error}", file=sys.stderr)
        return EXIT_FAILURE
    logger.info("%s finished", args.command)
    return EXIT_OK

