"""
Service module for full_house.

Command implementations behind the command line: each loads and validates
its inputs, runs the computation and writes its outputs. Commands are pure
functions of their input files and configuration.

Author: Ron Webb
Since: 1.0.0
"""

import json
import os
from dataclasses import dataclass
from typing import Any

import pandas as pd

from .batting import AdjustmentResult, adjust_batting
from .config import RunConfig, SimConfig
from .errors import DomainError
from .ingest import (
    TableSummary,
    load_batting,
    load_gamelogs,
    load_park_factors,
    load_pitching,
    load_population,
    load_rotations,
    summarize,
)
from .pitching import adjust_pitching
from .population import chance_top_k, format_odds
from .reports import (
    RankingFooter,
    law_sweep,
    rank_careers,
    ranking_footer,
    replacement_curve,
    start_year_sweep,
    write_csv,
)
from .simulation import run_all_laws, run_simulation, summary_table
from .util import setup_logger

logger = setup_logger(__name__)

KINDS = ("batting", "pitching")


@dataclass(frozen=True)
class InputPaths:
    """Input files of a run; only the table of the adjusted kind is required."""

    batting: str | None = None
    pitching: str | None = None
    park_factors: str | None = None
    population: str | None = None
    gamelogs: str | None = None
    rotations: str | None = None


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise DomainError(f"Unknown kind '{kind}', expected batting or pitching")


def run_adjustment(
    kind: str, config: RunConfig, inputs: InputPaths
) -> AdjustmentResult:
    """
    Load the inputs of one kind and era-adjust them.

    Raises:
        DomainError: If the kind is unknown or its input file is not given.
    """
    _check_kind(kind)
    population = load_population(inputs.population)
    if kind == "batting":
        if not inputs.batting:
            raise DomainError("Batting adjustment needs a batting file")
        return adjust_batting(
            load_batting(inputs.batting),
            population,
            config,
            load_park_factors(inputs.park_factors),
        )
    if not inputs.pitching:
        raise DomainError("Pitching adjustment needs a pitching file")
    return adjust_pitching(
        load_pitching(inputs.pitching),
        population,
        config,
        load_gamelogs(inputs.gamelogs),
        load_rotations(inputs.rotations),
    )


def cmd_ingest(inputs: InputPaths) -> list[TableSummary]:
    """Validate every given input file and summarize it."""
    summaries = []
    if inputs.batting:
        summaries.append(summarize("batting", load_batting(inputs.batting)))
    if inputs.pitching:
        summaries.append(summarize("pitching", load_pitching(inputs.pitching)))
    park = load_park_factors(inputs.park_factors) if inputs.park_factors else None
    if park is not None:
        summaries.append(summarize("park_factors", park))
    if inputs.gamelogs:
        summaries.append(summarize("gamelogs", load_gamelogs(inputs.gamelogs)))
    if inputs.rotations:
        summaries.append(summarize("rotations", load_rotations(inputs.rotations)))
    if inputs.population:
        series = load_population(inputs.population)
        records = int(series.years.size)
        summaries.append(TableSummary("population", records, records, 0))
    logger.info("Validated %d input file(s)", len(summaries))
    return summaries


def cmd_adjust(
    kind: str, config: RunConfig, inputs: InputPaths, output_dir: str
) -> tuple[str, str]:
    """
    Era-adjust one kind and write its season and career tables.

    Returns:
        Paths of the seasons and careers CSV files.
    """
    result = run_adjustment(kind, config, inputs)
    os.makedirs(output_dir, exist_ok=True)
    seasons_path = os.path.join(output_dir, f"{kind}_seasons.csv")
    careers_path = os.path.join(output_dir, f"{kind}_careers.csv")
    settings = [("kind", kind), *config.as_header()]
    write_csv(result.seasons, seasons_path, settings)
    write_csv(result.careers, careers_path, settings)
    return seasons_path, careers_path


def load_careers(path: str) -> pd.DataFrame:
    """Read a careers CSV written by ``cmd_adjust``."""
    if not os.path.isfile(path):
        raise FileNotFoundError(f"Careers file not found: {path}")
    return pd.read_csv(path, comment="#")


def cmd_rank(
    kind: str,
    stat: str,
    config: RunConfig,
    inputs: InputPaths,
    peak: bool = False,
    careers_path: str | None = None,
    output: str | None = None,
) -> tuple[pd.DataFrame, RankingFooter]:
    """
    Leaderboard with the over-representation footer.

    Careers come from ``careers_path`` when given, else from a fresh run.
    """
    if careers_path:
        careers = load_careers(careers_path)
    else:
        careers = run_adjustment(kind, config, inputs).careers
    table = rank_careers(
        careers, stat, config.top, peak, config.min_career_ab, config.min_career_ip
    )
    footer = ranking_footer(table, load_population(inputs.population), config)
    if output:
        write_csv(table, output, config.as_header(), footer.lines())
    return table, footer


def cmd_chance(pre_cutoff: int, top: int, proportion: float) -> str:
    """The formatted odds against ``pre_cutoff`` or more in a top-``top`` list."""
    return format_odds(chance_top_k(pre_cutoff, top, proportion))


def cmd_replacement_curve(
    kind: str,
    stat: str,
    config: RunConfig,
    inputs: InputPaths,
    reference_year: int,
    value: float = 0.0,
    output: str | None = None,
) -> pd.DataFrame:
    """
    Equivalent value of a reference-year value in every season.

    Per-game statistics are scaled by each season's median qualified games.

    Raises:
        DomainError: If the statistic has no season models.
    """
    result = run_adjustment(kind, config, inputs)
    if stat not in result.contexts:
        raise DomainError(
            f"No season models for '{stat}'; choose from {', '.join(result.contexts)}"
        )
    games = result.qualified_games if stat.endswith("_pg") else None
    curve = replacement_curve(result.contexts[stat], reference_year, value, games)
    if output:
        settings = [
            ("kind", kind),
            ("stat", stat),
            ("reference_year", reference_year),
            ("reference_value", value),
            *config.as_header(),
        ]
        write_csv(curve, output, settings)
    return curve


def cmd_simulate(
    config: SimConfig, all_laws: bool = False, output_dir: str | None = None
) -> dict[str, Any]:
    """
    Run the validation study and write counts and a JSON summary.

    Returns:
        The summary, with the effective configuration under ``config``.
    """
    if all_laws:
        results = run_all_laws(config)
    else:
        results = {config.true_law.label: run_simulation(config)}
    summary: dict[str, Any] = {
        "config": dict(config.as_header()),
        "results": [result.summary() for result in results.values()],
        "table": summary_table(results).to_dict(),
    }
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
        counts = pd.concat(
            [result.counts.assign(law=spec) for spec, result in results.items()],
            ignore_index=True,
        )
        counts_path = os.path.join(output_dir, "simulation_counts.csv")
        write_csv(counts, counts_path, config.as_header())
        path = os.path.join(output_dir, "simulation_summary.json")
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(summary, handle, indent=2, sort_keys=True)
            handle.write("\n")
        logger.info("Wrote simulation summary to %s", path)
    return summary


def cmd_sensitivity(
    kind: str,
    sweep: str,
    stat: str,
    config: RunConfig,
    inputs: InputPaths,
    peak: bool = False,
    output: str | None = None,
) -> pd.DataFrame:
    """
    Talent-law or start-year sensitivity of a leaderboard.

    The inputs are loaded once and re-adjusted for every variant.

    Raises:
        DomainError: If the sweep is neither ``laws`` nor ``start-year``.
    """
    _check_kind(kind)
    population = load_population(inputs.population)
    if kind == "batting":
        frame = load_batting(inputs.batting) if inputs.batting else None
        park = load_park_factors(inputs.park_factors)

        def runner(run: RunConfig) -> pd.DataFrame:
            return adjust_batting(frame, population, run, park).careers

    else:
        frame = load_pitching(inputs.pitching) if inputs.pitching else None
        gamelogs = load_gamelogs(inputs.gamelogs)
        rotations = load_rotations(inputs.rotations)

        def runner(run: RunConfig) -> pd.DataFrame:
            return adjust_pitching(frame, population, run, gamelogs, rotations).careers

    if frame is None:
        raise DomainError(f"Sensitivity needs a {kind} file")
    if sweep == "laws":
        report = law_sweep(runner, config, stat, peak=peak)
    elif sweep == "start-year":
        report = start_year_sweep(runner, config, stat, config.top, peak)
    else:
        raise DomainError(f"Unknown sweep '{sweep}', expected laws or start-year")
    if output:
        settings = [("sweep", sweep), ("stat", stat), *config.as_header()]
        write_csv(report, output, settings)
    return report
