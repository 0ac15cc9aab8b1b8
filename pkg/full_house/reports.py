"""
Report module for full_house.

Leaderboards with the pre-cutoff over-representation footer, the
replacement-level curve, talent-law and start-year sensitivity comparisons,
and the CSV writer that stamps the effective configuration into every file.

Author: Ron Webb
Since: 1.0.0
"""

from dataclasses import dataclass, replace
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np
import pandas as pd

from .config import RunConfig
from .distributions import parse_talent_law
from .errors import DomainError, RangeError
from .population import (
    PopulationSeries,
    chance_top_k,
    count_debuts_before,
    cumulative_proportion,
    format_odds,
    format_proportion,
)
from .talent import ModeledSeason, project, talent_of_value
from .util import setup_logger

logger = setup_logger(__name__)

BAND_QUANTILES = (0.10, 0.90)
RATE_STATS = ("ba_adj", "obp_adj")
LOWER_IS_BETTER = ("era_adj",)


@dataclass(frozen=True)
class RankingFooter:
    """Over-representation summary of a leaderboard."""

    cutoff_year: int
    pre_cutoff: int
    top: int
    proportion: float
    odds: float

    def lines(self) -> list[str]:
        """Footer text in table style."""
        return [
            f"Players who started their careers before {self.cutoff_year}: "
            f"{self.pre_cutoff} of {self.top}",
            f"Proportion of the eligible population up to {self.cutoff_year}: "
            f"{format_proportion(self.proportion)}",
            f"Chance of {self.pre_cutoff} or more in the top {self.top}: "
            f"{format_odds(self.odds)}",
        ]


def rank_careers(
    careers: pd.DataFrame,
    stat: str,
    top: int,
    peak: bool = False,
    min_career_ab: float = 0.0,
    min_career_ip: float = 0.0,
) -> pd.DataFrame:
    """
    Top careers by an adjusted statistic.

    Career BA and OBP need ``min_career_ab`` adjusted at-bats and career ERA
    needs ``min_career_ip`` adjusted innings; ERA ranks ascending. Asking
    for more rows than there are players truncates with a warning.

    Raises:
        DomainError: If the statistic is not a career column or top < 1.
    """
    if top < 1:
        raise DomainError(f"Top must be at least 1, got {top}")
    column = f"peak_{stat}" if peak else stat
    if column not in careers.columns:
        raise DomainError(f"Unknown ranking statistic: {column}")
    eligible = careers[careers[column].notna()]
    if not peak and stat in RATE_STATS:
        eligible = eligible[eligible["ab_adj"] >= min_career_ab]
    if not peak and stat in LOWER_IS_BETTER:
        eligible = eligible[eligible["ip_adj"] >= min_career_ip]
    ascending = stat in LOWER_IS_BETTER
    ordered = eligible.sort_values(
        [column, "player_id"], ascending=[ascending, True], kind="stable"
    )
    if len(ordered) < top:
        logger.warning(
            "Only %d eligible player(s) for top %d by %s", len(ordered), top, column
        )
    table = ordered.head(top).loc[:, ["player_id", "name", "debut_year", column]]
    table = table.rename(columns={column: "value"}).reset_index(drop=True)
    table.insert(0, "rank", np.arange(1, len(table) + 1))
    return table


def ranking_footer(
    table: pd.DataFrame, population: PopulationSeries, config: RunConfig
) -> RankingFooter:
    """
    Pre-cutoff count, population proportion and chance for a leaderboard.

    By default the proportion is computed from the series by
    ``cumulative_proportion``. The built-in decade table gives about 0.209 for
    1871-2005 with a 1950 cutoff. Published leaderboard footers use 0.190, so
    reproducing them needs ``[ranking] proportion = 0.190`` or
    ``rank --proportion 0.190``. A configured proportion always replaces the
    computed one.
    """
    proportion = config.proportion
    if proportion is None:
        proportion = cumulative_proportion(
            population, config.cutoff_year, config.range_start, config.range_end
        )
    pre_cutoff = count_debuts_before(table["debut_year"], config.cutoff_year)
    return RankingFooter(
        cutoff_year=config.cutoff_year,
        pre_cutoff=pre_cutoff,
        top=int(len(table)),
        proportion=proportion,
        odds=chance_top_k(pre_cutoff, int(len(table)), proportion),
    )


def replacement_curve(
    contexts: Mapping[int, ModeledSeason],
    reference_year: int,
    value: float = 0.0,
    games: Mapping[int, float] | None = None,
) -> pd.DataFrame:
    """
    What a reference-year value is worth in every modeled season.

    The value's talent in the reference season is projected into each
    season. With ``games`` the projected per-game rate is scaled by that
    season's games.

    Raises:
        RangeError: If the reference season is not modeled.
    """
    if reference_year not in contexts:
        raise RangeError(f"Reference season {reference_year} is not modeled")
    talent = talent_of_value(contexts[reference_year], value)
    rows = []
    for year in sorted(contexts):
        projected = project(talent, contexts[year])
        equivalent = projected * games[year] if games and year in games else projected
        rows.append(
            {
                "year": year,
                "talent": talent,
                "value": projected,
                "equivalent": equivalent,
            }
        )
    logger.info(
        "Replacement curve from %d over %d season(s)", reference_year, len(rows)
    )
    return pd.DataFrame(rows)


def compare_rankings(
    base: Sequence[Any], other: Sequence[Any], top: int
) -> tuple[int, int]:
    """
    Matched names and matched ranks between two orderings of player ids.

    Returns:
        Players in both top lists and positions holding the same player.
    """
    left, right = list(base)[:top], list(other)[:top]
    names = len(set(left).intersection(right))
    ranks = sum(1 for a, b in zip(left, right) if a == b)
    return names, ranks


def law_sweep(
    runner: Callable[[RunConfig], pd.DataFrame],
    config: RunConfig,
    stat: str,
    tops: Iterable[int] = (10, 25),
    peak: bool = False,
) -> pd.DataFrame:
    """
    Leaderboard agreement of each talent law with the configured one.

    Args:
        runner: Adjusts the data under a config and returns its career table.
        config: The base configuration.
        stat: Career statistic to rank.
        tops: Leaderboard sizes to compare.
        peak: Rank by peak season instead of career.
    Returns:
        One row per law and size with matched names and ranks.
    """
    tops = list(tops)
    deepest = max(tops)

    def ranking(run: RunConfig) -> list[Any]:
        table = rank_careers(
            runner(run),
            stat,
            deepest,
            peak,
            run.min_career_ab,
            run.min_career_ip,
        )
        return table["player_id"].tolist()

    base = ranking(config)
    rows = []
    for spec in config.sweep_laws:
        other = ranking(replace(config, talent_law=parse_talent_law(spec)))
        for top in tops:
            names, ranks = compare_rankings(base, other, top)
            rows.append(
                {
                    "law": spec,
                    "top": top,
                    "matched_names": names,
                    "matched_ranks": ranks,
                }
            )
    return pd.DataFrame(rows)


def start_year_sweep(
    runner: Callable[[RunConfig], pd.DataFrame],
    config: RunConfig,
    stat: str,
    top: int = 25,
    peak: bool = False,
) -> pd.DataFrame:
    """
    Rank bands of the leaders across every trajectory start year.

    The leaders are the top players under ``config.start_year``. For each
    start year in the sweep every player is ranked; a leader's band is the
    inner 80% of its ranks, and ``inside`` tells whether the configured start
    year's rank falls in it.
    """
    ranks: dict[Any, list[float]] = {}
    years = list(range(config.sweep_first, config.sweep_last + 1))
    leaders = rank_careers(
        runner(config), stat, top, peak, config.min_career_ab, config.min_career_ip
    )
    default_rank = dict(zip(leaders["player_id"], leaders["rank"]))
    for year in years:
        careers = runner(replace(config, start_year=year))
        table = rank_careers(
            careers,
            stat,
            max(1, len(careers)),
            peak,
            config.min_career_ab,
            config.min_career_ip,
        )
        found = dict(zip(table["player_id"], table["rank"]))
        for player_id in default_rank:
            ranks.setdefault(player_id, []).append(found.get(player_id, np.nan))
    rows = []
    for row in leaders.itertuples(index=False):
        history = np.asarray(ranks[row.player_id], dtype=float)
        low, high = np.nanquantile(history, BAND_QUANTILES)
        rows.append(
            {
                "player_id": row.player_id,
                "name": row.name,
                "rank": int(row.rank),
                "band_low": float(low),
                "band_median": float(np.nanmedian(history)),
                "band_high": float(high),
                "inside": bool(low <= row.rank <= high),
            }
        )
    logger.info("Start-year sweep over %d season(s)", len(years))
    return pd.DataFrame(rows)


def header_lines(settings: Iterable[tuple[str, Any]]) -> list[str]:
    """Configuration comment lines for an output file."""
    return [f"# {key} = {value}" for key, value in settings]


def write_csv(
    frame: pd.DataFrame,
    path: str,
    settings: Iterable[tuple[str, Any]] = (),
    footer: Sequence[str] = (),
) -> None:
    """
    Write a table preceded by the configuration header.

    Floats are written with 10 significant digits so reruns are identical.
    """
    with open(path, "w", encoding="utf-8", newline="") as handle:
        for line in header_lines(settings):
            handle.write(line + "\n")
        frame.to_csv(handle, index=False, float_format="%.10g", lineterminator="\n")
        for line in footer:
            handle.write(f"# {line}\n")
    logger.info("Wrote %d row(s) to %s", len(frame), path)
