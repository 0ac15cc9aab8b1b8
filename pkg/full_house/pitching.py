"""
Pitching pipeline module for full_house.

Era adjustment for pitchers. Full-time pitchers are the top innings-pitched
arms, as many as the league's average rotation size times its team count.
ERA is modeled through its negation so that larger is better throughout,
talents are shifted for differences in rotation size, innings and games are
carried over by quantile mapping, and counting statistics are rebuilt from
the adjusted rates.

Author: Ron Webb
Since: 1.0.0
"""

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import pandas as pd

from .batting import (
    AdjustmentResult,
    PlayerCareerRecord,
    assign_talents,
    assign_trajectory,
    build_careers,
    flag_truncated,
    map_playing_time,
    mark_kept,
    median_qualified_games,
    model_stat_seasons,
    smooth_columns,
)
from .config import RunConfig
from .errors import DomainError
from .population import PopulationSeries
from .talent import ModeledSeason, project_talents
from .util import setup_logger

logger = setup_logger(__name__)

PITCHING_COLUMNS = (
    "player_id",
    "name",
    "year",
    "team",
    "G",
    "GS",
    "IP",
    "ER",
    "SO",
    "bwar",
    "fwar",
)
GAMELOG_COLUMNS = ("team", "year", "game_number", "starter_id")
ROTATION_COLUMNS = ("year", "teams", "rotation_size")
PITCHING_STATS = ("neg_era", "so_rate", "bwar_pg", "fwar_pg")


@dataclass(frozen=True)
class RotationProfile:
    """Average rotation sizes of one season."""

    year: int
    league_average: float
    teams: int
    team_rotation: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.league_average >= 1:
            raise DomainError(
                f"Rotation size must be at least 1 in {self.year}, "
                f"got {self.league_average}"
            )
        if self.teams < 1:
            raise DomainError(f"Season {self.year} needs at least one team")


def rotation_size(starters: Sequence[object]) -> float:
    """
    Average rotation size of one team's starter sequence.

    From every game a window grows while each added start is by a new
    pitcher; its final length is recorded. Windows cut short by the end of
    the schedule are ignored unless no window ever closed, in which case the
    longest of them is used.

    Raises:
        DomainError: If the sequence is empty.
    """
    sequence = list(starters)
    if not sequence:
        raise DomainError("Rotation size needs at least one start")
    closed: list[int] = []
    longest_open = 0
    for begin in range(len(sequence)):
        seen: set[object] = set()
        end = begin
        while end < len(sequence) and sequence[end] not in seen:
            seen.add(sequence[end])
            end += 1
        if end < len(sequence):
            closed.append(end - begin)
        else:
            longest_open = max(longest_open, end - begin)
    if not closed:
        return float(longest_open)
    return float(np.mean(closed))


def profiles_from_gamelogs(gamelogs: pd.DataFrame) -> dict[int, RotationProfile]:
    """Rotation profiles measured from ordered starter sequences."""
    profiles = {}
    for year, games in gamelogs.groupby("year"):
        team_rotation = {
            str(team): rotation_size(rows.sort_values("game_number")["starter_id"])
            for team, rows in games.groupby("team")
        }
        profiles[int(year)] = RotationProfile(
            year=int(year),
            league_average=float(np.mean(list(team_rotation.values()))),
            teams=len(team_rotation),
            team_rotation=team_rotation,
        )
    return profiles


def profiles_from_table(rotations: pd.DataFrame) -> dict[int, RotationProfile]:
    """Rotation profiles from a ``year,teams,rotation_size`` table."""
    return {
        int(row.year): RotationProfile(
            year=int(row.year),
            league_average=float(row.rotation_size),
            teams=int(row.teams),
        )
        for row in rotations.itertuples(index=False)
    }


def resolve_profiles(
    frame: pd.DataFrame,
    default_rotation: float,
    gamelogs: pd.DataFrame | None = None,
    rotations: pd.DataFrame | None = None,
) -> dict[int, RotationProfile]:
    """
    A rotation profile for every season in the pitching frame.

    Game logs win over the rotation table, which wins over the default
    rotation times the season's distinct team count.
    """
    profiles: dict[int, RotationProfile] = {}
    if rotations is not None and not rotations.empty:
        profiles.update(profiles_from_table(rotations))
    if gamelogs is not None and not gamelogs.empty:
        profiles.update(profiles_from_gamelogs(gamelogs))
    fallback = []
    for year, rows in frame.groupby("year"):
        if int(year) in profiles:
            continue
        teams = {team for value in rows["team"] for team in str(value).split("/")}
        profiles[int(year)] = RotationProfile(
            year=int(year), league_average=float(default_rotation), teams=len(teams)
        )
        fallback.append(int(year))
    if fallback:
        logger.warning(
            "No rotation data for %d season(s); using rotation %g from %d",
            len(fallback),
            default_rotation,
            fallback[0],
        )
    return profiles


def full_time_pitcher_count(profile: RotationProfile) -> int:
    """Average rotation size times team count, rounded."""
    return max(1, int(round(profile.league_average * profile.teams)))


def rotation_shift(
    source: RotationProfile,
    target: RotationProfile,
    target_talents: Sequence[float],
) -> tuple[float, bool]:
    """
    Talent added to a pitcher moving between rotation sizes.

    The shift is the talent ranked ``source rotation x target teams`` among
    the target season's qualified pitchers, the top round(rotation x teams)
    by IP: added when the source rotation is smaller, deducted when it is
    larger. Only pitchers with starts receive it.

    Returns:
        The signed shift and whether the rank was clamped to the last starter.
    """
    if math.isclose(source.league_average, target.league_average):
        return 0.0, False
    ranked = np.sort(np.asarray(target_talents, dtype=float))[::-1]
    if ranked.size == 0:
        raise DomainError(f"Season {target.year} has no qualifying starters")
    rank = max(1, int(round(source.league_average * target.teams)))
    clamped = rank > ranked.size
    talent = float(ranked[min(rank, ranked.size) - 1])
    sign = 1.0 if source.league_average < target.league_average else -1.0
    return sign * talent, clamped


def rotation_adjust(
    talent: float,
    source: RotationProfile,
    target: RotationProfile,
    target_talents: Sequence[float],
) -> float:
    """Talent after the rotation-size shift between two seasons."""
    shift, clamped = rotation_shift(source, target, target_talents)
    if clamped:
        logger.warning(
            "Rotation rank beyond the %d starters of %d; used the last one",
            len(target_talents),
            target.year,
        )
    return talent + shift


def aggregate_pitching(frame: pd.DataFrame) -> pd.DataFrame:
    """One row per pitcher and year; rows without innings are dropped."""
    counts = ["G", "GS", "IP", "ER", "SO", "bwar", "fwar"]
    grouped = frame.groupby(["player_id", "year"], sort=True)
    seasons = grouped[counts].sum()
    seasons["name"] = grouped["name"].first()
    seasons["team"] = grouped["team"].agg(lambda teams: "/".join(dict.fromkeys(teams)))
    seasons = seasons.reset_index()
    idle = seasons["IP"] <= 0
    if idle.any():
        logger.info("Excluding %d pitcher-season(s) without innings", int(idle.sum()))
    return seasons[~idle].reset_index(drop=True)


def pitching_rates(seasons: pd.DataFrame) -> pd.DataFrame:
    """Raw rates and the observations the season models use."""
    data = seasons.copy()
    data["era_raw"] = 9.0 * data["ER"] / data["IP"]
    data["so_rate_raw"] = data["SO"] / data["IP"]
    games = data["G"].where(data["G"] > 0)
    data["bwar_pg_raw"] = data["bwar"] / games
    data["fwar_pg_raw"] = data["fwar"] / games
    data["neg_era_obs"] = -data["era_raw"]
    for stat in ("so_rate", "bwar_pg", "fwar_pg"):
        data[f"{stat}_obs"] = data[f"{stat}_raw"]
    return data


def mark_full_time(
    seasons: pd.DataFrame, profiles: Mapping[int, RotationProfile]
) -> pd.DataFrame:
    """Flag each season's top pitchers by innings, ties broken by player id."""
    data = seasons.copy()
    data["qualified"] = False
    for year, rows in data.groupby("year"):
        wanted = full_time_pitcher_count(profiles[int(year)])
        ordered = rows.assign(_neg_ip=-rows["IP"]).sort_values(
            ["_neg_ip", "player_id"], kind="stable"
        )
        if len(ordered) < wanted:
            logger.warning(
                "Season %d has %d pitcher(s), fewer than %d full-time; using all",
                year,
                len(ordered),
                wanted,
            )
        data.loc[ordered.index[:wanted], "qualified"] = True
    return data


def adjust_pitching_season(
    rows: pd.DataFrame,
    source: Mapping[str, ModeledSeason],
    target: Mapping[str, ModeledSeason],
    rotations: tuple[RotationProfile, RotationProfile] | None = None,
) -> pd.DataFrame:
    """
    Project one source season's pitchers into one target season.

    Args:
        rows: Pitcher-seasons of the source year with the observation columns.
        source: Source season models by statistic.
        target: Target season models by statistic.
        rotations: Source and target rotation profiles; None skips the shift.
    Returns:
        Talents, projected values (``<stat>_fh``, ERA as ``era_fh``) and the
        partial, sub-replacement and rotation-clamp flags, indexed like rows.
    """
    result = pd.DataFrame(index=rows.index)
    result["partial"] = False
    result["sub_replacement"] = False
    result["rotation_clamped"] = False
    for stat in PITCHING_STATS:
        result[f"{stat}_talent"] = np.nan
        result[f"{stat}_fh"] = np.nan
        if stat not in source or stat not in target:
            continue
        season = source[stat]
        talents, partial = assign_talents(rows, stat, {season.year: season})
        present = talents.notna()
        if not present.any():
            continue
        if rotations is not None:
            shift, clamped = rotation_shift(
                rotations[0], rotations[1], target[stat].assignment.talents
            )
            starters = present & (rows["GS"] > 0)
            talents[starters] = talents[starters] + shift
            result.loc[starters, "rotation_clamped"] |= clamped
        projection = project_talents(talents[present].to_numpy(), target[stat])
        result.loc[present, f"{stat}_talent"] = talents[present]
        result.loc[present, f"{stat}_fh"] = projection.values
        result["partial"] |= partial
        result.loc[present, "sub_replacement"] |= projection.sub_replacement
    result["era_fh"] = -result.pop("neg_era_fh")
    return result


def adjust_pitching(
    frame: pd.DataFrame,
    population: PopulationSeries,
    config: RunConfig,
    gamelogs: pd.DataFrame | None = None,
    rotations: pd.DataFrame | None = None,
) -> AdjustmentResult:
    """
    Era-adjust every pitcher onto the trajectory starting in ``config.start_year``.

    Args:
        frame: Pitching stints with the pitching.csv columns.
        population: Eligible population series.
        config: Run configuration.
        gamelogs: Optional starter sequences for rotation sizes.
        rotations: Optional per-season rotation table.
    Returns:
        Adjusted seasons, careers and season models.
    """
    seasons = pitching_rates(aggregate_pitching(frame))
    profiles = resolve_profiles(frame, config.default_rotation, gamelogs, rotations)
    seasons = mark_full_time(seasons, profiles)
    seasons = assign_trajectory(seasons, config.start_year)

    contexts = {
        stat: model_stat_seasons(seasons, stat, population, config)
        for stat in PITCHING_STATS
    }
    projected = []
    for (year, target_year), rows in seasons.groupby(["year", "target_year"]):
        source = _contexts_for(contexts, int(year))
        target = _contexts_for(contexts, int(target_year))
        pair = None
        if config.rotation_adjustment and int(target_year) in profiles:
            pair = (profiles[int(year)], profiles[int(target_year)])
        projected.append(adjust_pitching_season(rows, source, target, pair))
    seasons = seasons.join(pd.concat(projected)) if projected else seasons
    clamped = int(seasons.get("rotation_clamped", pd.Series(dtype=bool)).sum())
    if clamped:
        logger.warning("%d pitcher-season(s) used a clamped rotation rank", clamped)

    fh_columns = ["era_fh", "so_rate_fh", "bwar_pg_fh", "fwar_pg_fh"]
    flag_truncated(seasons, contexts, fh_columns)
    eligible = seasons["IP"] > 0
    seasons["ip_adj"] = map_playing_time(seasons, "IP", eligible)
    seasons["g_adj"] = map_playing_time(seasons, "G", eligible)
    seasons = smooth_columns(
        seasons, fh_columns, config.smoothing, config.smoothing_lambda
    )
    derive_pitching_counts(seasons)

    seasons["kept"] = mark_kept(
        seasons, f"{config.pitching_trim_stat}_adj", config.trailing_keep
    )
    records = build_careers(
        seasons,
        totals=["ip_adj", "g_adj", "er_adj", "so_adj", "bwar_adj", "fwar_adj"],
        peaks=["so_adj", "bwar_adj", "fwar_adj"],
    )
    careers = pitching_careers(records, config.min_career_ip)
    logger.info(
        "Adjusted %d pitching season(s) into %d career(s)",
        int(seasons["kept"].sum()),
        len(careers),
    )
    return AdjustmentResult(
        seasons=seasons.sort_values(["player_id", "year"]),
        careers=careers,
        contexts=contexts,
        qualified_games=median_qualified_games(seasons),
    )


def _contexts_for(
    contexts: Mapping[str, Mapping[int, ModeledSeason]], year: int
) -> dict[str, ModeledSeason]:
    return {stat: found[year] for stat, found in contexts.items() if year in found}


def derive_pitching_counts(seasons: pd.DataFrame) -> None:
    """Adjusted ER, SO and WAR from the adjusted rates and mapped playing time."""
    seasons["era_adj"] = seasons["era_adj"].clip(lower=0.0)
    seasons["so_rate_adj"] = seasons["so_rate_adj"].clip(lower=0.0)
    seasons["er_adj"] = seasons["era_adj"] * seasons["ip_adj"] / 9.0
    seasons["so_adj"] = seasons["so_rate_adj"] * seasons["ip_adj"]
    seasons["bwar_adj"] = seasons["bwar_pg_adj"] * seasons["g_adj"]
    seasons["fwar_adj"] = seasons["fwar_pg_adj"] * seasons["g_adj"]


def pitching_careers(
    records: Sequence[PlayerCareerRecord], min_career_ip: float
) -> pd.DataFrame:
    """Career table; career ERA is reported only above the innings minimum."""
    careers = pd.DataFrame.from_records([record.to_row() for record in records])
    if careers.empty:
        return careers
    innings = careers["ip_adj"].where(careers["ip_adj"] > 0)
    careers["era_adj"] = 9.0 * careers["er_adj"] / innings
    careers["era_qualified"] = careers["ip_adj"] >= min_career_ip
    return careers
