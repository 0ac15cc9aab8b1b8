"""
Batting pipeline module for full_house.

Era adjustment for hitters: stints are combined into player-seasons, rates
are park adjusted, each season is modeled on its full-time hitters, every
player-season is placed on the trajectory that starts in the configured year,
playing time is carried over by quantile mapping, careers are smoothed and
trimmed, and career totals are aggregated.

The season-modeling helpers here are shared with the pitching pipeline.

Author: Ron Webb
Since: 1.0.0
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np
import pandas as pd
from scipy.interpolate import make_smoothing_spline

from .config import RunConfig
from .errors import DomainError, EmptySeasonError, InsufficientDataError
from .population import PopulationSeries, population_at
from .talent import ModeledSeason, build_season, project_talents, talents_of_values
from .tail_ecdf import hazen_percentile
from .util import setup_logger

logger = setup_logger(__name__)

BATTING_COLUMNS = (
    "player_id",
    "name",
    "year",
    "team",
    "bats",
    "G",
    "PA",
    "AB",
    "H",
    "HR",
    "BB",
    "HBP",
    "SH",
    "SF",
    "bwar",
    "fwar",
)
PARK_COLUMNS = (
    "year",
    "team",
    "ba_index_lhb",
    "ba_index_rhb",
    "hr_index_lhb",
    "hr_index_rhb",
)
BATTING_STATS = ("ba", "hr_rate", "bb_rate", "bwar_pg", "fwar_pg")
MIN_SMOOTHING_SEASONS = 5


@dataclass(frozen=True)
class PlayerCareerRecord:
    """A player's adjusted career."""

    player_id: Any
    name: str
    debut_year: int
    seasons: pd.DataFrame
    totals: dict[str, float] = field(default_factory=dict)
    peaks: dict[str, float] = field(default_factory=dict)

    def to_row(self) -> dict[str, Any]:
        """Flat row for the career table."""
        row: dict[str, Any] = {
            "player_id": self.player_id,
            "name": self.name,
            "debut_year": self.debut_year,
            "seasons": int(len(self.seasons)),
        }
        row.update(self.totals)
        row.update({f"peak_{key}": value for key, value in self.peaks.items()})
        return row


@dataclass(frozen=True)
class AdjustmentResult:
    """Adjusted player-seasons, careers and the season models behind them."""

    seasons: pd.DataFrame
    careers: pd.DataFrame
    contexts: dict[str, dict[int, ModeledSeason]]
    qualified_games: dict[int, float]


def handed_index(lhb: Any, rhb: Any, bats: Any) -> Any:
    """Park index for the batter's side; switch hitters get the mean of both."""
    bats = np.asarray(bats, dtype=object)
    lhb = np.asarray(lhb, dtype=float)
    rhb = np.asarray(rhb, dtype=float)
    result = np.where(bats == "L", lhb, np.where(bats == "R", rhb, (lhb + rhb) / 2.0))
    return float(result) if result.ndim == 0 else result


def park_adjust(value: Any, park_index: Any) -> tuple[Any, Any]:
    """
    Divide a value by its park index.

    A missing index leaves the value unchanged and sets the flag.

    Returns:
        The adjusted value and the missing-index flag.
    Raises:
        DomainError: If a present index is not positive.
    """
    index = np.asarray(park_index, dtype=float)
    missing = np.isnan(index)
    if np.any(index[~missing] <= 0):
        raise DomainError("Park index must be positive")
    divisor = np.where(missing, 1.0, index)
    adjusted = np.where(missing, value, np.asarray(value, dtype=float) / divisor)
    if adjusted.ndim == 0:
        return float(adjusted), bool(missing)
    return adjusted, missing


def qualification_cutoff(
    plate_appearances: Sequence[float], min_pa: float = 75
) -> float:
    """
    Full-time threshold: median PA of the hitters with at least ``min_pa``.

    Raises:
        EmptySeasonError: If nobody reaches ``min_pa``.
    """
    pa = np.asarray(plate_appearances, dtype=float)
    screened = pa[pa >= min_pa]
    if screened.size == 0:
        raise EmptySeasonError(f"No hitter reaches {min_pa} PA")
    return float(np.median(screened))


def quantile_map(value: Any, source: Sequence[float], target: Sequence[float]) -> Any:
    """
    Carry a value to the target season at the same percentile.

    Order statistics sit at their Hazen percentiles, except that each
    season's minimum and maximum are pinned to 0 and 1.
    """
    source_sorted = np.sort(np.asarray(source, dtype=float))
    target_sorted = np.sort(np.asarray(target, dtype=float))
    if source_sorted.size == 0 or target_sorted.size == 0:
        raise InsufficientDataError("Quantile mapping needs nonempty seasons")
    source_knots = _pinned_percentiles(source_sorted.size)
    target_knots = _pinned_percentiles(target_sorted.size)
    percentile = np.interp(value, source_sorted, source_knots)
    result = np.interp(percentile, target_knots, target_sorted)
    return float(result) if np.ndim(result) == 0 else result


def _pinned_percentiles(n: int) -> np.ndarray:
    if n == 1:
        return np.array([0.5])
    knots = hazen_percentile(np.arange(1, n + 1), n)
    knots[0], knots[-1] = 0.0, 1.0
    return knots


def adjusted_ab(
    mapped_pa: Any, rate: Any, hbp: Any, sh: Any, sf: Any
) -> tuple[Any, Any, Any]:
    """
    At-bats and walks consistent with mapped PA and an adjusted walk rate.

    AB = PA - BB - HBP - SH - SF with BB = rate * AB gives
    AB = (PA - HBP - SH - SF) / (1 + rate).

    Returns:
        Adjusted AB, adjusted BB and a flag set where the numerator was negative.
    """
    numerator = (
        np.asarray(mapped_pa, dtype=float)
        - np.asarray(hbp, dtype=float)
        - np.asarray(sh, dtype=float)
        - np.asarray(sf, dtype=float)
    )
    rate = np.asarray(rate, dtype=float)
    if np.any(rate <= -1):
        raise DomainError("Walk rate must exceed -1")
    negative = numerator < 0
    at_bats = np.where(negative, 0.0, numerator) / (1.0 + rate)
    walks = rate * at_bats
    if at_bats.ndim == 0:
        return float(at_bats), float(walks), bool(negative)
    return at_bats, walks, negative


def adjusted_obp(ba: Any, ab: Any, bb: Any, hbp: Any, sf: Any) -> tuple[Any, Any]:
    """
    On-base percentage (BA*AB + BB + HBP) / (AB + BB + HBP + SF).

    Returns:
        OBP (NaN where undefined) and the undefined flag.
    """
    hits = np.asarray(ba, dtype=float) * np.asarray(ab, dtype=float)
    on_base = hits + np.asarray(bb, dtype=float) + np.asarray(hbp, dtype=float)
    chances = (
        np.asarray(ab, dtype=float)
        + np.asarray(bb, dtype=float)
        + np.asarray(hbp, dtype=float)
        + np.asarray(sf, dtype=float)
    )
    undefined = chances <= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        obp = np.where(undefined, np.nan, on_base / np.where(undefined, 1.0, chances))
    if obp.ndim == 0:
        return float(obp), bool(undefined)
    return obp, undefined


def smooth_career(values: Sequence[float], lam: float | None = None) -> np.ndarray:
    """
    Average each season with a natural cubic smoothing spline over the career.

    Careers shorter than five seasons and constant careers pass through.

    Args:
        values: Adjusted values in career order.
        lam: Smoothing penalty; chosen by generalised cross-validation when None.
    Returns:
        (raw + spline) / 2 per season.
    """
    raw = np.asarray(values, dtype=float)
    if raw.size < MIN_SMOOTHING_SEASONS or np.ptp(raw) == 0:
        return raw.copy()
    index = np.arange(1, raw.size + 1, dtype=float)
    spline = make_smoothing_spline(index, raw, lam=lam)
    return (raw + spline(index)) / 2.0


def trim_career(war: Sequence[float], trailing_keep: int = 1) -> np.ndarray:
    """
    Indices of the seasons kept in a career.

    Keeps everything from the season before the first positive-WAR season
    through ``trailing_keep`` seasons after the last one. A career without a
    positive season keeps nothing.
    """
    values = np.asarray(war, dtype=float)
    positive = np.flatnonzero(values > 0)
    if positive.size == 0:
        return np.array([], dtype=int)
    start = max(int(positive[0]) - 1, 0)
    end = min(int(positive[-1]) + trailing_keep, values.size - 1)
    return np.arange(start, end + 1)


def aggregate_stints(
    frame: pd.DataFrame, park_factors: pd.DataFrame | None = None
) -> pd.DataFrame:
    """
    One row per player and year, summing counts over team stints.

    Park indices are resolved per stint for the batter's side and averaged
    with PA weights; a season with any stint lacking an index gets none.
    """
    data = frame.copy()
    if park_factors is not None and not park_factors.empty:
        data = data.merge(
            park_factors.loc[:, list(PARK_COLUMNS)], on=["year", "team"], how="left"
        )
    else:
        for column in PARK_COLUMNS[2:]:
            data[column] = np.nan
    for stat in ("ba", "hr"):
        index = handed_index(
            data[f"{stat}_index_lhb"], data[f"{stat}_index_rhb"], data["bats"]
        )
        data[f"_{stat}_weighted"] = index * data["PA"]
        data[f"_{stat}_missing"] = np.isnan(index)

    counts = ["G", "PA", "AB", "H", "HR", "BB", "HBP", "SH", "SF", "bwar", "fwar"]
    grouped = data.groupby(["player_id", "year"], sort=True)
    seasons = grouped[counts].sum()
    seasons["name"] = grouped["name"].first()
    seasons["bats"] = grouped["bats"].first()
    seasons["team"] = grouped["team"].agg(lambda teams: "/".join(dict.fromkeys(teams)))
    for stat in ("ba", "hr"):
        weighted = grouped[f"_{stat}_weighted"].sum()
        missing = grouped[f"_{stat}_missing"].any()
        with np.errstate(divide="ignore", invalid="ignore"):
            index = weighted / seasons["PA"].where(seasons["PA"] > 0)
        seasons[f"{stat}_index"] = index.where(~missing)
    seasons["park_missing"] = seasons["ba_index"].isna() | seasons["hr_index"].isna()
    return seasons.reset_index()


def _safe_ratio(numerator: pd.Series, denominator: pd.Series) -> pd.Series:
    return numerator / denominator.where(denominator > 0)


def batting_rates(seasons: pd.DataFrame) -> pd.DataFrame:
    """Raw rates plus the park-adjusted observations the season models use."""
    data = seasons.copy()
    data["ba_raw"] = _safe_ratio(data["H"], data["AB"])
    data["hr_rate_raw"] = _safe_ratio(data["HR"], data["AB"])
    data["bb_rate_raw"] = _safe_ratio(data["BB"], data["AB"])
    data["bwar_pg_raw"] = _safe_ratio(data["bwar"], data["G"])
    data["fwar_pg_raw"] = _safe_ratio(data["fwar"], data["G"])
    data["ba_obs"], _ = park_adjust(
        data["ba_raw"].to_numpy(), data["ba_index"].to_numpy()
    )
    data["hr_rate_obs"], _ = park_adjust(
        data["hr_rate_raw"].to_numpy(), data["hr_index"].to_numpy()
    )
    for stat in ("bb_rate", "bwar_pg", "fwar_pg"):
        data[f"{stat}_obs"] = data[f"{stat}_raw"]
    missing = int(data["park_missing"].sum())
    if missing:
        logger.warning(
            "%d player-season(s) have no park index; left unadjusted", missing
        )
    return data


def mark_qualified(seasons: pd.DataFrame, min_pa: float) -> pd.DataFrame:
    """Flag the full-time hitters of every season."""
    data = seasons.copy()
    data["qualified"] = False
    for year, rows in data.groupby("year"):
        try:
            cutoff = qualification_cutoff(rows["PA"], min_pa)
        except EmptySeasonError:
            logger.warning("Season %d has no hitter with %g PA", year, min_pa)
            continue
        data.loc[rows.index, "qualified"] = (rows["PA"] >= cutoff) & (rows["AB"] > 0)
    return data


def model_stat_seasons(
    frame: pd.DataFrame,
    stat: str,
    population: PopulationSeries,
    config: RunConfig,
    parametric: bool = False,
) -> dict[int, ModeledSeason]:
    """
    Model every season of one statistic on its qualified rows.

    Seasons whose model cannot be built are skipped with a warning.
    """
    column = f"{stat}_obs"
    usable = frame[frame["qualified"] & frame[column].notna()]
    jobs = [(int(year), rows) for year, rows in usable.groupby("year")]

    def build(job: tuple[int, pd.DataFrame]) -> ModeledSeason | None:
        year, rows = job
        try:
            return build_season(
                year,
                rows[column].to_numpy(dtype=float),
                population_at(population, year),
                config.talent_law,
                parametric=parametric,
                ids=rows["player_id"].tolist(),
                sd_ddof=config.sd_ddof,
            )
        except (InsufficientDataError, DomainError) as exc:
            logger.warning("Skipping %s season %d: %s", stat, year, exc)
            return None

    with ThreadPoolExecutor(max_workers=max(1, config.workers)) as executor:
        built = list(executor.map(build, jobs))
    return {
        year: season
        for (year, _), season in zip(jobs, built)
        if season is not None
    }


def assign_talents(
    frame: pd.DataFrame, stat: str, contexts: Mapping[int, ModeledSeason]
) -> tuple[pd.Series, pd.Series]:
    """
    Talent of every row: extracted for qualified rows, by insertion rank otherwise.

    Returns:
        Talents (NaN where the season is not modeled) and the partial flags.
    """
    column = f"{stat}_obs"
    talents = pd.Series(np.nan, index=frame.index)
    partial = pd.Series(False, index=frame.index)
    for year, rows in frame[frame[column].notna()].groupby("year"):
        season = contexts.get(int(year))
        if season is None:
            continue
        extracted = season.assignment.as_dict()
        full = rows["qualified"] & rows["player_id"].isin(list(extracted))
        talents.loc[rows.index[full]] = (
            rows.loc[full, "player_id"].map(extracted).to_numpy()
        )
        others = rows[~full]
        if not others.empty:
            talents.loc[others.index] = talents_of_values(
                season, others[column].to_numpy()
            )
            partial.loc[others.index] = True
    return talents, partial


def assign_trajectory(frame: pd.DataFrame, start_year: int) -> pd.DataFrame:
    """Career index (seasons played so far) and the trajectory year of every row."""
    data = frame.sort_values(["player_id", "year"]).copy()
    data["career_index"] = data.groupby("player_id").cumcount() + 1
    data["target_year"] = start_year + data["career_index"] - 1
    return data


def project_stat(
    frame: pd.DataFrame, talents: pd.Series, contexts: Mapping[int, ModeledSeason]
) -> tuple[pd.Series, pd.Series]:
    """Project talents into each row's target season, one call per target season."""
    values = pd.Series(np.nan, index=frame.index)
    below = pd.Series(False, index=frame.index)
    present = talents.notna()
    for year, rows in frame[present].groupby("target_year"):
        season = contexts.get(int(year))
        if season is None:
            continue
        projection = project_talents(talents.loc[rows.index].to_numpy(), season)
        values.loc[rows.index] = projection.values
        below.loc[rows.index] = projection.sub_replacement
    return values, below


def map_playing_time(
    frame: pd.DataFrame, column: str, eligible: pd.Series
) -> pd.Series:
    """Quantile-map a playing-time column from each row's season to its target."""
    pools = {
        int(year): rows[column].to_numpy(dtype=float)
        for year, rows in frame[eligible].groupby("year")
    }
    mapped = pd.Series(np.nan, index=frame.index)
    for (source, target), rows in frame.groupby(["year", "target_year"]):
        if int(source) not in pools or int(target) not in pools:
            continue
        mapped.loc[rows.index] = quantile_map(
            rows[column].to_numpy(dtype=float), pools[int(source)], pools[int(target)]
        )
    return mapped


def smooth_columns(
    frame: pd.DataFrame, columns: Sequence[str], enabled: bool, lam: float | None
) -> pd.DataFrame:
    """Smooth projected columns over each career into ``<stat>_adj`` columns."""
    data = frame.copy()
    for column in columns:
        target = column.removesuffix("_fh") + "_adj"
        data[target] = data[column]
        if not enabled:
            continue
        for _, rows in data[data[column].notna()].groupby("player_id"):
            ordered = rows.sort_values("career_index")
            data.loc[ordered.index, target] = smooth_career(
                ordered[column].to_numpy(), lam
            )
    return data


def mark_kept(frame: pd.DataFrame, war_column: str, trailing_keep: int) -> pd.Series:
    """Seasons surviving career trimming on an adjusted WAR column."""
    kept = pd.Series(False, index=frame.index)
    for _, rows in frame[frame[war_column].notna()].groupby("player_id"):
        ordered = rows.sort_values("career_index")
        positions = trim_career(ordered[war_column].to_numpy(), trailing_keep)
        kept.loc[ordered.index[positions]] = True
    return kept


def build_careers(
    frame: pd.DataFrame, totals: Sequence[str], peaks: Sequence[str]
) -> list[PlayerCareerRecord]:
    """Career records from the kept seasons."""
    debut = frame.groupby("player_id")["year"].min()
    records = []
    for player_id, rows in frame[frame["kept"]].groupby("player_id", sort=True):
        records.append(
            PlayerCareerRecord(
                player_id=player_id,
                name=str(rows["name"].iloc[0]),
                debut_year=int(debut.loc[player_id]),
                seasons=rows.sort_values("career_index"),
                totals={column: float(rows[column].sum()) for column in totals},
                peaks={column: float(rows[column].max()) for column in peaks},
            )
        )
    return records


def adjust_batting(
    frame: pd.DataFrame,
    population: PopulationSeries,
    config: RunConfig,
    park_factors: pd.DataFrame | None = None,
) -> AdjustmentResult:
    """
    Era-adjust every hitter onto the trajectory starting in ``config.start_year``.

    Args:
        frame: Batting stints with the batting.csv columns.
        population: Eligible population series.
        config: Run configuration.
        park_factors: Optional park indices by year and team.
    Returns:
        Adjusted seasons, careers and season models.
    """
    seasons = aggregate_stints(frame, park_factors)
    seasons = mark_qualified(batting_rates(seasons), config.min_pa_screen)
    seasons = assign_trajectory(seasons, config.start_year)

    contexts: dict[str, dict[int, ModeledSeason]] = {}
    seasons["partial"] = False
    seasons["sub_replacement"] = False
    for stat in BATTING_STATS:
        parametric = stat == "ba" and config.batting_average_mode == "parametric"
        contexts[stat] = model_stat_seasons(
            seasons, stat, population, config, parametric
        )
        talents, partial = assign_talents(seasons, stat, contexts[stat])
        values, below = project_stat(seasons, talents, contexts[stat])
        seasons[f"{stat}_talent"] = talents
        seasons[f"{stat}_fh"] = values
        seasons["partial"] |= partial
        seasons["sub_replacement"] |= below

    flag_truncated(seasons, contexts, [f"{stat}_fh" for stat in BATTING_STATS])
    eligible = seasons["PA"] > 0
    seasons["pa_adj"] = map_playing_time(seasons, "PA", eligible)
    seasons["g_adj"] = map_playing_time(seasons, "G", eligible)
    seasons = smooth_columns(
        seasons,
        [f"{stat}_fh" for stat in BATTING_STATS],
        config.smoothing,
        config.smoothing_lambda,
    )
    derive_batting_counts(seasons)

    seasons["kept"] = mark_kept(
        seasons, f"{config.trim_stat}_adj", config.trailing_keep
    )
    records = build_careers(
        seasons,
        totals=[
            "pa_adj",
            "g_adj",
            "ab_adj",
            "h_adj",
            "hr_adj",
            "bb_adj",
            "HBP",
            "SF",
            "bwar_adj",
            "fwar_adj",
        ],
        peaks=["ba_adj", "hr_adj", "bwar_adj", "fwar_adj"],
    )
    careers = batting_careers(records)
    logger.info(
        "Adjusted %d batting season(s) into %d career(s)",
        int(seasons["kept"].sum()),
        len(careers),
    )
    return AdjustmentResult(
        seasons=seasons.sort_values(["player_id", "year"]),
        careers=careers,
        contexts=contexts,
        qualified_games=median_qualified_games(seasons),
    )


def flag_truncated(
    seasons: pd.DataFrame,
    contexts: Mapping[str, Mapping[int, ModeledSeason]],
    projected: Sequence[str],
) -> None:
    """Flag rows whose target season is not modeled for every statistic."""
    available = set.intersection(*(set(found) for found in contexts.values()))
    seasons["truncated"] = ~seasons["target_year"].isin(available)
    seasons.loc[seasons["truncated"], list(projected)] = np.nan
    truncated = int(seasons["truncated"].sum())
    if truncated:
        logger.warning(
            "%d player-season(s) project outside the modeled seasons", truncated
        )


def median_qualified_games(seasons: pd.DataFrame) -> dict[int, float]:
    """Median games of the qualified players in each season."""
    return {
        int(year): float(rows["G"].median())
        for year, rows in seasons[seasons["qualified"]].groupby("year")
    }


def derive_batting_counts(seasons: pd.DataFrame) -> None:
    """Adjusted AB, BB, H, HR, OBP and WAR from the adjusted rates."""
    for stat in ("ba", "hr_rate", "bb_rate"):
        seasons[f"{stat}_adj"] = seasons[f"{stat}_adj"].clip(lower=0.0)
    seasons["ba_adj"] = seasons["ba_adj"].clip(upper=1.0)
    ab, bb, negative = adjusted_ab(
        seasons["pa_adj"],
        seasons["bb_rate_adj"].fillna(0.0),
        seasons["HBP"],
        seasons["SH"],
        seasons["SF"],
    )
    seasons["ab_adj"] = ab
    seasons["bb_adj"] = bb
    seasons["ab_negative"] = negative
    if np.any(negative):
        logger.warning(
            "%d adjusted AB value(s) were negative and set to zero",
            int(np.count_nonzero(negative)),
        )
    seasons["h_adj"] = seasons["ba_adj"] * seasons["ab_adj"]
    seasons["hr_adj"] = seasons["hr_rate_adj"] * seasons["ab_adj"]
    obp, undefined = adjusted_obp(
        seasons["ba_adj"],
        seasons["ab_adj"],
        seasons["bb_adj"],
        seasons["HBP"],
        seasons["SF"],
    )
    seasons["obp_adj"] = obp
    seasons["obp_undefined"] = undefined & seasons["ba_adj"].notna().to_numpy()
    seasons["bwar_adj"] = seasons["bwar_pg_adj"] * seasons["g_adj"]
    seasons["fwar_adj"] = seasons["fwar_pg_adj"] * seasons["g_adj"]


def batting_careers(records: Sequence[PlayerCareerRecord]) -> pd.DataFrame:
    """Career table with ratio-of-sums BA and OBP."""
    careers = pd.DataFrame.from_records([record.to_row() for record in records])
    if careers.empty:
        return careers
    with np.errstate(divide="ignore", invalid="ignore"):
        careers["ba_adj"] = careers["h_adj"] / careers["ab_adj"]
        chances = (
            careers["ab_adj"] + careers["bb_adj"] + careers["HBP"] + careers["SF"]
        )
        careers["obp_adj"] = (
            careers["h_adj"] + careers["bb_adj"] + careers["HBP"]
        ) / chances
    return careers
