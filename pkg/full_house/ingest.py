"""
CSV ingestion module for full_house.

Loads the batting, pitching, park factor, game log, rotation and population
tables with pandas and validates them. Every violation is reported with the
file line numbers of the offending rows (the header is line 1).

Author: Ron Webb
Since: 1.0.0
"""

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd

from .batting import BATTING_COLUMNS, PARK_COLUMNS
from .errors import ValidationError
from .pitching import GAMELOG_COLUMNS, PITCHING_COLUMNS, ROTATION_COLUMNS
from .population import PopulationSeries
from .util import setup_logger

logger = setup_logger(__name__)

HEADER_LINES = 1
POPULATION_COLUMNS = ("year", "population_millions")


@dataclass(frozen=True)
class TableSummary:
    """Counts reported by the ingest command for one file."""

    name: str
    rows: int
    seasons: int
    players: int

    def describe(self) -> str:
        """One-line description."""
        return (
            f"{self.name}: {self.rows} row(s), {self.seasons} season(s), "
            f"{self.players} player(s)"
        )


def _lines(mask: pd.Series) -> list[int]:
    return [int(position) + HEADER_LINES + 1 for position in np.flatnonzero(mask)]


def _read(path: str) -> pd.DataFrame:
    if not os.path.isfile(path):
        raise FileNotFoundError(f"Input file not found: {path}")
    return pd.read_csv(path, comment="#", skipinitialspace=True)


def check_columns(frame: pd.DataFrame, columns: Sequence[str], name: str) -> None:
    """
    Require every column to be present.

    Raises:
        ValidationError: E_SCHEMA naming the missing columns.
    """
    missing = [column for column in columns if column not in frame.columns]
    if missing:
        raise ValidationError(
            f"{name} is missing column(s): {', '.join(missing)}", "E_SCHEMA"
        )


def coerce_numeric(
    frame: pd.DataFrame, columns: Sequence[str], name: str, optional: bool = False
) -> pd.DataFrame:
    """
    Convert columns to numbers.

    Blank cells are allowed only when ``optional`` is set.

    Raises:
        ValidationError: E_PARSE with the offending lines.
    """
    data = frame.copy()
    for column in columns:
        converted = pd.to_numeric(data[column], errors="coerce")
        bad = converted.isna() & (data[column].notna() | (not optional))
        if bad.any():
            raise ValidationError(
                f"{name} column {column} has non-numeric values",
                "E_PARSE",
                _lines(bad),
            )
        data[column] = converted
    return data


def _require(mask: pd.Series, message: str, code: str) -> None:
    if mask.any():
        raise ValidationError(message, code, _lines(mask))


def _check_nonnegative(frame: pd.DataFrame, columns: Sequence[str], name: str) -> None:
    negative = (frame.loc[:, list(columns)] < 0).any(axis=1)
    _require(negative, f"{name} has negative counts", "E_NEGATIVE_COUNT")


def validate_batting(frame: pd.DataFrame) -> pd.DataFrame:
    """
    Check batting stints.

    Raises:
        ValidationError: E_SCHEMA, E_PARSE, E_NEGATIVE_COUNT, E_PA_LT_AB,
            E_AB_LT_H or E_H_LT_HR.
    """
    check_columns(frame, BATTING_COLUMNS, "batting.csv")
    counts = ["G", "PA", "AB", "H", "HR", "BB", "HBP", "SH", "SF"]
    data = coerce_numeric(frame, ["year", *counts, "bwar", "fwar"], "batting.csv")
    _check_nonnegative(data, counts, "batting.csv")
    _require(data["PA"] < data["AB"], "batting.csv has PA < AB", "E_PA_LT_AB")
    _require(data["AB"] < data["H"], "batting.csv has AB < H", "E_AB_LT_H")
    _require(data["H"] < data["HR"], "batting.csv has H < HR", "E_H_LT_HR")
    data["player_id"] = data["player_id"].astype(str)
    data["year"] = data["year"].astype(int)
    data["bats"] = data["bats"].fillna("B").astype(str).str.upper()
    return data


def validate_pitching(frame: pd.DataFrame) -> pd.DataFrame:
    """
    Check pitching stints.

    Raises:
        ValidationError: E_SCHEMA, E_PARSE, E_NEGATIVE_COUNT or E_IP when a
            pitcher with starts or earned runs has no innings.
    """
    check_columns(frame, PITCHING_COLUMNS, "pitching.csv")
    counts = ["G", "GS", "IP", "ER", "SO"]
    data = coerce_numeric(frame, ["year", *counts, "bwar", "fwar"], "pitching.csv")
    _check_nonnegative(data, counts, "pitching.csv")
    _require(
        (data["IP"] <= 0) & ((data["GS"] > 0) | (data["ER"] > 0)),
        "pitching.csv has starts or earned runs without innings",
        "E_IP",
    )
    data["year"] = data["year"].astype(int)
    data["player_id"] = data["player_id"].astype(str)
    return data


def validate_park_factors(frame: pd.DataFrame) -> pd.DataFrame:
    """Check park indices; blanks are allowed and stay missing."""
    check_columns(frame, PARK_COLUMNS, "park_factors.csv")
    data = coerce_numeric(frame, ["year"], "park_factors.csv")
    data = coerce_numeric(data, PARK_COLUMNS[2:], "park_factors.csv", optional=True)
    _require(
        (data.loc[:, list(PARK_COLUMNS[2:])] <= 0).any(axis=1),
        "park_factors.csv has nonpositive indices",
        "E_PARK_INDEX",
    )
    data["year"] = data["year"].astype(int)
    return data


def validate_population(frame: pd.DataFrame) -> PopulationSeries:
    """
    Check an eligible population table and build its series.

    Raises:
        ValidationError: E_SCHEMA, E_PARSE, E_POP_YEARS or E_POP_VALUE.
    """
    check_columns(frame, POPULATION_COLUMNS, "population.csv")
    columns = list(POPULATION_COLUMNS)
    if "weight" in frame.columns:
        columns.append("weight")
    data = coerce_numeric(frame, columns, "population.csv")
    years = data["year"]
    _require(years.diff() <= 0, "population.csv years must increase", "E_POP_YEARS")
    _require(
        data["population_millions"] <= 0,
        "population.csv values must be positive",
        "E_POP_VALUE",
    )
    return PopulationSeries.from_frame(data)


def validate_gamelogs(frame: pd.DataFrame) -> pd.DataFrame:
    """Check starter sequences."""
    check_columns(frame, GAMELOG_COLUMNS, "gamelogs.csv")
    data = coerce_numeric(frame, ["year", "game_number"], "gamelogs.csv")
    data["year"] = data["year"].astype(int)
    return data


def validate_rotations(frame: pd.DataFrame) -> pd.DataFrame:
    """Check a per-season rotation table."""
    check_columns(frame, ROTATION_COLUMNS, "rotations.csv")
    data = coerce_numeric(frame, list(ROTATION_COLUMNS), "rotations.csv")
    _require(
        (data["teams"] < 1) | (data["rotation_size"] < 1),
        "rotations.csv needs at least one team and a rotation of at least 1",
        "E_ROTATION",
    )
    return data


def load_batting(path: str) -> pd.DataFrame:
    """Read and validate batting.csv."""
    data = validate_batting(_read(path))
    logger.info("Loaded %d batting row(s) from %s", len(data), path)
    return data


def load_pitching(path: str) -> pd.DataFrame:
    """Read and validate pitching.csv."""
    data = validate_pitching(_read(path))
    logger.info("Loaded %d pitching row(s) from %s", len(data), path)
    return data


def load_park_factors(path: str | None) -> pd.DataFrame | None:
    """Read and validate park_factors.csv; None when no path is given."""
    if not path:
        logger.warning("No park factors given; park adjustment is the identity")
        return None
    return validate_park_factors(_read(path))


def load_population(path: str | None) -> PopulationSeries:
    """Read and validate population.csv, or the built-in decade table."""
    if not path:
        return PopulationSeries.default()
    series = validate_population(_read(path))
    logger.info(
        "Loaded population %d-%d from %s", series.first_year, series.last_year, path
    )
    return series


def load_gamelogs(path: str | None) -> pd.DataFrame | None:
    """Read and validate gamelogs.csv when given."""
    return validate_gamelogs(_read(path)) if path else None


def load_rotations(path: str | None) -> pd.DataFrame | None:
    """Read and validate rotations.csv when given."""
    return validate_rotations(_read(path)) if path else None


def summarize(name: str, frame: pd.DataFrame) -> TableSummary:
    """Row, season and player counts of a validated table."""
    return TableSummary(
        name=name,
        rows=int(len(frame)),
        seasons=int(frame["year"].nunique()) if "year" in frame else 0,
        players=int(frame["player_id"].nunique()) if "player_id" in frame else 0,
    )
