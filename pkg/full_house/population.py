"""
Eligible population module for full_house.

Yearly counts of the people who could plausibly reach the league, linear
interpolation between records, cumulative proportions, and the binomial
"chance in top k" over-representation odds.

Author: Ron Webb
Since: 1.0.0
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd
from scipy import stats

from .errors import DomainError, RangeError, ValidationError

MILLION = 1_000_000

DEFAULT_POPULATION = (
    (1870, 0.39),
    (1880, 0.56),
    (1890, 0.67),
    (1900, 0.79),
    (1910, 1.27),
    (1920, 1.05),
    (1930, 1.36),
    (1940, 2.82),
    (1950, 3.41),
    (1960, 5.62),
    (1970, 7.80),
    (1980, 9.30),
    (1990, 8.18),
    (2000, 14.14),
    (2010, 14.50),
    (2020, 15.73),
)


@dataclass(frozen=True)
class PopulationSeries:
    """Eligible population records in millions of persons."""

    years: np.ndarray
    millions: np.ndarray

    def __post_init__(self) -> None:
        years = np.asarray(self.years)
        millions = np.asarray(self.millions, dtype=float)
        if years.size == 0 or years.size != millions.size:
            raise ValidationError(
                "Population series needs matching, nonempty columns", "E_SCHEMA"
            )
        bad_years = np.flatnonzero(np.diff(years) <= 0) + 2
        if bad_years.size:
            raise ValidationError(
                "Population years must be strictly increasing",
                "E_POP_YEARS",
                bad_years,
            )
        bad_values = np.flatnonzero(~(millions > 0)) + 1
        if bad_values.size:
            raise ValidationError(
                "Population values must be positive", "E_POP_VALUE", bad_values
            )

    @classmethod
    def default(cls) -> "PopulationSeries":
        """The built-in decade table."""
        years, millions = zip(*DEFAULT_POPULATION)
        return cls(np.array(years), np.array(millions, dtype=float))

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "PopulationSeries":
        """
        Build from a frame with ``year`` and ``population_millions`` columns.

        An optional ``weight`` column multiplies the population.
        """
        millions = frame["population_millions"].to_numpy(dtype=float)
        if "weight" in frame.columns:
            millions = millions * frame["weight"].to_numpy(dtype=float)
        return cls(frame["year"].to_numpy(dtype=int), millions)

    @property
    def first_year(self) -> int:
        """First record year."""
        return int(self.years[0])

    @property
    def last_year(self) -> int:
        """Last record year."""
        return int(self.years[-1])


def population_at(series: PopulationSeries, year: float) -> float:
    """
    Eligible population in persons, linear between records.

    Raises:
        RangeError: If the year lies outside the series.
    """
    if not series.first_year <= year <= series.last_year:
        raise RangeError(
            f"Year {year} outside population range "
            f"{series.first_year}-{series.last_year}"
        )
    return float(np.interp(year, series.years, series.millions)) * MILLION


def population_count(series: PopulationSeries, year: float) -> int:
    """Eligible population rounded to whole persons."""
    return int(round(population_at(series, year)))


def cumulative_proportion(
    series: PopulationSeries,
    cutoff_year: float,
    start: float | None = None,
    end: float | None = None,
) -> float:
    """
    Share of the population mass in [start, end] recorded at or before the cutoff.

    Records are summed at the series' own resolution.

    Raises:
        RangeError: If the range lies outside the series.
        DomainError: If no record falls inside the range.
    """
    start = series.first_year if start is None else start
    end = series.last_year if end is None else end
    if start < series.first_year or end > series.last_year:
        raise RangeError(
            f"Range {start}-{end} outside population range "
            f"{series.first_year}-{series.last_year}"
        )
    inside = (series.years >= start) & (series.years <= end)
    total = float(series.millions[inside].sum())
    if not inside.any() or total <= 0:
        raise DomainError(f"No population records between {start} and {end}")
    before = inside & (series.years <= cutoff_year)
    return float(series.millions[before].sum()) / total


def chance_top_k(x: int, k: int, p: float) -> float:
    """
    Odds against seeing x or more pre-cutoff players in a top-k list.

    Returns 1 / P(Binomial(k, p) >= x).

    Raises:
        DomainError: If x is outside [0, k] or p outside (0, 1).
    """
    if not 0 <= x <= k:
        raise DomainError(f"Chance in top k needs 0 <= x <= k, got x={x}, k={k}")
    if not 0.0 < p < 1.0:
        raise DomainError(f"Chance in top k needs 0 < p < 1, got {p}")
    return 1.0 / float(stats.binom.sf(x - 1, k, p))


def format_odds(odds: float) -> str:
    """'1 in z' with z to 3 significant figures below 1000, else whole."""
    if odds < 1000:
        return f"1 in {odds:.3g}"
    return f"1 in {round(odds)}"


def format_proportion(proportion: float) -> str:
    """Probabilities are reported to 3 decimals."""
    return f"{proportion:.3f}"


def count_debuts_before(debut_years: Sequence[float], cutoff_year: float) -> int:
    """Number of careers that began strictly before the cutoff year."""
    return int(np.count_nonzero(np.asarray(debut_years) < cutoff_year))
