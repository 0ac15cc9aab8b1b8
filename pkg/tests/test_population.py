"""
Unit tests for population module in full_house.

Author: Ron Webb
Since: 1.0.0
"""

import itertools

import numpy as np
import pandas as pd
import pytest

import full_house.population as population
from full_house.errors import DomainError, RangeError, ValidationError

DEFAULT = population.PopulationSeries.default()


def test_population_at_decade_records() -> None:
    """
    Test that decade years return the table values exactly.
    """
    for year, millions in population.DEFAULT_POPULATION:
        assert population.population_at(DEFAULT, year) == pytest.approx(
            millions * population.MILLION, rel=1e-12
        )


def test_population_at_interpolates() -> None:
    """
    Test linear interpolation between records and rounding to persons.
    """
    assert population.population_at(DEFAULT, 1955) == pytest.approx(4_515_000)
    assert population.population_count(DEFAULT, 1955) == 4_515_000


def test_population_at_rejects_years_outside_the_table() -> None:
    """
    Test that years before the first or after the last record raise RangeError.
    """
    with pytest.raises(RangeError):
        population.population_at(DEFAULT, 1869)
    with pytest.raises(RangeError):
        population.population_at(DEFAULT, 2021)


def test_cumulative_proportion_full_range() -> None:
    """
    Test the share of the full table recorded up to and including 1950.
    """
    proportion = population.cumulative_proportion(DEFAULT, 1950)
    assert proportion == pytest.approx(12.32 / 87.59)
    assert population.format_proportion(proportion) == "0.141"


def test_cumulative_proportion_subrange() -> None:
    """
    Test that the range bounds select which records are summed.
    """
    proportion = population.cumulative_proportion(DEFAULT, 1950, 1871, 2005)
    assert proportion == pytest.approx(11.93 / 56.97)
    with pytest.raises(RangeError):
        population.cumulative_proportion(DEFAULT, 1950, 1860, 2005)
    with pytest.raises(DomainError):
        population.cumulative_proportion(DEFAULT, 1950, 1871, 1879)


@pytest.mark.parametrize(
    "x, k, odds",
    [
        (6, 10, 205.0),
        (15, 25, 142048.0),
        (4, 25, 1.38),
        (17, 25, 8173216.0),
    ],
)
def test_chance_top_k_reproduces_published_odds(x: int, k: int, odds: float) -> None:
    """
    Test the binomial odds against the published leaderboard footers.
    """
    assert population.chance_top_k(x, k, 0.190) == pytest.approx(odds, rel=0.01)


@pytest.mark.parametrize("p", [0.190, 0.5, 0.83])
def test_chance_top_k_matches_enumerated_leaderboards(p: float) -> None:
    """
    Test the odds against summing every early/late split of small leaderboards.
    """
    for k in range(1, 13):
        at_least = [0.0] * (k + 2)
        for split in itertools.product((0, 1), repeat=k):
            early = sum(split)
            weight = p**early * (1.0 - p) ** (k - early)
            for x in range(early + 1):
                at_least[x] += weight
        for x in range(k + 1):
            assert population.chance_top_k(x, k, p) == pytest.approx(
                1.0 / at_least[x], rel=1e-9
            )


def test_chance_top_k_edges() -> None:
    """
    Test the trivial case and the domain checks.
    """
    assert population.chance_top_k(0, 25, 0.190) == pytest.approx(1.0)
    assert population.format_odds(population.chance_top_k(0, 25, 0.190)) == "1 in 1"
    with pytest.raises(DomainError):
        population.chance_top_k(26, 25, 0.190)
    with pytest.raises(DomainError):
        population.chance_top_k(3, 25, 1.0)


def test_format_odds() -> None:
    """
    Test three significant figures below 1000 and whole numbers above.
    """
    assert population.format_odds(1.3812) == "1 in 1.38"
    assert population.format_odds(205.3) == "1 in 205"
    assert population.format_odds(142048.4) == "1 in 142048"


def test_count_debuts_before() -> None:
    """
    Test that the cutoff year itself is not counted.
    """
    assert population.count_debuts_before([1940, 1949, 1950, 1962], 1950) == 2


def test_from_frame_applies_weights() -> None:
    """
    Test that an optional weight column scales the population.
    """
    frame = pd.DataFrame(
        {
            "year": [1900, 1950],
            "population_millions": [2.0, 4.0],
            "weight": [0.5, 1.0],
        }
    )
    series = population.PopulationSeries.from_frame(frame)
    assert np.allclose(series.millions, [1.0, 4.0])
    assert population.population_at(series, 1925) == pytest.approx(2_500_000)


def test_series_validation() -> None:
    """
    Test the ordering and positivity checks of a series.
    """
    with pytest.raises(ValidationError) as error:
        population.PopulationSeries(np.array([1900, 1900]), np.array([1.0, 2.0]))
    assert error.value.code == "E_POP_YEARS"
    with pytest.raises(ValidationError) as error:
        population.PopulationSeries(np.array([1900, 1910]), np.array([1.0, 0.0]))
    assert error.value.code == "E_POP_VALUE"
