"""
Unit tests for talent module in full_house.

Author: Ron Webb
Since: 1.0.0
"""

import math

import numpy as np
import pytest
from scipy.special import betainc, betaincinv

import full_house.talent as talent
from full_house.distributions import TalentLaw, fit_season_normal
from full_house.errors import DomainError
from full_house.tail_ecdf import InterpolatedCdf, build_cdf

PARETO = TalentLaw("pareto")
UNIFORM = TalentLaw("uniform")


def _season_values(seed: int, size: int = 60, mean: float = 0.26) -> np.ndarray:
    return np.random.default_rng(seed).normal(mean, 0.03, size)


def test_extract_talents_orders_players_by_value() -> None:
    """
    Test that talents increase with value and ids follow the value order.
    """
    values = [0.31, 0.22, 0.27]
    season = talent.build_season(
        1980, values, 2_000_000, PARETO, parametric=True, ids=["a", "b", "c"]
    )
    assignment = season.assignment
    assert assignment.ids == ("b", "c", "a")
    assert np.all(np.diff(assignment.talents) > 0)
    assert assignment.talents[0] >= 1.0
    assert set(assignment.as_dict()) == {"a", "b", "c"}


def test_season_context_validation() -> None:
    """
    Test that a population smaller than the season is rejected.
    """
    model = fit_season_normal([0.2, 0.3, 0.4])
    with pytest.raises(DomainError):
        talent.SeasonContext(1980, 2, 3, model, PARETO, np.array([0.2, 0.3, 0.4]))


def test_extract_talents_rejects_size_mismatch() -> None:
    """
    Test that the values must match the season size.
    """
    season = talent.build_season(1980, [0.2, 0.3, 0.4], 1000, PARETO, parametric=True)
    with pytest.raises(DomainError):
        talent.extract_talents(season.context, [0.2, 0.3])


@pytest.mark.parametrize("parametric", [True, False])
@pytest.mark.parametrize(
    "size, population", [(60, 8_000_000), (200, 1_000_000), (500, 16_000_000)]
)
def test_projection_into_own_season_is_identity(
    parametric: bool, size: int, population: int
) -> None:
    """
    Test that projecting a season's talents back into it recovers its values.
    """
    values = _season_values(1, size)
    season = talent.build_season(
        1985, values, population, PARETO, parametric=parametric
    )
    projection = talent.project_talents(season.assignment.talents, season)
    assert np.allclose(projection.values, season.assignment.values, rtol=1e-6)
    assert np.array_equal(projection.ranks, np.arange(1, values.size + 1))
    assert not projection.sub_replacement.any()


def test_projection_carries_a_league_wide_shift() -> None:
    """
    Test that a uniformly higher season maps every talent to a value 0.02 higher.
    """
    values = _season_values(2)
    low = talent.build_season(1960, values, 5_000_000, PARETO, parametric=True)
    high = talent.build_season(1990, values + 0.02, 5_000_000, PARETO, parametric=True)
    assert np.allclose(low.assignment.talents, high.assignment.talents, rtol=1e-9)
    projected = talent.project_talents(low.assignment.talents, high).values
    assert np.allclose(projected, low.assignment.values + 0.02, rtol=1e-9)


@pytest.mark.parametrize("parametric", [True, False])
def test_larger_population_raises_talent(parametric: bool) -> None:
    """
    Test that the same value is worth more talent when drawn from more people.
    """
    values = _season_values(3)
    small = talent.build_season(1950, values, 1_000_000, PARETO, parametric=parametric)
    large = talent.build_season(1950, values, 10_000_000, PARETO, parametric=parametric)
    assert np.all(large.assignment.talents > small.assignment.talents)


def test_talent_of_value_matches_qualified_player() -> None:
    """
    Test that a qualified player's own value gets that player's talent.
    """
    values = _season_values(4)
    season = talent.build_season(1970, values, 6_000_000, PARETO, parametric=True)
    j = 17
    value = season.assignment.values[j]
    expected = season.assignment.talents[j]
    assert talent.talent_of_value(season, value) == pytest.approx(expected, rel=1e-12)
    below = talent.talents_of_values(season, [season.assignment.values[0] - 0.05])
    assert below[0] < season.assignment.talents[0]


def test_projection_flags_sub_replacement_talent() -> None:
    """
    Test that a talent below the weakest incumbent is flagged.
    """
    season = talent.build_season(
        1975, _season_values(5), 7_000_000, PARETO, parametric=True
    )
    weakest = season.assignment.talents[0]
    projection = talent.project_talents([weakest * 0.999, weakest], season)
    assert projection.sub_replacement.tolist() == [True, False]
    assert projection.ranks.tolist() == [1, 1]
    assert projection.values[0] < projection.values[1]


def test_target_year() -> None:
    """
    Test that the t-th season lands in start_year + t - 1.
    """
    assert talent.target_year(1977, 1) == 1977
    assert talent.target_year(1977, 3) == 1979


def test_era_adjust_career_truncates_and_calls_hook() -> None:
    """
    Test that missing target seasons are dropped and the hook sees each season.
    """
    contexts = {
        year: talent.build_season(
            year, _season_values(year), 5_000_000, PARETO, parametric=True
        )
        for year in (1977, 1978)
    }
    career = [(1991, 2.5), (1990, 2.0), (1992, 3.0)]
    calls = []

    def hook(source: int, target: int, score: float) -> float:
        calls.append((source, target))
        return score

    result = talent.era_adjust_career(career, 1977, contexts, hook)
    assert result.truncated
    assert [s.target_year for s in result.seasons] == [1977, 1978]
    assert [s.source_year for s in result.seasons] == [1990, 1991]
    assert calls == [(1990, 1977), (1991, 1978)]
    for season in result.seasons:
        assert season.value == pytest.approx(
            talent.project(season.talent, contexts[season.target_year])
        )


def _toy_season(
    year: int, values: list[float], population: int, extension: float
) -> talent.ModeledSeason:
    ordered = np.array(values)
    model = InterpolatedCdf(
        sorted_samples=ordered,
        surrogates=np.concatenate(
            (
                [ordered[0] - extension],
                (ordered[1:] + ordered[:-1]) / 2.0,
                [ordered[-1] + extension],
            )
        ),
        y_star=extension,
        y_star_star=extension,
    )
    context = talent.SeasonContext(
        year, population, ordered.size, model, UNIFORM, ordered
    )
    return talent.ModeledSeason(context, talent.extract_talents(context, ordered))


def test_extract_talents_three_player_hand_example() -> None:
    """
    Test the full chain on {1, 2, 3} drawn from five uniform talents.
    """
    season = _toy_season(1980, [1.0, 2.0, 3.0], 5, 1.0)
    p1 = np.array([2.0 / 9.0, 0.5, 7.0 / 9.0])
    ranks = np.arange(1.0, 4.0)
    p2 = betainc(ranks, 4.0 - ranks, p1)
    expected = betaincinv(ranks + 2.0, 4.0 - ranks, p2)
    assert np.allclose(season.assignment.talents, expected, rtol=1e-9)
    top = ((7.0 / 9.0) ** 3) ** 0.2
    assert season.assignment.talents[-1] == pytest.approx(top, rel=1e-9)
    assert top == pytest.approx(0.86003, abs=1e-5)


def test_build_cdf_season_matches_hand_built_season() -> None:
    """
    Test that build_cdf with y* = y** = 1 reproduces the hand-built season.
    """
    model = build_cdf([1.0, 2.0, 3.0], y_star=1.0, y_star_star=1.0)
    context = talent.SeasonContext(
        1980, 5, 3, model, UNIFORM, np.array([1.0, 2.0, 3.0])
    )
    talents = talent.extract_talents(context, [3.0, 1.0, 2.0]).talents
    expected = _toy_season(1980, [1.0, 2.0, 3.0], 5, 1.0).assignment.talents
    assert np.allclose(talents, expected, rtol=1e-12)


def test_three_player_season_projects_into_two_player_season() -> None:
    """
    Test a hand-evaluated projection from a three-player into a two-player season.
    """
    source = _toy_season(1980, [1.0, 2.0, 3.0], 5, 1.0)
    target = _toy_season(1990, [10.0, 20.0], 3, 5.0)
    assert np.allclose(
        target.assignment.talents,
        [betaincinv(2.0, 2.0, 0.4375), 0.5625 ** (1.0 / 3.0)],
        rtol=1e-9,
    )

    middle, top = source.assignment.talents[1:]
    projection = talent.project_talents([middle, top], target)
    assert projection.ranks.tolist() == [2, 2]

    def by_hand(score: float) -> float:
        u = math.sqrt(score**3)
        return 15.0 + (u - 0.5) / 0.5 * 10.0

    assert projection.values[0] == pytest.approx(by_hand(middle), rel=1e-9)
    assert projection.values[1] == pytest.approx(by_hand(top), rel=1e-9)
    assert projection.values[1] == pytest.approx(
        15.0 + 20.0 * ((7.0 / 9.0) ** 0.9 - 0.5), rel=1e-9
    )
    assert projection.values[1] > 20.0
