"""
Unit tests for pitching module in full_house.

Author: Ron Webb
Since: 1.0.0
"""

import numpy as np
import pandas as pd
import pytest

import full_house.pitching as pitching
from full_house.config import RunConfig
from full_house.errors import DomainError
from full_house.population import PopulationSeries
from tests.synthetic_league import FIRST_YEAR, TEAMS, gamelog_frame, pitching_frame

POPULATION = PopulationSeries.default()


@pytest.fixture(name="staff", scope="module")
def fixture_staff() -> pd.DataFrame:
    """Synthetic pitching stints shared by the pipeline tests."""
    return pitching_frame()


@pytest.fixture(name="adjusted", scope="module")
def fixture_adjusted(staff: pd.DataFrame) -> pitching.AdjustmentResult:
    """The synthetic staff adjusted onto the trajectory starting in 1950."""
    config = RunConfig(start_year=FIRST_YEAR, smoothing=False)
    return pitching.adjust_pitching(staff, POPULATION, config)


@pytest.mark.parametrize(
    "starters, expected",
    [
        (["A", "B", "A", "C", "A", "B"], 7 / 3),
        (["A", "A", "A", "A"], 1.0),
        (["A", "B", "C"] * 3, 3.0),
        (["A", "B", "C"], 3.0),
    ],
)
def test_rotation_size(starters: list[str], expected: float) -> None:
    """
    Test the average closed window of distinct consecutive starters.
    """
    assert pitching.rotation_size(starters) == pytest.approx(expected)


@pytest.mark.parametrize("size", [3, 4, 5])
def test_rotation_size_ignores_phase_and_labels(size: int) -> None:
    """
    Test that shifting a fixed rotation or renaming its starters keeps the size.
    """
    for phase in range(size):
        shifted = [f"P{(game + phase) % size}" for game in range(30)]
        assert pitching.rotation_size(shifted) == pytest.approx(float(size))
    irregular = list(np.random.default_rng(size).choice(list("ABCDEF"), 40))
    renamed = [f"starter-{name.lower()}" for name in irregular]
    assert pitching.rotation_size(renamed) == pitching.rotation_size(irregular)


def test_rotation_size_rejects_empty_sequence() -> None:
    """
    Test that a team without starts has no rotation.
    """
    with pytest.raises(DomainError):
        pitching.rotation_size([])


def test_profiles_from_gamelogs() -> None:
    """
    Test league averages measured from cycling rotations.
    """
    profiles = pitching.profiles_from_gamelogs(gamelog_frame({1950: 4, 1951: 5}))
    assert profiles[1950].league_average == pytest.approx(4.0)
    assert profiles[1951].league_average == pytest.approx(5.0)
    assert profiles[1950].teams == len(TEAMS)
    assert set(profiles[1951].team_rotation) == set(TEAMS)


def test_resolve_profiles_precedence() -> None:
    """
    Test that game logs beat the table and the table beats the default.
    """
    frame = pd.DataFrame({"year": [1950, 1951, 1952], "team": ["BOS", "DET/NYA", "X"]})
    table = pd.DataFrame(
        {"year": [1950, 1951], "teams": [8, 8], "rotation_size": [3.5, 3.5]}
    )
    profiles = pitching.resolve_profiles(frame, 5.0, gamelog_frame({1950: 4}), table)
    assert profiles[1950].league_average == pytest.approx(4.0)
    assert profiles[1951].league_average == pytest.approx(3.5)
    assert profiles[1952].league_average == pytest.approx(5.0)
    assert profiles[1952].teams == 1


def test_rotation_profile_validation() -> None:
    """
    Test that rotations below one and empty leagues are rejected.
    """
    with pytest.raises(DomainError):
        pitching.RotationProfile(1950, 0.5, 8)
    with pytest.raises(DomainError):
        pitching.RotationProfile(1950, 4.0, 0)


def test_full_time_pitcher_count() -> None:
    """
    Test rotation times teams, rounded.
    """
    profile = pitching.RotationProfile(1950, 4.2, 8)
    assert pitching.full_time_pitcher_count(profile) == 34


def test_rotation_shift_direction_and_clamp() -> None:
    """
    Test the signed shift and the clamp to the last qualifying starter.
    """
    talents = np.arange(1.0, 41.0)
    four = pitching.RotationProfile(1950, 4.0, 8)
    five = pitching.RotationProfile(1990, 5.0, 8)
    shift, clamped = pitching.rotation_shift(four, five, talents)
    assert shift == pytest.approx(9.0)
    assert not clamped
    shift, clamped = pitching.rotation_shift(five, four, talents[:32])
    assert shift == pytest.approx(-1.0)
    assert clamped
    assert pitching.rotation_shift(four, four, talents) == (0.0, False)
    assert pitching.rotation_adjust(2.0, four, five, talents) == pytest.approx(11.0)


def test_aggregate_pitching_drops_idle_rows() -> None:
    """
    Test that stints are combined and seasons without innings are excluded.
    """
    base = {"name": "Arm", "year": 1960, "G": 10, "GS": 5, "ER": 20, "SO": 40}
    frame = pd.DataFrame(
        [
            {**base, "player_id": "p1", "team": "BOS", "IP": 60.0, "bwar": 1.0},
            {**base, "player_id": "p1", "team": "DET", "IP": 30.0, "bwar": 0.5},
            {**base, "player_id": "p2", "team": "BOS", "IP": 0.0, "bwar": 0.0},
        ]
    ).assign(fwar=0.0)
    seasons = pitching.aggregate_pitching(frame)
    assert seasons["player_id"].tolist() == ["p1"]
    assert seasons.loc[0, "IP"] == pytest.approx(90.0)
    assert seasons.loc[0, "team"] == "BOS/DET"


def test_pitching_rates() -> None:
    """
    Test ERA, strikeout rate and the negated ERA observation.
    """
    seasons = pd.DataFrame(
        {
            "IP": [180.0],
            "ER": [60],
            "SO": [144],
            "G": [30],
            "bwar": [3.0],
            "fwar": [2.4],
        }
    )
    rates = pitching.pitching_rates(seasons).iloc[0]
    assert rates["era_raw"] == pytest.approx(3.0)
    assert rates["neg_era_obs"] == pytest.approx(-3.0)
    assert rates["so_rate_obs"] == pytest.approx(0.8)
    assert rates["bwar_pg_obs"] == pytest.approx(0.1)


def test_mark_full_time_breaks_ties_by_id() -> None:
    """
    Test that the top innings arms qualify with ties broken by player id.
    """
    seasons = pd.DataFrame(
        {
            "player_id": ["c", "b", "a", "d"],
            "year": [1950] * 4,
            "IP": [200.0, 150.0, 150.0, 90.0],
        }
    )
    profiles = {1950: pitching.RotationProfile(1950, 2.0, 1)}
    marked = pitching.mark_full_time(seasons, profiles)
    assert marked.set_index("player_id")["qualified"].to_dict() == {
        "c": True,
        "b": False,
        "a": True,
        "d": False,
    }


def test_pitching_careers_report_qualified_era() -> None:
    """
    Test career ERA from summed earned runs and innings with its flag.
    """
    record = pitching.PlayerCareerRecord(
        player_id="p1",
        name="Arm",
        debut_year=1950,
        seasons=pd.DataFrame({"year": [1950, 1951]}),
        totals={"ip_adj": 1800.0, "er_adj": 600.0},
    )
    short = pitching.PlayerCareerRecord(
        player_id="p2",
        name="Brief",
        debut_year=1951,
        seasons=pd.DataFrame({"year": [1951]}),
        totals={"ip_adj": 90.0, "er_adj": 40.0},
    )
    careers = pitching.pitching_careers([record, short], 1500.0)
    assert careers.loc[0, "era_adj"] == pytest.approx(3.0)
    assert careers["era_qualified"].tolist() == [True, False]


def test_adjust_pitching_is_identity_on_the_source_season(
    adjusted: pitching.AdjustmentResult,
) -> None:
    """
    Test that full-time seasons projected into their own year keep their values.
    """
    seasons = adjusted.seasons
    same = seasons[seasons["qualified"] & (seasons["year"] == seasons["target_year"])]
    assert not same.empty
    assert np.allclose(same["era_fh"], same["era_raw"], rtol=1e-6)
    assert np.allclose(same["so_rate_fh"], same["so_rate_obs"], rtol=1e-6)
    assert np.allclose(same["ip_adj"], same["IP"])
    assert not same["rotation_clamped"].any()


def test_adjust_pitching_full_time_counts(adjusted: pitching.AdjustmentResult) -> None:
    """
    Test that each season qualifies the default rotation times its teams.
    """
    qualified = adjusted.seasons.groupby("year")["qualified"].sum()
    assert (qualified == 5 * len(TEAMS)).all()
    assert set(adjusted.contexts) == set(pitching.PITCHING_STATS)


def test_adjust_pitching_careers(adjusted: pitching.AdjustmentResult) -> None:
    """
    Test career counting statistics rebuilt from the adjusted rates.
    """
    careers = adjusted.careers
    assert not careers.empty
    assert careers["player_id"].is_unique
    kept = adjusted.seasons[adjusted.seasons["kept"]]
    assert np.allclose(
        kept["er_adj"], kept["era_adj"] * kept["ip_adj"] / 9.0, equal_nan=True
    )
    assert np.allclose(
        kept["so_adj"], kept["so_rate_adj"] * kept["ip_adj"], equal_nan=True
    )
    innings = careers["ip_adj"] > 0
    assert np.allclose(
        careers.loc[innings, "era_adj"],
        9.0 * careers.loc[innings, "er_adj"] / careers.loc[innings, "ip_adj"],
    )


def test_adjust_pitching_rotation_shift_moves_starters_only(
    staff: pd.DataFrame,
) -> None:
    """
    Test that a larger target rotation lifts starters and leaves relievers alone.
    """
    years = sorted(staff["year"].unique())
    logs = gamelog_frame({year: 4 if year == FIRST_YEAR + 1 else 5 for year in years})
    config = RunConfig(start_year=FIRST_YEAR, smoothing=False)
    plain = pitching.adjust_pitching(staff, POPULATION, config, gamelogs=logs)
    unshifted = pitching.adjust_pitching(
        staff,
        POPULATION,
        RunConfig(start_year=FIRST_YEAR, smoothing=False, rotation_adjustment=False),
        gamelogs=logs,
    )
    moved = plain.seasons["year"] == FIRST_YEAR + 1
    moved &= plain.seasons["target_year"] != FIRST_YEAR + 1
    moved &= plain.seasons["so_rate_talent"].notna()
    starters = moved & (plain.seasons["GS"] > 0)
    relievers = moved & (plain.seasons["GS"] == 0)
    assert starters.any()
    shifted = plain.seasons.loc[starters, "so_rate_talent"]
    base = unshifted.seasons.loc[starters, "so_rate_talent"]
    assert (shifted > base).all()
    first = shifted.index[0]
    target_year = int(plain.seasons.loc[first, "target_year"])
    expected, _ = pitching.rotation_shift(
        pitching.RotationProfile(FIRST_YEAR + 1, 4.0, len(TEAMS)),
        pitching.RotationProfile(target_year, 5.0, len(TEAMS)),
        plain.contexts["so_rate"][target_year].assignment.talents,
    )
    assert shifted[first] - base[first] == pytest.approx(expected, rel=1e-9)
    assert np.allclose(
        plain.seasons.loc[relievers, "so_rate_talent"],
        unshifted.seasons.loc[relievers, "so_rate_talent"],
    )
