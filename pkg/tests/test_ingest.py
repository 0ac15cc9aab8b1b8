"""
Unit tests for ingest module in full_house.

Author: Ron Webb
Since: 1.0.0
"""

from pathlib import Path

import pandas as pd
import pytest

import full_house.ingest as ingest
from full_house.errors import ValidationError
from tests.synthetic_league import batting_frame, gamelog_frame, pitching_frame

BATTING_HEADER = "player_id,name,year,team,bats,G,PA,AB,H,HR,BB,HBP,SH,SF,bwar,fwar"
BATTING_ROW = "aaron01,Hank Aaron,1957,ML1,R,151,675,615,198,44,57,0,0,3,7.6,7.3"


def _write(path: Path, *lines: str) -> str:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def test_load_batting_round_trips_synthetic_league(tmp_path: Path) -> None:
    """
    Test that a written synthetic league loads back with typed columns.
    """
    frame = batting_frame(players=60)
    path = tmp_path / "batting.csv"
    frame.to_csv(path, index=False)
    loaded = ingest.load_batting(str(path))
    assert len(loaded) == len(frame)
    assert loaded["year"].dtype.kind == "i"
    assert loaded["player_id"].map(type).eq(str).all()
    summary = ingest.summarize("batting", loaded)
    assert summary.rows == len(frame)
    assert summary.players == frame["player_id"].nunique()
    assert summary.describe().startswith("batting: ")


def test_validate_batting_reports_line_numbers(tmp_path: Path) -> None:
    """
    Test that AB > PA is reported with the file line of the bad row.
    """
    bad = "ruth01,Babe Ruth,1927,NYA,L,151,500,540,192,60,137,0,14,0,12.4,12.0"
    path = _write(tmp_path / "batting.csv", BATTING_HEADER, BATTING_ROW, bad)
    with pytest.raises(ValidationError) as error:
        ingest.load_batting(path)
    assert error.value.code == "E_PA_LT_AB"
    assert error.value.rows == (3,)


@pytest.mark.parametrize(
    "row, code",
    [
        ("x,Name,1950,BOS,R,10,50,40,45,1,5,1,1,1,0.1,0.1", "E_AB_LT_H"),
        ("x,Name,1950,BOS,R,10,50,40,10,11,5,1,1,1,0.1,0.1", "E_H_LT_HR"),
        ("x,Name,1950,BOS,R,10,50,40,10,1,-5,1,1,1,0.1,0.1", "E_NEGATIVE_COUNT"),
        ("x,Name,1950,BOS,R,ten,50,40,10,1,5,1,1,1,0.1,0.1", "E_PARSE"),
    ],
)
def test_validate_batting_codes(tmp_path: Path, row: str, code: str) -> None:
    """
    Test the count consistency, sign and parse checks.
    """
    path = _write(tmp_path / "batting.csv", BATTING_HEADER, row)
    with pytest.raises(ValidationError) as error:
        ingest.load_batting(path)
    assert error.value.code == code


def test_validate_batting_missing_columns() -> None:
    """
    Test that a missing column is a schema error naming it.
    """
    frame = batting_frame(players=10).drop(columns=["SF"])
    with pytest.raises(ValidationError) as error:
        ingest.validate_batting(frame)
    assert error.value.code == "E_SCHEMA"
    assert "SF" in str(error.value)


def test_load_batting_missing_file(tmp_path: Path) -> None:
    """
    Test that an absent input file raises FileNotFoundError.
    """
    with pytest.raises(FileNotFoundError):
        ingest.load_batting(str(tmp_path / "absent.csv"))


def test_validate_pitching_rejects_starts_without_innings() -> None:
    """
    Test that a start with no innings is an E_IP error.
    """
    frame = pitching_frame(players=20)
    frame.loc[frame.index[2], ["IP", "GS"]] = [0.0, 3]
    with pytest.raises(ValidationError) as error:
        ingest.validate_pitching(frame)
    assert error.value.code == "E_IP"
    assert error.value.rows == (4,)


def test_validate_park_factors_allows_blanks(tmp_path: Path) -> None:
    """
    Test that blank indices stay missing and nonpositive ones are rejected.
    """
    header = "year,team,ba_index_lhb,ba_index_rhb,hr_index_lhb,hr_index_rhb"
    path = _write(tmp_path / "parks.csv", header, "1950,BOS,1.02,0.98,,1.1")
    parks = ingest.load_park_factors(path)
    assert pd.isna(parks.loc[0, "hr_index_lhb"])
    assert parks.loc[0, "ba_index_lhb"] == pytest.approx(1.02)
    bad = _write(tmp_path / "bad.csv", header, "1950,BOS,0,0.98,1.0,1.1")
    with pytest.raises(ValidationError) as error:
        ingest.load_park_factors(bad)
    assert error.value.code == "E_PARK_INDEX"
    assert ingest.load_park_factors(None) is None


def test_load_population(tmp_path: Path) -> None:
    """
    Test the built-in default, a custom table and its ordering check.
    """
    assert ingest.load_population(None).first_year == 1870
    path = _write(
        tmp_path / "population.csv",
        "year,population_millions",
        "1900,1.0",
        "1950,3.0",
    )
    series = ingest.load_population(path)
    assert series.last_year == 1950
    bad = _write(
        tmp_path / "bad.csv", "year,population_millions", "1950,1.0", "1940,3.0"
    )
    with pytest.raises(ValidationError) as error:
        ingest.load_population(bad)
    assert error.value.code == "E_POP_YEARS"
    assert error.value.rows == (3,)


def test_load_gamelogs_and_rotations(tmp_path: Path) -> None:
    """
    Test the optional rotation inputs and the rotation table check.
    """
    logs = tmp_path / "gamelogs.csv"
    gamelog_frame({1950: 4}, games=6).to_csv(logs, index=False)
    loaded = ingest.load_gamelogs(str(logs))
    assert len(loaded) == 8 * 6
    assert ingest.load_gamelogs(None) is None
    assert ingest.load_rotations(None) is None
    path = _write(tmp_path / "rotations.csv", "year,teams,rotation_size", "1950,8,0.5")
    with pytest.raises(ValidationError) as error:
        ingest.load_rotations(path)
    assert error.value.code == "E_ROTATION"
