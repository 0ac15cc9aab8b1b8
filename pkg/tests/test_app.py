"""
Unit tests for app module in full_house.

Author: Ron Webb
Since: 1.0.0
"""

from unittest.mock import patch

import pytest

import full_house.app as app
from full_house.errors import NumericalError
from tests.synthetic_league import batting_frame


def test_build_parser_commands() -> None:
    """
    Test that every command parses with its defaults.
    """
    parser = app.build_parser()
    args = parser.parse_args(["rank", "batting", "--batting", "b.csv", "--peak"])
    assert args.command == "rank"
    assert args.kind == "batting"
    assert args.stat == "bwar_adj"
    assert args.peak
    args = parser.parse_args(
        ["replacement-curve", "pitching", "--reference-year", "1980"]
    )
    assert args.stat == "bwar_pg"
    assert args.value == 0.0
    args = parser.parse_args(["sensitivity", "batting", "--sweep", "start-year"])
    assert args.sweep == "start-year"
    with pytest.raises(SystemExit):
        parser.parse_args(["adjust", "fielding"])


def test_run_overrides_leave_unset_options_out() -> None:
    """
    Test that only given options become overrides.
    """
    args = app.build_parser().parse_args(
        ["adjust", "batting", "--start-year", "1946", "--no-smoothing"]
    )
    overrides = app._run_overrides(args)  # pylint: disable=protected-access
    assert overrides["start_year"] == 1946
    assert overrides["smoothing"] is False
    assert overrides["talent_law"] is None
    assert overrides["top"] is None


def test_main_chance_prints_odds(capsys: pytest.CaptureFixture[str]) -> None:
    """
    Test the chance command output and success code.
    """
    assert app.main(["chance", "6", "10", "0.190"]) == app.EXIT_OK
    assert capsys.readouterr().out.strip() == "1 in 205"


def test_main_ingest_prints_summaries(
    tmp_path, capsys: pytest.CaptureFixture[str]
) -> None:
    """
    Test that ingest describes each validated file.
    """
    path = tmp_path / "batting.csv"
    batting_frame(players=30).to_csv(path, index=False)
    assert app.main(["ingest", "--batting", str(path)]) == app.EXIT_OK
    assert capsys.readouterr().out.startswith("batting: ")


def test_main_missing_file_is_invalid(
    tmp_path, capsys: pytest.CaptureFixture[str]
) -> None:
    """
    Test that an absent input file exits with the invalid-input code.
    """
    code = app.main(["ingest", "--batting", str(tmp_path / "absent.csv")])
    assert code == app.EXIT_INVALID
    assert capsys.readouterr().err.startswith("Error [E_FILE]: ")


def test_main_reports_domain_errors(capsys: pytest.CaptureFixture[str]) -> None:
    """
    Test that a missing kind file is reported with its error code.
    """
    assert app.main(["adjust", "batting"]) == 2
    assert capsys.readouterr().err.startswith("Error [E_DOMAIN]: ")


def test_main_maps_numerical_and_unexpected_errors(
    capsys: pytest.CaptureFixture[str],
) -> None:
    """
    Test exit code 3 for numerical failures and 1 for anything else.
    """
    with patch.object(app, "cmd_chance", side_effect=NumericalError("diverged")):
        assert app.main(["chance", "1", "2", "0.5"]) == 3
    assert "diverged" in capsys.readouterr().err
    with patch.object(app, "cmd_chance", side_effect=RuntimeError("boom")):
        assert app.main(["chance", "1", "2", "0.5"]) == app.EXIT_FAILURE
    assert capsys.readouterr().err.startswith("Error [E_UNEXPECTED]: boom")
