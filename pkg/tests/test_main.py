"""
Unit tests for __main__.py in full_house.

Author: Ron Webb
Since: 1.0.0
"""

import runpy
from unittest.mock import patch

import pytest

import full_house.__main__


def test_main_module_exposes_main() -> None:
    """
    Test that the module entry point imports the application main function.
    """
    from full_house.app import main

    assert full_house.__main__.main is main
    assert callable(main)


def test_main_module_exits_with_main_result() -> None:
    """
    Test that running the package as a module exits with main's return code.
    """
    with patch("full_house.app.main", return_value=3):
        with pytest.raises(SystemExit) as exit_info:
            runpy.run_module("full_house", run_name="__main__")
    assert exit_info.value.code == 3
