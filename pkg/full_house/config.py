"""
Run configuration module for full_house.

Assembles the frozen ``RunConfig`` and ``SimConfig`` objects from the layered
ini files read by ``util.load_config`` and from command-line overrides.
Overrides whose value is None are ignored, so an absent flag never masks a
configured value.

Author: Ron Webb
Since: 1.0.0
"""

import configparser
from dataclasses import dataclass, fields, replace
from typing import Any, Mapping

from .distributions import TalentLaw, parse_talent_law
from .errors import DomainError
from .util import load_config

BATTING_AVERAGE_MODES = ("parametric", "nonparametric")
TRIM_STATS = ("bwar", "fwar")


@dataclass(frozen=True)
class LeagueSpec:
    """One synthetic league: true population, observation law and estimates."""

    population: int
    mean: float
    sd: float
    improved: int
    deteriorated: int


DEFAULT_LEAGUES = (
    LeagueSpec(1_000_000, 0.280, 0.0400, 500_000, 1_000_000),
    LeagueSpec(2_000_000, 0.275, 0.0375, 1_500_000, 1_000_000),
    LeagueSpec(4_000_000, 0.270, 0.0350, 3_330_000, 1_330_000),
    LeagueSpec(8_000_000, 0.265, 0.0325, 7_000_000, 2_000_000),
    LeagueSpec(16_000_000, 0.260, 0.0300, 14_400_000, 3_200_000),
)


@dataclass(frozen=True)
class RunConfig:
    """Everything the adjustment, ranking and sensitivity commands read."""

    talent_law: TalentLaw = TalentLaw("pareto")
    start_year: int = 1977
    batting_average_mode: str = "parametric"
    sd_ddof: int = 1
    smoothing: bool = True
    smoothing_lambda: float | None = None
    min_pa_screen: float = 75.0
    min_career_ab: float = 3000.0
    trailing_keep: int = 1
    trim_stat: str = "bwar"
    min_career_ip: float = 1500.0
    default_rotation: float = 5.0
    rotation_adjustment: bool = True
    pitching_trim_stat: str = "bwar"
    cutoff_year: int = 1950
    range_start: int = 1871
    range_end: int = 2005
    top: int = 25
    proportion: float | None = None
    seed: int = 2023
    workers: int = 1
    sweep_first: int = 1946
    sweep_last: int = 1995
    sweep_laws: tuple[str, ...] = ("normal", "folded-normal", "pareto:3", "pareto")

    def __post_init__(self) -> None:
        if self.batting_average_mode not in BATTING_AVERAGE_MODES:
            raise DomainError(
                f"Unknown batting average mode: {self.batting_average_mode}"
            )
        for stat in (self.trim_stat, self.pitching_trim_stat):
            if stat not in TRIM_STATS:
                raise DomainError(f"Trim statistic must be bwar or fwar, got {stat}")
        if self.top < 1:
            raise DomainError(f"Top must be at least 1, got {self.top}")
        if self.trailing_keep < 0:
            raise DomainError("trailing_keep must be nonnegative")
        if self.proportion is not None and not 0.0 < self.proportion < 1.0:
            raise DomainError(f"Proportion must lie in (0, 1), got {self.proportion}")
        if self.sweep_first > self.sweep_last:
            raise DomainError("Sensitivity sweep needs first year <= last year")

    def as_header(self) -> list[tuple[str, Any]]:
        """Effective settings as (key, value) pairs for output headers."""
        return _header(self)


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo validation settings."""

    leagues: tuple[LeagueSpec, ...] = DEFAULT_LEAGUES
    players_per_league: int = 300
    iterations: int = 200
    seed: int = 2023
    top: int = 25
    true_law: TalentLaw = TalentLaw("pareto")
    assumed_law: TalentLaw = TalentLaw("pareto")
    laws: tuple[str, ...] = ("pareto", "pareto:3", "normal", "folded-normal")
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.leagues:
            raise DomainError("Simulation needs at least one league")
        for league in self.leagues:
            if league.population < self.players_per_league:
                raise DomainError(
                    f"League population {league.population} is smaller than "
                    f"{self.players_per_league} players"
                )
            if min(league.improved, league.deteriorated) < self.players_per_league:
                raise DomainError("Population estimates must cover the players")
            if not league.sd > 0:
                raise DomainError(f"League sd must be positive, got {league.sd}")
        if self.iterations < 1:
            raise DomainError("Simulation needs at least one iteration")
        if not 1 <= self.top <= self.players_per_league * len(self.leagues):
            raise DomainError(f"Top {self.top} outside the simulated players")

    def as_header(self) -> list[tuple[str, Any]]:
        """Effective settings as (key, value) pairs for output headers."""
        return _header(self)


def _header(config: Any) -> list[tuple[str, Any]]:
    pairs = []
    for item in fields(config):
        value = getattr(config, item.name)
        if isinstance(value, TalentLaw):
            value = value.label
        elif isinstance(value, tuple) and value and isinstance(value[0], LeagueSpec):
            value = "; ".join(
                f"N={league.population} mean={league.mean} sd={league.sd} "
                f"improved={league.improved} deteriorated={league.deteriorated}"
                for league in value
            )
        elif isinstance(value, tuple):
            value = ", ".join(value)
        pairs.append((item.name, value))
    return pairs


def _optional_float(
    parser: configparser.ConfigParser, section: str, key: str
) -> float | None:
    text = parser.get(section, key, fallback="").strip()
    return float(text) if text else None


def _list(
    parser: configparser.ConfigParser,
    section: str,
    key: str,
    default: tuple[str, ...],
) -> tuple[str, ...]:
    text = parser.get(section, key, fallback="")
    items = tuple(item.strip() for item in text.split(",") if item.strip())
    return items or default


def _apply(config: Any, overrides: Mapping[str, Any] | None) -> Any:
    if not overrides:
        return config
    known = {item.name for item in fields(config)}
    present = {
        key: value
        for key, value in overrides.items()
        if value is not None and key in known
    }
    return replace(config, **present) if present else config


def run_config_from(
    parser: configparser.ConfigParser, overrides: Mapping[str, Any] | None = None
) -> RunConfig:
    """
    Build a RunConfig from parsed ini sections, then apply overrides.

    Args:
        parser: Merged configuration.
        overrides: Field values that take precedence; None values are skipped.
            A ``talent_law`` override may be a spec string.
    Returns:
        The run configuration.
    Raises:
        DomainError: If a value is out of range or a talent law is unknown.
    """
    base = RunConfig()
    try:
        config = RunConfig(
            talent_law=parse_talent_law(
                parser.get("model", "talent_dist", fallback="pareto")
            ),
            start_year=parser.getint("model", "start_year", fallback=base.start_year),
            batting_average_mode=parser.get(
                "model", "batting_average_mode", fallback=base.batting_average_mode
            ),
            sd_ddof=parser.getint("model", "sd_ddof", fallback=base.sd_ddof),
            smoothing=parser.getboolean("model", "smoothing", fallback=True),
            smoothing_lambda=_optional_float(parser, "model", "smoothing_lambda"),
            min_pa_screen=parser.getfloat(
                "batting", "min_pa_screen", fallback=base.min_pa_screen
            ),
            min_career_ab=parser.getfloat(
                "batting", "min_career_ab", fallback=base.min_career_ab
            ),
            trailing_keep=parser.getint(
                "batting", "trailing_keep", fallback=base.trailing_keep
            ),
            trim_stat=parser.get("batting", "trim_stat", fallback=base.trim_stat),
            min_career_ip=parser.getfloat(
                "pitching", "min_career_ip", fallback=base.min_career_ip
            ),
            default_rotation=parser.getfloat(
                "pitching", "default_rotation", fallback=base.default_rotation
            ),
            rotation_adjustment=parser.getboolean(
                "pitching", "rotation_adjustment", fallback=True
            ),
            pitching_trim_stat=parser.get(
                "pitching", "trim_stat", fallback=base.pitching_trim_stat
            ),
            cutoff_year=parser.getint(
                "ranking", "cutoff_year", fallback=base.cutoff_year
            ),
            range_start=parser.getint(
                "ranking", "range_start", fallback=base.range_start
            ),
            range_end=parser.getint("ranking", "range_end", fallback=base.range_end),
            top=parser.getint("ranking", "top", fallback=base.top),
            proportion=_optional_float(parser, "ranking", "proportion"),
            seed=parser.getint("simulation", "seed", fallback=base.seed),
            workers=parser.getint("simulation", "workers", fallback=base.workers),
            sweep_first=parser.getint(
                "sensitivity", "start_year_first", fallback=base.sweep_first
            ),
            sweep_last=parser.getint(
                "sensitivity", "start_year_last", fallback=base.sweep_last
            ),
            sweep_laws=_list(parser, "sensitivity", "laws", base.sweep_laws),
        )
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"Invalid configuration value: {exc}") from exc
    overrides = dict(overrides or {})
    if isinstance(overrides.get("talent_law"), str):
        overrides["talent_law"] = parse_talent_law(overrides["talent_law"])
    return _apply(config, overrides)


def sim_config_from(
    parser: configparser.ConfigParser, overrides: Mapping[str, Any] | None = None
) -> SimConfig:
    """
    Build a SimConfig from the ``[simulation]`` section, then apply overrides.

    ``true_law`` and ``assumed_law`` overrides may be spec strings.
    """
    base = SimConfig()
    try:
        config = SimConfig(
            players_per_league=parser.getint(
                "simulation", "players_per_league", fallback=base.players_per_league
            ),
            iterations=parser.getint(
                "simulation", "iterations", fallback=base.iterations
            ),
            seed=parser.getint("simulation", "seed", fallback=base.seed),
            top=parser.getint("simulation", "top", fallback=base.top),
            assumed_law=parse_talent_law(
                parser.get("simulation", "assumed_law", fallback="pareto")
            ),
            laws=_list(parser, "simulation", "laws", base.laws),
            workers=parser.getint("simulation", "workers", fallback=base.workers),
        )
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"Invalid simulation setting: {exc}") from exc
    overrides = dict(overrides or {})
    for key in ("true_law", "assumed_law"):
        if isinstance(overrides.get(key), str):
            overrides[key] = parse_talent_law(overrides[key])
    return _apply(config, overrides)


def load_run_config(
    config_path: str | None = None, overrides: Mapping[str, Any] | None = None
) -> RunConfig:
    """Layered ini files plus overrides, as a RunConfig."""
    return run_config_from(load_config(config_path), overrides)


def load_sim_config(
    config_path: str | None = None, overrides: Mapping[str, Any] | None = None
) -> SimConfig:
    """Layered ini files plus overrides, as a SimConfig."""
    return sim_config_from(load_config(config_path), overrides)
