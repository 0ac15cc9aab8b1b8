"""
Talent transform module for full_house.

Extracts latent talent scores from one season's observed values and projects
talent scores into another season. A season with n qualified players drawn
from an eligible population of N pairs its j-th best observation with the
(N - n + j)-th order statistic of N talent draws.

Author: Ron Webb
Since: 1.0.0
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Protocol, Sequence

import numpy as np

from .distributions import (
    Probability,
    TalentLaw,
    beta_cdf,
    beta_quantile,
    fit_season_normal,
    order_stat_cdf_array,
    order_stat_quantile_array,
)
from .errors import DomainError
from .tail_ecdf import build_cdf
from .util import setup_logger

logger = setup_logger(__name__)

_TINY = np.finfo(float).tiny


class SeasonModel(Protocol):
    """What a season distribution model offers: a CDF pair and its inverse."""

    def cdf(self, t: Any) -> Probability:
        """CDF with complement."""

    def inverse_prob(self, prob: Probability) -> Any:
        """Quantile of a probability pair."""


@dataclass(frozen=True)
class SeasonContext:
    """One season: its population, qualified count and distribution model."""

    year: int
    population: int
    size: int
    model: SeasonModel
    talent_law: TalentLaw
    sorted_values: np.ndarray

    def __post_init__(self) -> None:
        if self.size < 1 or self.population < self.size:
            raise DomainError(
                f"Season {self.year} needs N >= n >= 1, "
                f"got N={self.population}, n={self.size}"
            )


@dataclass(frozen=True)
class TalentAssignment:
    """Players, their values and talents, in ascending value order."""

    ids: tuple[Any, ...]
    values: np.ndarray
    talents: np.ndarray

    def as_dict(self) -> dict[Any, float]:
        """Talent by player id."""
        return dict(zip(self.ids, (float(t) for t in self.talents)))


@dataclass(frozen=True)
class ModeledSeason:
    """A season context with the talents extracted from it."""

    context: SeasonContext
    assignment: TalentAssignment

    @property
    def year(self) -> int:
        """Calendar year."""
        return self.context.year


@dataclass(frozen=True)
class Projection:
    """Values projected into a target season."""

    values: np.ndarray
    ranks: np.ndarray
    sub_replacement: np.ndarray


@dataclass(frozen=True)
class CareerSeason:
    """One season of a career placed on an era-adjusted trajectory."""

    index: int
    source_year: int
    target_year: int
    talent: float
    value: float
    sub_replacement: bool


@dataclass(frozen=True)
class CareerAdjustment:
    """A career projected onto a trajectory."""

    seasons: list[CareerSeason] = field(default_factory=list)
    truncated: bool = False


def _strictly_increasing(talents: np.ndarray) -> np.ndarray:
    fixed = np.array(talents, dtype=float)
    if np.all(np.diff(fixed) > 0):
        return fixed
    for i in range(1, fixed.size):
        if fixed[i] <= fixed[i - 1]:
            fixed[i] = np.nextafter(fixed[i - 1], np.inf)
    return fixed


def _talents_at_ranks(
    context: SeasonContext, prob: Probability, ranks: np.ndarray
) -> np.ndarray:
    n, population = context.size, context.population
    within = beta_cdf(prob, ranks, n + 1 - ranks)
    within = Probability(
        np.maximum(within.value, _TINY), np.maximum(within.complement, _TINY)
    )
    return np.atleast_1d(
        order_stat_quantile_array(
            context.talent_law, population - n + ranks, population, within
        )
    )


def extract_talents(
    season: SeasonContext,
    values: Sequence[float],
    ids: Sequence[Any] | None = None,
) -> TalentAssignment:
    """
    Talent scores of a season's qualified players.

    For the j-th smallest value Y: p1 = F(Y), p2 = I_p1(j, n + 1 - j) and the
    talent is the p2 quantile of the (N - n + j)-th of N talent draws.

    Args:
        season: The season context.
        values: The qualified players' values.
        ids: Player ids aligned with ``values``; defaults to positions.
    Returns:
        The talents in ascending value order.
    Raises:
        DomainError: If the number of values differs from the season size.
    """
    observed = np.asarray(values, dtype=float)
    if observed.size != season.size:
        raise DomainError(
            f"Season {season.year} has n={season.size} but {observed.size} values"
        )
    if ids is None:
        ids = range(observed.size)
    ids = list(ids)
    order = np.argsort(observed, kind="stable")
    ordered = observed[order]
    ranks = np.arange(1, season.size + 1, dtype=float)
    talents = _talents_at_ranks(season, season.model.cdf(ordered), ranks)
    return TalentAssignment(
        ids=tuple(ids[i] for i in order),
        values=ordered,
        talents=_strictly_increasing(talents),
    )


def build_season(
    year: int,
    values: Sequence[float],
    population: float,
    talent_law: TalentLaw,
    parametric: bool = False,
    ids: Sequence[Any] | None = None,
    sd_ddof: int = 1,
) -> ModeledSeason:
    """
    Fit the season model and extract every qualified player's talent.

    Args:
        year: Calendar year.
        values: The qualified players' values.
        population: Eligible population in persons.
        talent_law: The talent law.
        parametric: Use a normal model instead of the interpolated CDF.
        ids: Player ids aligned with ``values``.
        sd_ddof: Delta degrees of freedom of the normal fit.
    Returns:
        The modeled season.
    """
    observed = np.asarray(values, dtype=float)
    if parametric:
        model: SeasonModel = fit_season_normal(observed, ddof=sd_ddof)
    else:
        model = build_cdf(observed)
    context = SeasonContext(
        year=int(year),
        population=int(round(population)),
        size=int(observed.size),
        model=model,
        talent_law=talent_law,
        sorted_values=np.sort(observed),
    )
    assignment = extract_talents(context, observed, ids)
    logger.debug(
        "Season %d: n=%d, N=%d, %s model",
        context.year,
        context.size,
        context.population,
        "normal" if parametric else "interpolated",
    )
    return ModeledSeason(context, assignment)


def talents_of_values(season: ModeledSeason, values: Sequence[float]) -> np.ndarray:
    """
    Talents of arbitrary values, ranked by insertion among the season's values.

    A value gets rank 1 + #{Y < v}, kept within [1, n]. Used for players
    below the qualification cutoff and for reference values.
    """
    context = season.context
    points = np.atleast_1d(np.asarray(values, dtype=float))
    ranks = np.searchsorted(context.sorted_values, points, side="left") + 1.0
    ranks = np.clip(ranks, 1, context.size)
    prob = context.model.cdf(points)
    return _talents_at_ranks(
        context,
        Probability(np.atleast_1d(prob.value), np.atleast_1d(prob.complement)),
        ranks,
    )


def talent_of_value(season: ModeledSeason, value: float) -> float:
    """Scalar form of ``talents_of_values``."""
    return float(talents_of_values(season, [value])[0])


def project_talents(talents: Sequence[float], target: ModeledSeason) -> Projection:
    """
    Values that talents would produce in the target season.

    A talent takes rank l = 1 + #{target talents < t}, capped at n, so a
    talent equal to a target player's talent takes that player's place. The
    value is the target model's quantile at the Beta(l, n + 1 - l) quantile
    of P(X_(N - n + l) <= t).
    """
    context = target.context
    n, population = context.size, context.population
    points = np.atleast_1d(np.asarray(talents, dtype=float))
    incumbents = target.assignment.talents
    ranks = np.minimum(
        np.searchsorted(incumbents, points, side="left") + 1.0, float(n)
    )
    prob = order_stat_cdf_array(
        context.talent_law, population - n + ranks, population, points
    )
    uniform = beta_quantile(prob, ranks, n + 1 - ranks)
    values = np.atleast_1d(np.asarray(context.model.inverse_prob(uniform), dtype=float))
    sub_replacement = points < incumbents[0]
    if np.any(sub_replacement):
        logger.debug(
            "%d talent(s) below the %d season's weakest qualified player",
            int(np.count_nonzero(sub_replacement)),
            context.year,
        )
    return Projection(
        values=values, ranks=ranks.astype(int), sub_replacement=sub_replacement
    )


def project(talent: float, target: ModeledSeason) -> float:
    """Scalar form of ``project_talents``."""
    return float(project_talents([talent], target).values[0])


def target_year(start_year: int, index: int) -> int:
    """Calendar year of the index-th (1-based) career season on a trajectory."""
    return start_year + index - 1


def era_adjust_career(
    seasons: Sequence[tuple[int, float]],
    start_year: int,
    contexts: Mapping[int, ModeledSeason],
    talent_adjust: Callable[[int, int, float], float] | None = None,
) -> CareerAdjustment:
    """
    Project a career onto the trajectory that begins in ``start_year``.

    The t-th season played is projected into ``start_year + t - 1``. Seasons
    whose target year has no context are dropped and the result is flagged
    truncated.

    Args:
        seasons: (source year, talent) pairs.
        start_year: First year of the trajectory.
        contexts: Modeled seasons by year.
        talent_adjust: Optional hook ``(source_year, target_year, talent)``
            returning the talent to project.
    Returns:
        The career adjustment.
    """
    adjusted: list[CareerSeason] = []
    truncated = False
    for index, (source_year, talent) in enumerate(sorted(seasons), start=1):
        year = target_year(start_year, index)
        if year not in contexts:
            truncated = True
            continue
        if talent_adjust is not None:
            talent = talent_adjust(source_year, year, talent)
        projection = project_talents([talent], contexts[year])
        adjusted.append(
            CareerSeason(
                index=index,
                source_year=int(source_year),
                target_year=year,
                talent=float(talent),
                value=float(projection.values[0]),
                sub_replacement=bool(projection.sub_replacement[0]),
            )
        )
    if truncated:
        logger.warning(
            "Career starting %d truncated: %d of %d seasons have no target season",
            start_year,
            len(seasons) - len(adjusted),
            len(seasons),
        )
    return CareerAdjustment(seasons=adjusted, truncated=truncated)
