"""
Monte Carlo validation module for full_house.

Synthetic leagues of different sizes and spreads are drawn from a common
talent law. Each method ranks the pooled player-seasons and is scored by how
many of the true top talents it recovers: the talent model under the true,
an improved and a deteriorated population estimate, within-league z-scores,
and the raw values.

Author: Ron Webb
Since: 1.0.0
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Mapping

import numpy as np
import pandas as pd

from .config import LeagueSpec, SimConfig
from .distributions import (
    Probability,
    SeasonParametricFit,
    TalentLaw,
    beta_quantile,
    order_stat_cdf_array,
    parse_talent_law,
)
from .errors import DomainError
from .talent import build_season
from .util import setup_logger

logger = setup_logger(__name__)

METHODS = ("full_house", "improved", "deteriorated", "zscore", "raw")
EARLY_LEAGUES = 2


@dataclass(frozen=True)
class SimResult:
    """Per-iteration recovered counts of every method for one generating law."""

    law: str
    config: SimConfig
    counts: pd.DataFrame
    early: pd.DataFrame

    def strictly_beats(
        self, method: str = "deteriorated", rival: str = "zscore"
    ) -> float:
        """Share of iterations where ``method`` recovers more than ``rival``."""
        return float((self.counts[method] > self.counts[rival]).mean())

    def beats_or_ties(
        self, method: str = "deteriorated", rival: str = "zscore"
    ) -> float:
        """Share of iterations where ``method`` recovers at least as many."""
        return float((self.counts[method] >= self.counts[rival]).mean())

    def summary(self) -> dict[str, Any]:
        """Comparison proportions, medians and early-league composition."""
        return {
            "law": self.law,
            "iterations": int(len(self.counts)),
            "strictly_beats": self.strictly_beats(),
            "beats_or_ties": self.beats_or_ties(),
            "median": {
                method: float(self.counts[method].median()) for method in METHODS
            },
            "early_league_mean": {
                method: float(self.early[method].mean()) for method in METHODS
            },
        }


def sample_top_talents(
    law: TalentLaw, population: int, size: int, rng: np.random.Generator
) -> np.ndarray:
    """
    The ``size`` largest of ``population`` iid talents, in descending order.

    Uses the exponential spacings of the uniform upper order statistics, so
    only ``size`` draws are made.

    Raises:
        DomainError: If size is not in [1, population].
    """
    if not 1 <= size <= population:
        raise DomainError(f"Need 1 <= n <= N, got n={size}, N={population}")
    spacings = rng.standard_exponential(size)
    log_upper = -np.cumsum(spacings / (population - np.arange(size)))
    prob = Probability(np.exp(log_upper), -np.expm1(log_upper))
    return np.atleast_1d(np.asarray(law.quantile(prob), dtype=float))


def generate_observations(
    talents: np.ndarray, law: TalentLaw, mean: float, sd: float, population: int
) -> np.ndarray:
    """
    Observed values of the top ``n`` talents of a league.

    The j-th smallest talent, the (N - n + j)-th of N draws, passes through
    its order-statistic CDF, the Beta(j, n + 1 - j) quantile and the
    Normal(mean, sd) quantile. Values come back aligned with ``talents``.
    """
    talents = np.asarray(talents, dtype=float)
    size = talents.size
    order = np.argsort(talents, kind="stable")
    ranks = np.arange(1, size + 1, dtype=float)
    prob = order_stat_cdf_array(
        law, population - size + ranks, population, talents[order]
    )
    uniform = beta_quantile(prob, ranks, size + 1 - ranks)
    values = np.empty(size)
    values[order] = SeasonParametricFit(mean, sd, size).inverse_prob(uniform)
    return values


def _league_talents(
    values: np.ndarray, population: int, law: TalentLaw, league: int
) -> np.ndarray:
    season = build_season(
        league, values, population, law, parametric=True, ids=range(values.size)
    )
    extracted = season.assignment.as_dict()
    return np.array([extracted[i] for i in range(values.size)])


def _recovered(scores: np.ndarray, truth: set[int], top: int) -> int:
    chosen = np.argsort(-scores, kind="stable")[:top]
    return len(truth.intersection(chosen.tolist()))


def _early(scores: np.ndarray, league_of: np.ndarray, top: int) -> int:
    chosen = np.argsort(-scores, kind="stable")[:top]
    return int(np.count_nonzero(league_of[chosen] < EARLY_LEAGUES))


def run_iteration(
    config: SimConfig, iteration: int
) -> tuple[dict[str, int], dict[str, int]]:
    """
    One Monte Carlo iteration on its own random stream.

    Returns:
        Recovered counts and early-league counts by method.
    """
    rng = np.random.default_rng(
        np.random.SeedSequence(config.seed, spawn_key=(iteration,))
    )
    n = config.players_per_league
    latent, league_of = [], []
    scores: dict[str, list[np.ndarray]] = {method: [] for method in METHODS}
    for index, league in enumerate(config.leagues):
        talents = sample_top_talents(config.true_law, league.population, n, rng)
        values = generate_observations(
            talents, config.true_law, league.mean, league.sd, league.population
        )
        latent.append(talents)
        league_of.append(np.full(n, index))
        for method, population in _estimates(league).items():
            scores[method].append(
                _league_talents(values, population, config.assumed_law, index)
            )
        scores["zscore"].append((values - values.mean()) / values.std(ddof=1))
        scores["raw"].append(values)

    pooled_latent = np.concatenate(latent)
    pooled_league = np.concatenate(league_of)
    truth = set(np.argsort(-pooled_latent, kind="stable")[: config.top].tolist())
    counts, early = {"iteration": iteration}, {"iteration": iteration}
    for method in METHODS:
        pooled = np.concatenate(scores[method])
        counts[method] = _recovered(pooled, truth, config.top)
        early[method] = _early(pooled, pooled_league, config.top)
    early["truth"] = _early(pooled_latent, pooled_league, config.top)
    return counts, early


def _estimates(league: LeagueSpec) -> dict[str, int]:
    return {
        "full_house": league.population,
        "improved": league.improved,
        "deteriorated": league.deteriorated,
    }


def run_simulation(config: SimConfig) -> SimResult:
    """
    Run every iteration of the validation study for ``config.true_law``.

    Iterations may run on several threads; each owns a random stream keyed by
    the master seed and its index, so results do not depend on scheduling.
    """
    logger.info(
        "Simulating %d iteration(s) with %s talents, assuming %s",
        config.iterations,
        config.true_law.label,
        config.assumed_law.label,
    )
    with ThreadPoolExecutor(max_workers=max(1, config.workers)) as executor:
        outcomes = list(
            executor.map(lambda i: run_iteration(config, i), range(config.iterations))
        )
    counts = pd.DataFrame([outcome[0] for outcome in outcomes])
    early = pd.DataFrame([outcome[1] for outcome in outcomes])
    result = SimResult(config.true_law.label, config, counts, early)
    logger.info(
        "%s: strictly beats %.3f, beats or ties %.3f",
        result.law,
        result.strictly_beats(),
        result.beats_or_ties(),
    )
    return result


def run_all_laws(config: SimConfig) -> dict[str, SimResult]:
    """One simulation per generating law in ``config.laws``."""
    results = {}
    for spec in config.laws:
        law = parse_talent_law(spec)
        results[spec] = run_simulation(replace(config, true_law=law))
    return results


def summary_table(results: Mapping[str, SimResult]) -> pd.DataFrame:
    """Strictly-beats and beats-or-ties rows with one column per law."""
    return pd.DataFrame(
        {
            spec: {
                "strictly_beats": result.strictly_beats(),
                "beats_or_ties": result.beats_or_ties(),
            }
            for spec, result in results.items()
        }
    ).loc[["strictly_beats", "beats_or_ties"]]
