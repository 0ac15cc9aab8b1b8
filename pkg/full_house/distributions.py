"""
Distribution module for full_house.

Talent laws, order-statistic laws and the per-season normal fit. Probabilities
near 1 are carried together with their complements so that top-of-population
ranks (within 1e-7 of 1 for populations of tens of millions) never lose
precision to a ``1 - p`` subtraction.

Author: Ron Webb
Since: 1.0.0
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Sequence

import numpy as np
from scipy import stats
from scipy.special import betainc, betaincc, betaincinv

from .errors import (
    DegenerateFitError,
    DomainError,
    InsufficientDataError,
    NumericalError,
)
from .util import setup_logger

logger = setup_logger(__name__)

PARETO_PRINCIPLE_ALPHA = math.log(5) / math.log(4)
CDF_CLAMP = 1e-12
TALENT_LAW_KINDS = ("pareto", "normal", "folded-normal", "uniform")


@dataclass(frozen=True)
class Probability:
    """A probability (scalar or array) paired with its complement."""

    value: Any
    complement: Any

    @classmethod
    def of(cls, value: Any) -> "Probability":
        """Build from a plain probability; only safe when ``value`` is not near 1."""
        value = np.asarray(value, dtype=float)
        return cls(_unwrap(value), _unwrap(1.0 - value))

    @classmethod
    def of_complement(cls, complement: Any) -> "Probability":
        """Build from the upper-tail probability."""
        complement = np.asarray(complement, dtype=float)
        return cls(_unwrap(1.0 - complement), _unwrap(complement))


def _unwrap(array: np.ndarray) -> Any:
    return float(array) if np.ndim(array) == 0 else array


@dataclass(frozen=True)
class TalentLaw:
    """
    The latent talent distribution F_X.

    ``alpha`` is only used by the Pareto law (support [1, inf)); ``loc`` and
    ``scale`` describe the normal and folded-normal laws.
    """

    kind: str
    alpha: float = PARETO_PRINCIPLE_ALPHA
    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in TALENT_LAW_KINDS:
            raise DomainError(f"Unknown talent law: {self.kind}")
        if self.kind == "pareto" and not self.alpha > 0:
            raise DomainError(f"Pareto alpha must be positive, got {self.alpha}")
        if not self.scale > 0:
            raise DomainError(f"Scale must be positive, got {self.scale}")

    @cached_property
    def frozen(self) -> Any:
        """The scipy frozen distribution backing this law."""
        if self.kind == "pareto":
            return stats.pareto(b=self.alpha)
        if self.kind == "normal":
            return stats.norm(loc=self.loc, scale=self.scale)
        if self.kind == "folded-normal":
            if self.loc == 0:
                return stats.halfnorm(scale=self.scale)
            return stats.foldnorm(c=abs(self.loc) / self.scale, scale=self.scale)
        return stats.uniform(loc=0.0, scale=1.0)

    @property
    def label(self) -> str:
        """Spec string that parses back to this law."""
        if self.kind == "pareto":
            return f"pareto:{self.alpha:.6g}"
        return self.kind

    def cdf(self, x: Any) -> Any:
        """Lower-tail probability."""
        return _unwrap(np.asarray(self.frozen.cdf(x), dtype=float))

    def sf(self, x: Any) -> Any:
        """Upper-tail probability, accurate where the cdf is near 1."""
        return _unwrap(np.asarray(self.frozen.sf(x), dtype=float))

    def ppf(self, q: Any) -> Any:
        """Quantile from a lower-tail probability."""
        return _unwrap(np.asarray(self.frozen.ppf(q), dtype=float))

    def isf(self, q: Any) -> Any:
        """Quantile from an upper-tail probability."""
        return _unwrap(np.asarray(self.frozen.isf(q), dtype=float))

    def cdf_pair(self, x: Any) -> Probability:
        """Probability of ``X <= x`` with its complement."""
        return Probability(self.cdf(x), self.sf(x))

    def quantile(self, prob: Probability) -> Any:
        """Quantile of a probability pair, using whichever side is small."""
        value = np.asarray(prob.value, dtype=float)
        complement = np.asarray(prob.complement, dtype=float)
        result = np.where(
            value <= 0.5,
            self.frozen.ppf(np.minimum(value, 0.5)),
            self.frozen.isf(np.minimum(complement, 0.5)),
        )
        return _unwrap(np.asarray(result, dtype=float))

    def rvs(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``size`` independent talents."""
        return np.asarray(self.frozen.rvs(size=size, random_state=rng), dtype=float)


def parse_talent_law(spec: str) -> TalentLaw:
    """
    Parse a talent law spec string.

    Accepted forms are ``pareto`` (alpha = log 5 / log 4), ``pareto:<alpha>``,
    ``normal``, ``folded-normal`` and ``uniform``.

    Args:
        spec: The law string, such as ``pareto:3``.
    Returns:
        The talent law.
    Raises:
        DomainError: If the string is not recognised.
    """
    text = spec.strip().lower()
    kind, _, argument = text.partition(":")
    if kind == "pareto":
        if not argument:
            return TalentLaw("pareto")
        try:
            alpha = float(argument)
        except ValueError as exc:
            raise DomainError(f"Invalid Pareto alpha in '{spec}'") from exc
        return TalentLaw("pareto", alpha=alpha)
    if argument:
        raise DomainError(f"Talent law '{kind}' takes no parameter: '{spec}'")
    if kind in TALENT_LAW_KINDS:
        return TalentLaw(kind)
    raise DomainError(f"Unknown talent law: '{spec}'")


def pareto_top_share(alpha: float, top: float = 0.2) -> float:
    """
    Share of the total Pareto mass held by the top ``top`` fraction.

    For alpha = log 5 / log 4 the top 20% hold 80% of the mass.
    """
    if not alpha > 1:
        raise DomainError("The Pareto mean is infinite for alpha <= 1")
    return top ** (1.0 - 1.0 / alpha)


def beta_cdf(prob: Probability, a: Any, b: Any) -> Probability:
    """
    Regularised incomplete beta I_x(a, b) with its complement.

    The side of the input closer to 0 drives the evaluation, so neither
    output is formed by subtraction.
    """
    value = np.asarray(prob.value, dtype=float)
    complement = np.asarray(prob.complement, dtype=float)
    low = value <= 0.5
    lower = np.where(low, betainc(a, b, value), betaincc(b, a, complement))
    upper = np.where(low, betaincc(a, b, value), betainc(b, a, complement))
    return Probability(_unwrap(lower), _unwrap(upper))


def beta_quantile(prob: Probability, a: Any, b: Any) -> Probability:
    """
    Inverse of ``beta_cdf``: u with I_u(a, b) = p, together with 1 - u.

    The complement is inverted through the mirrored law Beta(b, a).
    """
    value = np.asarray(prob.value, dtype=float)
    complement = np.asarray(prob.complement, dtype=float)
    lower = betaincinv(a, b, value)
    upper = betaincinv(b, a, complement)
    return Probability(_unwrap(lower), _unwrap(upper))


def _check_ranks(rank: Any, size: Any) -> None:
    ranks = np.asarray(rank)
    sizes = np.asarray(size)
    if np.any(ranks < 1) or np.any(ranks > sizes):
        raise DomainError(f"Invalid order statistic: rank {rank} of {size}")


def order_stat_cdf_array(
    parent: TalentLaw, rank: Any, size: Any, x: Any
) -> Probability:
    """Vectorised P(X_(rank:size) <= x) with complement."""
    _check_ranks(rank, size)
    rank = np.asarray(rank, dtype=float)
    size = np.asarray(size, dtype=float)
    return beta_cdf(parent.cdf_pair(x), rank, size + 1.0 - rank)


def order_stat_quantile_array(
    parent: TalentLaw, rank: Any, size: Any, prob: Probability
) -> Any:
    """
    Vectorised quantile of X_(rank:size).

    Raises:
        NumericalError: If any inversion is not finite.
    """
    _check_ranks(rank, size)
    rank_f = np.asarray(rank, dtype=float)
    size_f = np.asarray(size, dtype=float)
    uniform = beta_quantile(prob, rank_f, size_f + 1.0 - rank_f)
    result = np.asarray(parent.quantile(uniform), dtype=float)
    if not np.all(np.isfinite(result)):
        ranks, sizes, values, complements, results = (
            np.ravel(array)
            for array in np.broadcast_arrays(
                rank_f, size_f, prob.value, prob.complement, result
            )
        )
        first = int(np.flatnonzero(~np.isfinite(results))[0])
        raise NumericalError(
            f"Order statistic inversion failed for law {parent.label}: "
            f"rank {ranks[first]:.0f} of {sizes[first]:.0f}, "
            f"p={values[first]!r}, 1-p={complements[first]!r}, "
            f"result={results[first]!r}"
        )
    return _unwrap(result)


@dataclass(frozen=True)
class OrderStatLaw:
    """Law of the ``rank``-th smallest of ``size`` iid draws from ``parent``."""

    rank: int
    size: int
    parent: TalentLaw = field(default_factory=lambda: TalentLaw("uniform"))

    def __post_init__(self) -> None:
        if self.rank < 1 or self.size < self.rank:
            raise DomainError(
                f"Invalid order statistic: rank {self.rank} of {self.size}"
            )

    def cdf(self, x: float) -> Probability:
        """P(X_(r) <= x) with complement."""
        return order_stat_cdf_array(self.parent, self.rank, self.size, x)

    def quantile(self, prob: float | Probability) -> float:
        """Inverse of ``cdf``."""
        if not isinstance(prob, Probability):
            prob = Probability.of(prob)
        return float(order_stat_quantile_array(self.parent, self.rank, self.size, prob))


def talent_quantile(law: TalentLaw, q: float) -> float:
    """
    Quantile F_X^-1(q) of the talent law.

    Raises:
        DomainError: If q is outside [0, 1).
    """
    if not 0.0 <= q < 1.0:
        raise DomainError(f"Talent quantile needs 0 <= q < 1, got {q}")
    return float(law.ppf(q))


def order_stat_cdf(law: OrderStatLaw, x: float) -> Probability:
    """P(X_(r) <= x) and its complement."""
    return law.cdf(x)


def order_stat_quantile(law: OrderStatLaw, p: float | Probability) -> float:
    """
    Quantile of an order-statistic law.

    Raises:
        DomainError: If p is outside (0, 1).
        NumericalError: If the inversion does not produce a finite value.
    """
    value = p.value if isinstance(p, Probability) else p
    complement = p.complement if isinstance(p, Probability) else 1.0 - p
    if not (0.0 < value < 1.0 and complement > 0.0):
        raise DomainError(f"Order statistic quantile needs 0 < p < 1, got {value}")
    return law.quantile(p)


@dataclass(frozen=True)
class SeasonParametricFit:
    """Normal model of one season's statistic."""

    mean: float
    sd: float
    n: int
    normality_p: float | None = None

    def cdf(self, t: Any) -> Probability:
        """Normal CDF pair clamped to [1e-12, 1 - 1e-12]."""
        z = (np.asarray(t, dtype=float) - self.mean) / self.sd
        lower = stats.norm.cdf(z)
        upper = stats.norm.sf(z)
        clamped = (lower < CDF_CLAMP) | (upper < CDF_CLAMP)
        if np.any(clamped):
            logger.warning(
                "Clamped %d normal CDF value(s) to [%g, 1 - %g]",
                int(np.count_nonzero(clamped)),
                CDF_CLAMP,
                CDF_CLAMP,
            )
            lower = np.clip(lower, CDF_CLAMP, 1.0 - CDF_CLAMP)
            upper = np.clip(upper, CDF_CLAMP, 1.0 - CDF_CLAMP)
        return Probability(_unwrap(lower), _unwrap(upper))

    def inverse_prob(self, prob: Probability) -> Any:
        """Statistic value at a probability pair."""
        value = np.asarray(prob.value, dtype=float)
        complement = np.asarray(prob.complement, dtype=float)
        z = np.where(
            value <= 0.5,
            stats.norm.ppf(np.clip(value, CDF_CLAMP, 0.5)),
            stats.norm.isf(np.clip(complement, CDF_CLAMP, 0.5)),
        )
        return _unwrap(self.mean + self.sd * z)

    def inverse(self, p: Any) -> Any:
        """Statistic value at a plain probability."""
        return self.inverse_prob(Probability.of(p))


def fit_season_normal(values: Sequence[float], ddof: int = 1) -> SeasonParametricFit:
    """
    Fit a normal model to one season's values.

    Args:
        values: The qualified players' values.
        ddof: Delta degrees of freedom for the standard deviation.
    Returns:
        The fit, with a Shapiro-Wilk p-value when 3 <= n <= 5000.
    Raises:
        InsufficientDataError: If fewer than 2 values are given.
        DegenerateFitError: If all values are identical.
    """
    data = np.asarray(values, dtype=float)
    if data.size < 2:
        raise InsufficientDataError("A normal fit needs at least 2 values")
    if np.ptp(data) == 0:
        raise DegenerateFitError(
            f"Cannot fit a normal model to {data.size} identical values"
        )
    normality_p = None
    if 3 <= data.size <= 5000:
        normality_p = float(stats.shapiro(data).pvalue)
    return SeasonParametricFit(
        mean=float(np.mean(data)),
        sd=float(np.std(data, ddof=ddof)),
        n=int(data.size),
        normality_p=normality_p,
    )
