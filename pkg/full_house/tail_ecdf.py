"""
Interpolated empirical CDF module for full_house.

The season distribution model used when no parametric family is assumed: a
piecewise-linear CDF through surrogate points placed midway between the order
statistics, with the support pushed out below the minimum by ``y_star`` and
above the maximum by ``y_star_star``. The upper extension is chosen by
extrapolating the upper tail of the sample.

Author: Ron Webb
Since: 1.0.0
"""

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy import optimize, stats
from scipy.special import expit, logit

from .distributions import Probability
from .errors import (
    DomainError,
    InsufficientDataError,
    InsufficientTailError,
    NumericalError,
    SingularEstimateError,
    TailFitError,
)
from .util import setup_logger

logger = setup_logger(__name__)

MIN_SAMPLES = 3
MIN_TAIL_SAMPLES = 36
TIE_SCALE = 1e-9
EVI_THRESHOLD = 0.05
SEARCH_GRID_POINTS = 512
SEARCH_IQR_MULTIPLE = 50.0
SEARCH_SPAN = 1e-8
IMPROVEMENT_EPS = 1e-12


def _tie_epsilon(values: np.ndarray) -> float:
    spread = float(values[-1] - values[0])
    if spread > 0:
        return TIE_SCALE * spread
    return TIE_SCALE * max(abs(float(values[0])), 1.0)


def perturb_ties(samples: Sequence[float]) -> tuple[np.ndarray, bool]:
    """
    Sort samples and nudge tied values upward so the result is strictly increasing.

    Each value becomes ``max(y_i, z_(i-1) + eps)``.

    Returns:
        The strictly increasing values and whether any value moved.
    """
    ordered = np.sort(np.asarray(samples, dtype=float))
    if ordered.size < 2:
        return ordered, False
    eps = _tie_epsilon(ordered)
    steps = eps * np.arange(ordered.size)
    adjusted = np.maximum.accumulate(ordered - steps) + steps
    return adjusted, bool(np.any(adjusted != ordered))


def hazen_percentile(j: Any, n: int) -> Any:
    """
    Median-unbiased percentile (j - 1/3)/(n + 1/3) of the j-th of n order statistics.

    Raises:
        DomainError: If any j is outside [1, n].
    """
    ranks = np.asarray(j, dtype=float)
    if n < 1 or np.any(ranks < 1) or np.any(ranks > n):
        raise DomainError(f"Hazen percentile needs 1 <= j <= n, got j={j}, n={n}")
    result = (ranks - 1.0 / 3.0) / (n + 1.0 / 3.0)
    return float(result) if result.ndim == 0 else result


@dataclass(frozen=True)
class TailFit:
    """Least-squares fit of the upper tail on a transformed percentile."""

    k: int
    n: int
    transform: str
    coefficients: tuple[float, ...]
    adjusted_r2: float
    evi: float
    candidates: dict[str, float] = field(default_factory=dict)

    def percentile_of(self, value: float) -> float:
        """
        Invert the fitted curve: the percentile at which the fit reaches ``value``.

        Raises:
            TailFitError: If the fitted curve never reaches ``value``.
        """
        theta = self.coefficients
        if self.transform == "logit-quadratic" and theta[2] != 0:
            roots = np.roots([theta[2], theta[1], theta[0] - value])
            real = roots[np.abs(roots.imag) < 1e-12].real
            if real.size == 0:
                raise TailFitError(f"Quadratic tail fit never reaches {value}")
            anchor = logit(hazen_percentile(self.n, self.n))
            return float(expit(real[np.argmin(np.abs(real - anchor))]))
        if theta[1] == 0:
            raise TailFitError("Tail fit has zero slope")
        regressor = (value - theta[0]) / theta[1]
        if self.transform == "linear":
            return float(regressor)
        if self.transform == "extreme-value":
            base = 1.0 + self.evi * regressor
            if base <= 0:
                raise TailFitError(f"Extreme-value tail fit never reaches {value}")
            return float(math.exp(-(base ** (-1.0 / self.evi)) / self.n))
        return float(expit(regressor))


@dataclass(frozen=True)
class UpperExtension:
    """Chosen upper extension y** and how it was found."""

    value: float
    target_percentile: float
    fit: TailFit | None
    fallback: bool


@dataclass(frozen=True)
class InterpolatedCdf:
    """
    Piecewise-linear CDF through the surrogate points.

    ``sorted_samples`` holds the values as observed; ``surrogates`` are built
    from the tie-perturbed values.
    """

    sorted_samples: np.ndarray
    surrogates: np.ndarray
    y_star: float
    y_star_star: float
    perturbed: bool = False
    extension: UpperExtension | None = None

    @property
    def n(self) -> int:
        """Number of samples."""
        return int(self.sorted_samples.size)

    @property
    def _knots(self) -> np.ndarray:
        return np.arange(self.n + 1, dtype=float) / self.n

    def evaluate(self, t: Any) -> Any:
        """F(t): 0 below the first surrogate, 1 above the last."""
        result = np.interp(t, self.surrogates, self._knots, left=0.0, right=1.0)
        return float(result) if np.ndim(result) == 0 else result

    def cdf(self, t: Any) -> Probability:
        """F(t) and its complement, each interpolated from exact knot values."""
        value = np.interp(t, self.surrogates, self._knots, left=0.0, right=1.0)
        complement = np.interp(
            t, self.surrogates, self._knots[::-1], left=1.0, right=0.0
        )
        if np.ndim(value) == 0:
            return Probability(float(value), float(complement))
        return Probability(value, complement)

    def inverse(self, p: Any) -> Any:
        """
        Quantile of a plain probability.

        Raises:
            DomainError: If p is outside [0, 1].
        """
        probs = np.asarray(p, dtype=float)
        if np.any(probs < 0) or np.any(probs > 1) or np.any(np.isnan(probs)):
            raise DomainError(f"CDF inverse needs 0 <= p <= 1, got {p}")
        result = np.interp(probs, self._knots, self.surrogates)
        return float(result) if result.ndim == 0 else result

    def inverse_prob(self, prob: Probability) -> Any:
        """Quantile of a probability pair, interpolated from the smaller side."""
        value = np.asarray(prob.value, dtype=float)
        complement = np.asarray(prob.complement, dtype=float)
        if np.any(value < 0) or np.any(complement < 0):
            raise DomainError(f"CDF inverse needs 0 <= p <= 1, got {prob.value}")
        from_lower = np.interp(value, self._knots, self.surrogates)
        from_upper = np.interp(complement, self._knots, self.surrogates[::-1])
        result = np.where(value <= 0.5, from_lower, from_upper)
        return float(result) if result.ndim == 0 else result


def _surrogates(values: np.ndarray, y_star: float, y_star_star: float) -> np.ndarray:
    middle = (values[1:] + values[:-1]) / 2.0
    return np.concatenate(
        ([values[0] - y_star], middle, [values[-1] + y_star_star])
    )


def build_cdf(
    samples: Sequence[float],
    y_star: float | None = None,
    y_star_star: float | None = None,
) -> InterpolatedCdf:
    """
    Build the interpolated CDF of a season.

    Args:
        samples: Observed values.
        y_star: Lower extension; defaults to Y_(2) - Y_(1).
        y_star_star: Upper extension; defaults to ``compute_upper_extension``.
    Returns:
        The interpolated CDF.
    Raises:
        InsufficientDataError: If fewer than 3 samples are given.
        DomainError: If an explicit extension is not positive.
    """
    observed = np.sort(np.asarray(samples, dtype=float))
    if observed.size < MIN_SAMPLES:
        raise InsufficientDataError(
            f"An interpolated CDF needs at least {MIN_SAMPLES} samples, "
            f"got {observed.size}"
        )
    if not np.all(np.isfinite(observed)):
        raise DomainError("Samples must be finite")
    values, perturbed = perturb_ties(observed)
    if perturbed:
        logger.debug("Perturbed tied samples among %d values", values.size)

    if y_star is None:
        y_star = float(values[1] - values[0])
    extension = None
    if y_star_star is None:
        extension = compute_upper_extension(values)
        y_star_star = extension.value
    if not (y_star > 0 and y_star_star > 0):
        raise DomainError(
            f"Support extensions must be positive, got {y_star} and {y_star_star}"
        )
    return InterpolatedCdf(
        sorted_samples=observed,
        surrogates=_surrogates(values, float(y_star), float(y_star_star)),
        y_star=float(y_star),
        y_star_star=float(y_star_star),
        perturbed=perturbed,
        extension=extension,
    )


def _tail_bounds(n: int) -> tuple[int, int]:
    root = math.sqrt(n)
    lower = max(6, math.floor(1.3 * root))
    upper = min(n, 2 * math.floor(math.log10(n) * root))
    return lower, upper


def select_k(samples: Sequence[float]) -> int:
    """
    Choose how many upper-tail points to use for tail extrapolation.

    Every k in [K1, K2] regresses the top k values on the logit of their
    Hazen percentiles. A k is admissible when its slope differs from the
    K1 slope by no more than the slope standard error times the quartiles
    of a t law with k - 2 degrees of freedom; the admissible k with the
    largest adjusted R squared wins.

    Raises:
        InsufficientTailError: If fewer than 36 samples are given.
    """
    values = np.sort(np.asarray(samples, dtype=float))
    n = values.size
    if n < MIN_TAIL_SAMPLES:
        raise InsufficientTailError(
            f"Tail selection needs at least {MIN_TAIL_SAMPLES} samples, got {n}"
        )
    k_low, k_high = _tail_bounds(n)

    regressor = logit(hazen_percentile(np.arange(1, n + 1), n))
    x = (regressor - regressor[-1])[::-1]
    y = (values - values[-1])[::-1]
    counts = np.arange(1, n + 1, dtype=float)
    sum_x, sum_y = np.cumsum(x), np.cumsum(y)
    sum_xx, sum_xy, sum_yy = np.cumsum(x * x), np.cumsum(x * y), np.cumsum(y * y)

    ks = np.arange(k_low, k_high + 1)
    idx = ks - 1
    k = counts[idx]
    sxx = sum_xx[idx] - sum_x[idx] ** 2 / k
    sxy = sum_xy[idx] - sum_x[idx] * sum_y[idx] / k
    syy = sum_yy[idx] - sum_y[idx] ** 2 / k

    with np.errstate(divide="ignore", invalid="ignore"):
        slope = sxy / sxx
        sse = np.maximum(syy - slope * sxy, 0.0)
        r2 = np.where(syy > 0, 1.0 - sse / syy, np.nan)
        adjusted = 1.0 - (1.0 - r2) * (k - 1.0) / (k - 2.0)
        slope_se = np.sqrt(sse / (k - 2.0) / sxx)

    shift = slope - slope[0]
    tolerance = IMPROVEMENT_EPS * max(1.0, abs(float(slope[0])))
    admissible = (
        np.isfinite(adjusted)
        & (shift >= slope_se * stats.t.ppf(0.25, k - 2.0) - tolerance)
        & (shift <= slope_se * stats.t.ppf(0.75, k - 2.0) + tolerance)
    )
    if not np.any(admissible):
        logger.warning(
            "No admissible tail size among %d..%d; using %d", k_low, k_high, k_low
        )
        return k_low
    return int(ks[np.argmax(np.where(admissible, adjusted, -np.inf))])


def evi_moment_estimate(samples: Sequence[float], k: int) -> float:
    """
    Moment estimate of the extreme-value index from the top k values.

    Values are centred on the sample median; M1 and M2 are the first two
    moments of the log ratios of the k - 1 largest values to the k-th largest.

    Raises:
        DomainError: If k is out of range or a centred tail value is not positive.
        SingularEstimateError: If M1 squared equals M2.
    """
    values = np.sort(np.asarray(samples, dtype=float))[::-1]
    if not MIN_SAMPLES <= k <= values.size:
        raise DomainError(f"Tail size must satisfy 3 <= k <= n, got k={k}")
    tail = values[:k] - np.median(values)
    if np.any(tail <= 0):
        raise DomainError("Median-centred tail values must be positive")
    log_ratios = np.log(tail[:-1]) - np.log(tail[-1])
    first = float(np.mean(log_ratios))
    second = float(np.mean(log_ratios**2))
    if second == 0 or abs(1.0 - first**2 / second) < IMPROVEMENT_EPS:
        raise SingularEstimateError(
            f"Moment estimate is singular (M1={first}, M2={second})"
        )
    return first + 1.0 - 0.5 / (1.0 - first**2 / second)


def _adjusted_r2(design: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float] | None:
    coefficients, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    k, columns = design.shape
    if rank < columns or k - columns <= 0:
        return None
    residual = y - design @ coefficients
    total = float(np.sum((y - y.mean()) ** 2))
    if total <= 0:
        return None
    r2 = 1.0 - float(residual @ residual) / total
    return coefficients, 1.0 - (1.0 - r2) * (k - 1) / (k - columns)


def fit_tail(samples: Sequence[float], k: int) -> TailFit:
    """
    Fit the top k values on each candidate percentile transform.

    Candidates are tried in the order linear, logit, logit-quadratic and,
    when the extreme-value index is clearly nonzero, the extreme-value
    transform ((-n ln p)^(-c) - 1)/c. A later candidate replaces the current
    best only when its adjusted R squared is strictly larger.

    Raises:
        DomainError: If k is out of range.
        TailFitError: If no candidate design has full rank.
    """
    values = np.sort(np.asarray(samples, dtype=float))
    n = values.size
    if not MIN_SAMPLES <= k <= n:
        raise DomainError(f"Tail size must satisfy 3 <= k <= n, got k={k}")
    y = values[n - k :]
    percentiles = hazen_percentile(np.arange(n - k + 1, n + 1), n)
    log_odds = logit(percentiles)
    ones = np.ones(k)

    try:
        evi = evi_moment_estimate(values, k)
    except (DomainError, SingularEstimateError) as exc:
        logger.debug("Extreme-value index unavailable: %s", exc)
        evi = float("nan")

    designs = {
        "linear": np.column_stack((ones, percentiles)),
        "logit": np.column_stack((ones, log_odds)),
        "logit-quadratic": np.column_stack((ones, log_odds, log_odds**2)),
    }
    if np.isfinite(evi) and abs(evi) >= EVI_THRESHOLD:
        transformed = ((-n * np.log(percentiles)) ** (-evi) - 1.0) / evi
        designs["extreme-value"] = np.column_stack((ones, transformed))

    best: TailFit | None = None
    scores: dict[str, float] = {}
    for name, design in designs.items():
        result = _adjusted_r2(design, y)
        if result is None:
            continue
        coefficients, adjusted = result
        scores[name] = adjusted
        if best is None or adjusted > best.adjusted_r2 + IMPROVEMENT_EPS:
            best = TailFit(
                k=k,
                n=n,
                transform=name,
                coefficients=tuple(float(c) for c in coefficients),
                adjusted_r2=float(adjusted),
                evi=evi,
            )
    if best is None:
        raise TailFitError(f"Tail regression on the top {k} values is collinear")
    return TailFit(
        k=best.k,
        n=best.n,
        transform=best.transform,
        coefficients=best.coefficients,
        adjusted_r2=best.adjusted_r2,
        evi=best.evi,
        candidates=scores,
    )


def extension_objective(values: np.ndarray, target: float, y: float) -> float:
    """|target - F(Y_(n); y)| for strictly increasing ``values``."""
    n = values.size
    half_gap = (values[-1] - values[-2]) / 2.0
    at_max = (n - 1.0) / n + half_gap / (n * (half_gap + y))
    return abs(target - at_max)


def _fallback(
    values: np.ndarray, target: float, fit: TailFit | None, reason: str
) -> UpperExtension:
    gap = float(values[-1] - values[-2])
    logger.warning("Upper extension falls back to Y(n) - Y(n-1) = %g: %s", gap, reason)
    return UpperExtension(value=gap, target_percentile=target, fit=fit, fallback=True)


def compute_upper_extension(samples: Sequence[float]) -> UpperExtension:
    """
    Choose y** so that F(Y_(n)) matches the tail-fit percentile of Y_(n).

    The objective is scanned on a logarithmic grid over (0, 50 IQR] and the
    best grid cell refined with a bounded scalar search. When the tail
    cannot be fitted or the minimiser sits on the bracket boundary, the
    extension falls back to Y_(n) - Y_(n-1).
    """
    values, _ = perturb_ties(samples)
    if values.size < MIN_SAMPLES:
        raise InsufficientDataError("Upper extension needs at least 3 samples")

    try:
        fit = fit_tail(values, select_k(values))
        target = fit.percentile_of(float(values[-1]))
    except (InsufficientDataError, NumericalError) as exc:
        return _fallback(values, float("nan"), None, str(exc))
    if not 0.0 < target < 1.0:
        return _fallback(
            values, target, fit, f"tail percentile {target} outside (0, 1)"
        )

    q75, q25 = np.percentile(values, [75, 25])
    high = SEARCH_IQR_MULTIPLE * float(q75 - q25)
    if high <= 0:
        high = SEARCH_IQR_MULTIPLE * float(values[-1] - values[0])
    grid = np.geomspace(high * SEARCH_SPAN, high, SEARCH_GRID_POINTS)
    scores = np.array([extension_objective(values, target, y) for y in grid])
    best = int(np.argmin(scores))
    if best in (0, grid.size - 1):
        return _fallback(
            values, target, fit, "no interior minimiser in the search bracket"
        )

    lower, upper = grid[best - 1], grid[best + 1]
    refined = optimize.minimize_scalar(
        lambda y: extension_objective(values, target, y),
        bounds=(lower, upper),
        method="bounded",
        options={"xatol": SEARCH_SPAN * lower},
    )
    value = float(refined.x)
    if extension_objective(values, target, value) > scores[best]:
        value = float(grid[best])
    return UpperExtension(
        value=value, target_percentile=target, fit=fit, fallback=False
    )
