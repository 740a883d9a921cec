"""Jelinski-Moranda model: stepwise intensity over inter-failure intervals.

Between failures i-1 and i the program still contains ``e0 - i + 1`` of
its original ``e0`` errors and fails at intensity ``k_jm * (e0 - i + 1)``.
Fitting maximizes the likelihood of the observed intervals; the estimate
exists only when early intervals are shorter on average than later ones,
and the fitter reports the absence of that trend as a first-class outcome
(NoGrowthEvidence) rather than a crash.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.stats import norm

from .errors import (
    DomainError,
    NoConvergence,
    NoGrowthEvidence,
    ResidualNonPositive,
    SingularInformation,
    TooFewIntervals,
)
from .numerics import Bracket, find_root_bracketed

_SCAN_DOUBLINGS = 60
_RESIDUAL_LIMIT = 1e-9


@dataclass(frozen=True)
class JmFit:
    """Fitted error count and per-error intensity, with optional uncertainty."""

    e0_hat: float
    k_hat: float
    k_obs: int
    var_e0: float | None = None
    var_k: float | None = None
    rho: float | None = None

    def __post_init__(self) -> None:
        if not (isinstance(self.k_obs, int) and self.k_obs >= 1):
            raise DomainError(f"k_obs must be an integer >= 1, got {self.k_obs}")
        if not (math.isfinite(self.e0_hat) and self.e0_hat > self.k_obs - 1):
            raise DomainError(
                f"e0_hat must exceed k_obs - 1 = {self.k_obs - 1}, got {self.e0_hat}"
            )
        if not (math.isfinite(self.k_hat) and self.k_hat > 0.0):
            raise DomainError(f"k_hat must be positive, got {self.k_hat}")


def _residual_count(e0: float, i: int) -> float:
    if not (isinstance(i, int) and i >= 1):
        raise DomainError(f"failure index must be an integer >= 1, got {i}")
    residual = e0 - i + 1
    if residual <= 0.0:
        raise ResidualNonPositive(
            f"no residual errors at failure index {i} for e0 = {e0}"
        )
    return residual


def intensity(e0: float, k_jm: float, i: int) -> float:
    """Failure intensity while waiting for failure ``i``: k_jm * (e0 - i + 1)."""
    if not (math.isfinite(k_jm) and k_jm > 0.0):
        raise DomainError(f"k_jm must be positive, got {k_jm}")
    return k_jm * _residual_count(e0, i)


def reliability(e0: float, k_jm: float, i: int, dt: float) -> float:
    """Probability of surviving ``dt`` beyond failure i-1 without failure i."""
    rate = intensity(e0, k_jm, i)
    if not (math.isfinite(dt) and dt >= 0.0):
        raise DomainError(f"dt must be finite and non-negative, got {dt}")
    return math.exp(-rate * dt)


def _sums(intervals: Sequence[float]) -> tuple[float, float]:
    a = math.fsum(intervals)
    b = math.fsum((i - 1) * x for i, x in enumerate(intervals, start=1))
    return a, b


def stationarity_residual(e0: float, intervals: Sequence[float]) -> float:
    """Relative defect of the likelihood stationarity condition at ``e0``.

    Zero exactly when sum(1/(e0 - i + 1)) equals k*A/(e0*A - B).
    """
    k = len(intervals)
    a, b = _sums(intervals)
    lhs = math.fsum(1.0 / (e0 - i + 1) for i in range(1, k + 1))
    rhs = k * a / (e0 * a - b)
    return lhs / rhs - 1.0


def _check_intervals(intervals: Sequence[float]) -> list[float]:
    xs = [float(x) for x in intervals]
    for x in xs:
        if not (math.isfinite(x) and x > 0.0):
            raise DomainError(f"intervals must be finite and positive, got {x}")
    return xs


def fit_mle(intervals: Sequence[float]) -> JmFit:
    """Maximum-likelihood (e0, k_jm) from ordered inter-failure intervals.

    With A = sum(x_i) and B = sum((i-1) * x_i), the stationary e0 solves

        sum_{i=1..k} 1/(e0 - i + 1) = k * A / (e0 * A - B)

    and then k_hat = k / (e0 * A - B).  The root is bracketed by doubling
    steps above the pole at e0 = k - 1.  A finite root exists only when
    B/A < (k-1)/2, i.e. when failures cluster early; otherwise
    NoGrowthEvidence is raised carrying that diagnostic.
    """
    xs = _check_intervals(intervals)
    k = len(xs)
    if k < 2:
        raise TooFewIntervals(f"need at least 2 intervals to fit two parameters, got {k}")
    a, b = _sums(xs)

    def objective(e0: float) -> float:
        return stationarity_residual(e0, xs)

    floor = float(k - 1)
    step = max(floor, 1.0) * 1e-9
    previous: tuple[float, float] | None = None
    bracket = None
    offset = step
    for _ in range(_SCAN_DOUBLINGS + 1):
        value = objective(floor + offset)
        if value == 0.0:
            bracket = (offset * 0.5 if previous is None else previous[0], offset)
            break
        if previous is not None and (value > 0.0) != (previous[1] > 0.0):
            bracket = (previous[0], offset)
            break
        previous = (offset, value)
        offset *= 2.0
    if bracket is None:
        raise NoGrowthEvidence(
            "the likelihood has no finite maximizer: early intervals are not shorter "
            f"on average (interval-weighted mean index {b / a:.6g} vs threshold {(k - 1) / 2:.6g})",
            diagnostic={"b_over_a": b / a, "threshold": (k - 1) / 2.0},
        )
    e0 = find_root_bracketed(
        objective, Bracket(floor + bracket[0], floor + bracket[1], tol_rel=1e-13)
    )
    k_hat = k / (e0 * a - b)
    fit = JmFit(e0_hat=e0, k_hat=k_hat, k_obs=k)
    if abs(stationarity_residual(e0, xs)) > _RESIDUAL_LIMIT:
        raise NoConvergence(
            f"stationarity residual exceeds {_RESIDUAL_LIMIT} at the located root"
        )
    return fit


def covariance(fit: JmFit, intervals: Sequence[float]) -> JmFit:
    """Attach asymptotic variances and correlation to a fit.

    With S2 = sum(1/(e0 - i + 1)^2) and A = sum(x_i):

        var(e0) = k / (k*S2 - A^2*k_hat^2)
        var(k)  = S2 * k_hat^2 / (k*S2 - A^2*k_hat^2)
        rho     = A * k_hat / sqrt(k * S2)

    Raises SingularInformation when the denominator is not positive, which
    includes every single-interval fit.
    """
    xs = _check_intervals(intervals)
    if len(xs) != fit.k_obs:
        raise DomainError(
            f"fit was made from {fit.k_obs} intervals but {len(xs)} were supplied"
        )
    k = fit.k_obs
    a = math.fsum(xs)
    s2 = math.fsum(1.0 / (fit.e0_hat - i + 1) ** 2 for i in range(1, k + 1))
    denom = k * s2 - (a * fit.k_hat) ** 2
    if denom <= 0.0:
        raise SingularInformation(
            f"information determinant k*S2 - (A*k_hat)^2 = {denom} is not positive"
        )
    return replace(
        fit,
        var_e0=k / denom,
        var_k=s2 * fit.k_hat**2 / denom,
        rho=a * fit.k_hat / math.sqrt(k * s2),
    )


def confidence_intervals(fit: JmFit, level: float = 0.95) -> dict[str, tuple[float, float]]:
    """Two-sided Gaussian confidence intervals for e0 and k_jm."""
    if fit.var_e0 is None or fit.var_k is None:
        raise DomainError("confidence intervals need variances; run covariance first")
    if not (0.0 < level < 1.0):
        raise DomainError(f"confidence level must lie in (0, 1), got {level}")
    z = float(norm.ppf(0.5 + level / 2.0))
    half_e0 = z * math.sqrt(fit.var_e0)
    half_k = z * math.sqrt(fit.var_k)
    return {
        "e0": (fit.e0_hat - half_e0, fit.e0_hat + half_e0),
        "k": (fit.k_hat - half_k, fit.k_hat + half_k),
    }


def generate_intervals(e0: float, k_jm: float, count: int, seed: int) -> list[float]:
    """Draw ``count`` intervals with exponential law of rate k_jm * (e0 - i + 1).

    Inverse-CDF sampling on a seeded uniform stream; deterministic per seed.
    """
    if not (math.isfinite(e0) and e0 > 0.0 and math.isfinite(k_jm) and k_jm > 0.0):
        raise DomainError(f"model parameters must be positive, got e0={e0}, k_jm={k_jm}")
    if not (isinstance(count, int) and count >= 0):
        raise DomainError(f"count must be a non-negative integer, got {count}")
    if count > e0:
        raise DomainError(f"cannot observe {count} failures from e0 = {e0} errors")
    if count == 0:
        return []
    rng = np.random.default_rng(seed)
    u = rng.random(count)
    rates = k_jm * (e0 - np.arange(count))
    draws = -np.log1p(-u) / rates
    # A uniform draw of exactly 0.0 would yield a zero interval, which the
    # likelihood cannot accept; clip to the smallest positive normal float.
    draws = np.maximum(draws, np.finfo(float).tiny)
    return [float(x) for x in draws]
