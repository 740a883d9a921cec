"""Exponential reliability-growth model over debugging periods (Schumann model).

The program starts with E0 latent errors spread over I machine
instructions.  After debugging has corrected ``corrected`` of them, the
per-instruction residual is ``r = E0/I - corrected/I`` and failures arrive
at intensity ``C * r`` during test execution.  Reliability over an
exposure ``t`` is ``exp(-C * r * t)``.

Two estimation routes are provided: a closed form from two debugging
periods, and a maximum-likelihood fit over any number of periods with
asymptotic variances, correlation, and Gaussian confidence intervals from
the observed information matrix.  A seeded period generator supports
round-trip testing, and an exponential-decay variant predicts how
reliability grows as debugging time accumulates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np
from scipy.stats import norm

from .errors import (
    DegenerateGamma,
    DomainError,
    NegativeEstimate,
    NoConvergence,
    ParseError,
    ResidualNonPositive,
    SingularInformation,
    Underdetermined,
)
from .failure_data import DebugPeriod, _data_rows, _parse_float, _parse_int
from .numerics import Bracket, Info2x2, find_root_bracketed, invert_information

_SCAN_DOUBLINGS = 60
_RESIDUAL_LIMIT = 1e-9


@dataclass(frozen=True)
class SchumannFit:
    """Fitted error content and detection coefficient.

    ``e0_hat`` is the estimated initial error count (continuous; see
    :func:`rounded_e0` for the integer view), ``c_hat`` the per-residual
    failure intensity.  Variance fields are populated by
    :func:`covariance`.
    """

    e0_hat: float
    c_hat: float
    instructions: int
    var_e0: float | None = None
    var_c: float | None = None
    rho: float | None = None
    ci_level: float = 0.95

    def __post_init__(self) -> None:
        if not (isinstance(self.instructions, int) and self.instructions >= 1):
            raise DomainError(f"instructions must be an integer >= 1, got {self.instructions}")
        if not (math.isfinite(self.e0_hat) and self.e0_hat > 0.0):
            raise DomainError(f"e0_hat must be positive, got {self.e0_hat}")
        if not (math.isfinite(self.c_hat) and self.c_hat > 0.0):
            raise DomainError(f"c_hat must be positive, got {self.c_hat}")
        if not (0.0 < self.ci_level < 1.0):
            raise DomainError(f"ci_level must lie in (0, 1), got {self.ci_level}")


def rounded_e0(fit: SchumannFit) -> int:
    """Nearest integer error count for reporting alongside the continuous estimate."""
    return int(round(fit.e0_hat))


def _residual_fraction(fit: SchumannFit, eps_b: float) -> float:
    if not (math.isfinite(eps_b) and eps_b >= 0.0):
        raise DomainError(f"corrected fraction must be non-negative, got {eps_b}")
    residual = fit.e0_hat / fit.instructions - eps_b
    if residual <= 0.0:
        raise ResidualNonPositive(
            f"corrected fraction {eps_b} leaves no residual errors "
            f"(estimate {fit.e0_hat / fit.instructions} per instruction)"
        )
    return residual


def reliability(fit: SchumannFit, eps_b: float, t: float) -> float:
    """Probability of faultless operation for exposure ``t`` at corrected fraction ``eps_b``."""
    residual = _residual_fraction(fit, eps_b)
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"exposure must be finite and non-negative, got {t}")
    return math.exp(-fit.c_hat * residual * t)


def mttf(fit: SchumannFit, eps_b: float) -> float:
    """Mean time to failure at corrected fraction ``eps_b``."""
    return 1.0 / (fit.c_hat * _residual_fraction(fit, eps_b))


def fit_two_period(
    t_hat_1: float,
    t_hat_2: float,
    eps_b_1: float,
    eps_b_2: float,
    instructions: int,
) -> tuple[float, float]:
    """Closed-form (e0, c) from per-failure exposures of two debugging periods.

    ``t_hat_j`` is the mean exposure per failure observed in period j and
    ``eps_b_j`` the corrected fraction in force during it.  With
    ``gamma = t_hat_1 / t_hat_2``:

        e0 = I * (gamma * eps_b_1 - eps_b_2) / (gamma - 1)
        c  = 1 / (t_hat_1 * (e0 / I - eps_b_1))
    """
    if not (isinstance(instructions, int) and instructions >= 1):
        raise DomainError(f"instructions must be an integer >= 1, got {instructions}")
    for name, value in (("t_hat_1", t_hat_1), ("t_hat_2", t_hat_2)):
        if not (math.isfinite(value) and value > 0.0):
            raise DomainError(f"{name} must be positive, got {value}")
    if not (0.0 <= eps_b_1 < eps_b_2):
        raise DomainError(
            f"corrected fractions must satisfy 0 <= first < second, got {eps_b_1}, {eps_b_2}"
        )
    gamma = t_hat_1 / t_hat_2
    if gamma == 1.0:
        raise DegenerateGamma(
            "equal per-failure exposures in both periods leave the error count unidentifiable"
        )
    e0 = instructions * (gamma * eps_b_1 - eps_b_2) / (gamma - 1.0)
    if e0 <= instructions * eps_b_2:
        raise NegativeEstimate(
            f"estimated error count {e0} does not exceed the corrected count "
            f"{instructions * eps_b_2}; inputs are inconsistent with growth"
        )
    c = 1.0 / (t_hat_1 * (e0 / instructions - eps_b_1))
    return e0, c


def fit_two_period_from_totals(
    exposure_1: float,
    failures_1: int,
    exposure_2: float,
    failures_2: int,
    eps_b_1: float,
    eps_b_2: float,
    instructions: int,
) -> tuple[float, float]:
    """Same closed form, with per-failure exposures formed as total/count."""
    for name, value in (("failures_1", failures_1), ("failures_2", failures_2)):
        if not (isinstance(value, int) and value >= 1):
            raise DomainError(f"{name} must be an integer >= 1, got {value}")
    for name, value in (("exposure_1", exposure_1), ("exposure_2", exposure_2)):
        if not (math.isfinite(value) and value > 0.0):
            raise DomainError(f"{name} must be positive, got {value}")
    return fit_two_period(
        exposure_1 / failures_1, exposure_2 / failures_2, eps_b_1, eps_b_2, instructions
    )


def _c_from_exposure(e0: float, periods: Sequence[DebugPeriod], instructions: int) -> float:
    total = sum(p.failures for p in periods)
    weighted = math.fsum((e0 / instructions - p.corrected / instructions) * p.exposure for p in periods)
    return total / weighted


def _c_from_rates(e0: float, periods: Sequence[DebugPeriod], instructions: int) -> float:
    rate_sum = math.fsum(
        p.failures / (e0 / instructions - p.corrected / instructions) for p in periods
    )
    return rate_sum / math.fsum(p.exposure for p in periods)


def _stationarity(e0: float, periods: Sequence[DebugPeriod], instructions: int) -> float:
    """Relative disagreement of the two likelihood expressions for c at this e0."""
    return _c_from_exposure(e0, periods, instructions) / _c_from_rates(e0, periods, instructions) - 1.0


def stationarity_residuals(fit: SchumannFit, periods: Sequence[DebugPeriod]) -> tuple[float, float]:
    """Relative residuals of the two likelihood expressions for c at the fit."""
    c1 = _c_from_exposure(fit.e0_hat, periods, fit.instructions)
    c2 = _c_from_rates(fit.e0_hat, periods, fit.instructions)
    return abs(c1 / fit.c_hat - 1.0), abs(c2 / fit.c_hat - 1.0)


def _check_periods(periods: Sequence[DebugPeriod], instructions: int) -> None:
    if not (isinstance(instructions, int) and instructions >= 1):
        raise DomainError(f"instructions must be an integer >= 1, got {instructions}")
    if len(periods) < 2:
        raise Underdetermined(f"need at least 2 debugging periods, got {len(periods)}")
    if sum(p.failures for p in periods) < 2:
        raise DomainError("need at least 2 failures overall to fit two parameters")
    if len({p.corrected for p in periods}) < 2:
        raise Underdetermined(
            "all periods share one corrected count, so the error total is unidentifiable"
        )


def fit_mle(
    periods: Sequence[DebugPeriod], instructions: int, ci_level: float = 0.95
) -> SchumannFit:
    """Maximum-likelihood (e0, c) over any number of debugging periods.

    The two likelihood expressions for c,

        c = sum(n_j) / sum((e0/I - corrected_j/I) * H_j)
        c = sum(n_j / (e0/I - corrected_j/I)) / sum(H_j),

    agree only at the stationary e0, which is located by scanning upward
    from the feasibility boundary (e0 slightly above the largest corrected
    count) with doubling steps and then root-finding on the bracketed sign
    change.  Raises NoConvergence when no sign change appears within 60
    doublings, which is the signature of data without reliability growth.
    """
    periods = list(periods)
    _check_periods(periods, instructions)

    def objective(e0: float) -> float:
        return _stationarity(e0, periods, instructions)

    floor = float(max(p.corrected for p in periods))
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
        raise NoConvergence(
            "the likelihood stationarity condition has no root above the feasibility "
            "boundary after 60 doublings; the periods show no reliability growth"
        )
    e0 = find_root_bracketed(
        objective, Bracket(floor + bracket[0], floor + bracket[1], tol_rel=1e-13)
    )
    c = _c_from_exposure(e0, periods, instructions)
    fit = SchumannFit(e0_hat=e0, c_hat=c, instructions=instructions, ci_level=ci_level)
    if max(stationarity_residuals(fit, periods)) > _RESIDUAL_LIMIT:
        raise NoConvergence(
            f"stationarity residuals exceed {_RESIDUAL_LIMIT} at the located root"
        )
    return fit


def covariance(fit: SchumannFit, periods: Sequence[DebugPeriod]) -> SchumannFit:
    """Attach asymptotic variances and correlation from the observed information.

    The information matrix in (c, e0) order is

        [[sum(n_j)/c^2,           sum(H_j)/I        ],
         [sum(H_j)/I,             sum(n_j/r_j^2)/I^2]]

    with r_j the per-instruction residual in period j.  Its inverse gives
    var(c), var(e0), and their covariance; the correlation magnitude is
    ``sum(n_j/r_j) / sqrt(sum(n_j) * sum(n_j/r_j^2))``.
    """
    if len(periods) < 2:
        raise SingularInformation("a single period carries rank-1 information")
    I = fit.instructions
    residuals = []
    for p in periods:
        r = fit.e0_hat / I - p.corrected / I
        if r <= 0.0:
            raise ResidualNonPositive(
                f"period with corrected count {p.corrected} has non-positive residual at the fit"
            )
        residuals.append(r)
    total = sum(p.failures for p in periods)
    info = Info2x2(
        a11=total / fit.c_hat**2,
        a12=math.fsum(p.exposure for p in periods) / I,
        a22=math.fsum(p.failures / r**2 for p, r in zip(periods, residuals)) / I**2,
    )
    inverse = invert_information(info)
    rho = math.fsum(p.failures / r for p, r in zip(periods, residuals)) / math.sqrt(
        total * math.fsum(p.failures / r**2 for p, r in zip(periods, residuals))
    )
    return replace(fit, var_c=inverse.var1, var_e0=inverse.var2, rho=rho)


def confidence_intervals(fit: SchumannFit) -> dict[str, tuple[float, float]]:
    """Two-sided Gaussian confidence intervals at the fit's ci_level."""
    if fit.var_e0 is None or fit.var_c is None:
        raise DomainError("confidence intervals need variances; run covariance first")
    z = float(norm.ppf(0.5 + fit.ci_level / 2.0))
    half_e0 = z * math.sqrt(fit.var_e0)
    half_c = z * math.sqrt(fit.var_c)
    return {
        "e0": (fit.e0_hat - half_e0, fit.e0_hat + half_e0),
        "c": (fit.c_hat - half_c, fit.c_hat + half_c),
    }


@dataclass(frozen=True)
class ExpGrowthParams:
    """Error-rate model combined with exponential decay of residual errors over debugging time."""

    e0: float
    tau0: float
    c: float
    instructions: int

    def __post_init__(self) -> None:
        for name in ("e0", "tau0", "c"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be positive, got {value}")
        if not (isinstance(self.instructions, int) and self.instructions >= 1):
            raise DomainError(f"instructions must be an integer >= 1, got {self.instructions}")


class GrowthPrediction(NamedTuple):
    reliability: float
    mttf: float


def expected_corrected_fraction(params: ExpGrowthParams, tau: float) -> float:
    """Corrected errors per instruction after debugging time ``tau``."""
    if not (math.isfinite(tau) and tau >= 0.0):
        raise DomainError(f"debugging time must be non-negative, got {tau}")
    return -(params.e0 / params.instructions) * math.expm1(-tau / params.tau0)


def exp_growth_predict(params: ExpGrowthParams, tau: float, t: float) -> GrowthPrediction:
    """Reliability over exposure ``t`` and MTTF after debugging for ``tau``.

    Residual errors decay as ``(e0/I) * exp(-tau/tau0)``, so the mean time
    to failure grows exponentially in debugging time.
    """
    if not (math.isfinite(tau) and tau >= 0.0):
        raise DomainError(f"debugging time must be non-negative, got {tau}")
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"exposure must be non-negative, got {t}")
    rate0 = params.c * params.e0 / params.instructions
    decay = math.exp(-tau / params.tau0)
    return GrowthPrediction(
        reliability=math.exp(-rate0 * decay * t),
        mttf=math.exp(tau / params.tau0) / rate0,
    )


def generate_periods(
    e0: float,
    c: float,
    instructions: int,
    schedule: Sequence[tuple[float, int, float]],
    seed: int,
) -> list[DebugPeriod]:
    """Draw synthetic failure counts for a debugging schedule.

    ``schedule`` lists (tau, corrected, exposure) triples with non-decreasing
    corrected counts not exceeding ``e0``.  Failure counts are Poisson with
    mean ``c * (e0/I - corrected/I) * exposure``; deterministic per seed.
    """
    if not (math.isfinite(e0) and e0 > 0.0 and math.isfinite(c) and c > 0.0):
        raise DomainError(f"model parameters must be positive, got e0={e0}, c={c}")
    if not (isinstance(instructions, int) and instructions >= 1):
        raise DomainError(f"instructions must be an integer >= 1, got {instructions}")
    previous = 0
    for tau, corrected, exposure in schedule:
        if not (isinstance(corrected, int) and previous <= corrected <= e0):
            raise DomainError(
                f"corrected counts must be non-decreasing integers bounded by e0={e0}, got {corrected}"
            )
        previous = corrected
    rng = np.random.default_rng(seed)
    periods = []
    for tau, corrected, exposure in schedule:
        mean = c * (e0 / instructions - corrected / instructions) * exposure
        count = int(rng.poisson(mean))
        periods.append(DebugPeriod(tau=tau, corrected=corrected, exposure=exposure, failures=count))
    return periods


def parse_schedule(text: str) -> list[tuple[float, int, float]]:
    """Parse ``tau,corrected,exposure`` CSV text into generator schedule triples."""
    schedule = []
    for row_number, fields in _data_rows(text, ("tau", "corrected", "exposure")):
        tau = _parse_float(fields[0], row_number, "tau")
        corrected = _parse_int(fields[1], row_number, "corrected")
        exposure = _parse_float(fields[2], row_number, "exposure")
        if not (math.isfinite(tau) and tau >= 0.0):
            raise DomainError(f"row {row_number}: tau must be non-negative, got {tau}")
        if not (math.isfinite(exposure) and exposure > 0.0):
            raise DomainError(f"row {row_number}: exposure must be positive, got {exposure}")
        schedule.append((tau, corrected, exposure))
    return schedule
