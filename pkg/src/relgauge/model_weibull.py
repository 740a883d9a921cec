"""Weibull failure-time model with method-of-moments fitting.

Hazard ``m * lam^m * t^(m-1)``, reliability ``exp(-(lam*t)^m)``.  A shape
below one means the hazard falls with time (reliability growth), which is
the regime debugging data is expected to occupy; fits with m >= 1 are
allowed but warned about.

The moment fit equates the sample coefficient of variation with its model
expression through the gamma-ratio function G(m) = Gamma(1+2/m) /
Gamma(1+1/m)^2.  G is strictly decreasing, so the bracketed root search
over m has a unique solution.  Two forms of the moment equation are offered:
``CV_CORRECTED`` solves G(m) - 1 = s^2/tbar^2 (the coefficient-of-variation
identity for central sample variance) and ``RAW_RATIO`` solves
G(m) = s^2/tbar^2, which treats the dispersion statistic as a second raw
moment ratio instead.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DegenerateSample, DomainError, NoConvergence
from .numerics import Bracket, find_root_bracketed, log_gamma

_M_LO = 0.05
_M_HI = 20.0


class MomentForm(Enum):
    CV_CORRECTED = "cv"
    RAW_RATIO = "literal"


@dataclass(frozen=True)
class WeibullFit:
    """Shape and scale of a Weibull failure-time law."""

    m: float
    lam: float
    moment_form: MomentForm = MomentForm.CV_CORRECTED

    def __post_init__(self) -> None:
        if not (math.isfinite(self.m) and self.m > 0.0):
            raise DomainError(f"shape must be positive, got {self.m}")
        if not (math.isfinite(self.lam) and self.lam > 0.0):
            raise DomainError(f"scale must be positive, got {self.lam}")
        if not isinstance(self.moment_form, MomentForm):
            raise DomainError(f"moment_form must be a MomentForm, got {self.moment_form!r}")


def hazard(fit: WeibullFit, t: float) -> float:
    """Failure intensity at time ``t``; constant (equal to lam) iff m = 1."""
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"time must be finite and non-negative, got {t}")
    if t == 0.0 and fit.m < 1.0:
        raise DomainError("hazard diverges at t = 0 for shapes below 1")
    return fit.m * fit.lam**fit.m * t ** (fit.m - 1.0)


def reliability(fit: WeibullFit, t: float) -> float:
    """Probability of surviving to time ``t``."""
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"time must be finite and non-negative, got {t}")
    return math.exp(-((fit.lam * t) ** fit.m))


def mttf(fit: WeibullFit) -> float:
    """Mean failure time Gamma(1 + 1/m) / lam."""
    return math.exp(log_gamma(1.0 + 1.0 / fit.m)) / fit.lam


def gamma_moment_ratio(m: float) -> float:
    """G(m) = Gamma(1 + 2/m) / Gamma(1 + 1/m)^2, strictly decreasing in m."""
    if not (math.isfinite(m) and m > 0.0):
        raise DomainError(f"shape must be positive, got {m}")
    return math.exp(log_gamma(1.0 + 2.0 / m) - 2.0 * log_gamma(1.0 + 1.0 / m))


def fit_moments(
    intervals: Sequence[float], form: MomentForm = MomentForm.CV_CORRECTED
) -> WeibullFit:
    """Method-of-moments (m, lam) from failure intervals.

    Sample moments use the 1/k normalization: tbar = mean, s2 = mean squared
    deviation.  The shape solves the gamma-ratio equation for the selected
    ``form`` on m in [0.05, 20]; the scale follows as Gamma(1+1/m)/tbar.

    Raises DegenerateSample when the sample variance vanishes and
    NoConvergence when the dispersion ratio is outside the range the
    bracket can reach.  Emits a UserWarning when the fitted shape is >= 1,
    since that contradicts the falling-hazard regime.
    """
    xs = [float(x) for x in intervals]
    if len(xs) < 2:
        raise DomainError(f"need at least 2 intervals, got {len(xs)}")
    for x in xs:
        if not (math.isfinite(x) and x > 0.0):
            raise DomainError(f"intervals must be finite and positive, got {x}")
    k = len(xs)
    t_bar = math.fsum(xs) / k
    s2 = math.fsum((x - t_bar) ** 2 for x in xs) / k
    if s2 == 0.0:
        raise DegenerateSample("zero sample variance; the shape estimate diverges")
    ratio = s2 / t_bar**2
    target = ratio + 1.0 if form is MomentForm.CV_CORRECTED else ratio

    def objective(m: float) -> float:
        return gamma_moment_ratio(m) - target

    lo_val = objective(_M_LO)
    hi_val = objective(_M_HI)
    if not (lo_val > 0.0 > hi_val):
        raise NoConvergence(
            f"dispersion ratio {ratio} has no shape solution in [{_M_LO}, {_M_HI}] "
            f"under the {form.name} moment equation"
        )
    m_hat = find_root_bracketed(objective, Bracket(_M_LO, _M_HI, tol_rel=1e-13))
    lam = math.exp(log_gamma(1.0 + 1.0 / m_hat)) / t_bar
    if m_hat >= 1.0:
        warnings.warn(
            f"fitted shape {m_hat:.6g} is >= 1: the data show no reliability growth",
            UserWarning,
            stacklevel=2,
        )
    return WeibullFit(m=m_hat, lam=lam, moment_form=form)


def survival_inverse(u: float, m: float, lam: float) -> float:
    """Time at which reliability equals ``u``: (-ln u)^(1/m) / lam."""
    if not (0.0 < u <= 1.0):
        raise DomainError(f"survival probability must lie in (0, 1], got {u}")
    if not (math.isfinite(m) and m > 0.0 and math.isfinite(lam) and lam > 0.0):
        raise DomainError(f"parameters must be positive, got m={m}, lam={lam}")
    return (-math.log(u)) ** (1.0 / m) / lam


def generate(m: float, lam: float, n: int, seed: int) -> list[float]:
    """Draw ``n`` failure times by inverting the survival function on seeded uniforms."""
    if not (math.isfinite(m) and m > 0.0 and math.isfinite(lam) and lam > 0.0):
        raise DomainError(f"parameters must be positive, got m={m}, lam={lam}")
    if not (isinstance(n, int) and n >= 1):
        raise DomainError(f"sample size must be an integer >= 1, got {n}")
    rng = np.random.default_rng(seed)
    u = 1.0 - rng.random(n)  # in (0, 1], so the log below never overflows
    draws = (-np.log(u)) ** (1.0 / m) / lam
    # u exactly 1 would give a zero time; clip to keep every draw positive.
    draws = np.maximum(draws, np.finfo(float).tiny)
    return [float(x) for x in draws]
