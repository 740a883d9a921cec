"""Economics of a debugging campaign with exponentially decaying error discovery.

The error-discovery rate during debugging is modeled as
``f(t) = (eps0 / tau0) * exp(-t / tau0)``: a program starts with ``eps0``
latent errors and the yield of further debugging decays with time constant
``tau0``.  Normalizing by program size (``commands`` machine instructions)
and multiplying by the execution tempo ``delta`` (instructions per unit
time) links the residual error mass to an in-service failure probability,
a mean time to failure, and finally a total-cost curve whose minimizer is
the economically optimal amount of debugging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, NoConvergence, OutOfRange, Underdetermined
from .failure_data import _data_rows, _parse_float


@dataclass(frozen=True)
class DiscoveryParams:
    """Exponential error-discovery model of one program under debugging.

    eps0
        Initial number of latent errors.
    tau0
        Decay time constant of the discovery rate.
    commands
        Program size in machine instructions.
    tempo
        Execution speed in instructions per unit of operating time.
    """

    eps0: float
    tau0: float
    commands: int
    tempo: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.eps0) and self.eps0 > 0.0):
            raise DomainError(f"eps0 must be positive, got {self.eps0}")
        if not (math.isfinite(self.tau0) and self.tau0 > 0.0):
            raise DomainError(f"tau0 must be positive, got {self.tau0}")
        if not (isinstance(self.commands, int) and self.commands >= 1):
            raise DomainError(f"commands must be an integer >= 1, got {self.commands}")
        if not (math.isfinite(self.tempo) and self.tempo > 0.0):
            raise DomainError(f"tempo must be positive, got {self.tempo}")


@dataclass(frozen=True)
class EconParams:
    """Costs and horizon for the debugging trade-off.

    cost_error
        Loss incurred by one failure in service.
    cost_test
        Cost of one unit of debugging time.
    horizon
        Planned operating time of the released program.
    """

    cost_error: float
    cost_test: float
    horizon: float

    def __post_init__(self) -> None:
        for name in ("cost_error", "cost_test", "horizon"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be positive, got {value}")


def _check_tau(tau: float) -> float:
    if not (math.isfinite(tau) and tau >= 0.0):
        raise DomainError(f"debugging time must be finite and non-negative, got {tau}")
    return float(tau)


def cumulative_corrected(params: DiscoveryParams, tau: float) -> float:
    """Errors corrected per instruction after debugging for ``tau``.

    Rises from zero toward the saturation level ``eps0 / commands``.
    """
    tau = _check_tau(tau)
    return -(params.eps0 / params.commands) * math.expm1(-tau / params.tau0)


def residual_errors(params: DiscoveryParams, tau: float) -> float:
    """Errors remaining per instruction after debugging for ``tau``."""
    tau = _check_tau(tau)
    return (params.eps0 / params.commands) * math.exp(-tau / params.tau0)


def failure_probability(params: DiscoveryParams, tau: float, dt: float) -> float:
    """Probability of a failure within an operating window of length ``dt``.

    The window must be short enough that the rate-times-window product stays
    a probability; OutOfRange is raised otherwise.
    """
    tau = _check_tau(tau)
    if not (math.isfinite(dt) and dt >= 0.0):
        raise DomainError(f"operating window must be finite and non-negative, got {dt}")
    prob = residual_errors(params, tau) * params.tempo * dt
    if prob > 1.0:
        raise OutOfRange(
            f"rate-times-window product {prob} exceeds 1; shorten the window"
        )
    return prob


def mttf(params: DiscoveryParams, tau: float) -> float:
    """Mean operating time to failure after debugging for ``tau``.

    Grows exponentially in ``tau``: each time constant of debugging
    multiplies the expected life by e.
    """
    tau = _check_tau(tau)
    return params.commands / (params.eps0 * params.tempo) * math.exp(tau / params.tau0)


def total_cost(params: DiscoveryParams, econ: EconParams, tau: float) -> float:
    """Expected in-service failure losses plus debugging cost at ``tau``."""
    tau = _check_tau(tau)
    failure_losses = (
        econ.cost_error
        * econ.horizon
        * params.eps0
        * params.tempo
        / params.commands
        * math.exp(-tau / params.tau0)
    )
    return failure_losses + econ.cost_test * tau


class DebugOptimum(NamedTuple):
    tau_m: float
    cost: float
    boundary: bool


def optimal_debug_time(params: DiscoveryParams, econ: EconParams) -> DebugOptimum:
    """Debugging time that minimizes :func:`total_cost`.

    The stationary point is ``tau0 * ln(arg)`` with
    ``arg = cost_error * horizon * eps0 * tempo / (cost_test * commands * tau0)``.
    When ``arg`` is below one the stationary point would be negative, so the
    minimum sits at the boundary tau = 0 and the result is flagged.
    """
    arg = (
        econ.cost_error
        * econ.horizon
        * params.eps0
        * params.tempo
        / (econ.cost_test * params.commands * params.tau0)
    )
    if arg < 1.0:
        return DebugOptimum(0.0, total_cost(params, econ, 0.0), True)
    tau_m = params.tau0 * math.log(arg)
    return DebugOptimum(tau_m, total_cost(params, econ, tau_m), False)


def fit_discovery_curve(
    observations: Sequence[tuple[float, float]], commands: int
) -> tuple[float, float]:
    """Least-squares fit of (eps0, tau0) to cumulative corrected counts.

    ``observations`` is a sequence of (tau, cumulative corrected count)
    pairs at strictly increasing positive times with non-decreasing counts.
    For fixed tau0 the best eps0 is available in closed form, so only tau0
    is searched, over log space to cover [tau_min / 100, 100 * tau_max].

    Returns the fitted (eps0, tau0) pair, with eps0 in error counts (not
    per instruction).  Raises Underdetermined when fewer than three points
    or no variation in the counts is provided, and NoConvergence when the
    objective pins to an edge of the search range instead of an interior
    minimum.
    """
    if not (isinstance(commands, int) and commands >= 1):
        raise DomainError(f"commands must be an integer >= 1, got {commands}")
    obs = [(float(t), float(c)) for t, c in observations]
    if len(obs) < 3:
        raise Underdetermined(f"need at least 3 observations to fit two parameters, got {len(obs)}")
    prev_tau, prev_count = 0.0, 0.0
    for tau, count in obs:
        if not (math.isfinite(tau) and tau > 0.0 and tau > prev_tau):
            raise DomainError(f"observation times must be positive and strictly increasing, got {tau}")
        if not (math.isfinite(count) and count >= prev_count):
            raise DomainError(f"corrected counts must be non-decreasing, got {count}")
        prev_tau, prev_count = tau, count
    taus = np.array([t for t, _ in obs])
    counts = np.array([c for _, c in obs])
    if counts.max() == counts.min():
        raise Underdetermined("corrected counts show no variation, tau0 is not identifiable")

    def sse(log_tau0: float) -> float:
        growth = -np.expm1(-taus / math.exp(log_tau0))
        eps0 = float(counts @ growth) / float(growth @ growth)
        resid = counts - eps0 * growth
        return float(resid @ resid)

    lo = math.log(taus[0] / 100.0)
    hi = math.log(taus[-1] * 100.0)
    result = minimize_scalar(sse, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
    log_tau0 = float(result.x)
    if log_tau0 < lo + 1e-6 or log_tau0 > hi - 1e-6:
        raise NoConvergence(
            "no interior optimum for the discovery time constant within "
            f"[{math.exp(lo)}, {math.exp(hi)}]"
        )
    tau0 = math.exp(log_tau0)
    growth = -np.expm1(-taus / tau0)
    eps0 = float(counts @ growth) / float(growth @ growth)
    return eps0, tau0


def parse_discovery(text: str) -> list[tuple[float, float]]:
    """Parse ``tau,corrected`` CSV text into (time, cumulative count) pairs."""
    observations = []
    for row_number, fields in _data_rows(text, ("tau", "corrected")):
        tau = _parse_float(fields[0], row_number, "tau")
        corrected = _parse_float(fields[1], row_number, "corrected")
        observations.append((tau, corrected))
    return observations
