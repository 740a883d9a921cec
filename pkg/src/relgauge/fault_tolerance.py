"""Planning double-execution fault tolerance for a long computation.

A computation of total length T is cut into modules of length t.  Every
module is executed until two runs of it have succeeded (results are only
trusted when two executions agree), and each module completion costs a
bookkeeping overhead ``a``.  With failures arriving at rate ``lam`` the
single-execution success probability of one module is
``p1 = exp(-lam * t)``, the number of executions needed by one module
follows ``P(i) = (i - 1) * p1^2 * (1 - p1)^(i - 2)`` for i >= 2, and the
expected wall time of the whole computation is

    Tp(t) = 2 * T * exp(lam * t) + T * a / t.

Short modules waste overhead, long modules waste rework; the planner picks
the module length minimizing the expected total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .numerics import Bracket, find_root_bracketed


@dataclass(frozen=True)
class DualRunConfig:
    """Double-execution planning inputs.

    total_time
        Length T of one full pass over the computation.
    overhead
        Comparison and checkpoint cost a paid once per module.
    failure_rate
        Failure intensity lam of a single execution.
    k_results
        Optional count of intermediate results per module, carried for
        reporting only.
    """

    total_time: float
    overhead: float
    failure_rate: float
    k_results: int | None = None

    def __post_init__(self) -> None:
        for name in ("total_time", "overhead", "failure_rate"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be positive, got {value}")
        if self.k_results is not None and not (
            isinstance(self.k_results, int) and self.k_results >= 1
        ):
            raise DomainError(f"k_results must be a positive integer, got {self.k_results}")


@dataclass(frozen=True)
class DualRunPlan:
    """Chosen module length and the performance it implies."""

    t_star: float
    module_count: float
    tp_min: float
    p1_at_t: float
    boundary: bool


def rerun_probability(p1: float, i: int) -> float:
    """Probability that a module needs exactly ``i`` executions.

    The i-th execution is the second success, so the first i - 1 executions
    hold exactly one success: ``(i - 1) * p1^2 * (1 - p1)^(i - 2)``.
    """
    if not (math.isfinite(p1) and 0.0 < p1 <= 1.0):
        raise DomainError(f"success probability must be in (0, 1], got {p1}")
    if not (isinstance(i, int) and i >= 2):
        raise DomainError(f"execution count must be an integer >= 2, got {i}")
    return (i - 1) * p1 * p1 * (1.0 - p1) ** (i - 2)


def expected_executions(p1: float) -> float:
    """Mean executions per module until two successes: ``2 / p1``."""
    if not (math.isfinite(p1) and 0.0 < p1 <= 1.0):
        raise DomainError(f"success probability must be in (0, 1], got {p1}")
    return 2.0 / p1


def success_probability(config: DualRunConfig, t: float) -> float:
    """Probability that a single execution of a length-``t`` module succeeds."""
    if not (math.isfinite(t) and 0.0 < t <= config.total_time):
        raise DomainError(
            f"module length must lie in (0, {config.total_time}], got {t}"
        )
    return math.exp(-config.failure_rate * t)


def total_time(config: DualRunConfig, t: float) -> float:
    """Expected wall time of the computation with module length ``t``."""
    p1 = success_probability(config, t)
    executions = config.total_time / t * expected_executions(p1)
    return executions * t + config.total_time * config.overhead / t


def optimal_module_time(config: DualRunConfig) -> DualRunPlan:
    """Module length minimizing :func:`total_time`.

    The stationary condition is ``2 * lam * t^2 * exp(lam * t) = a``.  Its
    left side increases from zero, so either a unique interior root exists
    in (0, T] or the expected time is still decreasing at t = T, in which
    case the plan sits on the boundary t = T and is flagged.
    """
    T, a, lam = config.total_time, config.overhead, config.failure_rate

    def stationarity(t: float) -> float:
        return 2.0 * lam * t * t * math.exp(lam * t) - a

    if stationarity(T) <= 0.0:
        t_star, boundary = T, True
    else:
        bracket = Bracket(T * 1e-15, T, tol_rel=1e-12)
        t_star, boundary = find_root_bracketed(stationarity, bracket), False
    return DualRunPlan(
        t_star=t_star,
        module_count=T / t_star,
        tp_min=total_time(config, t_star),
        p1_at_t=success_probability(config, t_star),
        boundary=boundary,
    )


class SimulationResult(NamedTuple):
    mean_executions: float
    histogram: dict[int, int]
    elapsed: float


def simulate_dual_execution(
    config: DualRunConfig, t: float, modules: int, seed: int
) -> SimulationResult:
    """Simulate every module's executions until two of them succeed.

    Each execution of a module succeeds independently with probability
    ``p1(t)``; a module completes at the second success.  The number of
    trials to the second success is the sum of two independent geometric
    draws, which is how each module is sampled.  Results are deterministic
    for a fixed seed.

    Returns the sample mean executions per module, a histogram of execution
    counts, and the elapsed time ``t * total_executions + a * modules``.
    """
    if not (isinstance(modules, int) and modules >= 1):
        raise DomainError(f"module count must be a positive integer, got {modules}")
    p1 = success_probability(config, t)
    rng = np.random.default_rng(seed)
    executions = rng.geometric(p1, size=modules) + rng.geometric(p1, size=modules)
    values, counts = np.unique(executions, return_counts=True)
    histogram = {int(v): int(c) for v, c in zip(values, counts)}
    total = int(executions.sum())
    return SimulationResult(
        mean_executions=total / modules,
        histogram=histogram,
        elapsed=float(t * total + config.overhead * modules),
    )
