"""Structural reliability estimation from input-profile runs (Nelson model).

Each test run draws inputs from a probability profile over N input sets;
an input set either triggers a failure (indicator 1) or not.  The failure
probability of run j is the profile-weighted indicator sum Q_j, reliability
over n runs is the product of survival probabilities, and a per-run failure
rate falls out of the exponential form of that product.  A simplified
weighted estimator and a partitioned single-run form are also provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, ParseError, WeightSumMismatch
from .failure_data import _data_rows, _parse_float, _parse_int

_SUM_TOL = 1e-9


@dataclass(frozen=True)
class RunProfile:
    """Input-set probabilities and failure indicators for one run."""

    probs: tuple[float, ...]
    indicators: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.probs) != len(self.indicators) or not self.probs:
            raise DomainError("probs and indicators must be non-empty and of equal length")
        for p in self.probs:
            if not (math.isfinite(p) and p >= 0.0):
                raise DomainError(f"profile probabilities must be non-negative, got {p}")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > _SUM_TOL:
            raise DomainError(f"profile probabilities must sum to 1, got {total}")
        for y in self.indicators:
            if y not in (0, 1):
                raise DomainError(f"failure indicators must be 0 or 1, got {y}")


@dataclass(frozen=True)
class PartitionSpec:
    """Disjoint input-domain paths with their hit probabilities and error rates."""

    path_probs: tuple[float, ...]
    path_error_rates: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.path_probs) != len(self.path_error_rates) or not self.path_probs:
            raise DomainError("path lists must be non-empty and of equal length")
        for p in self.path_probs:
            if not (math.isfinite(p) and p >= 0.0):
                raise DomainError(f"path probabilities must be non-negative, got {p}")
        if math.fsum(self.path_probs) > 1.0 + _SUM_TOL:
            raise DomainError("path probabilities must not sum above 1")
        for e in self.path_error_rates:
            if not (math.isfinite(e) and 0.0 <= e < 1.0):
                raise DomainError(f"path error rates must lie in [0, 1), got {e}")


def run_failure_prob(profile: RunProfile) -> float:
    """Failure probability of one run: profile mass on failing input sets."""
    q = math.fsum(p * y for p, y in zip(profile.probs, profile.indicators))
    return min(1.0, max(0.0, q))


def reliability_n(qs: Sequence[float]) -> float:
    """Product-form reliability over runs with failure probabilities ``qs``.

    Evaluated as exp(sum(log1p(-q))) so that many near-zero factors do not
    lose precision.  A certain failure (some q = 1) yields 0.0; callers that
    need to flag that case can test for it directly.
    """
    for q in qs:
        if not (math.isfinite(q) and 0.0 <= q <= 1.0):
            raise DomainError(f"run failure probabilities must lie in [0, 1], got {q}")
    if any(q == 1.0 for q in qs):
        return 0.0
    return math.exp(math.fsum(math.log1p(-q) for q in qs))


def failure_rate(q: float, dt: float) -> float:
    """Constant rate reproducing failure probability ``q`` over duration ``dt``."""
    if not (math.isfinite(q) and 0.0 <= q < 1.0):
        raise DomainError(f"failure probability must lie in [0, 1), got {q}")
    if not (math.isfinite(dt) and dt > 0.0):
        raise DomainError(f"run duration must be positive, got {dt}")
    return -math.log1p(-q) / dt


def simplified_reliability(error_free: Sequence[int], weights: Sequence[float]) -> float:
    """Weighted fraction of error-free runs: (1/N) * sum(E_i * W_i).

    Weights must sum to the number of runs (they reweight a non-representative
    run mix back to the operational profile); WeightSumMismatch otherwise.
    """
    n = len(error_free)
    if n == 0 or len(weights) != n:
        raise DomainError("need equally many indicators and weights, at least one each")
    for e in error_free:
        if e not in (0, 1):
            raise DomainError(f"error-free indicators must be 0 or 1, got {e}")
    for w in weights:
        if not (math.isfinite(w) and w >= 0.0):
            raise DomainError(f"weights must be non-negative, got {w}")
    total = math.fsum(weights)
    if abs(total - n) > _SUM_TOL:
        raise WeightSumMismatch(f"weights sum to {total}, expected the run count {n}")
    return math.fsum(e * w for e, w in zip(error_free, weights)) / n


def partitioned_single_run(spec: PartitionSpec) -> float:
    """Single-run reliability 1 - sum(p_j * eps_j) over disjoint input paths."""
    failure_mass = math.fsum(
        p * e for p, e in zip(spec.path_probs, spec.path_error_rates)
    )
    return min(1.0, max(0.0, 1.0 - failure_mass))


def parse_profiles(text: str) -> list[RunProfile]:
    """Parse profile CSV text into per-run profiles.

    Two layouts are accepted: header ``p,y`` for a single run, or
    ``run,p,y`` where consecutive rows sharing a run id form one profile
    (ids must be grouped; order of first appearance is preserved).
    """
    first_line = text.splitlines()[0] if text.splitlines() else ""
    has_run_column = first_line.strip().lower().startswith("run")
    groups: dict[int, tuple[list[float], list[int]]] = {}
    order: list[int] = []
    if has_run_column:
        for row_number, fields in _data_rows(text, ("run", "p", "y")):
            run_id = _parse_int(fields[0], row_number, "run")
            p = _parse_float(fields[1], row_number, "p")
            y = _parse_int(fields[2], row_number, "y")
            if run_id not in groups:
                groups[run_id] = ([], [])
                order.append(run_id)
            groups[run_id][0].append(p)
            groups[run_id][1].append(y)
    else:
        groups[0] = ([], [])
        order.append(0)
        for row_number, fields in _data_rows(text, ("p", "y")):
            p = _parse_float(fields[0], row_number, "p")
            y = _parse_int(fields[1], row_number, "y")
            groups[0][0].append(p)
            groups[0][1].append(y)
    if not groups[order[0]][0]:
        raise ParseError("profile file contains no data rows", row=2)
    return [RunProfile(tuple(groups[r][0]), tuple(groups[r][1])) for r in order]


def parse_weights(text: str) -> list[float]:
    """Parse single-column ``weight`` CSV text."""
    weights = []
    for row_number, (token,) in _data_rows(text, ("weight",)):
        weights.append(_parse_float(token, row_number, "weight"))
    return weights
