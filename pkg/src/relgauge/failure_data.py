"""Failure observations and the CSV formats they travel in.

Three record shapes cover every estimator in the package: per-run outcome
logs, cumulative failure epochs, and per-debugging-period counts.  Parsers
report the offending 1-based row (the header is row 1) so bad files can be
fixed without guesswork.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

from .errors import DomainError, NoFailures, NotMonotone, ParseError


class Outcome(Enum):
    SUCCESS = "success"
    FAILURE = "failure"


@dataclass(frozen=True)
class RunRecord:
    """One test run: how long it ran and whether it failed."""

    duration: float
    outcome: Outcome

    def __post_init__(self) -> None:
        if not (math.isfinite(self.duration) and self.duration > 0.0):
            raise DomainError(f"run duration must be finite and positive, got {self.duration}")
        if not isinstance(self.outcome, Outcome):
            raise DomainError(f"outcome must be an Outcome value, got {self.outcome!r}")


@dataclass(frozen=True)
class RunLog:
    """An ordered collection of test runs."""

    runs: tuple[RunRecord, ...]

    @property
    def total_runs(self) -> int:
        return len(self.runs)

    @property
    def failure_count(self) -> int:
        return sum(1 for r in self.runs if r.outcome is Outcome.FAILURE)


@dataclass(frozen=True)
class RunSummary:
    """Exposure-based rate summary of a run log."""

    exposure: float
    lambda_hat: float
    t_hat: float


@dataclass(frozen=True)
class FailureEpochs:
    """Cumulative failure times, strictly increasing and positive."""

    epochs: tuple[float, ...]

    def __post_init__(self) -> None:
        prev = 0.0
        for i, t in enumerate(self.epochs):
            if not (math.isfinite(t) and t > 0.0):
                raise DomainError(f"epoch {i + 1} must be finite and positive, got {t}")
            if t <= prev:
                raise NotMonotone(
                    f"epochs must be strictly increasing: epoch {i + 1} is {t} after {prev}"
                )
            prev = t


@dataclass(frozen=True)
class DebugPeriod:
    """One debugging period: elapsed debug time, corrections so far, test exposure, failures seen."""

    tau: float
    corrected: int
    exposure: float
    failures: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tau) and self.tau >= 0.0):
            raise DomainError(f"debug time must be finite and non-negative, got {self.tau}")
        if not (isinstance(self.corrected, int) and self.corrected >= 0):
            raise DomainError(f"corrected count must be a non-negative integer, got {self.corrected}")
        if not (math.isfinite(self.exposure) and self.exposure > 0.0):
            raise DomainError(f"exposure must be finite and positive, got {self.exposure}")
        if not (isinstance(self.failures, int) and self.failures >= 0):
            raise DomainError(f"failure count must be a non-negative integer, got {self.failures}")


def _data_rows(text: str, expected_header: Sequence[str]) -> Iterator[tuple[int, list[str]]]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(f"empty input, expected header {','.join(expected_header)!r}", row=1) from None
    normalized = [h.strip().lower() for h in header]
    if normalized != list(expected_header):
        raise ParseError(
            f"expected header {','.join(expected_header)!r}, got {','.join(header)!r}", row=1
        )
    for row_number, row in enumerate(reader, start=2):
        if not row or all(not field.strip() for field in row):
            continue
        if len(row) != len(expected_header):
            raise ParseError(
                f"expected {len(expected_header)} fields, got {len(row)}", row=row_number
            )
        yield row_number, [field.strip() for field in row]


def _parse_float(token: str, row: int, name: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"could not parse {name} from {token!r}", row=row) from None


def _parse_int(token: str, row: int, name: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"could not parse {name} from {token!r}", row=row) from None


def parse_run_log(text: str) -> RunLog:
    """Parse ``duration,outcome`` CSV text into a RunLog.

    Outcome tokens are matched case-insensitively.  Raises ParseError for
    structural problems and DomainError (with the row number) for values
    outside the domain.
    """
    runs: list[RunRecord] = []
    for row_number, (duration_token, outcome_token) in _data_rows(text, ("duration", "outcome")):
        duration = _parse_float(duration_token, row_number, "duration")
        if not (math.isfinite(duration) and duration > 0.0):
            raise DomainError(f"row {row_number}: run duration must be positive, got {duration}")
        token = outcome_token.lower()
        try:
            outcome = Outcome(token)
        except ValueError:
            raise DomainError(f"row {row_number}: unknown outcome token {outcome_token!r}") from None
        runs.append(RunRecord(duration, outcome))
    return RunLog(tuple(runs))


def serialize_run_log(log: RunLog) -> str:
    lines = ["duration,outcome"]
    lines.extend(f"{r.duration!r},{r.outcome.value}" for r in log.runs)
    return "\n".join(lines) + "\n"


def parse_failure_epochs(text: str) -> FailureEpochs:
    """Parse single-column ``epoch`` CSV text into validated FailureEpochs."""
    epochs: list[float] = []
    for row_number, (token,) in _data_rows(text, ("epoch",)):
        epochs.append(_parse_float(token, row_number, "epoch"))
    return FailureEpochs(tuple(epochs))


def serialize_failure_epochs(epochs: FailureEpochs) -> str:
    lines = ["epoch"]
    lines.extend(f"{t!r}" for t in epochs.epochs)
    return "\n".join(lines) + "\n"


def parse_debug_periods(text: str) -> list[DebugPeriod]:
    """Parse ``tau,corrected,exposure,failures`` CSV text into DebugPeriod records."""
    periods: list[DebugPeriod] = []
    for row_number, fields in _data_rows(text, ("tau", "corrected", "exposure", "failures")):
        tau = _parse_float(fields[0], row_number, "tau")
        corrected = _parse_int(fields[1], row_number, "corrected")
        exposure = _parse_float(fields[2], row_number, "exposure")
        failures = _parse_int(fields[3], row_number, "failures")
        try:
            periods.append(DebugPeriod(tau, corrected, exposure, failures))
        except DomainError as exc:
            raise DomainError(f"row {row_number}: {exc}") from None
    return periods


def serialize_debug_periods(periods: Sequence[DebugPeriod]) -> str:
    lines = ["tau,corrected,exposure,failures"]
    lines.extend(f"{p.tau!r},{p.corrected},{p.exposure!r},{p.failures}" for p in periods)
    return "\n".join(lines) + "\n"


def summarize_runs(log: RunLog) -> RunSummary:
    """Turn a run log into exposure, failure rate, and mean time to failure.

    The rate is failures over total exposure; its reciprocal is the mean
    time to failure.  Raises NoFailures (carrying the exposure) when the log
    records no failures at all, and DomainError for an empty log.
    """
    if not log.runs:
        raise DomainError("cannot summarize an empty run log")
    exposure = math.fsum(r.duration for r in log.runs)
    failures = log.failure_count
    if failures == 0:
        raise NoFailures(
            f"no failures in {log.total_runs} runs over exposure {exposure}", exposure=exposure
        )
    lambda_hat = failures / exposure
    return RunSummary(exposure=exposure, lambda_hat=lambda_hat, t_hat=exposure / failures)


def intervals_from_epochs(epochs: FailureEpochs) -> list[float]:
    """Difference cumulative failure epochs into inter-failure intervals.

    The first interval is measured from time zero.  The cumulative sum of
    the result reproduces the epochs.
    """
    out: list[float] = []
    prev = 0.0
    for t in epochs.epochs:
        out.append(t - prev)
        prev = t
    return out
