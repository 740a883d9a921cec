"""Exception hierarchy shared by every module in the package.

Two families matter to callers: :class:`DataError` means the inputs were
malformed or out of range, :class:`EstimationError` means the inputs were
valid but no estimate could be produced from them.  The command line tool
maps the families to distinct exit codes.
"""

from __future__ import annotations


class RelgaugeError(Exception):
    """Base class for every error raised by this package."""


class DataError(RelgaugeError):
    """Input data is malformed, inconsistent, or outside the valid domain."""


class ParseError(DataError):
    """A structured input file could not be parsed.

    Carries the 1-based row number (header is row 1) when known.
    """

    def __init__(self, message: str, row: int | None = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class DomainError(DataError):
    """A value violates the mathematical domain of an operation."""


class NotMonotone(DataError):
    """A sequence that must be strictly increasing is not."""


class OutOfRange(DataError):
    """A derived quantity left its admissible range (for example a probability above 1)."""


class WeightSumMismatch(DataError):
    """Sampling weights do not sum to the required total."""


class ResidualNonPositive(DataError):
    """The implied count of remaining errors is zero or negative."""


class NoFailures(DataError):
    """A run log contains no failures, so no rate can be estimated.

    The accumulated exposure is carried so callers can still report it.
    """

    def __init__(self, message: str, exposure: float):
        super().__init__(message)
        self.exposure = exposure


class EstimationError(RelgaugeError):
    """A fit or solve failed even though the inputs were well formed."""


class NoSignChange(EstimationError):
    """A root bracket does not actually bracket a sign change."""


class NonFinite(EstimationError):
    """A function evaluated to NaN or infinity during iteration."""


class SingularInformation(EstimationError):
    """The observed information matrix is singular or indefinite."""


class NoConvergence(EstimationError):
    """An iterative procedure failed to locate a solution."""


class NoGrowthEvidence(EstimationError):
    """The failure record shows no reliability growth, so the model cannot be fit.

    ``diagnostic`` carries the observed trend statistic and the threshold it
    failed to exceed.
    """

    def __init__(self, message: str, diagnostic: dict[str, float] | None = None):
        super().__init__(message)
        self.diagnostic = dict(diagnostic or {})


class TooFewIntervals(EstimationError):
    """Not enough observations to determine the model parameters."""


class DegenerateGamma(EstimationError):
    """Two debugging periods show identical mean times, leaving the fit indeterminate."""


class NegativeEstimate(EstimationError):
    """A parameter that must be positive came out non-positive."""


class Underdetermined(EstimationError):
    """The data cannot distinguish the model parameters."""


class DegenerateSample(EstimationError):
    """A sample statistic required by the fit is degenerate (for example zero variance)."""
