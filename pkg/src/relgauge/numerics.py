"""Numerical kernels used by the estimation modules.

Provides a bracketed scalar root finder (bisection with secant acceleration,
so convergence is guaranteed whenever the bracket is valid), a log-gamma
implementation accurate to about 1e-13 relative on the range the fitters
use, and the closed-form inverse of a symmetric 2x2 information matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .errors import DomainError, NonFinite, NoSignChange, SingularInformation

DEFAULT_TOL_REL = 1e-10

_MAX_ITER = 600
_WIDTH_FLOOR = 1e-30


@dataclass(frozen=True)
class Bracket:
    """Interval [lo, hi] expected to contain a sign change of the target function."""

    lo: float
    hi: float
    tol_rel: float = DEFAULT_TOL_REL

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise DomainError(f"bracket requires finite lo < hi, got [{self.lo}, {self.hi}]")
        if not (math.isfinite(self.tol_rel) and self.tol_rel > 0.0):
            raise DomainError(f"bracket tolerance must be positive, got {self.tol_rel}")


def _eval_checked(f: Callable[[float], float], x: float) -> float:
    y = f(x)
    if not math.isfinite(y):
        raise NonFinite(f"function evaluated to {y!r} at x={x!r}")
    return float(y)


def find_root_bracketed(f: Callable[[float], float], bracket: Bracket) -> float:
    """Return x in [lo, hi] with f(x) ~ 0, given a sign change over the bracket.

    Alternates secant estimates with plain bisection, so the interval width
    is guaranteed to halve at least every other iteration no matter how the
    function behaves.  Iteration stops once the residual has dropped below
    ``tol_rel`` times the larger endpoint residual and the interval is
    narrower than ``tol_rel`` relative to the root location.

    Raises NoSignChange if f has the same sign at both ends, and NonFinite
    if any evaluation produces NaN or infinity.
    """
    a, b = bracket.lo, bracket.hi
    fa = _eval_checked(f, a)
    if fa == 0.0:
        return a
    fb = _eval_checked(f, b)
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise NoSignChange(
            f"no sign change over bracket: f({a})={fa}, f({b})={fb}"
        )

    f_tol = bracket.tol_rel * max(abs(fa), abs(fb))
    best_x, best_f = (a, abs(fa)) if abs(fa) <= abs(fb) else (b, abs(fb))
    use_secant = False
    for _ in range(_MAX_ITER):
        width = b - a
        x = 0.5 * (a + b)
        if use_secant:
            # fb - fa cannot vanish here: the endpoints have opposite signs.
            s = b - fb * width / (fb - fa)
            # Accept the secant point only when it lands comfortably inside
            # the interval; otherwise keep the bisection midpoint.
            margin = 0.125 * width
            if a + margin < s < b - margin:
                x = s
        use_secant = not use_secant
        fx = _eval_checked(f, x)
        if abs(fx) < best_f:
            best_x, best_f = x, abs(fx)
        if fx == 0.0:
            return x
        if (fx > 0.0) == (fb > 0.0):
            b, fb = x, fx
        else:
            a, fa = x, fx
        narrow = (b - a) <= bracket.tol_rel * max(abs(best_x), _WIDTH_FLOOR)
        if best_f <= f_tol and narrow:
            return best_x
    return best_x


# Lanczos approximation, g = 7, nine coefficients.  Relative accuracy of the
# reconstructed gamma function is near machine precision over the range used
# here; the log form below is well under 1e-12 relative error on [0.5, 50].
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"log_gamma requires finite x > 0, got {x}")
    if x < 0.5:
        # Recurrence ln G(x) = ln G(x + 1) - ln x keeps the Lanczos series
        # on its accurate range.
        return log_gamma(x + 1.0) - math.log(x)
    series = _LANCZOS_COEFFS[0]
    for k in range(1, len(_LANCZOS_COEFFS)):
        series += _LANCZOS_COEFFS[k] / (x - 1.0 + k)
    t = x + _LANCZOS_G - 0.5
    return _HALF_LOG_TWO_PI + (x - 0.5) * math.log(t) - t + math.log(series)


@dataclass(frozen=True)
class Info2x2:
    """Symmetric observed-information matrix [[a11, a12], [a12, a22]]."""

    a11: float
    a12: float
    a22: float

    def __post_init__(self) -> None:
        for name in ("a11", "a12", "a22"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"information entry {name} must be finite")
        if self.a11 <= 0.0 or self.a22 <= 0.0:
            raise DomainError("information diagonal entries must be positive")


class InverseInfo(NamedTuple):
    var1: float
    var2: float
    cov: float


def invert_information(info: Info2x2) -> InverseInfo:
    """Invert a 2x2 information matrix, returning (var1, var2, cov).

    Raises SingularInformation when the determinant is not positive, which
    is exactly the condition under which the asymptotic variances do not
    exist.
    """
    det = info.a11 * info.a22 - info.a12 * info.a12
    if det <= 0.0:
        raise SingularInformation(
            f"information matrix is singular or indefinite (determinant {det})"
        )
    return InverseInfo(info.a22 / det, info.a11 / det, -info.a12 / det)
