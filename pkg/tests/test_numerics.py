"""Tests for the shared numerical kernels."""

import math

import numpy as np
import pytest

from relgauge.errors import DomainError, NonFinite, NoSignChange, SingularInformation
from relgauge.numerics import (
    Bracket,
    Info2x2,
    find_root_bracketed,
    invert_information,
    log_gamma,
)


def bisect_oracle(f, lo, hi, tol=1e-10):
    """Plain bisection, kept independent of the implementation under test."""
    flo = f(lo)
    assert flo * f(hi) < 0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if f(lo) * fmid <= 0:
            hi = mid
        else:
            lo = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def test_root_of_quadratic():
    root = find_root_bracketed(lambda x: x * x - 4.0, Bracket(0.0, 3.0))
    assert abs(root - 2.0) < 1e-9


def test_root_of_log():
    root = find_root_bracketed(math.log, Bracket(0.5, 2.0))
    assert abs(root - 1.0) < 1e-9


def test_root_of_module_time_equation():
    # 2*0.001*t^2*e^(0.001 t) = 1 has its root near 22.11; the oracle is a
    # plain bisection loop written independently above.
    def f(t):
        return 2.0 * 0.001 * t * t * math.exp(0.001 * t) - 1.0

    oracle = bisect_oracle(f, 1.0, 100.0)
    root = find_root_bracketed(f, Bracket(1.0, 100.0))
    assert abs(root - oracle) < 1e-7
    assert abs(root - 22.11) < 0.01


def test_root_endpoint_hits():
    assert find_root_bracketed(lambda x: x, Bracket(0.0, 1.0)) == 0.0
    assert find_root_bracketed(lambda x: x - 1.0, Bracket(0.0, 1.0)) == 1.0


def test_no_sign_change_raises():
    with pytest.raises(NoSignChange):
        find_root_bracketed(lambda x: x * x + 1.0, Bracket(-1.0, 1.0))


def test_non_finite_raises():
    def f(x):
        if x < 0.5:
            return -1.0
        if x > 2.5:
            return 1.0
        return float("nan")

    with pytest.raises(NonFinite):
        find_root_bracketed(f, Bracket(0.0, 3.0))


def test_bracket_validation():
    with pytest.raises(DomainError):
        Bracket(2.0, 1.0)
    with pytest.raises(DomainError):
        Bracket(0.0, 1.0, tol_rel=0.0)


def test_root_residual_property_on_random_cubics():
    """For any polynomial with a verified sign change, the returned root keeps
    |f(root)| below tol_rel times the larger endpoint residual and stays
    inside the bracket."""
    rng = np.random.default_rng(20240817)
    checked = 0
    while checked < 50:
        coeffs = rng.uniform(-3.0, 3.0, size=4)

        def f(x):
            return ((coeffs[0] * x + coeffs[1]) * x + coeffs[2]) * x + coeffs[3]

        lo, hi = sorted(rng.uniform(-5.0, 5.0, size=2))
        if hi - lo < 1e-3 or f(lo) * f(hi) >= 0:
            continue
        tol = 1e-10
        root = find_root_bracketed(f, Bracket(lo, hi, tol_rel=tol))
        assert lo <= root <= hi
        assert abs(f(root)) <= tol * max(abs(f(lo)), abs(f(hi))) + 1e-300
        checked += 1


def test_log_gamma_small_integers():
    assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-13)
    assert log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-13)
    assert log_gamma(1.5) == pytest.approx(math.log(math.sqrt(math.pi) / 2.0), abs=1e-13)


def test_log_gamma_against_stdlib():
    # math.lgamma is an independent implementation; 1e-12 relative over the
    # working range, absolute near the zeros of ln Gamma.
    for i in range(1001):
        x = 0.5 + i * (49.5 / 1000.0)
        expected = math.lgamma(x)
        assert log_gamma(x) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_log_gamma_recurrence():
    for i in range(500):
        x = 0.5 + i * (19.5 / 499.0)
        assert abs(log_gamma(x + 1.0) - log_gamma(x) - math.log(x)) <= 1e-12


def test_log_gamma_below_half():
    for x in (0.05, 0.2, 0.49):
        assert log_gamma(x) == pytest.approx(math.lgamma(x), rel=1e-12)


def test_log_gamma_domain():
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(DomainError):
        log_gamma(-2.0)


def test_invert_identity():
    inv = invert_information(Info2x2(1.0, 0.0, 1.0))
    assert (inv.var1, inv.var2, inv.cov) == (1.0, 1.0, 0.0)


def test_invert_diagonal():
    inv = invert_information(Info2x2(4.0, 0.0, 1.0))
    assert (inv.var1, inv.var2, inv.cov) == (0.25, 1.0, 0.0)


def test_invert_singular():
    with pytest.raises(SingularInformation):
        invert_information(Info2x2(1.0, 1.0, 1.0))


def test_invert_round_trip_random():
    """J times its reported inverse is the identity to 1e-12 whenever the
    determinant is comfortably positive."""
    rng = np.random.default_rng(7)
    for _ in range(50):
        ell = np.array([[rng.uniform(0.5, 2.0), 0.0], [rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0)]])
        j = ell @ ell.T
        info = Info2x2(a11=float(j[0, 0]), a12=float(j[0, 1]), a22=float(j[1, 1]))
        det = info.a11 * info.a22 - info.a12**2
        if det <= 1e-9:
            continue
        inv = invert_information(info)
        matrix = np.array([[info.a11, info.a12], [info.a12, info.a22]])
        inverse = np.array([[inv.var1, inv.cov], [inv.cov, inv.var2]])
        np.testing.assert_allclose(matrix @ inverse, np.eye(2), atol=1e-12)


def test_info_validation():
    with pytest.raises(DomainError):
        Info2x2(0.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        Info2x2(1.0, 0.0, -1.0)
