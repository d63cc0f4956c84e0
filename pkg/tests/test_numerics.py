import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscatlas.errors import BadParams, DomainError, PoleError
from oscatlas.numerics import RealInterval, gamma, lambert_w0, lambert_w0_prime, parse_sign


def _bisect_w(y, lo, hi):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * math.exp(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_gamma_known_values():
    assert gamma(1) == pytest.approx(1.0, abs=1e-15)
    assert abs(gamma(0.5) - 1.7724538509055160) < 1e-15
    # mpmath at 30 digits as an independent reference
    ref = complex(mpmath.gamma(mpmath.mpf(1) / 3))
    assert abs(gamma(1 / 3) - ref) / abs(ref) < 1e-14


@pytest.mark.parametrize("z", [0, -1, -2, -7, -1 + 1e-13])
def test_gamma_poles(z):
    with pytest.raises(PoleError):
        gamma(z)


def test_gamma_near_pole_is_finite():
    assert np.isfinite(abs(gamma(-1 + 1e-9)))


finite_z = st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False)


@settings(max_examples=300, deadline=None)
@given(finite_z)
def test_gamma_matches_mpmath(z):
    if abs(z.imag) < 1e-3 and z.real < 0.5 and abs(z.real - round(z.real)) < 1e-3:
        return
    ref = complex(mpmath.gamma(mpmath.mpc(z.real, z.imag)))
    if not math.isfinite(abs(ref)) or abs(ref) > 1e300 or abs(ref) < 1e-300:
        return
    assert abs(gamma(z) - ref) <= 1e-13 * abs(ref)


@settings(max_examples=200, deadline=None)
@given(finite_z)
def test_gamma_recurrence(z):
    if abs(z) > 45 or (abs(z.imag) < 1e-3 and z.real < 0.5 and abs(z.real - round(z.real)) < 1e-3):
        return
    g1 = gamma(z + 1)
    if not 1e-250 < abs(g1) < 1e250:
        return
    assert abs(g1 - z * gamma(z)) <= 1e-12 * abs(g1)


@pytest.mark.parametrize("x", np.linspace(-4.95, 4.95, 67))
def test_gamma_reflection(x):
    if abs(x - round(x)) < 1e-6:
        return
    lhs = gamma(x) * gamma(1 - x)
    rhs = math.pi / math.sin(math.pi * x)
    assert abs(lhs - rhs) <= 1e-11 * abs(rhs)


def test_lambert_examples():
    assert lambert_w0(0.0) == 0.0
    assert lambert_w0(math.e) == pytest.approx(1.0, rel=1e-15)
    assert abs(lambert_w0(1.0) - _bisect_w(1.0, 0.0, 1.0)) < 1e-15
    assert abs(lambert_w0(1.0) - 0.5671432904097838) < 1e-15


def test_lambert_branch_point_and_domain():
    assert lambert_w0(-1 / math.e) == pytest.approx(-1.0, abs=1e-7)
    assert lambert_w0(-1 / math.e - 1e-16) >= -1.0
    with pytest.raises(DomainError):
        lambert_w0(-0.5)


def test_lambert_residual_log_grid():
    ys = np.concatenate([-1 / math.e + np.geomspace(1e-6, 1 / math.e, 60),
                         np.geomspace(1e-12, 1e6, 120)])
    for y in ys:
        w = lambert_w0(y)
        assert abs(w * math.exp(w) - y) <= 1e-13 * max(1.0, abs(y)) or \
            abs(w * math.exp(w) - y) <= 1e-13 * abs(y)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1 / math.e + 1e-9, 1e8), st.floats(0, 1e3))
def test_lambert_monotone(y, dy):
    assert lambert_w0(y + dy) >= lambert_w0(y)


@pytest.mark.parametrize("y", [-0.2, 0.0, 0.3, 2.0, 50.0])
def test_lambert_derivative(y):
    h = 1e-6
    fd = (lambert_w0(y + h) - lambert_w0(y - h)) / (2 * h)
    assert lambert_w0_prime(y) == pytest.approx(fd, rel=1e-7)


def test_parse_sign_and_interval():
    assert parse_sign("+") == 1 and parse_sign("minus") == -1 and parse_sign(-1) == -1
    with pytest.raises(BadParams):
        parse_sign("?")
    assert RealInterval(1.0, 3.0).length == 2.0
    with pytest.raises(DomainError):
        RealInterval(2.0, 1.0)


def test_complex_polar_round_trip():
    for z in [1 + 2j, -3.5 + 1e-3j, 1e-8 - 4j]:
        r, th = cmath.polar(gamma(z))
        assert abs(cmath.rect(r, th) - gamma(z)) <= 1e-14 * abs(gamma(z))
