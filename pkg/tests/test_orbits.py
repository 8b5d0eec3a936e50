import math

import pytest

from holodyn import (RationalMap, attracting_limit, iterate_orbit,
                     lyapunov_exponent, spherical_distance)


def test_superattracting_two_cycle():
    rec = iterate_orbit(RationalMap.quadratic(-1), 0.0, 1000)
    assert rec.verdict == "converged-to-cycle"
    assert rec.period == 2
    pts = sorted(p.real for p in rec.loop)
    assert pts == pytest.approx([-1.0, 0.0], abs=1e-9)


def test_landing_on_fixed_point_two():
    # c = -2: the critical orbit 0, -2, 2, 2, ... lands exactly
    rec = iterate_orbit(RationalMap.quadratic(-2), 0.0, 1000)
    assert rec.verdict == "converged-to-cycle"
    assert rec.period == 1
    assert rec.loop[0] == pytest.approx(2.0)


def test_escape():
    rec = iterate_orbit(RationalMap.quadratic(1), 0.0, 1000, escape_radius=2.0)
    assert rec.verdict == "escaped-to-attractor"
    assert rec.steps == 3  # orbit 0, 1, 2, 5


def test_stored_tail_is_consecutive():
    f = RationalMap.quadratic(0.21 + 0.05j)
    rec = iterate_orbit(f, 0.1, 500)
    for a, b in zip(rec.points, rec.points[1:]):
        assert spherical_distance(f(a), b) < 1e-10


def test_attracting_limit_fixed_point():
    cyc = attracting_limit(RationalMap.quadratic(0.1), 0.0, 10**5)
    assert cyc is not None and cyc.period == 1
    expected = (1 - math.sqrt(0.6)) / 2
    assert cyc.points[0] == pytest.approx(expected, abs=1e-10)
    assert cyc.multiplier == pytest.approx(1 - math.sqrt(0.6), abs=1e-9)
    assert cyc.cls == "attracting"


def test_attracting_limit_superattracting():
    cyc = attracting_limit(RationalMap.quadratic(0), 0.5, 10**4)
    assert cyc.period == 1
    assert cyc.points[0] == pytest.approx(0.0, abs=1e-9)
    assert cyc.cls == "superattracting"


def test_attracting_limit_escape_gives_none():
    assert attracting_limit(RationalMap.quadratic(0.26), 0.0, 10**5) is None


def test_lyapunov_superattracting_is_degenerate():
    lam = lyapunov_exponent(RationalMap.quadratic(0), 0.5, 2000)
    assert lam == -math.inf


def test_lyapunov_attracting_cycle_negative():
    lam = lyapunov_exponent(RationalMap.quadratic(-1 + 0.05j), 0.1, 5000, burn_in=100)
    assert lam < 0


def test_lyapunov_chebyshev_parameter():
    # c = -2 is semiconjugate to angle doubling; long-run mean is log 2
    lam = lyapunov_exponent(RationalMap.quadratic(-2), 0.3, 10**6, burn_in=100)
    assert lam == pytest.approx(math.log(2), abs=0.05)
