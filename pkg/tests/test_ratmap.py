import numpy as np
import pytest

from holodyn import INF, RationalMap, aberth_roots, is_inf, spherical_distance
from conftest import random_rational_map


def test_eval_examples():
    f = RationalMap.quadratic(1j)
    assert f(1j) == pytest.approx(-1 + 1j)
    assert is_inf(f(INF))
    inv = RationalMap([1.0], [1.0, 0.0])
    assert is_inf(inv(0))
    assert inv(2.0) == pytest.approx(0.5)


def test_degree_with_common_factor():
    f = RationalMap([1, 0, 1, 0], [1, 0])  # (z^3 + z)/z -> z^2 + 1
    assert f.degree == 2
    assert f(1.0) == pytest.approx(2.0)
    assert f(0.0) == pytest.approx(1.0)  # the removable pole is gone


def test_degree_examples():
    assert RationalMap.quadratic(0.25).degree == 2
    with pytest.raises(ValueError):
        RationalMap([0.0])
    with pytest.raises(ValueError):
        RationalMap([2.0])  # constant


def test_eval_at_poles_and_large_arguments():
    f = RationalMap([1.0, 0.0], [1.0, -1.0])  # z/(z-1)
    assert is_inf(f(1.0))
    assert f(INF) == pytest.approx(1.0)
    assert f(1e200) == pytest.approx(1.0)


def test_critical_points_quadratic():
    crit = RationalMap.quadratic(0.3 + 0.1j).critical_points()
    pts = sorted(crit, key=lambda t: is_inf(t[0]))
    assert pts[0][0] == pytest.approx(0)
    assert pts[0][1] == 1
    assert is_inf(pts[1][0])
    assert pts[1][1] == 1


def test_critical_point_total_is_2d_minus_2(rng):
    for _ in range(40):
        f = random_rational_map(rng)
        total = sum(m for _, m in f.critical_points())
        assert total == 2 * f.degree - 2


def test_map_is_d_to_one(rng):
    for _ in range(100):
        f = random_rational_map(rng, max_degree=5)
        w = complex(*rng.normal(size=2))
        eq = np.polysub(f.p, w * f.q)
        roots = aberth_roots(eq)
        assert len(roots) == f.degree
        for r in roots:
            assert spherical_distance(f(complex(r)), w) < 1e-6


def test_spherical_derivative_examples():
    sq = RationalMap.quadratic(0)
    assert sq.spherical_derivative(1.0) == pytest.approx(2.0)
    assert sq.spherical_derivative(0.0) == 0.0
    inv = RationalMap([1.0], [1.0, 0.0])
    assert inv.spherical_derivative(1.0) == pytest.approx(1.0)


def test_spherical_derivative_chart_independence(rng):
    for _ in range(60):
        f = random_rational_map(rng)
        g = f.inverted()
        z = complex(*rng.normal(scale=1.5, size=2))
        if abs(z) < 1e-3:
            continue
        assert f.spherical_derivative(z) == pytest.approx(
            g.spherical_derivative(1 / z), abs=1e-10, rel=1e-8)


def test_compose_degree_and_values(rng):
    f = RationalMap.quadratic(-1)
    g = f.compose(f)
    assert g.degree == 4
    for _ in range(20):
        z = complex(*rng.normal(size=2))
        assert abs(g(z) - f(f(z))) < 1e-9 * (1 + abs(g(z)))


def test_is_polynomial():
    assert RationalMap.quadratic(1).is_polynomial()
    assert not RationalMap([1.0], [1.0, 0.0]).is_polynomial()
