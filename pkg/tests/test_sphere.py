import math

import numpy as np
import pytest

from holodyn import INF, as_point, chordal, is_inf, points_equal, spherical_distance


def test_antipodal_and_basic_values():
    assert spherical_distance(0, INF) == pytest.approx(math.pi)
    assert spherical_distance(1, 1) == 0.0
    assert spherical_distance(0, 1) == pytest.approx(math.pi / 2)
    assert spherical_distance(0, 1j) == pytest.approx(math.pi / 2)


def test_symmetry_and_triangle_inequality(rng):
    pts = [complex(a, b) for a, b in rng.normal(scale=3.0, size=(40, 2))]
    pts += [INF, 0j]
    for _ in range(300):
        p, q, r = (pts[i] for i in rng.integers(0, len(pts), size=3))
        dpq = spherical_distance(p, q)
        assert dpq == pytest.approx(spherical_distance(q, p), abs=1e-14)
        assert dpq <= spherical_distance(p, r) + spherical_distance(r, q) + 1e-12


def test_inversion_is_isometry(rng):
    for _ in range(100):
        p = complex(*rng.normal(scale=2.0, size=2))
        q = complex(*rng.normal(scale=2.0, size=2))
        if p == 0 or q == 0:
            continue
        assert spherical_distance(p, q) == pytest.approx(
            spherical_distance(1 / p, 1 / q), abs=1e-12)


def test_no_overflow_for_huge_points():
    assert spherical_distance(1e300, INF) < 1e-12
    assert spherical_distance(1e200, -1e200) == pytest.approx(0.0, abs=1e-150)
    assert chordal(1e300, 0) == pytest.approx(2.0)


def test_as_point():
    assert as_point(2) == 2 + 0j
    assert is_inf(as_point(INF))
    assert is_inf(as_point(complex(math.inf, 0)))
    with pytest.raises(ValueError):
        as_point(complex(math.nan, 0))


def test_points_equal_tolerance():
    assert points_equal(1.0, 1.0 + 1e-12)
    assert not points_equal(1.0, 1.0 + 1e-6)
