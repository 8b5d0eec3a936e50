import cmath

import numpy as np
import pytest

from holodyn import RationalMap, expansion_integral, sphere_sample


def test_degree_power_identity_squaring():
    f = RationalMap.quadratic(0)
    assert expansion_integral(f, 1, 400000, seed=11) == pytest.approx(2.0, rel=0.02)
    assert expansion_integral(f, 2, 400000, seed=11) == pytest.approx(4.0, rel=0.03)


def test_degree_power_identity_basilica():
    f = RationalMap.quadratic(-1)
    assert expansion_integral(f, 1, 400000, seed=5) == pytest.approx(2.0, rel=0.02)


def test_deterministic_given_seed():
    f = RationalMap.quadratic(1j)
    a = expansion_integral(f, 2, 50000, seed=42)
    b = expansion_integral(f, 2, 50000, seed=42)
    assert a == b


def test_rotation_conjugation_invariance():
    # conjugating by a sphere rotation must not move the estimate beyond
    # Monte Carlo noise
    f = RationalMap.quadratic(-0.4 + 0.3j)
    a, b = 0.8 + 0.36j, 0.3 - 0.37j
    norm = (abs(a) ** 2 + abs(b) ** 2) ** 0.5
    a, b = a / norm, b / norm
    mob = RationalMap([a, b], [-b.conjugate(), a.conjugate()])
    mob_inv = RationalMap([a.conjugate(), -b], [b.conjugate(), a])
    conj = mob.compose(f.compose(mob_inv))
    v1 = expansion_integral(f, 1, 300000, seed=3)
    v2 = expansion_integral(conj, 1, 300000, seed=3)
    assert v1 == pytest.approx(v2, rel=0.05)
    assert v1 == pytest.approx(2.0, rel=0.03)


def test_sphere_sampling_is_uniform():
    idx = np.arange(200000, dtype=np.uint64)
    z = sphere_sample(9, idx)
    # cos(colatitude) should be uniform on (-1, 1)
    t = (1 - np.abs(z) ** 2) / (1 + np.abs(z) ** 2)
    hist, _ = np.histogram(t, bins=20, range=(-1, 1))
    assert hist.min() > 0.9 * len(z) / 20
    assert hist.max() < 1.1 * len(z) / 20
