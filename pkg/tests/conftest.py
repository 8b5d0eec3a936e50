"""Shared test helpers."""

import numpy as np
import pytest

from holodyn import RationalMap


def random_rational_map(rng, max_degree=4):
    """A random rational map of degree 2..max_degree with O(1) coefficients."""
    while True:
        d = int(rng.integers(2, max_degree + 1))
        p = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
        q = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
        try:
            f = RationalMap(p, q)
        except ValueError:
            continue
        if f.degree == d:
            return f


def hausdorff_pixels(a, b):
    """Hausdorff distance (in pixels) between two boolean masks."""
    pa = np.argwhere(a)
    pb = np.argwhere(b)
    if len(pa) == 0 or len(pb) == 0:
        return np.inf

    def directed(x, y):
        worst = 0.0
        for chunk in np.array_split(x, max(1, len(x) // 512)):
            d = np.sqrt(((chunk[:, None, :] - y[None, :, :]) ** 2).sum(axis=2))
            worst = max(worst, float(d.min(axis=1).max()))
        return worst

    return max(directed(pa, pb), directed(pb, pa))


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
