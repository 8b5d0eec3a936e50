"""Monte Carlo estimate of the mean-square expansion of f^n on the sphere.

The integral of ||(f^n)'||^2 against the spherical area measure normalized
to total mass one equals d^n for a degree-d rational map; the estimator
samples the sphere uniformly with counter-based randomness and multiplies
spherical derivative norms along n-step orbits.

Vectorized orbits carry points in chart form (value, inverted-chart flag)
so poles and infinity never produce overflow.
"""

from __future__ import annotations

import math

import numpy as np

from .ratmap import RationalMap
from .rng import uniform01

__all__ = ["expansion_integral", "sphere_sample"]

_CHUNK = 1_000_000


def sphere_sample(seed: int, index) -> np.ndarray:
    """Uniform points on the sphere, stereographically projected to C.

    cos(theta) = 1 - 2*u1 is uniform on (-1, 1]; |z| = sqrt((1-t)/(1+t))
    puts z at colatitude theta from the z=0 pole; the azimuth is 2*pi*u2.
    """
    u1 = uniform01(seed, index, stream=0)
    u2 = uniform01(seed, index, stream=1)
    t = 1.0 - 2.0 * u1
    r = np.sqrt((1.0 - t) / (1.0 + t))
    phi = 2.0 * np.pi * u2
    return r * np.exp(1j * phi)


def _sigma_and_step(map_: RationalMap, coord, inv):
    """Spherical derivative at the sampled points and the next chart point.

    `coord` holds z when inv is False and 1/z when inv is True; the output
    uses whichever chart keeps |coordinate| <= 1.
    """
    sigma = np.empty(coord.shape, dtype=np.float64)
    new_coord = np.empty_like(coord)
    new_inv = np.empty(coord.shape, dtype=bool)
    for flag in (False, True):
        m = inv if flag else ~inv
        if not np.any(m):
            continue
        u = coord[m]
        a, b = map_.chart_pair(flag, False)
        av = np.polyval(a, u)
        bv = np.polyval(b, u)
        da = np.polyder(np.asarray(a, dtype=complex))
        db = np.polyder(np.asarray(b, dtype=complex))
        wv = np.polyval(da, u) * bv - av * np.polyval(db, u)
        denom = np.abs(av) ** 2 + np.abs(bv) ** 2
        sigma[m] = np.abs(wv) * (1.0 + np.abs(u) ** 2) / denom
        # Next point: value av/bv in the plain chart; switch chart if large.
        big = np.abs(av) > np.abs(bv)
        val = np.empty_like(av)
        np.divide(av, bv, out=val, where=~big)
        np.divide(bv, av, out=val, where=big)
        # av == bv == 0 cannot happen for a reduced map.
        new_coord[m] = val
        new_inv[m] = big
    return sigma, new_coord, new_inv


def expansion_integral(map_: RationalMap, n: int, samples: int, seed: int) -> float:
    """Monte Carlo mean of ||(f^n)'||^2 over the unit-mass sphere.

    Deterministic given the seed: sample i depends only on (seed, i), and
    partial sums are accumulated in fixed chunk order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    partials = []
    for start in range(0, samples, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, samples), dtype=np.uint64)
        z = sphere_sample(seed, idx)
        inv = np.abs(z) > 1.0
        coord = np.where(inv, 1.0 / np.where(z == 0, 1.0, z), z)
        total = np.ones(idx.shape, dtype=np.float64)
        for _ in range(n):
            sigma, coord, inv = _sigma_and_step(map_, coord, inv)
            total *= sigma
        partials.append(float(np.sum(total ** 2)))
    return math.fsum(partials) / samples
