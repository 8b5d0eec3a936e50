"""Points and the spherical metric on the Riemann sphere.

Finite points are plain ``complex`` numbers; the point at infinity is the
module singleton ``INF``.  Distances are great-circle distances on the unit
2-sphere under stereographic projection, so d(0, z) = 2*atan(|z|) and
d(0, INF) = pi.
"""

from __future__ import annotations

import math
from typing import Union

__all__ = [
    "EQ_TOL",
    "INF",
    "Infinity",
    "SpherePoint",
    "as_point",
    "chordal",
    "is_inf",
    "points_equal",
    "spherical_distance",
]

# Default point-equality tolerance, as a spherical distance.
EQ_TOL = 1e-9


class Infinity:
    """The point at infinity (singleton, hashable)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = Infinity()

SpherePoint = Union[complex, Infinity]


def is_inf(p) -> bool:
    return isinstance(p, Infinity)


def as_point(z) -> SpherePoint:
    """Coerce a number to a sphere point; huge/non-finite floats map to INF."""
    if is_inf(z):
        return INF
    z = complex(z)
    if math.isnan(z.real) or math.isnan(z.imag):
        raise ValueError("NaN is not a point on the sphere")
    if math.isinf(z.real) or math.isinf(z.imag):
        return INF
    return z


def chordal(p: SpherePoint, q: SpherePoint) -> float:
    """Chordal distance on the unit sphere (max 2 for antipodal points)."""
    pi_, qi_ = is_inf(p), is_inf(q)
    if pi_ and qi_:
        return 0.0
    if pi_:
        return 2.0 / math.hypot(1.0, abs(q))
    if qi_:
        return 2.0 / math.hypot(1.0, abs(p))
    p = complex(p)
    q = complex(q)
    ap, aq = abs(p), abs(q)
    # Inversion is an isometry; use the 1/z chart when both points are large
    # so |p - q| cannot overflow.
    if ap > 1.0 and aq > 1.0:
        p, q = 1.0 / p, 1.0 / q
        ap, aq = abs(p), abs(q)
    return 2.0 * abs(p - q) / (math.hypot(1.0, ap) * math.hypot(1.0, aq))


def spherical_distance(p: SpherePoint, q: SpherePoint) -> float:
    """Great-circle distance on the unit sphere; symmetric, range [0, pi]."""
    half = 0.5 * chordal(p, q)
    if half > 1.0:
        half = 1.0
    return 2.0 * math.asin(half)


def points_equal(p: SpherePoint, q: SpherePoint, tol: float = EQ_TOL) -> bool:
    return spherical_distance(p, q) < tol
