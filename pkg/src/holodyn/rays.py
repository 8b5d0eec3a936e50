"""Green's function, external angles, ray tracing, equipotentials.

Rays and equipotentials of f_c(z) = z^2 + c are pulled back from the
asymptotic zone where the Boettcher coordinate is essentially the identity.
The tracer works on a dyadic potential ladder G_k = anchor * 2^(-k/s):
the point of ray t at level k is the preimage (under f_c) of the point of
ray 2t at level k - s, taking the square-root branch nearest the point one
level up.  Angles are exact fractions, so angle doubling is exact and every
(angle, level) pair is computed once and memoized.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import BranchTrackError, DegenerateError, LandingError, NumericError

__all__ = ["GreenValue", "RayPolyline", "BoettcherTracer", "green_dynamical",
           "external_angle", "trace_ray", "equipotential", "alpha_fixed_point",
           "G_ESCAPE"]

# Potential above which the Boettcher map is taken as w - c/(2w); the
# functional-equation error of that seed is O(|c|^2 / |w|^2) ~ 1e-8 at 1e4.
G_ESCAPE = math.log(1e4)


@dataclass
class GreenValue:
    z: complex
    G: float


def green_dynamical(c, z, n_max: int = 120) -> GreenValue:
    """Green's function of the filled Julia set: lim 2^-n log |f^n(z)|.

    Returns the approximant at the first iterate beyond |z| = 1e4 (error
    O(|c| / |f^n|)); bounded orbits get G = 0.
    """
    c = complex(c)
    w = complex(z)
    for n in range(n_max + 1):
        aw = abs(w)
        if aw > 1e4:
            return GreenValue(z=complex(z), G=math.log(aw) / (2.0 ** n))
        w = w * w + c
    return GreenValue(z=complex(z), G=0.0)


def _track_angle_raw(c: complex, z: complex, n_max: int):
    """Forward lift tracking of the external angle.

    Returns (t_plain, increments) where increments[n] = (delta_n, n); the
    plain angle always wraps each step's increment into (-pi, pi].  Steps
    whose increment is large in modulus are genuinely ambiguous (the other
    branch differs by 2 pi and shifts the angle by 2^-(n+1)).
    """
    w = complex(z)
    if abs(w) < 1e-6:
        raise BranchTrackError("point too close to 0 for angle tracking")
    theta = cmath.phase(w)
    deltas = []
    n = 0
    while abs(w) <= 1e4:
        if n >= n_max:
            raise BranchTrackError("orbit did not escape within the budget")
        w = w * w + c
        n += 1
        if abs(w) < 1e-6:
            raise BranchTrackError("orbit passed within 1e-6 of 0")
        predicted = 2.0 * theta
        delta = cmath.phase(w) - predicted
        delta -= 2.0 * math.pi * round(delta / (2.0 * math.pi))
        deltas.append(delta)
        theta = predicted + delta
    return (theta / (2.0 * math.pi * 2.0 ** n)) % 1.0, deltas


def _verify_angle(c: complex, z: complex, g: float, t: float) -> bool:
    """Check geometrically that z sits on the ray of angle t at potential g."""
    tau = Fraction(t).limit_denominator(1 << 26) % 1
    tracer = BoettcherTracer(c, anchor=g)
    try:
        pt = tracer.point(tau, 0)
        up = tracer.point(tau, -1)
    except (OverflowError, ZeroDivisionError):
        return False
    spacing = abs(pt - up)
    return abs(pt - z) <= max(2e-6, 0.45 * spacing)


def _descend_angle(c: complex, z: complex, n_max: int) -> float:
    """Angle by halving down the orbit with traced-ray branch selection.

    The angle of the escaped iterate is read off asymptotically; each
    backward halving has two candidate angles t/2 and t/2 + 1/2 whose ray
    points at the orbit point's potential are negatives of each other, so
    comparing both against the actual orbit point picks the branch with a
    margin of order |z_n| (ambiguous only near 0, which is rejected)."""
    orbit = [complex(z)]
    while abs(orbit[-1]) <= 1e4:
        if len(orbit) > n_max:
            raise BranchTrackError("orbit did not escape within the budget")
        w = orbit[-1]
        orbit.append(w * w + c)
    zn = orbit[-1]
    n_esc = len(orbit) - 1
    g0 = math.log(abs(zn)) / 2.0 ** n_esc
    theta = cmath.phase(zn - c / (2.0 * zn)) / (2.0 * math.pi)
    t = Fraction(theta % 1.0).limit_denominator(1 << 40)
    tracer = BoettcherTracer(c, anchor=g0)
    half = Fraction(1, 2)
    for n in range(n_esc - 1, -1, -1):
        tau = t / 2
        level = -n * tracer.s
        p0 = tracer.point(tau, level)
        p1 = tracer.point((tau + half) % 1, level)
        d0 = abs(p0 - orbit[n])
        d1 = abs(p1 - orbit[n])
        if min(d0, d1) > 0.25 * max(d0, d1):
            raise BranchTrackError(
                f"preimage branch ambiguous at orbit step {n}")
        t = tau if d0 <= d1 else (tau + half) % 1
    return float(t)


def external_angle(c, z, n_max: int = 120) -> float:
    """External angle of an escaping point, in [0, 1).

    First doubles a tracked continuous lift of arg f^n(z) until the orbit
    escapes and verifies the result against the traced ray; a lift step of
    a deep orbit can hide a 2 pi branch error, in which case the angle is
    recomputed by halving back down the orbit with traced-ray branch
    selection.  Orbits passing within 1e-6 of 0 are rejected.
    """
    c = complex(c)
    z = complex(z)
    t_plain, _deltas = _track_angle_raw(c, z, n_max)
    g = green_dynamical(c, z).G
    if g <= 0:
        raise BranchTrackError("point does not escape; no external angle")
    if _verify_angle(c, z, g, t_plain):
        return t_plain
    t = _descend_angle(c, z, n_max)
    if not _verify_angle(c, z, g, t):
        raise BranchTrackError("angle could not be verified against the rays")
    return t


@dataclass
class RayPolyline:
    """A traced external ray (or one radial strand of an equipotential)."""

    angle: Fraction
    vertices: list
    potentials: list
    landing: Optional[complex] = None
    failed: bool = False
    failure_reason: str = ""


class BoettcherTracer:
    """Shared pullback ladder for all rays/equipotentials of one map.

    Levels share memoized values keyed by (exact angle, level), so rays at
    angle t and 2t are consistent to the last bit, and the ray functional
    equation f(R_t at G) = R_2t at 2G holds by construction.
    """

    def __init__(self, c, anchor: float, steps_per_halving: int = 8):
        if anchor <= 0:
            raise ValueError("anchor potential must be positive")
        self.c = complex(c)
        self.anchor = float(anchor)
        self.s = int(steps_per_halving)
        if self.s < 1:
            raise ValueError("steps_per_halving must be >= 1")
        self._memo = {}

    def potential(self, k: int) -> float:
        return self.anchor * 2.0 ** (-k / self.s)

    def level_at_or_above(self, g: float) -> int:
        """Largest level k with potential(k) >= g."""
        return int(math.floor(self.s * math.log2(self.anchor / g) + 1e-9))

    def point(self, angle: Fraction, k: int) -> complex:
        """The point of external ray `angle` at potential level k."""
        key = (angle, k)
        got = self._memo.get(key)
        if got is not None:
            return got
        g = self.potential(k)
        if g >= G_ESCAPE:
            w = cmath.exp(complex(g, 2.0 * math.pi * float(angle)))
            z = w - self.c / (2.0 * w)
        else:
            target = self.point((2 * angle) % 1, k - self.s)
            seed = self.point(angle, k - 1)
            root = cmath.sqrt(target - self.c)
            z = root if abs(root - seed) <= abs(-root - seed) else -root
        self._memo[key] = z
        return z

    def ray(self, angle, g_min: float, want_landing: bool = True) -> RayPolyline:
        """Vertices of R_angle from the asymptotic zone down to g_min."""
        angle = _as_angle(angle)
        k_last = self.level_at_or_above(g_min)
        if self.potential(k_last) > g_min * (1.0 + 1e-12):
            k_last += 1  # overshoot so the ray reaches g_min
        k0 = self.level_at_or_above(G_ESCAPE)
        vertices = []
        potentials = []
        failed = False
        reason = ""
        prev_gap = None
        for k in range(k0, k_last + 1):
            z = self.point(angle, k)
            if vertices:
                gap = abs(z - vertices[-1])
                if prev_gap is not None and gap > 4.0 * prev_gap + 1e-12:
                    failed = True
                    reason = f"branch jump at level {k} (gap {gap:.3e})"
                    break
                prev_gap = gap
            vertices.append(z)
            potentials.append(self.potential(k))
        poly = RayPolyline(angle=angle, vertices=vertices, potentials=potentials,
                           failed=failed, failure_reason=reason)
        if want_landing and not failed:
            poly.landing = self._landing(angle, vertices, k_last)
        return poly

    # Landing detection may pull deeper than the polyline's g_min: a ray
    # landing at a repelling point of multiplier lambda converges only like
    # |lambda|^(-k/s), so the Cauchy window can need far smaller potentials
    # than anyone wants vertices at (the pullback itself is stable at any
    # depth; the potential is only bookkeeping).
    _LANDING_FLOOR = 1e-26

    def _landing(self, angle: Fraction, vertices, k_last: int) -> Optional[complex]:
        """Cauchy criterion: 10 consecutive vertices within 1e-6 of each
        other (descending below the polyline if necessary); the recorded
        point is Aitken-accelerated, the tail being geometric."""
        if len(vertices) < 10:
            return None
        k = k_last
        window = list(vertices[-10:])
        while True:
            spread = max(abs(a - b) for a in window for b in window)
            if spread < 1e-6:
                break
            if self.potential(k) < self._LANDING_FLOOR:
                return None
            k += 1
            window.pop(0)
            window.append(self.point(angle, k))
        try:
            v0 = self.point(angle, k - 2 * self.s)
            v1 = self.point(angle, k - self.s)
            v2 = self.point(angle, k)
            denom = (v2 - v1) - (v1 - v0)
            if abs(denom) > 1e-30:
                return v2 - (v2 - v1) ** 2 / denom
        except (ZeroDivisionError, OverflowError):
            pass
        return window[-1]


def _as_angle(t) -> Fraction:
    if isinstance(t, Fraction):
        return t % 1
    if isinstance(t, str):
        return Fraction(t) % 1
    return Fraction(t).limit_denominator(10 ** 12) % 1


def trace_ray(c, t, g_min: float = 1e-6, steps_per_halving: int = 8,
              tracer: Optional[BoettcherTracer] = None) -> RayPolyline:
    """Trace the external ray of angle t down to potential g_min."""
    if g_min <= 0:
        raise ValueError("g_min must be positive")
    angle = _as_angle(t)
    if tracer is None:
        tracer = BoettcherTracer(c, anchor=g_min, steps_per_halving=steps_per_halving)
    return tracer.ray(angle, g_min)


def equipotential(c, g_level: float, n_samples: int = 256,
                  steps_per_halving: int = 8) -> list:
    """Closed polyline of the external circle at potential g_level.

    Returns n_samples points at angles k / n_samples (the curve closes
    implicitly; the first point is not repeated).
    """
    if g_level <= 0:
        raise ValueError("g_level must be positive")
    if n_samples < 3:
        raise ValueError("need at least 3 samples")
    tracer = BoettcherTracer(c, anchor=g_level, steps_per_halving=steps_per_halving)
    k = tracer.level_at_or_above(g_level)
    # anchor == g_level makes this exact: potential(0-ish) == g_level
    pts = []
    for j in range(n_samples):
        pts.append(tracer.point(Fraction(j, n_samples), k))
    return pts


def alpha_fixed_point(c):
    """The fixed point (1 - sqrt(1-4c))/2, i.e. the one that is not the
    landing point of the zero ray, with its multiplier classification.

    Returns (alpha, multiplier, classification).  Raises DegenerateError at
    c = 1/4 where the two fixed points collide.
    """
    c = complex(c)
    disc = 1.0 - 4.0 * c
    if abs(disc) < 1e-12:
        raise DegenerateError("double fixed point at c = 1/4")
    alpha = (1.0 - cmath.sqrt(disc)) / 2.0
    lam = 2.0 * alpha
    mod = abs(lam)
    if mod <= 1e-12:
        cls = "superattracting"
    elif abs(mod - 1.0) <= 1e-6:
        cls = "indifferent"
    elif mod < 1.0:
        cls = "attracting"
    else:
        cls = "repelling"
    return alpha, lam, cls
