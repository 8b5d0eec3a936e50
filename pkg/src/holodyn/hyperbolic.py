"""Hyperbolicity certification via the critical-orbit criterion.

A map is certified hyperbolic only when every critical point demonstrably
converges to an attracting cycle (infinity counts for polynomials).  Any
unresolved fate yields "not-certified"; the certificate never claims
hyperbolicity it did not verify.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .cycles import Cycle
from .orbits import attracting_limit, iterate_orbit, polynomial_escape_radius
from .ratmap import RationalMap
from .sphere import INF, SpherePoint, is_inf, points_equal

__all__ = ["CriticalFate", "HyperbolicityCertificate", "PostcriticalApprox",
           "hyperbolicity_certificate", "postcritical_approx"]


@dataclass
class CriticalFate:
    """What happened to one critical point under iteration."""

    point: SpherePoint
    outcome: str            # attracting-cycle | infinity | non-attracting-cycle | unresolved
    cycle: Optional[Cycle] = None
    steps: int = 0


@dataclass
class HyperbolicityCertificate:
    status: str                                  # hyperbolic | not-certified
    attractors: list = field(default_factory=list)   # distinct cycles found
    fates: list = field(default_factory=list)        # one CriticalFate per critical point
    n_attracting: int = 0                        # finite attracting cycles (N)

    @property
    def hyperbolic(self) -> bool:
        return self.status == "hyperbolic"


def _same_cycle(a: Cycle, b: Cycle) -> bool:
    if a.period != b.period:
        return False
    return any(b.contains(p) for p in a.points)


def hyperbolicity_certificate(map_: RationalMap, budget: int = 10**6) -> HyperbolicityCertificate:
    """Run every critical point forward and certify if all reach attractors."""
    fates = []
    cycles = []

    def register(cyc: Cycle) -> Cycle:
        for known in cycles:
            if _same_cycle(cyc, known):
                return known
        cycles.append(cyc)
        return cyc

    radius = polynomial_escape_radius(map_)
    for crit, _mult in map_.critical_points():
        if is_inf(crit) and map_.is_polynomial():
            # Infinity is a superattracting fixed point of any polynomial.
            cyc = register(Cycle(points=(INF,), period=1,
                                 multiplier=0.0 + 0.0j, cls="superattracting"))
            fates.append(CriticalFate(point=INF, outcome="infinity", cycle=cyc))
            continue
        if radius is not None:
            rec = iterate_orbit(map_, crit, budget, escape_radius=radius)
            if rec.verdict == "escaped-to-attractor":
                cyc = register(Cycle(points=(INF,), period=1,
                                     multiplier=0.0 + 0.0j, cls="superattracting"))
                fates.append(CriticalFate(point=crit, outcome="infinity",
                                          cycle=cyc, steps=rec.steps))
                continue
        cyc = attracting_limit(map_, crit, budget)
        if cyc is None:
            fates.append(CriticalFate(point=crit, outcome="unresolved"))
        elif cyc.is_attracting():
            cyc = register(cyc)
            fates.append(CriticalFate(point=crit, outcome="attracting-cycle", cycle=cyc))
        else:
            cyc = register(cyc)
            fates.append(CriticalFate(point=crit, outcome="non-attracting-cycle", cycle=cyc))

    good = all(f.outcome in ("attracting-cycle", "infinity") for f in fates)
    n_finite = sum(1 for c in cycles if c.is_attracting() and not c.has_infinity())
    return HyperbolicityCertificate(
        status="hyperbolic" if good else "not-certified",
        attractors=cycles,
        fates=fates,
        n_attracting=n_finite,
    )


@dataclass
class PostcriticalApprox:
    points: list
    depth: int


def postcritical_approx(map_: RationalMap, depth: int) -> PostcriticalApprox:
    """Finite truncation of the postcritical set: {f^n(c), 1 <= n <= depth}.

    Orbits of all finite critical points, deduplicated at the point-equality
    tolerance.  The fixed point at infinity of a polynomial is omitted from
    the report (its orbit carries no information).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    pts = []

    def push(z):
        for p in pts:
            if points_equal(p, z):
                return
        pts.append(z)

    for crit, _mult in map_.critical_points():
        if is_inf(crit):
            continue
        z = crit
        for _ in range(depth):
            z = map_(z)
            if is_inf(z):
                break
            push(complex(z))
    pts.sort(key=lambda p: (round(p.real, 12), round(p.imag, 12)))
    return PostcriticalApprox(points=pts, depth=depth)
