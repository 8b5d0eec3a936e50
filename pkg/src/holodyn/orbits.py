"""Forward orbits: iteration with cycle detection, limits, Lyapunov data.

Convergence detection is Brent's tortoise-and-hare with snapshots at powers
of two, compared in the spherical metric, so orbits converging to infinity
are detected exactly like finite attractors and full orbits are never
stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .cycles import Cycle, classify_multiplier, cycle_multiplier, _orbit_newton_polish
from .ratmap import RationalMap
from .sphere import INF, SpherePoint, is_inf, spherical_distance

__all__ = ["OrbitRecord", "iterate_orbit", "attracting_limit",
           "lyapunov_exponent", "BRENT_TOL"]

# Spherical tolerance for Brent snapshot matches.
BRENT_TOL = 1e-12
# How many trailing orbit points are kept in the record.
_TAIL_KEEP = 64


@dataclass
class OrbitRecord:
    """A finite trajectory summary.

    ``points`` is the most recent contiguous window of the orbit (at most
    _TAIL_KEEP entries), so consecutive stored samples always satisfy
    points[k+1] = f(points[k]).
    """

    start: SpherePoint
    points: list = field(default_factory=list)
    steps: int = 0
    verdict: str = "budget-exhausted"  # escaped-to-attractor | converged-to-cycle
    lyapunov_estimate: float = 0.0
    loop: Optional[list] = None       # detected loop points, if converged
    period: Optional[int] = None      # minimal loop period, if converged
    degenerate: bool = False          # orbit hit a critical point exactly


def _minimal_period(loop, tol: float = 1e-9) -> int:
    """Minimal p dividing len(loop) that cyclically shifts the loop onto itself."""
    lam = len(loop)
    for p in range(1, lam + 1):
        if lam % p:
            continue
        if all(spherical_distance(loop[i], loop[(i + p) % lam]) < tol
               for i in range(lam)):
            return p
    return lam


def polynomial_escape_radius(map_: RationalMap) -> Optional[float]:
    """A radius beyond which a degree >= 2 polynomial orbit surely escapes.

    |z| > R implies |f(z)| >= 2|z|, so crossing R certifies convergence to
    the superattracting fixed point at infinity.  None for non-polynomials
    and for degree-1 maps.
    """
    if not map_.is_polynomial() or map_.degree < 2:
        return None
    p = map_.p
    a0 = abs(p[0])
    rest = float(sum(abs(c) for c in p[1:]))
    return max(1.0, 2.0 * rest / a0, (4.0 / a0) ** (1.0 / (map_.degree - 1)))


def iterate_orbit(map_: RationalMap, z0: SpherePoint, budget: int,
                  escape_radius: Optional[float] = None) -> OrbitRecord:
    """Iterate with Brent cycle detection running alongside.

    Stops early on a detected loop (verdict converged-to-cycle) or when
    |z| exceeds ``escape_radius`` (verdict escaped-to-attractor); otherwise
    budget-exhausted.  The Lyapunov estimate is the running mean of
    log ||f'|| in the spherical metric along the visited points.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rec = OrbitRecord(start=z0)
    z = z0
    tail = [z0]
    log_sum = 0.0
    snap = z0
    power = 1
    lam = 0
    for k in range(budget):
        sigma = map_.spherical_derivative(z)
        if sigma == 0.0:
            rec.degenerate = True
            log_sum = -math.inf
        elif log_sum != -math.inf:
            log_sum += math.log(sigma)
        z = map_(z)
        lam += 1
        tail.append(z)
        if len(tail) > _TAIL_KEEP:
            tail.pop(0)
        rec.steps = k + 1
        if escape_radius is not None and not is_inf(z) and abs(z) > escape_radius:
            rec.verdict = "escaped-to-attractor"
            break
        if spherical_distance(z, snap) < BRENT_TOL:
            loop = [z]
            w = z
            for _ in range(lam - 1):
                w = map_(w)
                loop.append(w)
            rec.verdict = "converged-to-cycle"
            rec.period = _minimal_period(loop)
            rec.loop = loop[:rec.period]
            break
        if lam == power:
            snap = z
            power *= 2
            lam = 0
    rec.points = tail
    n = max(rec.steps, 1)
    rec.lyapunov_estimate = log_sum / n if log_sum != -math.inf else -math.inf
    return rec


def _refine_cycle(map_: RationalMap, loop, period: int) -> Optional[Cycle]:
    """Newton-refine a detected loop and classify it.

    Loops living near infinity are refined in the 1/z chart.  Returns None
    when refinement fails and the raw loop does not certify as a cycle.
    """
    if any(is_inf(p) for p in loop):
        # Work in the inverted chart where these points are finite.
        inv = map_.inverted()
        coords = [0.0 + 0.0j if is_inf(p) else 1.0 / complex(p) for p in loop]
        ref = _refine_cycle(inv, coords, period)
        if ref is None:
            return None
        pts = tuple(INF if abs(p) == 0 else 1.0 / p for p in ref.points)
        return Cycle(points=pts, period=ref.period, multiplier=ref.multiplier,
                     cls=ref.cls)

    base = min(loop, key=abs)
    z = _orbit_newton_polish(map_, complex(base), period)

    orbit = [z]
    w = z
    ok = True
    for _ in range(period - 1):
        w = map_(w)
        if is_inf(w):
            ok = False
            break
        orbit.append(complex(w))
    if not ok or spherical_distance(map_(orbit[-1]), z) > 1e-8:
        # Newton wandered off; fall back to the raw loop when it closes.
        orbit = list(loop)
        if spherical_distance(map_(orbit[-1]), orbit[0]) > 1e-8:
            return None
    try:
        lam = cycle_multiplier(map_, orbit)
    except Exception:
        return None
    return Cycle(points=tuple(orbit), period=period, multiplier=lam,
                 cls=classify_multiplier(lam))


def attracting_limit(map_: RationalMap, z0: SpherePoint, budget: int,
                     tol: float = BRENT_TOL) -> Optional[Cycle]:
    """Locate the limit cycle of an orbit, if the orbit settles on one.

    Returns the refined, classified cycle the orbit converged to (usually
    attracting; a preperiodic orbit landing exactly on a repelling cycle is
    reported as that repelling cycle).  Returns None on escape or when the
    budget runs out without convergence.  For polynomials, escape to
    infinity counts as "none" here; the certificate accounts for the
    infinity cycle separately.
    """
    radius = polynomial_escape_radius(map_)
    rec = iterate_orbit(map_, z0, budget, escape_radius=radius)
    if rec.verdict != "converged-to-cycle":
        return None
    cyc = _refine_cycle(map_, rec.loop, rec.period)
    if cyc is not None and cyc.has_infinity() and map_.is_polynomial():
        return None
    return cyc


def lyapunov_exponent(map_: RationalMap, z0: SpherePoint, budget: int,
                      burn_in: int = 0) -> float:
    """Mean of log ||f'|| along the orbit after burn-in.

    No convergence guarantee is claimed; an orbit that lands exactly on a
    critical point yields -inf (degenerate case).
    """
    if budget <= burn_in:
        raise ValueError("budget must exceed burn_in")
    z = z0
    for _ in range(burn_in):
        z = map_(z)
    total = 0.0
    n = budget - burn_in
    for _ in range(n):
        sigma = map_.spherical_derivative(z)
        if sigma == 0.0:
            return -math.inf
        total += math.log(sigma)
        z = map_(z)
    return total / n
