"""Periodic cycles: location via the cycle equation, multipliers, classes.

The multiplier of a cycle is computed by the chain rule with per-point
chart switching (plain coordinate inside the unit disk, 1/z outside), so
cycles through poles or infinity get a finite, conjugacy-invariant value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NumericError
from .ratmap import RationalMap
from .roots import aberth_roots, trim_leading
from .sphere import INF, SpherePoint, is_inf, points_equal, spherical_distance

__all__ = ["Cycle", "classify_multiplier", "cycle_multiplier", "find_cycles",
           "SUPERATTRACTING_TOL", "INDIFFERENT_BAND"]

SUPERATTRACTING_TOL = 1e-12
INDIFFERENT_BAND = 1e-6

# Spherical tolerance below which a point of period p is considered to have
# a lower exact period and is dropped from the period-p list.
_LOWER_PERIOD_TOL = 1e-7


@dataclass
class Cycle:
    """A periodic orbit with its multiplier and classification."""

    points: tuple
    period: int
    multiplier: complex
    cls: str

    def contains(self, z: SpherePoint, tol: float = 1e-8) -> bool:
        return any(points_equal(p, z, tol) for p in self.points)

    def is_attracting(self) -> bool:
        return self.cls in ("attracting", "superattracting")

    def has_infinity(self) -> bool:
        return any(is_inf(p) for p in self.points)

    def sort_key(self):
        for p in self.points:
            if not is_inf(p):
                return (self.period, round(p.real, 9), round(p.imag, 9))
        return (self.period, float("inf"), 0.0)


def classify_multiplier(lam: complex) -> str:
    mod = abs(lam)
    if mod <= SUPERATTRACTING_TOL:
        return "superattracting"
    if abs(mod - 1.0) <= INDIFFERENT_BAND:
        return "indifferent"
    return "attracting" if mod < 1.0 else "repelling"


def _chart_coord(z: SpherePoint):
    """(coordinate, uses_inverted_chart) for a sphere point."""
    if is_inf(z):
        return 0.0 + 0.0j, True
    z = complex(z)
    if abs(z) > 1.0:
        return 1.0 / z, True
    return z, False


def cycle_multiplier(map_: RationalMap, points) -> complex:
    """(f^p)' along a cycle via chart-adapted chain rule.

    Each step contributes the derivative of chart_out o f o chart_in^{-1} at
    the chart coordinate of the current point; the product telescopes to the
    cycle multiplier because the loop closes in the same chart it started.
    """
    pts = list(points)
    n = len(pts)
    lam = 1.0 + 0.0j
    for i in range(n):
        u, inv_in = _chart_coord(pts[i])
        _, inv_out = _chart_coord(pts[(i + 1) % n])
        a, b = map_.chart_pair(inv_in, inv_out)
        da, db = np.polyder(a), np.polyder(b)
        av = complex(np.polyval(a, u))
        bv = complex(np.polyval(b, u))
        dav = complex(np.polyval(da, u))
        dbv = complex(np.polyval(db, u))
        if bv == 0:
            raise NumericError("chart denominator vanished on a cycle point")
        lam *= (dav * bv - av * dbv) / (bv * bv)
    return lam


def _orbit_newton_polish(map_: RationalMap, z: complex, period: int,
                         steps: int = 12, tol: float = 1e-13) -> complex:
    """Newton on f^p(z) - z using iterated evaluation (well conditioned)."""
    for _ in range(steps):
        w = z
        deriv = 1.0 + 0.0j
        ok = True
        for _ in range(period):
            try:
                dw = map_.derivative_value(w)
            except ZeroDivisionError:
                ok = False
                break
            fw = map_(w)
            if is_inf(fw) or not np.isfinite(dw):
                ok = False
                break
            deriv *= dw
            w = complex(fw)
        if not ok:
            return z
        g = w - z
        gp = deriv - 1.0
        if gp == 0:
            return z
        step = g / gp
        z = z - step
        if abs(step) <= tol * (1.0 + abs(z)):
            break
    return z


def _iterate_values_and_derivs(map_: RationalMap, z: np.ndarray, p: int):
    """Vectorized (f^p(z), (f^p)'(z)) with chart switching at |v| > 1.

    Coefficient expansion of f^p is hopelessly ill-conditioned at degree
    d^p; evaluating through the composition chain is backward stable point
    by point, so this is what the periodic-point solver uses.
    """
    pa, qa = map_.chart_pair(False, False)
    pr, qr = map_.chart_pair(True, False)
    dpa, dqa = np.polyder(pa), np.polyder(qa)
    dpr, dqr = np.polyder(pr), np.polyder(qr)
    v = z.astype(complex)
    deriv = np.ones_like(v)
    for _ in range(p):
        big = np.abs(v) > 1.0
        out_v = np.empty_like(v)
        out_d = np.empty_like(v)
        if np.any(~big):
            u = v[~big]
            num = np.polyval(pa, u)
            den = np.polyval(qa, u)
            wv = np.polyval(dpa, u) * den - num * np.polyval(dqa, u)
            out_v[~big] = num / den
            out_d[~big] = wv / (den * den)
        if np.any(big):
            u = 1.0 / v[big]
            num = np.polyval(pr, u)
            den = np.polyval(qr, u)
            wv = np.polyval(dpr, u) * den - num * np.polyval(dqr, u)
            out_v[big] = num / den
            # d/dv f(1/u chart): chain rule brings a factor -u^2
            out_d[big] = -(u * u) * wv / (den * den)
        v = out_v
        deriv = deriv * out_d
    return v, deriv


def _implicit_aberth(map_: RationalMap, p: int, seeds: np.ndarray,
                     max_sweeps: int = 300, tol: float = 1e-13) -> np.ndarray:
    """Aberth iteration on G(z) = f^p(z) - z with implicit evaluation."""
    z = seeds.astype(complex).copy()
    n = z.size
    if n == 0:
        return z

    def sweep_loop(z, cap):
        for _ in range(cap):
            v, dv = _iterate_values_and_derivs(map_, z, p)
            g = v - z
            gp = dv - 1.0
            w = g / gp
            stuck = ~np.isfinite(w)
            if np.any(stuck):
                z = np.where(stuck, z * (1.0 + 1e-9) + 1e-10, z)
                v, dv = _iterate_values_and_derivs(map_, z, p)
                g = v - z
                gp = dv - 1.0
                w = np.where(np.isfinite(g / gp), g / gp, 0.0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            ssum = inv.sum(axis=1)
            denom = 1.0 - w * ssum
            small = (np.abs(denom) < 1e-14) | ~np.isfinite(denom)
            denom = np.where(small, 1.0, denom)
            corr = np.where(small, w, w / denom)
            corr = np.where(np.isfinite(corr), corr, 0.0)
            z = z - corr
            scale = 1.0 + np.abs(z)
            if np.max(np.abs(corr) / scale) < tol:
                break
        return z

    with np.errstate(all="ignore"):
        z = sweep_loop(z, max_sweeps)
    return z


def _infinite_orbit_period(map_: RationalMap, bound: int) -> Optional[int]:
    """Exact period of INF if INF is periodic within `bound` (else None)."""
    z = map_(INF)
    for p in range(1, bound + 1):
        if is_inf(z):
            return p
        z = map_(z)
    return None


def find_cycles(map_: RationalMap, period_bound: int):
    """All cycles of exact period p <= period_bound, classified.

    Periodic points are roots of the numerator of f^p(z) - z; the degree is
    d^p (+1), so keep d^period_bound at desk scale (the quadratic family is
    capped at period 8 in the callers).
    """
    if period_bound < 1:
        raise ValueError("period_bound must be >= 1")
    d = map_.degree
    if d ** period_bound > 200000:
        raise ValueError("cycle equation degree would be enormous")

    cycles = []
    inf_period = _infinite_orbit_period(map_, period_bound)

    fp = None
    for p in range(1, period_bound + 1):
        fp = map_ if fp is None else map_.compose(fp)
        # numerator of f^p(z) - z  =  P_p(z) - z Q_p(z).  Only exact zeros are
        # trimmed: composed maps have a huge but genuine coefficient range, and
        # top coefficients either vanish exactly (padding) or are clean values.
        eq = np.polysub(fp.p, np.polymul(np.array([1.0, 0.0]), fp.q))
        eq = trim_leading(eq, rel_tol=0.0)
        try:
            seeds = aberth_roots(eq)
        except NumericError as exc:
            raise NumericError(f"cycle solver failed at period {p}: {exc}") from exc
        # The coefficient equation is only trusted for the root count and a
        # rough global seed layout; the accurate solve is simultaneous
        # iteration on the implicitly evaluated f^p.
        if eq.size - 1 > 16:
            roots = _implicit_aberth(map_, p, seeds)
        else:
            roots = seeds

        polished = [_orbit_newton_polish(map_, complex(r), p) for r in roots]

        # Drop points whose exact period divides p properly.  Distances are
        # relative euclidean: the spherical metric would accept any garbage
        # estimate near infinity as "periodic".
        keep = []
        for z in polished:
            lower = False
            for q in range(1, p):
                if p % q:
                    continue
                w = z
                for _ in range(q):
                    w = map_(w)
                if not is_inf(w) and abs(w - z) < _LOWER_PERIOD_TOL * (1.0 + abs(z)):
                    lower = True
                    break
            if not lower:
                keep.append(z)

        # Group into orbits.
        keep.sort(key=lambda t: (t.real, t.imag))
        used = [False] * len(keep)
        for i, z in enumerate(keep):
            if used[i]:
                continue
            orbit = [z]
            used[i] = True
            for j in range(i + 1, len(keep)):
                if not used[j] and abs(keep[j] - z) < 1e-6 * (1 + abs(z)):
                    used[j] = True  # duplicate estimate of the same point
            w = z
            bad = False
            for _ in range(p - 1):
                w = map_(w)
                if is_inf(w):
                    bad = True
                    break
                w = complex(w)
                orbit.append(w)
                for j in range(i + 1, len(keep)):
                    if not used[j] and abs(keep[j] - w) < 1e-6 * (1 + abs(w)):
                        used[j] = True
            closing = map_(orbit[-1])
            if bad or is_inf(closing) or abs(closing - z) > 1e-6 * (1.0 + abs(z)):
                continue
            lam = cycle_multiplier(map_, orbit)
            cycles.append(Cycle(points=tuple(orbit), period=p,
                                multiplier=lam, cls=classify_multiplier(lam)))

        if inf_period == p:
            orbit = [INF]
            w = map_(INF)
            for _ in range(p - 1):
                orbit.append(w)
                w = map_(w)
            lam = cycle_multiplier(map_, orbit)
            cycles.append(Cycle(points=tuple(orbit), period=p,
                                multiplier=lam, cls=classify_multiplier(lam)))

    cycles.sort(key=lambda c: c.sort_key())
    return cycles
