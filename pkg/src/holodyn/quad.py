"""Everything specific to the quadratic family f_c(z) = z^2 + c.

Scalar orbit work uses tight loops on Python complexes (fast enough for
10^7-step experiments); grid scans are vectorized with numpy.  Membership
in the Mandelbrot set is always reported as "bounded within budget", never
as certified membership.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cycles import Cycle, classify_multiplier
from .hyperbolic import CriticalFate, HyperbolicityCertificate
from .ratmap import RationalMap
from .roots import aberth_roots
from .sphere import INF

__all__ = [
    "MandelbrotVerdict", "AttractorSample", "CascadeResult", "WindowRecord",
    "ChallengeReport", "mandelbrot_escape", "mandelbrot_escape_grid",
    "cardioid_or_disk", "component_centers", "logistic_param", "c_to_logistic",
    "attractor_sample", "bifurcation_scan", "superstable_cascade",
    "window_scan", "challenge_report", "quad_attracting_cycle",
    "quad_certificate", "cluster_points",
]

# Brent tolerance for the scalar quadratic kernel (euclidean, the orbits of
# interest stay in a bounded disk).
_LOOP_TOL = 1e-12


def escape_radius(c: complex) -> float:
    """|z| > max(2, |c|) forces escape for z^2 + c."""
    return max(2.0, abs(c))


# ----------------------------------------------------------------------------
# Mandelbrot membership
# ----------------------------------------------------------------------------

@dataclass
class MandelbrotVerdict:
    c: complex
    escaped: bool
    escape_step: Optional[int]
    max_iter: int

    @property
    def bounded_so_far(self) -> bool:
        return not self.escaped


def mandelbrot_escape(c, max_iter: int) -> MandelbrotVerdict:
    """Iterate the critical orbit of z^2 + c with the escape predicate."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    c = complex(c)
    r2 = escape_radius(c) ** 2
    z = 0.0 + 0.0j
    for k in range(1, max_iter + 1):
        z = z * z + c
        if z.real * z.real + z.imag * z.imag > r2:
            return MandelbrotVerdict(c=c, escaped=True, escape_step=k, max_iter=max_iter)
    return MandelbrotVerdict(c=c, escaped=False, escape_step=None, max_iter=max_iter)


def mandelbrot_escape_grid(c_grid: np.ndarray, max_iter: int) -> np.ndarray:
    """Vectorized escape steps for an array of parameters (-1 = bounded)."""
    c = np.asarray(c_grid, dtype=complex)
    r2 = np.maximum(2.0, np.abs(c)) ** 2
    z = np.zeros_like(c)
    steps = np.full(c.shape, -1, dtype=np.int32)
    active = np.ones(c.shape, dtype=bool)
    for k in range(1, max_iter + 1):
        z[active] = z[active] ** 2 + c[active]
        esc = active & (z.real ** 2 + z.imag ** 2 > r2)
        steps[esc] = k
        active &= ~esc
        if not active.any():
            break
    return steps


# ----------------------------------------------------------------------------
# Closed-form component geometry
# ----------------------------------------------------------------------------

def cardioid_or_disk(c) -> Optional[int]:
    """1 inside the main cardioid, 2 inside the period-2 disk, else None."""
    c = complex(c)
    if abs(1.0 - cmath.sqrt(1.0 - 4.0 * c)) < 1.0:
        return 1
    if abs(c + 1.0) < 0.25:
        return 2
    return None


def _critical_orbit_poly(p: int) -> np.ndarray:
    """Coefficients (in c, highest first) of f_c^p(0) as a polynomial in c."""
    poly = np.array([1.0, 0.0])  # f_c(0) = c
    for _ in range(p - 1):
        poly = np.polyadd(np.polymul(poly, poly), np.array([1.0, 0.0]))
    return poly


def _newton_center(c: complex, p: int, steps: int = 30) -> complex:
    """Newton for f_c^p(0) = 0 using the orbit recurrence and d/dc."""
    for _ in range(steps):
        z = 0.0 + 0.0j
        dz = 0.0 + 0.0j
        for _ in range(p):
            dz = 2.0 * z * dz + 1.0
            z = z * z + c
        if dz == 0:
            break
        step = z / dz
        c = c - step
        if abs(step) < 1e-14 * (1.0 + abs(c)):
            break
    return c


def component_centers(p: int):
    """Parameters whose critical point is periodic of exact period p (<= 7)."""
    if not 1 <= p <= 7:
        raise ValueError("period must be in 1..7")
    if p == 1:
        return [0.0 + 0.0j]
    poly = _critical_orbit_poly(p)
    roots = aberth_roots(poly)
    centers = []
    for r in roots:
        r = _newton_center(complex(r), p)
        # exact period check: no earlier return of the critical orbit
        z = 0.0 + 0.0j
        exact = True
        for k in range(1, p):
            z = z * z + r
            if abs(z) < 1e-8:
                exact = False
                break
        if exact:
            centers.append(r)
    centers.sort(key=lambda t: (t.real, t.imag))
    # dedupe (Newton can merge distinct seeds)
    out = []
    for r in centers:
        if not out or abs(r - out[-1]) > 1e-9:
            out.append(r)
    return out


def logistic_param(lam: float) -> complex:
    """Parameter c with z^2 + c affinely conjugate to lambda x (1 - x)."""
    if not 0.0 < lam <= 4.0:
        raise ValueError("lambda must be in (0, 4]")
    return lam / 2.0 - lam * lam / 4.0


def c_to_logistic(c) -> Optional[float]:
    """The lambda in (0, 4] conjugate to c, when it exists (real c <= 1/4)."""
    c = complex(c)
    if abs(c.imag) > 0:
        return None
    disc = 1.0 - 4.0 * c.real
    if disc < 0:
        return None
    lam = 1.0 + math.sqrt(disc)
    if not 0.0 < lam <= 4.0:
        return None
    return lam


# ----------------------------------------------------------------------------
# Attractor sampling and bifurcation scans
# ----------------------------------------------------------------------------

@dataclass
class AttractorSample:
    c: complex
    points: list
    transient: int
    count: int
    escaped: bool = False
    escape_step: Optional[int] = None


def attractor_sample(c, transient: int, count: int) -> AttractorSample:
    """Late samples of the critical orbit (the numerical attractor A_c)."""
    if transient < 0 or count < 1:
        raise ValueError("need transient >= 0 and count >= 1")
    c = complex(c)
    r2 = escape_radius(c) ** 2
    z = 0.0 + 0.0j
    samples = []
    for k in range(transient + count):
        z = z * z + c
        if z.real * z.real + z.imag * z.imag > r2:
            return AttractorSample(c=c, points=[], transient=transient,
                                   count=count, escaped=True, escape_step=k + 1)
        if k >= transient:
            samples.append(z)
    return AttractorSample(c=c, points=samples, transient=transient, count=count)


def cluster_points(points, tol: float = 1e-6):
    """Agglomerate nearby points; returns cluster representatives.

    The cluster count of an attractor sample is its empirical period.
    """
    reps = []
    for z in points:
        z = complex(z)
        placed = False
        for i, (r, n) in enumerate(reps):
            if abs(z - r) <= tol:
                reps[i] = ((r * n + z) / (n + 1), n + 1)
                placed = True
                break
        if not placed:
            reps.append((z, 1))
    return [r for r, _ in reps]


def bifurcation_scan(c_lo: float, c_hi: float, step: float,
                     transient: int, count: int):
    """Attractor samples along a real parameter grid.

    Returns (c_grid, samples, escaped) where samples is a (len(grid), count)
    real array (NaN rows once escaped).
    """
    if not c_lo < c_hi:
        raise ValueError("need c_lo < c_hi")
    if c_hi > 0.25 + 1e-12:
        raise ValueError("real quadratic attractors require c <= 1/4")
    n = int(round((c_hi - c_lo) / step)) + 1
    c = c_lo + step * np.arange(n)
    r = np.maximum(2.0, np.abs(c))
    x = np.zeros(n)
    escaped = np.zeros(n, dtype=bool)
    for _ in range(transient):
        x = x * x + c
        escaped |= np.abs(x) > r
        x[escaped] = 0.0  # freeze escaped columns
    samples = np.empty((n, count))
    for k in range(count):
        x = x * x + c
        escaped |= np.abs(x) > r
        samples[:, k] = x
    samples[escaped] = np.nan
    return c, samples, escaped


def column_period(samples_row: np.ndarray, tol: float = 1e-6) -> Optional[int]:
    """Empirical period of one scan column via clustering; None if escaped."""
    if np.any(np.isnan(samples_row)):
        return None
    return len(cluster_points(samples_row.tolist(), tol=tol))


def detect_period_jumps(c_grid, samples, low: int, high: int):
    """Locate parameter boundaries where the empirical period jumps low -> high.

    Columns that cluster to neither period (e.g. exactly at the bifurcation)
    are skipped; the boundary is the midpoint of the flanking classified
    columns.  Returns a list of boundary parameters.
    """
    periods = [column_period(samples[i]) for i in range(len(c_grid))]
    jumps = []
    last_c = None
    last_p = None
    for ci, pi in zip(c_grid, periods):
        if pi not in (low, high):
            continue
        if last_p == high and pi == low:
            jumps.append(0.5 * (last_c + ci))
        if last_p == low and pi == high:
            jumps.append(0.5 * (last_c + ci))
        last_c, last_p = ci, pi
    return jumps


# ----------------------------------------------------------------------------
# Fast scalar cycle detection for the quadratic family
# ----------------------------------------------------------------------------

def _orbit_brent_quad(c: complex, z0: complex, budget: int):
    """(verdict, steps, loop) for the orbit of z0 under z^2 + c.

    verdict: 'escaped' | 'converged' | 'exhausted'; loop is the detected
    cycle (list) for 'converged'.
    """
    r = escape_radius(c)
    r2 = r * r
    z = z0
    snap = z0
    power = 1
    lam = 0
    for k in range(budget):
        z = z * z + c
        lam += 1
        if z.real * z.real + z.imag * z.imag > r2:
            return "escaped", k + 1, None
        d = z - snap
        if d.real * d.real + d.imag * d.imag < _LOOP_TOL * _LOOP_TOL:
            loop = [z]
            w = z
            for _ in range(lam - 1):
                w = w * w + c
                loop.append(w)
            # minimal period among divisors of the loop length
            period = len(loop)
            for p in range(1, len(loop)):
                if len(loop) % p:
                    continue
                if all(abs(loop[i] - loop[(i + p) % len(loop)]) < 1e-9
                       for i in range(len(loop))):
                    period = p
                    break
            return "converged", k + 1, loop[:period]
        if lam == power:
            snap = z
            power *= 2
            lam = 0
    return "exhausted", budget, None


def _refine_quad_cycle(c: complex, z: complex, period: int) -> complex:
    """Newton on f^p(z) - z for z^2 + c."""
    for _ in range(16):
        w = z
        dw = 1.0 + 0.0j
        for _ in range(period):
            dw *= 2.0 * w
            w = w * w + c
        g = w - z
        gp = dw - 1.0
        if gp == 0:
            break
        step = g / gp
        z = z - step
        if abs(step) < 1e-14 * (1.0 + abs(z)):
            break
    return z


def quad_attracting_cycle(c, budget: int, z0=0.0) -> Optional[Cycle]:
    """Limit cycle of the critical orbit of z^2 + c (None on escape/budget)."""
    c = complex(c)
    verdict, _steps, loop = _orbit_brent_quad(c, complex(z0), budget)
    if verdict != "converged":
        return None
    period = len(loop)
    z = _refine_quad_cycle(c, loop[0], period)
    orbit = [z]
    lam = 2.0 * z
    w = z
    for _ in range(period - 1):
        w = w * w + c
        orbit.append(w)
        lam *= 2.0 * w
    if abs((orbit[-1] ** 2 + c) - z) > 1e-8:
        return None
    return Cycle(points=tuple(orbit), period=period, multiplier=lam,
                 cls=classify_multiplier(lam))


def quad_certificate(c, budget: int = 10**6) -> HyperbolicityCertificate:
    """Hyperbolicity certificate for z^2 + c via the fast scalar kernel.

    Critical points are 0 and infinity; infinity always converges (it is a
    superattracting fixed point), so the status rests on the orbit of 0.
    """
    c = complex(c)
    inf_cycle = Cycle(points=(INF,), period=1, multiplier=0.0 + 0.0j,
                      cls="superattracting")
    fates = [CriticalFate(point=INF, outcome="infinity", cycle=inf_cycle)]
    cycles = [inf_cycle]

    verdict, steps, loop = _orbit_brent_quad(c, 0.0 + 0.0j, budget)
    if verdict == "escaped":
        fates.append(CriticalFate(point=0.0 + 0.0j, outcome="infinity",
                                  cycle=inf_cycle, steps=steps))
        status = "hyperbolic"
        n_fin = 0
    elif verdict == "converged":
        cyc = quad_attracting_cycle(c, budget)
        if cyc is None:
            fates.append(CriticalFate(point=0.0 + 0.0j, outcome="unresolved"))
            status = "not-certified"
            n_fin = 0
        else:
            cycles.append(cyc)
            if cyc.is_attracting():
                fates.append(CriticalFate(point=0.0 + 0.0j,
                                          outcome="attracting-cycle", cycle=cyc,
                                          steps=steps))
                status = "hyperbolic"
                n_fin = 1
            else:
                fates.append(CriticalFate(point=0.0 + 0.0j,
                                          outcome="non-attracting-cycle",
                                          cycle=cyc, steps=steps))
                status = "not-certified"
                n_fin = 0
    else:
        fates.append(CriticalFate(point=0.0 + 0.0j, outcome="unresolved"))
        status = "not-certified"
        n_fin = 0
    return HyperbolicityCertificate(status=status, attractors=cycles,
                                    fates=fates, n_attracting=n_fin)


# ----------------------------------------------------------------------------
# Superstable cascade and the accumulation of period doubling
# ----------------------------------------------------------------------------

@dataclass
class CascadeResult:
    superstable_params: list
    delta_estimates: list
    accumulation: float
    failure_level: Optional[int] = None


def _critical_orbit_value(c: float, n: int) -> float:
    """f_c^n(0) for real c."""
    x = 0.0
    for _ in range(n):
        x = x * x + c
    return x


def superstable_cascade(k_max: int) -> CascadeResult:
    """Superstable parameters s_k of period 2^(k-1) down the real cascade.

    s_1 = 0 and s_2 = -1 are exact; each further s_k is the sign change of
    c -> f_c^(2^(k-1))(0) bracketed inside the window predicted by the
    previous gap, bisected to floating-point resolution (the iterate is so
    steep near s_k for large k that anything coarser would leave
    |f^(2^(k-1))(0)| visibly nonzero).
    """
    if not 3 <= k_max <= 12:
        raise ValueError("k_max must be in 3..12")
    s = [0.0, -1.0]
    failure = None
    for k in range(3, k_max + 1):
        n = 2 ** (k - 1)
        gap = s[-1] - s[-2]          # negative
        lo = s[-1] + 1.2 * gap
        hi = s[-1]
        # scan from the right for the first sign change strictly inside
        m = 256
        cs = [hi + (lo - hi) * (j / m) for j in range(1, m + 1)]
        vals = [_critical_orbit_value(ci, n) for ci in cs]
        bracket = None
        for j in range(len(cs) - 1):
            if vals[j] == 0.0:
                bracket = (cs[j], cs[j])
                break
            if vals[j] * vals[j + 1] < 0.0:
                bracket = (cs[j + 1], cs[j])  # (left, right) with sign change
                break
        if bracket is None:
            failure = k
            break
        a, b = bracket
        fa = _critical_orbit_value(a, n)
        while True:
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                break
            fm = _critical_orbit_value(mid, n)
            if fm == 0.0:
                a = b = mid
                break
            if fa * fm < 0.0:
                b = mid
            else:
                a, fa = mid, fm
        s.append(0.5 * (a + b))
    deltas = [(s[i - 1] - s[i - 2]) / (s[i] - s[i - 1]) for i in range(2, len(s))]
    # Aitken delta-squared extrapolation of the superstable sequence.
    if len(s) >= 3:
        s0, s1, s2 = s[-3], s[-2], s[-1]
        denom = (s2 - s1) - (s1 - s0)
        acc = s2 - (s2 - s1) ** 2 / denom if denom != 0 else s2
    else:
        acc = s[-1]
    return CascadeResult(superstable_params=s, delta_estimates=deltas,
                         accumulation=acc, failure_level=failure)


# ----------------------------------------------------------------------------
# Hyperbolic windows along the real axis
# ----------------------------------------------------------------------------

@dataclass
class WindowRecord:
    c_lo: float
    c_hi: float
    period: int


def window_scan(c_lo: float, c_hi: float, step: float, budget: int = 40000,
                min_run: int = 3):
    """Maximal runs of equal attracting period along a real parameter grid.

    Each grid point gets a certificate (fast quadratic path); uncertified
    points break windows, and runs shorter than `min_run` grid points are
    suppressed as sampling artifacts.
    """
    if not (-2.0 - 1e-9 <= c_lo < c_hi <= 0.25 + 1e-9):
        raise ValueError("window scans live inside [-2, 0.25]")
    n = int(round((c_hi - c_lo) / step)) + 1
    grid = [c_lo + step * i for i in range(n)]
    periods = []
    for c in grid:
        cyc = quad_attracting_cycle(c, budget)
        if cyc is not None and cyc.is_attracting():
            periods.append(cyc.period)
        else:
            periods.append(None)
    records = []
    i = 0
    while i < n:
        if periods[i] is None:
            i += 1
            continue
        j = i
        while j + 1 < n and periods[j + 1] == periods[i]:
            j += 1
        if j - i + 1 >= min_run:
            records.append(WindowRecord(c_lo=grid[i], c_hi=grid[j], period=periods[i]))
        i = j + 1
    return records


# ----------------------------------------------------------------------------
# The near-boundary experiment at c = -1.99999
# ----------------------------------------------------------------------------

@dataclass
class ChallengeReport:
    c: float
    budget: int
    bounded: bool
    cycle: Optional[Cycle]
    lyapunov: float
    caveat: str = ("no attracting cycle was found within the budget; this does "
                   "NOT certify that none exists -- a periodic window narrower "
                   "than the experiment's resolution would be missed")

    def lines(self):
        out = [f"challenge report for c = {self.c!r} (budget {self.budget})",
               f"  critical orbit bounded: {'yes' if self.bounded else 'no'}"]
        if self.cycle is None:
            out.append("  attracting cycle: none found")
        else:
            lam = self.cycle.multiplier
            out.append(f"  attracting cycle: period {self.cycle.period}, "
                       f"|multiplier| = {abs(lam):.6g}")
        out.append(f"  lyapunov estimate: {self.lyapunov:+.6f}")
        out.append(f"  caveat: {self.caveat}")
        return out


def challenge_report(c: float = -1.99999, budget: int = 10**7) -> ChallengeReport:
    """Probe z^2 + c for an attracting cycle and estimate the Lyapunov exponent."""
    if budget < 10**6:
        raise ValueError("budget must be at least 10^6")
    c = float(c)
    cyc = quad_attracting_cycle(c, budget)
    # Lyapunov estimate along the critical orbit (burn-in 1000).
    x = 0.0
    bounded = True
    r = escape_radius(c)
    for _ in range(1000):
        x = x * x + c
        if abs(x) > r:
            bounded = False
            break
    total = 0.0
    n = 0
    if bounded:
        n = budget
        for _ in range(n):
            ax = abs(2.0 * x)
            total += math.log(ax) if ax > 0 else -745.0
            # spherical correction omitted: it telescopes to O(1/n) on
            # bounded real orbits
            x = x * x + c
            if abs(x) > r:
                bounded = False
                break
    lyap = total / n if n else math.inf
    return ChallengeReport(c=c, budget=budget, bounded=bounded,
                           cycle=cyc if (cyc and cyc.is_attracting()) else None,
                           lyapunov=lyap)
