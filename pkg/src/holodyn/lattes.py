"""Lattes maps: rational maps covered by torus endomorphisms x -> n x.

The Weierstrass p-function realizes the quotient of the torus C/(Z + tau Z)
by x ~ -x as the Riemann sphere; multiplication by n on the torus descends
to a degree n^2 rational map f with f(wp(z)) = wp(n z).

Numerical routes
----------------
* Lattice invariants: the literal truncated Eisenstein sums (the contract
  operation, with an honest tail bound) and a q-series evaluation that is
  exact to machine precision; the Lattice object uses the latter.
* wp and wp': argument reduction into the centered fundamental cell, a
  Laurent series where it converges fast, then on-curve duplication back
  up.  The literal truncated lattice sum is kept as `wp_sum`, the
  independent cross-check oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cycles import find_cycles
from .errors import NumericError, PoleError
from .ratmap import RationalMap
from .rng import uniform01
from .sphere import INF, is_inf

__all__ = [
    "Lattice", "lattice_invariants", "eisenstein_g", "wp", "wp_prime",
    "wp_pair", "wp_sum", "lattes_map", "semiconjugacy_residual",
    "line_field_residual", "repelling_density_probe",
]

_LAURENT_TERMS = 28


# ----------------------------------------------------------------------------
# Lattice invariants
# ----------------------------------------------------------------------------

def lattice_invariants(tau: complex, N: int):
    """Truncated Eisenstein sums over the lattice Z + tau Z.

    g2 = 60 * sum' w^-4 and g3 = 140 * sum' w^-6 over 0 < max(|m|,|n|) <= N,
    summed ring by ring in a fixed order.  Returns (g2, g3, tail2, tail3)
    where the tails bound the truncation error (the ring sums decay like
    k^-3 and k^-5, so the direct sums converge slowly; see eisenstein_g for
    the machine-precision route).
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("Im(tau) must be positive")
    if N < 50:
        raise ValueError("N must be >= 50")
    s4 = 0.0 + 0.0j
    s6 = 0.0 + 0.0j
    for k in range(1, N + 1):
        ring = []
        for m in range(-k, k + 1):
            ring.append(m + k * tau)
            ring.append(m - k * tau)
        for n in range(-k + 1, k):
            ring.append(k + n * tau)
            ring.append(-k + n * tau)
        w = np.asarray(ring)
        w4 = w ** -4
        s4 += w4.sum()
        s6 += (w4 * w ** -2).sum()
    # Shortest nonzero vector of the unit ring bounds |w| >= h*k on ring k.
    h = min(abs(m + n * tau)
            for m in (-1, 0, 1) for n in (-1, 0, 1) if (m, n) != (0, 0))
    tail2 = 60.0 * 8.0 * h ** -4 / (2.0 * N ** 2)
    tail3 = 140.0 * 8.0 * h ** -6 / (4.0 * N ** 4)
    return 60.0 * s4, 140.0 * s6, tail2, tail3


def eisenstein_g(tau: complex):
    """(g2, g3) for Z + tau Z via the Eisenstein q-series (machine precision).

    g2 = (4 pi^4 / 3) E4 and g3 = (8 pi^6 / 27) E6 with q = exp(2 pi i tau);
    the series converge geometrically for Im(tau) bounded away from 0.
    """
    tau = complex(tau)
    if tau.imag <= 0.05:
        raise ValueError("Im(tau) too small for the q-series")
    q = cmath.exp(2j * cmath.pi * tau)
    e4 = 0.0 + 0.0j
    e6 = 0.0 + 0.0j
    qn = 1.0 + 0.0j
    for n in range(1, 400):
        qn *= q
        term4 = n ** 3 * qn / (1.0 - qn)
        term6 = n ** 5 * qn / (1.0 - qn)
        e4 += term4
        e6 += term6
        if abs(term4) + abs(term6) < 1e-20 * (1.0 + abs(e4) + abs(e6)):
            break
    e4 = 1.0 + 240.0 * e4
    e6 = 1.0 - 504.0 * e6
    g2 = (4.0 * math.pi ** 4 / 3.0) * e4
    g3 = (8.0 * math.pi ** 6 / 27.0) * e6
    return g2, g3


def _laurent_coeffs(g2: complex, g3: complex, terms: int) -> np.ndarray:
    """Coefficients c_k of wp(z) = z^-2 + sum_{k>=2} c_k z^(2k-2)."""
    c = np.zeros(terms + 1, dtype=complex)
    c[2] = g2 / 20.0
    c[3] = g3 / 28.0
    for k in range(4, terms + 1):
        acc = 0.0 + 0.0j
        for m in range(2, k - 1):
            acc += c[m] * c[k - m]
        c[k] = 3.0 * acc / ((2 * k + 1) * (k - 3))
    return c


@dataclass
class Lattice:
    """The lattice Z + tau Z with its Weierstrass data.

    g2/g3 default to the q-series values; `truncation` is the ring count
    used by the literal-sum oracle wp_sum and lattice_invariants.
    """

    tau: complex
    g2: complex = None
    g3: complex = None
    truncation: int = 100
    _laurent: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.tau = complex(self.tau)
        if self.tau.imag <= 0:
            raise ValueError("Im(tau) must be positive")
        if self.g2 is None or self.g3 is None:
            self.g2, self.g3 = eisenstein_g(self.tau)
        self._laurent = _laurent_coeffs(self.g2, self.g3, _LAURENT_TERMS)
        # shortest lattice vector length (over the unit ring suffices after
        # reduction to the centered cell)
        self.min_vector = min(abs(m + n * self.tau)
                              for m in (-1, 0, 1) for n in (-1, 0, 1)
                              if (m, n) != (0, 0))

    def reduce(self, z):
        """Translate z by the lattice into the centered fundamental cell."""
        z = np.asarray(z, dtype=complex)
        y = z.imag / self.tau.imag
        x = z.real - y * self.tau.real
        x = x - np.round(x)
        y = y - np.round(y)
        return x + y * self.tau

    def half_periods(self):
        return (0.5, 0.5 * self.tau, 0.5 * (1.0 + self.tau))


def wp_pair(z, lattice: Lattice, pole_tol: float = 1e-8):
    """(wp(z), wp'(z)), vectorized over z.

    Reduction into the centered cell, halving until the Laurent series
    converges fast, then on-curve point doubling back up:
      slope  t = (6 x^2 - g2/2) / y,
      x(2z) = t^2/4 - 2 x,   y(2z) = t (x - x(2z)) - y.
    Raises PoleError when any sample is within pole_tol of a lattice point.
    """
    scalar = np.isscalar(z) or (isinstance(z, complex))
    zr = lattice.reduce(np.atleast_1d(np.asarray(z, dtype=complex)))
    if np.any(np.abs(zr) < pole_tol):
        raise PoleError("wp evaluated too close to a lattice point")
    h = lattice.min_vector
    target = 0.25 * h
    maxmod = float(np.max(np.abs(zr)))
    m = max(0, int(math.ceil(math.log2(max(maxmod / target, 1e-300)))))
    w = zr / (2.0 ** m)

    # Laurent series at the reduced argument.
    c = lattice._laurent
    w2 = w * w
    x = 1.0 / w2
    y = -2.0 / (w2 * w)
    acc_x = np.zeros_like(w)
    acc_y = np.zeros_like(w)
    p = np.ones_like(w)
    for k in range(2, c.size):
        p = p * w2  # w^(2(k-1))
        acc_x = acc_x + c[k] * p
        acc_y = acc_y + (2 * k - 2) * c[k] * p
    x = x + acc_x
    y = y + acc_y / w

    g2 = lattice.g2
    for _ in range(m):
        t = (6.0 * x * x - 0.5 * g2) / y
        x2 = 0.25 * t * t - 2.0 * x
        y = t * (x - x2) - y
        x = x2
    if scalar:
        return complex(x[0]), complex(y[0])
    return x, y


def wp(z, lattice: Lattice):
    """Weierstrass p-function for the lattice Z + tau Z."""
    return wp_pair(z, lattice)[0]


def wp_prime(z, lattice: Lattice):
    return wp_pair(z, lattice)[1]


def wp_sum(z, lattice: Lattice, N: Optional[int] = None):
    """Literal truncated symmetric lattice sum for wp (cross-check oracle).

    Error decays like N^-2: slow, but an independent route to the same
    function.  Returns wp only.
    """
    if N is None:
        N = lattice.truncation
    z = complex(z)
    zr = complex(lattice.reduce(z))
    total = 1.0 / (zr * zr)
    tau = lattice.tau
    for k in range(1, N + 1):
        ring = []
        for mm in range(-k, k + 1):
            ring.append(mm + k * tau)
            ring.append(mm - k * tau)
        for nn in range(-k + 1, k):
            ring.append(k + nn * tau)
            ring.append(-k + nn * tau)
        for wv in ring:
            total += 1.0 / ((zr - wv) * (zr - wv)) - 1.0 / (wv * wv)
    return total


# ----------------------------------------------------------------------------
# The covered rational map
# ----------------------------------------------------------------------------

def lattes_map(n: int, lattice: Lattice) -> RationalMap:
    """The degree n^2 rational map with f(wp(z)) = wp(n z), for n = 2^k.

    n = 2 is the duplication formula
        w -> (w^4 + g2 w^2 / 2 + 2 g3 w + g2^2/16) / (4 w^3 - g2 w - g3);
    higher powers of two compose it with itself.
    """
    if n < 2 or (n & (n - 1)) != 0:
        raise ValueError("only n = 2^k torus multipliers are constructed")
    g2, g3 = lattice.g2, lattice.g3
    p = np.array([1.0, 0.0, 0.5 * g2, 2.0 * g3, g2 * g2 / 16.0], dtype=complex)
    q = np.array([4.0, 0.0, -g2, -g3], dtype=complex)
    f = RationalMap(p, q, reduce=False)
    # coprimality check: numerator at the roots of the denominator
    den_roots = np.roots(q)
    vals = np.abs(np.polyval(p, den_roots))
    if np.min(vals) < 1e-9 * (1.0 + float(np.max(np.abs(p)))):
        raise NumericError("duplication formula failed to reduce (degenerate lattice)")
    if f.degree != 4:
        raise NumericError("constructed map does not have degree 4")
    out = f
    m = n
    while m > 2:
        out = out.compose(f)
        m //= 2
    return out


# ----------------------------------------------------------------------------
# Numerical verification of the semiconjugacy and the line field
# ----------------------------------------------------------------------------

def _sample_cell(lattice: Lattice, samples: int, seed: int,
                 margin: float = 0.05) -> np.ndarray:
    """Deterministic samples of the fundamental cell, margin away from the
    lattice and half-lattice points (poles and line-field singularities)."""
    out = np.empty(samples, dtype=complex)
    half = [0.0 + 0.0j, 0.5 + 0.0j, 0.5 * lattice.tau, 0.5 * (1.0 + lattice.tau)]
    filled = 0
    attempt = 0
    while filled < samples:
        k = samples - filled
        idx = np.arange(filled, samples, dtype=np.uint64)
        u1 = uniform01(seed, idx, stream=10 + 2 * attempt)
        u2 = uniform01(seed, idx, stream=11 + 2 * attempt)
        z = u1 + u2 * lattice.tau
        zc = lattice.reduce(z)
        ok = np.ones(k, dtype=bool)
        for hp in half:
            ok &= np.abs(lattice.reduce(zc - hp)) >= margin
        good = z[ok]
        take = min(good.size, k)
        out[filled:filled + take] = good[:take]
        filled += take
        attempt += 1
        if attempt > 200:
            raise NumericError("sampling the fundamental cell kept hitting margins")
    return out


def _sphere_dist_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Spherical distance between arrays of finite complex points."""
    num = 2.0 * np.abs(a - b)
    den = np.hypot(1.0, np.abs(a)) * np.hypot(1.0, np.abs(b))
    return 2.0 * np.arcsin(np.minimum(1.0, 0.5 * num / den))


def semiconjugacy_residual(map_: RationalMap, n: int, lattice: Lattice,
                           samples: int, seed: int) -> float:
    """sup over samples of d_sphere(f(wp(z)), wp(n z)).

    wp(n z) is evaluated by its own reduction (n z wraps to a different
    representative), so the comparison genuinely tests the commuting square
    rather than replaying the construction of f.
    """
    if samples < 10**3:
        raise ValueError("need at least 10^3 samples")
    z = _sample_cell(lattice, samples, seed)
    w, _ = wp_pair(z, lattice)
    wn, _ = wp_pair(n * z, lattice)
    fw = np.empty_like(w)
    for i in range(w.size):  # scalar map eval keeps the pole handling exact
        val = map_(complex(w[i]))
        fw[i] = 1e300 if is_inf(val) else val
    wn = np.where(np.isfinite(wn), wn, 1e300)
    return float(np.max(_sphere_dist_arrays(fw, wn)))


def _angle_mod_pi(x: np.ndarray) -> np.ndarray:
    """Fold angles into [0, pi)."""
    return np.mod(x, np.pi)


def line_field_residual(map_: RationalMap, n: int, lattice: Lattice,
                        samples: int, seed: int) -> float:
    """sup angular defect (mod pi) of the transported horizontal foliation.

    At w = wp(z) the invariant line has direction arg wp'(z) mod pi; the
    derivative of f must carry it to the line at f(w), whose direction is
    arg wp'(n z) mod pi.  Equivalently arg(f'(w) wp'(z)) = arg(wp'(n z))
    mod pi; the residual is the sup of the angular difference.
    """
    if samples < 10**3:
        raise ValueError("need at least 10^3 samples")
    z = _sample_cell(lattice, samples, seed)
    w, wp1 = wp_pair(z, lattice)
    _, wpn = wp_pair(n * z, lattice)
    fprime = np.empty_like(w)
    for i in range(w.size):
        fprime[i] = map_.derivative_value(complex(w[i]))
    lhs = np.angle(fprime * wp1)
    rhs = np.angle(wpn)
    diff = _angle_mod_pi(lhs - rhs)
    return float(np.max(np.minimum(diff, np.pi - diff)))


# ----------------------------------------------------------------------------
# Repelling periodic points as a density probe for J = sphere
# ----------------------------------------------------------------------------

def _cell_centers(grid_size: int):
    """Centers of an equal-area grid on the sphere, as complex points + caps.

    Cells are the product of `grid_size` equal slabs of cos(colatitude) and
    `grid_size` azimuth sectors; returns (points, circumradius) where the
    circumradius is the spherical half-diagonal of each cell.
    """
    g = grid_size
    t = 1.0 - 2.0 * (np.arange(g) + 0.5) / g          # cos(theta) centers
    phi = 2.0 * np.pi * (np.arange(g) + 0.5) / g
    tt, pp = np.meshgrid(t, phi, indexing="ij")
    r = np.sqrt((1.0 - tt) / (1.0 + tt))
    pts = (r * np.exp(1j * pp)).ravel()
    # per-row circumradius: half-diagonal of a (dtheta x dphi sin theta) cell
    theta = np.arccos(tt)
    dtheta = 2.0 / g / np.maximum(np.sin(theta), 1e-9)
    darc = np.sin(theta) * (2.0 * np.pi / g)
    circ = 0.5 * np.hypot(dtheta, darc).ravel()
    return pts, circ


def repelling_density_probe(map_: RationalMap, period_bound: int,
                            grid_size: int) -> float:
    """Fraction of grid cells with a repelling periodic point within the
    cell's circumradius of its center.

    Evidence (not proof) for a Julia set filling the sphere: compare the
    coverage against a control map whose Julia set is a circle.
    """
    cycles = find_cycles(map_, period_bound)
    pts = []
    for cyc in cycles:
        if cyc.cls != "repelling":
            continue
        for p in cyc.points:
            pts.append(0.0 + 0.0j if is_inf(p) else complex(p))
            if is_inf(p):
                pts[-1] = complex(1e18, 0.0)  # stereographic north pole proxy
    if not pts:
        return 0.0
    pts = np.asarray(pts)
    centers, circ = _cell_centers(grid_size)
    # chordal distances centers x points, converted to great-circle
    a = centers[:, None]
    b = pts[None, :]
    num = 2.0 * np.abs(a - b)
    den = np.hypot(1.0, np.abs(a)) * np.hypot(1.0, np.abs(b))
    d = 2.0 * np.arcsin(np.minimum(1.0, 0.5 * num / den))
    hit = (d.min(axis=1) <= circ)
    return float(hit.mean())
