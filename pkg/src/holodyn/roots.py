"""Polynomial helpers and a simultaneous (Aberth-Ehrlich) root solver.

Coefficients are always highest degree first, matching numpy's polyval.
The solver is fully deterministic: initial guesses sit on a circle of
radius 1 + max|a_k/a_0| at fixed angles, so repeated runs agree bitwise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import RootSolveError

__all__ = [
    "PolyRootResult",
    "aberth_roots",
    "poly_roots",
    "polyval",
    "trim_leading",
]

# Angular offset for the initial-guess circle; any fixed non-symmetric value
# works, this one avoids stalling on z^n - a type symmetry.
_ANGLE_OFFSET = 0.7


@dataclass
class PolyRootResult:
    """Roots with multiplicity counts and the worst residual |p(root)|."""

    roots: list
    multiplicities: list
    residual: float

    def all_roots(self):
        """Roots repeated according to multiplicity."""
        out = []
        for r, m in zip(self.roots, self.multiplicities):
            out.extend([r] * m)
        return out


def trim_leading(coeffs, rel_tol: float = 0.0) -> np.ndarray:
    """Drop leading coefficients that are zero (or tiny relative to the max)."""
    a = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if a.size == 0:
        return a
    scale = np.max(np.abs(a))
    if scale == 0.0:
        return a[:1] * 0.0
    cut = rel_tol * scale
    k = 0
    while k < a.size - 1 and abs(a[k]) <= cut:
        k += 1
    return a[k:]


def polyval(coeffs, z):
    """Horner evaluation; works on scalars and arrays."""
    return np.polyval(np.asarray(coeffs, dtype=complex), z)


def _quadratic_roots(a, b, c):
    """Numerically stable quadratic formula."""
    disc = cmath.sqrt(b * b - 4.0 * a * c)
    if abs(b + disc) >= abs(b - disc):
        q = -0.5 * (b + disc)
    else:
        q = -0.5 * (b - disc)
    r1 = q / a
    r2 = c / q if q != 0 else 0.0 + 0.0j
    return np.array([r1, r2], dtype=complex)


def _initial_guesses(a: np.ndarray) -> np.ndarray:
    """Starting points from the Newton polygon of the coefficients.

    The upper convex hull of (k, log|a_k|) splits the index range into
    blocks; each hull edge of horizontal extent m contributes m guesses on
    the circle whose radius is the edge's root-magnitude estimate
    (|a_k2/a_k1|)^(1/m).  A single circle of radius 1 + max|a_k| cannot
    serve polynomials whose roots span several orders of magnitude (cycle
    equations of composed maps do).
    """
    n = a.size - 1
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(a))
    ks = [k for k in range(n + 1) if math.isfinite(logs[k])]
    # upper convex hull (Andrew scan over indices with finite log-magnitude)
    hull = []
    for k in ks:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (k - x1) <= (logs[k] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((k, logs[k]))
    guesses = np.empty(n, dtype=complex)
    pos = 0
    for (k1, y1), (k2, y2) in zip(hull[:-1], hull[1:]):
        m = k2 - k1
        r = math.exp((y2 - y1) / m)
        j = np.arange(m)
        ang = 2.0 * np.pi * (j / m + 0.26 * k1 / max(n, 1)) + _ANGLE_OFFSET
        guesses[pos:pos + m] = r * np.exp(1j * ang)
        pos += m
    if pos < n:  # degenerate hull (should not happen); pad on the unit circle
        j = np.arange(pos, n)
        guesses[pos:] = np.exp(1j * (2.0 * np.pi * j / n + _ANGLE_OFFSET))
    return guesses


def aberth_roots(coeffs, tol: float = 1e-12, max_sweeps: int = 500) -> np.ndarray:
    """All complex roots of a polynomial via simultaneous iteration.

    Degrees 1 and 2 use closed forms; degree >= 3 runs Aberth-Ehrlich from
    the fixed initial-guess circle.  The variable is rescaled by the
    Fujiwara root bound first, which keeps every balanced coefficient at
    most 1 in magnitude, so degree ~300 cycle equations with astronomically
    spread coefficients evaluate without overflow.  Raises RootSolveError
    when the sweep cap is reached without an acceptable residual.
    """
    a = trim_leading(coeffs)
    n = a.size - 1
    if n < 1:
        raise ValueError("polynomial degree must be >= 1")
    if a[0] == 0:
        raise ValueError("leading coefficient is zero after trimming")
    scale_in = float(np.max(np.abs(a)))
    a = a / a[0]
    if n == 1:
        return np.array([-a[1]], dtype=complex)
    if n == 2:
        return _quadratic_roots(1.0 + 0.0j, a[1], a[2])

    # Roots at the origin come from trailing zeros; strip them first.
    t_zeros = 0
    while a[-1] == 0:
        a = a[:-1]
        t_zeros += 1
    n_eff = a.size - 1
    if n_eff == 0:
        return np.zeros(t_zeros, dtype=complex)

    # Balance: z = s*u with s = max |a_k|^(1/k); then |scaled coeffs| <= 1.
    mags = np.abs(a[1:])
    ks = np.arange(1, n_eff + 1, dtype=float)
    with np.errstate(divide="ignore"):
        s = float(np.max(np.where(mags > 0, mags ** (1.0 / ks), 0.0))) if n_eff else 1.0
    if s <= 0.0 or not math.isfinite(s):
        s = 1.0
    a = a * s ** -np.arange(n_eff + 1, dtype=float)
    da = np.polyder(a)

    z = _initial_guesses(a)

    # High-degree polynomials hit the float64 Horner noise floor before the
    # roots are located; 80-bit evaluation buys the missing digits.
    if n_eff > 60:
        a_ev = a.astype(np.clongdouble)
        da_ev = da.astype(np.clongdouble)

        def _eval(c, x):
            return np.polyval(c, x.astype(np.clongdouble)).astype(complex)
    else:
        a_ev, da_ev = a, da

        def _eval(c, x):
            return np.polyval(c, x)

    def sweeps(z, cap):
        for _ in range(cap):
            p = _eval(a_ev, z)
            dp = _eval(da_ev, z)
            bad = (dp == 0) | ~np.isfinite(dp) | ~np.isfinite(p)
            if np.any(bad):
                z = np.where(bad, z * (1.0 + 1e-8) + 1e-8, z)
                p = _eval(a_ev, z)
                dp = _eval(da_ev, z)
            w = p / dp
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
            if np.max(np.abs(corr)) < tol * (1.0 + np.max(np.abs(z))):
                return z, True
        return z, False

    with np.errstate(all="ignore"):
        z, converged = sweeps(z, max_sweeps)

        # Two estimates can settle on the same simple root (the pairwise
        # repulsion vanishes with the Newton term); reseed the extras on a
        # widened deterministic circle and relax again.
        for round_ in (1, 2, 3):
            dp = np.polyval(da, z)
            simple = np.abs(dp) > 1e-9
            order = np.lexsort((z.imag, z.real))
            dup_idx = []
            for i, j in zip(order[:-1], order[1:]):
                if simple[i] and simple[j] and \
                        abs(z[i] - z[j]) < 1e-7 * (1.0 + abs(z[i])):
                    dup_idx.append(int(j))
            if not dup_idx:
                break
            rad = (1.0 + 0.5 * round_) * float(np.median(np.abs(z)) + 1.0)
            for m, j in enumerate(dup_idx):
                ang = 2.0 * np.pi * (m / len(dup_idx) + 0.137 * round_)
                z[j] = rad * np.exp(1j * (ang + _ANGLE_OFFSET))
            z, converged = sweeps(z, max_sweeps // 2)

        # A couple of plain Newton polish sweeps sharpen simple roots.
        for _ in range(2):
            p = _eval(a_ev, z)
            dp = _eval(da_ev, z)
            step = np.where(dp != 0, p / np.where(dp != 0, dp, 1.0), 0.0)
            z = z - np.where(np.isfinite(step), step, 0.0)

    residual = float(np.max(np.abs(np.polyval(a, z)))) * scale_in
    if not converged and residual > 1e-7 * (1.0 + scale_in):
        raise RootSolveError(
            f"Aberth iteration did not converge in {max_sweeps} sweeps "
            f"(residual {residual:.3e})",
            residual=residual,
        )
    out = z * s
    if t_zeros:
        out = np.concatenate([out, np.zeros(t_zeros, dtype=complex)])
    return out


def _cluster(roots: np.ndarray, ctol: float):
    """Group near-coincident roots; returns (representatives, counts)."""
    order = np.lexsort((roots.imag, roots.real))
    reps = []
    counts = []
    members = []
    for idx in order:
        z = roots[idx]
        placed = False
        for j, r in enumerate(reps):
            if abs(z - r) <= ctol:
                members[j].append(z)
                counts[j] += 1
                reps[j] = sum(members[j]) / len(members[j])
                placed = True
                break
        if not placed:
            reps.append(z)
            counts.append(1)
            members.append([z])
    return reps, counts


def poly_roots(coeffs, tol: float = 1e-12, max_sweeps: int = 500,
               cluster_tol: float = None) -> PolyRootResult:
    """Roots with multiplicities; the algebraic oracle used everywhere else.

    ``cluster_tol`` controls when nearby numerical roots are reported as one
    multiple root.  An m-fold root is located only to eps^(1/m) in float64
    (~1e-5 for a triple root), so the default is 1e-5 * (1 + max|root|);
    callers that know their roots are simple and tightly spaced can pass
    something finer.
    """
    a = trim_leading(coeffs)
    roots = aberth_roots(a, tol=tol, max_sweeps=max_sweeps)
    if cluster_tol is None:
        mag = 1.0 + (float(np.max(np.abs(roots))) if roots.size else 0.0)
        cluster_tol = 1e-5 * mag
    reps, counts = _cluster(roots, cluster_tol)
    residual = float(np.max(np.abs(np.polyval(a, np.asarray(reps))))) if reps else 0.0
    return PolyRootResult(roots=[complex(r) for r in reps],
                          multiplicities=list(counts),
                          residual=residual)
