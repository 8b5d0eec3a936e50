"""Rational maps f = P/Q on the Riemann sphere.

Coefficients are stored highest degree first.  After construction P and Q
are stored padded to a common length d+1 where d = max(deg P, deg Q) is the
degree of the map; evaluation at and beyond |z| = 1 switches to the 1/z
chart (reversed coefficient arrays), so there is no overflow at poles or at
infinity.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NumericError
from .roots import aberth_roots, poly_roots, trim_leading
from .sphere import INF, SpherePoint, is_inf

__all__ = ["RationalMap", "eval_map", "degree", "critical_points",
           "spherical_derivative"]

# Relative tolerance for matching roots of P and Q in the approximate gcd.
_GCD_TOL = 1e-9
# Relative tolerance for trimming float cancellation debris in derived
# polynomials (Wronskian leading terms).
_TRIM_TOL = 1e-12


def _horner(coeffs: list, z: complex) -> complex:
    acc = 0.0 + 0.0j
    for c in coeffs:
        acc = acc * z + c
    return acc


def _deflate(coeffs: np.ndarray, root: complex) -> np.ndarray:
    """Synthetic division by (z - root)."""
    out = np.empty(coeffs.size - 1, dtype=complex)
    acc = 0.0 + 0.0j
    for i in range(coeffs.size - 1):
        acc = acc * root + coeffs[i]
        out[i] = acc
    return out


class RationalMap:
    """A rational map of degree >= 1, as a coprime pair of polynomials."""

    def __init__(self, p_coeffs, q_coeffs=(1.0,), reduce: bool = True,
                 trim_tol: float = 1e-14):
        # trim_tol cleans float debris from user-supplied leading entries;
        # internal compositions pass 0.0 because their tiny leading
        # coefficients are genuine (huge but real dynamic range).
        p = trim_leading(p_coeffs, rel_tol=trim_tol)
        q = trim_leading(q_coeffs, rel_tol=trim_tol)
        if np.all(p == 0):
            raise ValueError("zero map is not a rational map")
        if np.all(q == 0):
            raise ValueError("denominator is identically zero")
        if reduce and p.size > 1 and q.size > 1:
            p, q = self._cancel_common_roots(p, q)
        # Joint scaling is free (the map is a ratio); keep coefficients O(1)
        # so iterated composition cannot overflow.
        norm = max(float(np.max(np.abs(p))), float(np.max(np.abs(q))))
        p = p / norm
        q = q / norm
        d = max(p.size, q.size) - 1
        if d < 1:
            raise ValueError("constant maps are rejected (degree must be >= 1)")
        self._p = np.concatenate([np.zeros(d + 1 - p.size, dtype=complex), p])
        self._q = np.concatenate([np.zeros(d + 1 - q.size, dtype=complex), q])
        self._degree = d
        # Reversed arrays evaluate f(1/w): z^d P(1/z) has reversed coefficients.
        self._pr = self._p[::-1].copy()
        self._qr = self._q[::-1].copy()
        self._dp = np.polyder(self._p) if d >= 1 else np.zeros(1, dtype=complex)
        self._dq = np.polyder(self._q) if d >= 1 else np.zeros(1, dtype=complex)
        # Wronskian P'Q - PQ' in both charts, for the spherical derivative.
        self._w = self._wronskian(self._p, self._q)
        self._wr = self._wronskian(self._pr, self._qr)
        # plain-python coefficient lists: scalar Horner on python complexes
        # beats np.polyval by an order of magnitude for orbit work
        self._pl = [complex(c) for c in self._p]
        self._ql = [complex(c) for c in self._q]
        self._prl = [complex(c) for c in self._pr]
        self._qrl = [complex(c) for c in self._qr]
        self._wl = [complex(c) for c in self._w]

    @staticmethod
    def _wronskian(p, q):
        w = np.polysub(np.polymul(np.polyder(p), q), np.polymul(p, np.polyder(q)))
        return trim_leading(w, rel_tol=_TRIM_TOL)

    @staticmethod
    def _cancel_common_roots(p, q):
        pr = aberth_roots(p)
        qr = aberth_roots(q)
        used = set()
        cancelled = []
        for rp in pr:
            for j, rq in enumerate(qr):
                if j in used:
                    continue
                if abs(rp - rq) <= _GCD_TOL * (1.0 + abs(rp)):
                    used.add(j)
                    cancelled.append(0.5 * (rp + rq))
                    break
        for r in cancelled:
            p = _deflate(p, r)
            q = _deflate(q, r)
        return p, q

    # -- basic protocol ----------------------------------------------------

    @classmethod
    def quadratic(cls, c) -> "RationalMap":
        """The polynomial z^2 + c."""
        return cls([1.0, 0.0, complex(c)], [1.0], reduce=False)

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def p(self) -> np.ndarray:
        return self._p.copy()

    @property
    def q(self) -> np.ndarray:
        return self._q.copy()

    def is_polynomial(self) -> bool:
        return bool(np.all(self._q[:-1] == 0) and self._q[-1] != 0)

    def __repr__(self):
        return f"RationalMap(degree={self._degree})"

    # -- evaluation ---------------------------------------------------------

    def __call__(self, z: SpherePoint) -> SpherePoint:
        """Evaluate f(z) on the sphere; total (no exceptions, no overflow)."""
        if is_inf(z):
            num, den = self._prl[-1], self._qrl[-1]
            if den == 0:
                return INF
            return num / den
        z = complex(z)
        if abs(z) <= 1.0:
            num = _horner(self._pl, z)
            den = _horner(self._ql, z)
        else:
            w = 1.0 / z
            num = _horner(self._prl, w)
            den = _horner(self._qrl, w)
        if den == 0:
            return INF
        val = num / den
        if math.isinf(val.real) or math.isinf(val.imag) or math.isnan(val.real) or math.isnan(val.imag):
            return INF
        return val

    def derivative_value(self, z: complex) -> complex:
        """f'(z) for finite z away from poles (plain complex derivative)."""
        z = complex(z)
        num = _horner(self._wl, z)
        den = _horner(self._ql, z) ** 2
        return num / den

    def spherical_derivative(self, z: SpherePoint) -> float:
        """Norm of the derivative in the spherical metric, chart independent.

        For finite z this is |f'(z)| (1+|z|^2) / (1+|f(z)|^2), computed in the
        pole-safe form |P'Q - PQ'| (1+|z|^2) / (|P|^2 + |Q|^2).
        """
        if is_inf(z):
            w = 0.0 + 0.0j
            pair = self._wrl_cache()
        else:
            z = complex(z)
            if abs(z) <= 1.0:
                w = z
                pair = (self._pl, self._ql, self._wl)
            else:
                w = 1.0 / z
                pair = self._wrl_cache()
        pp, qq, wr = pair
        a = _horner(pp, w)
        b = _horner(qq, w)
        ww = _horner(wr, w)
        denom = abs(a) ** 2 + abs(b) ** 2
        if denom == 0:
            raise NumericError("P and Q vanished together; map is not reduced")
        return abs(ww) * (1.0 + abs(w) ** 2) / denom

    def _wrl_cache(self):
        if not hasattr(self, "_wrl"):
            self._wrl = (self._prl, self._qrl, [complex(c) for c in self._wr])
        return self._wrl

    # -- structure ----------------------------------------------------------

    def critical_points(self):
        """Critical points with multiplicities; total count is 2d - 2.

        Returns a list of (point, multiplicity); includes INF when infinity
        is critical.
        """
        d = self._degree
        if d < 2:
            raise ValueError("critical points require degree >= 2")
        w = self._w
        if w.size == 1 and w[0] == 0:
            raise NumericError("derivative vanished identically")
        finite = []
        deg_w = w.size - 1
        if deg_w >= 1:
            res = poly_roots(w)
            finite = list(zip(res.roots, res.multiplicities))
        m_inf = (2 * d - 2) - deg_w
        out = [(complex(r), int(m)) for r, m in finite]
        if m_inf > 0:
            out.append((INF, int(m_inf)))
        return out

    def inverted(self) -> "RationalMap":
        """Conjugation by z -> 1/z: returns (1/f(1/w)) as a map of w."""
        return RationalMap(self._qr, self._pr, reduce=False)

    def compose(self, inner: "RationalMap") -> "RationalMap":
        """self o inner.  Composition of reduced maps stays reduced."""
        u, v = inner._p, inner._q
        d = self._degree
        num = np.zeros(1, dtype=complex)
        den = np.zeros(1, dtype=complex)
        # P(U/V) V^d = sum a_i U^(d-i) V^i, likewise for Q.
        upow = [np.ones(1, dtype=complex)]
        vpow = [np.ones(1, dtype=complex)]
        for _ in range(d):
            upow.append(np.polymul(upow[-1], u))
            vpow.append(np.polymul(vpow[-1], v))
        for i in range(d + 1):
            term = np.polymul(upow[d - i], vpow[i])
            if self._p[i] != 0:
                num = np.polyadd(num, self._p[i] * term)
            if self._q[i] != 0:
                den = np.polyadd(den, self._q[i] * term)
        return RationalMap(num, den, reduce=False, trim_tol=0.0)

    def iterate_map(self, n: int) -> "RationalMap":
        """The n-th iterate f^n as a rational map (degree d^n)."""
        if n < 1:
            raise ValueError("n must be >= 1")
        out = self
        for _ in range(n - 1):
            out = self.compose(out)
        return out

    def chart_pair(self, inv_in: bool, inv_out: bool):
        """Coefficient pair of chart_out o f o chart_in^-1 (charts: z or 1/z)."""
        if not inv_in and not inv_out:
            return self._p, self._q
        if not inv_in and inv_out:
            return self._q, self._p
        if inv_in and not inv_out:
            return self._pr, self._qr
        return self._qr, self._pr


# -- module-level operation aliases (the library's contract surface) --------

def eval_map(map_: RationalMap, z: SpherePoint) -> SpherePoint:
    return map_(z)


def degree(map_: RationalMap) -> int:
    return map_.degree


def critical_points(map_: RationalMap):
    return map_.critical_points()


def spherical_derivative(map_: RationalMap, z: SpherePoint) -> float:
    return map_.spherical_derivative(z)
