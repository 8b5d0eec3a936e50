"""Yoccoz puzzles: nested tilings cut by landed ray cycles and equipotentials.

Depth-0 pieces are the components of the equipotential disk minus the
landed rays; depth d+1 pieces are the preimage components, whose
boundaries are the rays at the halved angles plus the equipotential at
half the potential.  All boundaries come from one shared Boettcher tracer,
so a child's boundary samples map exactly onto its parent's under f_c.

Pieces are faces of a planar graph (nodes: landing points and equipotential
endpoints; edges: truncated rays and equipotential arcs), traversed with a
rotation system sorted by geometric departure direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import LandingError, NumericError
from .rays import BoettcherTracer

__all__ = ["PuzzlePiece", "PuzzleTree", "puzzle_build", "piece_diameters",
           "winding_number"]

# equipotential samples per angular gap (uniform across depths so that
# child arc samples double exactly onto parent arc samples)
_ARC_SAMPLES = 16
_CLUSTER_TOL = 1e-5


@dataclass
class PuzzlePiece:
    depth: int
    label: int
    boundary: np.ndarray            # closed polyline (first point not repeated)
    parent: Optional[int] = None
    angle_gaps: list = field(default_factory=list)  # equipotential gaps (lo, hi)
    marker: complex = 0j            # a point in the interior

    def diameter(self) -> float:
        pts = self.boundary
        if len(pts) > 600:
            step = len(pts) // 600 + 1
            pts = pts[::step]
        d = np.abs(pts[:, None] - pts[None, :])
        return float(d.max())


@dataclass
class PuzzleTree:
    c: complex
    g0: float
    depths: list                    # depths[d] = list of PuzzlePiece
    landing_point: complex          # common landing point of the base rays

    def pieces(self, depth: int):
        return self.depths[depth]


def winding_number(boundary: np.ndarray, z: complex, guard: float = 1e-7) -> int:
    """Winding of a closed polyline around z; raises on boundary proximity."""
    d = boundary - z
    dist = np.abs(d)
    if float(dist.min()) < guard:
        raise NumericError("point lies on (or too near) a piece boundary")
    ang = np.angle(np.roll(d, -1) / d)
    return int(round(float(ang.sum()) / (2.0 * math.pi)))


def _cluster_landings(angles, landings):
    """Group ray landing points; returns (cluster centers, angle -> cluster)."""
    centers = []
    members = []
    amap = {}
    for a in angles:
        z = landings[a]
        idx = None
        for i, ctr in enumerate(centers):
            if abs(z - ctr) <= _CLUSTER_TOL:
                idx = i
                break
        if idx is None:
            centers.append(z)
            members.append([z])
            idx = len(centers) - 1
        else:
            members[idx].append(z)
            centers[idx] = sum(members[idx]) / len(members[idx])
        amap[a] = idx
    # sanity: clusters must be well separated relative to the merge radius
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            if abs(centers[i] - centers[j]) < 3.0 * _CLUSTER_TOL:
                raise LandingError(
                    "landing points too close to separate into vertices")
    return centers, amap


class _HalfEdge:
    __slots__ = ("src", "dst", "geom", "twin", "next", "face", "_rot_index")

    def __init__(self, src, dst, geom):
        self.src = src
        self.dst = dst
        self.geom = geom            # np.ndarray from src to dst
        self.twin = None
        self.next = None
        self.face = -1


def _trace_faces(halves):
    """Assign faces by next = clockwise-predecessor of twin at the head node."""
    outgoing = {}
    for h in halves:
        outgoing.setdefault(h.src, []).append(h)
    for v, outs in outgoing.items():
        def depart_dir(h):
            g = h.geom
            step = g[min(1, len(g) - 1)] - g[0]
            return math.atan2(step.imag, step.real)
        outs.sort(key=depart_dir)
        for i, h in enumerate(outs):
            h._rot_index = i  # type: ignore[attr-defined]
        outgoing[v] = outs
    for h in halves:
        outs = outgoing[h.dst]
        i = h.twin._rot_index  # type: ignore[attr-defined]
        h.next = outs[(i - 1) % len(outs)]
    faces = []
    for h in halves:
        if h.face >= 0:
            continue
        face = []
        cur = h
        while cur.face < 0:
            cur.face = len(faces)
            face.append(cur)
            cur = cur.next
        faces.append(face)
    return faces


def _face_boundary(face) -> np.ndarray:
    parts = []
    for h in face:
        geom = h.geom
        parts.append(geom[:-1])
    return np.concatenate(parts)


def _signed_area(poly: np.ndarray) -> float:
    x, y = poly.real, poly.imag
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.sum(x * y2 - x2 * y))


def puzzle_build(c, angles=(Fraction(1, 7), Fraction(2, 7), Fraction(4, 7)),
                 g0: float = math.log(2.0), depth_max: int = 0,
                 steps_per_halving: int = 8) -> PuzzleTree:
    """Build the puzzle tree for f_c down to depth_max.

    The given angles must be forward invariant under doubling and their
    rays must land at a common (repelling) fixed point; both are checked.
    """
    c = complex(c)
    base = sorted(Fraction(a) % 1 for a in angles)
    if len(base) < 2:
        raise ValueError("need at least two ray angles")
    if set((2 * a) % 1 for a in base) != set(base):
        raise LandingError("angle set is not forward invariant under doubling")

    tracer = BoettcherTracer(c, anchor=g0, steps_per_halving=steps_per_halving)
    s = tracer.s

    # angle ladder per depth
    angle_sets = [list(base)]
    for _ in range(depth_max):
        prev = angle_sets[-1]
        nxt = sorted(set((a / 2) % 1 for a in prev) | set(((a + 1) / 2) % 1 for a in prev))
        angle_sets.append(nxt)

    # trace every deepest-level ray once; landing comes from the shared tracer
    all_angles = angle_sets[-1]
    g_deep = g0 / 2.0 ** depth_max
    landings = {}
    for a in all_angles:
        ray = tracer.ray(a, g_deep * 0.5, want_landing=True)
        if ray.failed or ray.landing is None:
            raise LandingError(
                f"ray {a} failed to land cleanly: {ray.failure_reason or 'no landing'}")
        landings[a] = ray.landing

    alpha_est = [landings[a] for a in base]
    spread = max(abs(x - y) for x in alpha_est for y in alpha_est)
    if spread > 1e-4:
        raise LandingError(
            f"base rays do not land together (spread {spread:.3e})")
    common = sum(alpha_est) / len(alpha_est)

    centers, amap = _cluster_landings(all_angles, landings)

    depths = []
    for d in range(depth_max + 1):
        A = angle_sets[d]
        level = d * s
        halves = []
        node_pos = {}
        for i, ctr in enumerate(centers):
            node_pos[("L", i)] = ctr

        # ray edges: landing -> equipotential endpoint
        k_deep = tracer.level_at_or_above(1e-9)
        for a in A:
            li = amap[a]
            # polyline from the landing point up to the level-d equipotential
            pts = [tracer.point(a, k) for k in range(level, k_deep + 1)]
            pts.reverse()                      # deep -> shallow
            geom = np.asarray([centers[li]] + pts, dtype=complex)
            node_pos[("E", a)] = geom[-1]
            h1 = _HalfEdge(("L", li), ("E", a), geom)
            h2 = _HalfEdge(("E", a), ("L", li), geom[::-1])
            h1.twin, h2.twin = h2, h1
            halves.extend([h1, h2])

        # equipotential arcs between circularly consecutive angles
        for i, a in enumerate(A):
            b = A[(i + 1) % len(A)]
            gap = (b - a) % 1
            pts = [tracer.point((a + gap * Fraction(j, _ARC_SAMPLES)) % 1, level)
                   for j in range(_ARC_SAMPLES + 1)]
            geom = np.asarray(pts, dtype=complex)
            h1 = _HalfEdge(("E", a), ("E", b), geom)
            h2 = _HalfEdge(("E", b), ("E", a), geom[::-1])
            h1.twin, h2.twin = h2, h1
            halves.extend([h1, h2])

        faces = _trace_faces(halves)
        pieces = []
        for face in faces:
            boundary = _face_boundary(face)
            if _signed_area(boundary) <= 0:
                continue                        # the outer face
            gaps = []
            for h in face:
                if h.src[0] == "E" and h.dst[0] == "E":
                    gaps.append((h.src[1], h.dst[1]))
            if not gaps:
                continue
            lo, hi = gaps[0]
            gapw = (hi - lo) % 1
            mid = (lo + gapw / 2) % 1
            marker = tracer.point(mid, level + 1)
            pieces.append(PuzzlePiece(depth=d, label=len(pieces),
                                      boundary=boundary, angle_gaps=gaps,
                                      marker=marker))
        depths.append(pieces)

    # parent links by locating each child's marker in the previous depth
    for d in range(1, depth_max + 1):
        for piece in depths[d]:
            for cand in depths[d - 1]:
                try:
                    w = winding_number(cand.boundary, piece.marker)
                except NumericError:
                    continue
                if w != 0:
                    piece.parent = cand.label
                    break
            if piece.parent is None:
                raise NumericError(
                    f"no parent found for piece {piece.label} at depth {d}")

    return PuzzleTree(c=c, g0=g0, depths=depths, landing_point=common)


def piece_diameters(tree: PuzzleTree, z0, depth_max: Optional[int] = None):
    """Diameters of the nested pieces containing z0, one per depth."""
    z0 = complex(z0)
    if depth_max is None:
        depth_max = len(tree.depths) - 1
    out = []
    parent_label = None
    for d in range(depth_max + 1):
        found = None
        for piece in tree.depths[d]:
            if parent_label is not None and piece.parent != parent_label:
                continue
            try:
                w = winding_number(piece.boundary, z0)
            except NumericError:
                raise
            if w != 0:
                found = piece
                break
        if found is None:
            raise NumericError(f"z0 is not inside any piece at depth {d}")
        parent_label = found.label
        out.append(found.diameter())
    return out
