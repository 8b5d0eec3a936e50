import math
from collections import deque
from fractions import Fraction

import numpy as np
import pytest

from holodyn import piece_diameters, puzzle_build, winding_number
from holodyn.errors import LandingError, NumericError
from holodyn.puzzle import _signed_area


def flood_fill_region_count(boundaries, xlim, ylim, n=400):
    """Independent oracle: rasterize boundaries, count interior components."""
    grid = np.zeros((n, n), dtype=bool)

    def to_cell(z):
        i = int((z.real - xlim[0]) / (xlim[1] - xlim[0]) * n)
        j = int((z.imag - ylim[0]) / (ylim[1] - ylim[0]) * n)
        return min(max(i, 0), n - 1), min(max(j, 0), n - 1)

    for poly in boundaries:
        for a, b in zip(poly, np.roll(poly, -1)):
            steps = max(2, int(abs(b - a) / ((xlim[1] - xlim[0]) / n)) * 2)
            for s in range(steps + 1):
                z = a + (b - a) * s / steps
                i, j = to_cell(z)
                grid[i, j] = True

    seen = np.zeros_like(grid)
    count = 0
    # flood from the border to mark the outside
    dq = deque()
    for i in range(n):
        for j in (0, n - 1):
            dq.append((i, j))
            dq.append((j, i))
    outside = np.zeros_like(grid)
    while dq:
        i, j = dq.popleft()
        if not (0 <= i < n and 0 <= j < n) or outside[i, j] or grid[i, j]:
            continue
        outside[i, j] = True
        dq.extend([(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)])
    for i in range(n):
        for j in range(n):
            if grid[i, j] or outside[i, j] or seen[i, j]:
                continue
            count += 1
            dq.append((i, j))
            while dq:
                a, b = dq.popleft()
                if not (0 <= a < n and 0 <= b < n) or seen[a, b] or grid[a, b] or outside[a, b]:
                    continue
                seen[a, b] = True
                dq.extend([(a + 1, b), (a - 1, b), (a, b + 1), (a, b - 1)])
    return count


@pytest.fixture(scope="module")
def tree_i():
    return puzzle_build(1j, depth_max=3)


def test_depth0_three_tiles(tree_i):
    assert len(tree_i.pieces(0)) == 3


def test_piece_counts(tree_i):
    for d in range(4):
        assert len(tree_i.pieces(d)) == 2 ** (d + 1) + 1


def test_flood_fill_oracle_agrees(tree_i):
    for d in (0, 1):
        boundaries = [p.boundary for p in tree_i.pieces(d)]
        count = flood_fill_region_count(boundaries, (-2.2, 2.2), (-2.2, 2.2))
        assert count == len(tree_i.pieces(d))


def test_landing_point_is_alpha(tree_i):
    from holodyn import alpha_fixed_point
    alpha = alpha_fixed_point(1j)[0]
    assert abs(tree_i.landing_point - alpha) < 1e-4


def test_depth0_area_covers_equipotential_disk(tree_i):
    from holodyn import equipotential
    disk = np.asarray(equipotential(1j, math.log(2), 1024))
    disk_area = _signed_area(disk)
    pieces_area = sum(abs(_signed_area(p.boundary)) for p in tree_i.pieces(0))
    assert pieces_area == pytest.approx(disk_area, rel=0.01)


def test_parents_and_nesting(tree_i):
    for d in range(1, 4):
        parents = {p.label for p in tree_i.pieces(d - 1)}
        for piece in tree_i.pieces(d):
            assert piece.parent in parents
            parent = tree_i.pieces(d - 1)[piece.parent]
            # the child's marker lies inside the parent as well
            assert winding_number(parent.boundary, piece.marker) != 0


def test_child_boundary_maps_into_parent_boundary(tree_i):
    c = tree_i.c
    parent_pts = np.concatenate([p.boundary for p in tree_i.pieces(1)])
    child = tree_i.pieces(2)[3]
    sub = child.boundary[:: max(1, len(child.boundary) // 120)]
    img = sub * sub + c
    d = np.abs(img[:, None] - parent_pts[None, :]).min(axis=1)
    assert float(d.max()) < 1e-6


def test_nested_diameters_at_critical_point(tree_i):
    diams = piece_diameters(tree_i, 0.0)
    assert len(diams) == 4
    assert all(b < a for a, b in zip(diams, diams[1:]))


def test_boundary_point_is_ambiguous(tree_i):
    piece = tree_i.pieces(0)[0]
    z = complex(piece.boundary[10])
    with pytest.raises(NumericError):
        winding_number(piece.boundary, z)


def test_rejects_non_invariant_angles():
    with pytest.raises(LandingError):
        puzzle_build(1j, angles=(Fraction(1, 5), Fraction(2, 5)), depth_max=0)


def test_basilica_puzzle_with_one_third_angles():
    tree = puzzle_build(-1, angles=(Fraction(1, 3), Fraction(2, 3)), depth_max=1)
    assert len(tree.pieces(0)) == 2
    from holodyn import alpha_fixed_point
    assert abs(tree.landing_point - alpha_fixed_point(-1)[0]) < 1e-4
