"""Deterministic rasterization: Julia/Mandelbrot escape images, inverse
iteration, bifurcation diagrams, log-coordinate views, box counting.

Pixel (col i, row j) maps to the center of its cell:
    x = x_min + (i + 0.5) * (x_max - x_min) / width
    y = y_max - (j + 0.5) * (y_max - y_min) / height
(top row carries the largest y).  Rendering is row-parallel: worker threads
write disjoint row blocks of a preallocated array, so the bytes are
identical for any thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError
from .ratmap import RationalMap
from .rng import randint
from .roots import aberth_roots
from .quad import mandelbrot_escape_grid

__all__ = ["Viewport", "RasterImage", "render_julia_escape",
           "render_julia_inverse", "render_mandelbrot", "render_bifurcation",
           "render_logview", "box_dimension", "boundary_pixels"]


@dataclass
class Viewport:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    width: int
    height: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("empty viewport")
        if self.width < 1 or self.height < 1:
            raise ValueError("empty pixel grid")

    def pixel_center(self, i: int, j: int) -> complex:
        x = self.x_min + (i + 0.5) * (self.x_max - self.x_min) / self.width
        y = self.y_max - (j + 0.5) * (self.y_max - self.y_min) / self.height
        return complex(x, y)

    def locate(self, z: complex):
        """Pixel (i, j) containing z, or None when outside the viewport."""
        i = int(math.floor((z.real - self.x_min) / (self.x_max - self.x_min) * self.width))
        j = int(math.floor((self.y_max - z.imag) / (self.y_max - self.y_min) * self.height))
        if 0 <= i < self.width and 0 <= j < self.height:
            return i, j
        return None

    def grid(self) -> np.ndarray:
        """(height, width) array of pixel-center points."""
        xs = self.x_min + (np.arange(self.width) + 0.5) * (self.x_max - self.x_min) / self.width
        ys = self.y_max - (np.arange(self.height) + 0.5) * (self.y_max - self.y_min) / self.height
        return xs[None, :] + 1j * ys[:, None]

    def row_points(self, j: int) -> np.ndarray:
        xs = self.x_min + (np.arange(self.width) + 0.5) * (self.x_max - self.x_min) / self.width
        y = self.y_max - (j + 0.5) * (self.y_max - self.y_min) / self.height
        return xs + 1j * y


@dataclass
class RasterImage:
    pixels: np.ndarray              # uint8, (H, W) grayscale or (H, W, 3) RGB
    provenance: str = ""            # command line + seed; never written to files

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def is_color(self) -> bool:
        return self.pixels.ndim == 3


def _row_blocks(height: int, threads: int):
    block = max(1, height // (4 * max(1, threads)))
    return [(j, min(j + block, height)) for j in range(0, height, block)]


def _parallel_rows(height: int, threads: int, work):
    """Run work(j_lo, j_hi) over row blocks, possibly on a thread pool."""
    blocks = _row_blocks(height, threads)
    if threads <= 1:
        for lo, hi in blocks:
            work(lo, hi)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(lambda b: work(*b), blocks))


def _escape_steps_rows(c: complex, pts: np.ndarray, max_iter: int) -> np.ndarray:
    r2 = max(2.0, abs(c)) ** 2
    z = pts.astype(complex)
    steps = np.full(pts.shape, -1, dtype=np.int32)
    active = np.ones(pts.shape, dtype=bool)
    for k in range(1, max_iter + 1):
        z[active] = z[active] ** 2 + c
        esc = active & (z.real ** 2 + z.imag ** 2 > r2)
        steps[esc] = k
        active &= ~esc
        if not active.any():
            break
    return steps


def _colorize(steps: np.ndarray, coloring: str) -> np.ndarray:
    img = np.zeros(steps.shape, dtype=np.uint8)
    esc = steps >= 0
    if coloring == "binary":
        img[esc] = 255
    elif coloring == "bands":
        img[esc] = (80 + (steps[esc] % 12) * 15).astype(np.uint8)
    else:
        raise ValueError(f"unknown coloring {coloring!r}")
    return img


def render_julia_escape(c, viewport: Viewport, max_iter: int = 1000,
                        coloring: str = "binary", threads: int = 1) -> RasterImage:
    """Escape-time image of the filled Julia set of z^2 + c.

    Interior (budget-exhausted) pixels are black.
    """
    c = complex(c)
    out = np.zeros((viewport.height, viewport.width), dtype=np.uint8)

    def work(lo, hi):
        for j in range(lo, hi):
            steps = _escape_steps_rows(c, viewport.row_points(j), max_iter)
            out[j] = _colorize(steps, coloring)

    _parallel_rows(viewport.height, threads, work)
    return RasterImage(pixels=out, provenance=f"julia escape c={c} iters={max_iter}")


def render_julia_inverse(map_: RationalMap, iterations: int, seed: int,
                         viewport: Viewport) -> RasterImage:
    """Inverse-iteration image: a random backward orbit accumulates on J.

    Each step picks a uniformly random preimage (all roots of P - wQ);
    the choice at step k depends only on (seed, k), the first 100 steps are
    burn-in.
    """
    if map_.degree < 2:
        raise ValueError("inverse iteration needs degree >= 2")
    out = np.zeros((viewport.height, viewport.width), dtype=np.uint8)
    w = 0.41234 + 0.27191j  # fixed non-exceptional start
    p, q = map_.p, map_.q
    for k in range(iterations):
        eq = np.polysub(p, w * q)
        try:
            roots = aberth_roots(eq)
        except NumericError:
            w = w * (1 + 1e-9) + 1e-9
            continue
        roots = roots[np.lexsort((roots.imag, roots.real))]
        w = complex(roots[int(randint(seed, k, len(roots)))])
        if k < 100:
            continue
        loc = viewport.locate(w)
        if loc is not None:
            out[loc[1], loc[0]] = 255
    return RasterImage(pixels=out,
                       provenance=f"julia inverse seed={seed} iters={iterations}")


def render_mandelbrot(viewport: Viewport, max_iter: int = 2000,
                      threads: int = 1) -> RasterImage:
    """Escape-time image of the Mandelbrot set; bounded-so-far pixels black."""
    out = np.zeros((viewport.height, viewport.width), dtype=np.uint8)

    def work(lo, hi):
        for j in range(lo, hi):
            steps = mandelbrot_escape_grid(viewport.row_points(j), max_iter)
            img = np.zeros(steps.shape, dtype=np.uint8)
            img[steps >= 0] = 255
            out[j] = img

    _parallel_rows(viewport.height, threads, work)
    return RasterImage(pixels=out, provenance=f"mandelbrot iters={max_iter}")


def render_bifurcation(c_lo: float, c_hi: float, viewport: Viewport,
                       transient: int = 2000, count: int = 64) -> RasterImage:
    """Scatter of late critical-orbit samples per parameter row.

    Rows are parameters (c decreasing upward, the classical orientation);
    columns are the sampled orbit coordinate mapped through the viewport's
    x range.
    """
    h, wdt = viewport.height, viewport.width
    out = np.zeros((h, wdt), dtype=np.uint8)
    rows = np.arange(h)
    cs = c_lo + (rows + 0.5) * (c_hi - c_lo) / h
    r = np.maximum(2.0, np.abs(cs))
    x = np.zeros(h)
    escaped = np.zeros(h, dtype=bool)
    for _ in range(transient):
        x = x * x + cs
        escaped |= np.abs(x) > r
        x[escaped] = 0.0
    for _ in range(count):
        x = x * x + cs
        escaped |= np.abs(x) > r
        cols = np.floor((x - viewport.x_min) / (viewport.x_max - viewport.x_min) * wdt).astype(int)
        ok = ~escaped & (cols >= 0) & (cols < wdt)
        out[rows[ok], cols[ok]] = 255
    return RasterImage(pixels=out,
                       provenance=f"bifurcation [{c_lo},{c_hi}] transient={transient}")


def render_logview(c0, viewport: Viewport, max_iter: int = 2000,
                   threads: int = 1) -> RasterImage:
    """Mandelbrot boundary in logarithmic coordinates around c0.

    Pixel (u, v) tests the parameter c = c0 + exp(u + i v); translating the
    strip left by du zooms toward c0 by the factor e^du.
    """
    c0 = complex(c0)
    out = np.zeros((viewport.height, viewport.width), dtype=np.uint8)

    def work(lo, hi):
        for j in range(lo, hi):
            cs = c0 + np.exp(viewport.row_points(j))
            steps = mandelbrot_escape_grid(cs, max_iter)
            img = np.zeros(steps.shape, dtype=np.uint8)
            img[steps >= 0] = 255
            out[j] = img

    _parallel_rows(viewport.height, threads, work)
    return RasterImage(pixels=out, provenance=f"logview c0={c0} iters={max_iter}")


def boundary_pixels(interior: np.ndarray) -> np.ndarray:
    """Escaped pixels 4-adjacent to a non-escaped pixel.

    `interior` is a boolean mask of budget-exhausted (non-escaped) pixels.
    """
    esc = ~interior
    pad = np.pad(interior, 1, mode="constant", constant_values=False)
    near = pad[:-2, 1:-1] | pad[2:, 1:-1] | pad[1:-1, :-2] | pad[1:-1, 2:]
    return esc & near


def box_dimension(occupied: np.ndarray, scales) -> tuple:
    """Least-squares box-counting dimension of a boolean bitmap.

    `scales` are dyadic box sizes in pixels (at least 4 of them); returns
    (estimate, [(scale, count), ...]).
    """
    occ = np.asarray(occupied, dtype=bool)
    scales = sorted(int(s) for s in scales)
    if len(scales) < 4:
        raise ValueError("need at least 4 scales")
    for s in scales:
        if s < 1 or (s & (s - 1)) != 0:
            raise ValueError("scales must be positive powers of two")
    if not occ.any():
        raise ValueError("empty point set has no box dimension")
    counts = []
    h, w = occ.shape
    for s in scales:
        hh = (h + s - 1) // s * s
        ww = (w + s - 1) // s * s
        padded = np.zeros((hh, ww), dtype=bool)
        padded[:h, :w] = occ
        blocks = padded.reshape(hh // s, s, ww // s, s).any(axis=(1, 3))
        counts.append(int(blocks.sum()))
    xs = np.log(1.0 / np.asarray(scales, dtype=float))
    ys = np.log(np.asarray(counts, dtype=float))
    slope = float(np.polyfit(xs, ys, 1)[0])
    return slope, list(zip(scales, counts))
