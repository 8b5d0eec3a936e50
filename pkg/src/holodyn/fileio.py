"""Byte-exact file output: binary PGM/PPM images and round-trip CSV.

PGM: "P5\\n{W} {H}\\n255\\n" + W*H bytes, row-major from the top-left.
PPM: "P6\\n{W} {H}\\n255\\n" + 3*W*H bytes.
CSV: one header line, "\\n" line endings, reals at 17 significant digits
(full float64 round trip).
"""

from __future__ import annotations

import numpy as np

from .errors import NumericError
from .render import RasterImage

__all__ = ["write_image", "write_csv", "read_image", "read_csv", "format_real"]


def write_image(image: RasterImage, path: str, fmt: str = None) -> None:
    """Write a raster as binary PGM (grayscale) or PPM (RGB)."""
    if fmt is None:
        fmt = "PPM" if image.is_color() else "PGM"
    fmt = fmt.upper()
    px = image.pixels
    if fmt == "PGM":
        if px.ndim != 2:
            raise ValueError("PGM requires a grayscale image")
        magic = b"P5"
    elif fmt == "PPM":
        if px.ndim == 2:
            px = np.repeat(px[:, :, None], 3, axis=2)
        magic = b"P6"
    else:
        raise ValueError(f"unknown image format {fmt!r}")
    header = magic + b"\n" + f"{image.width} {image.height}\n255\n".encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(np.ascontiguousarray(px, dtype=np.uint8).tobytes())
    except OSError as exc:
        raise NumericError(f"cannot write image to {path}: {exc}") from exc


def read_image(path: str) -> np.ndarray:
    """Read back a binary PGM/PPM written by write_image (for tests)."""
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        dims = fh.readline().split()
        maxval = fh.readline().strip()
        if maxval != b"255":
            raise ValueError("unsupported maxval")
        w, h = int(dims[0]), int(dims[1])
        data = np.frombuffer(fh.read(), dtype=np.uint8)
    if magic == b"P5":
        return data.reshape(h, w)
    if magic == b"P6":
        return data.reshape(h, w, 3)
    raise ValueError(f"not a binary PGM/PPM: {magic!r}")


def format_real(x) -> str:
    """17 significant digits: enough for exact float64 round trips."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_csv(headers, rows, path: str) -> None:
    """Write rows of numbers/strings with a single header line."""
    try:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(headers) + "\n")
            for row in rows:
                fh.write(",".join(
                    cell if isinstance(cell, str) else format_real(cell)
                    for cell in row) + "\n")
    except OSError as exc:
        raise NumericError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path: str):
    """Read back a CSV written by write_csv; numbers parsed as floats."""
    with open(path, "r", newline="") as fh:
        lines = fh.read().splitlines()
    headers = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        cells = []
        for cell in line.split(","):
            try:
                cells.append(float(cell))
            except ValueError:
                cells.append(cell)
        rows.append(cells)
    return headers, rows
