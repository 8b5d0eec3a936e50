"""Command-line surface tying the library together.

Every subcommand is deterministic: identical arguments (including --seed)
produce byte-identical files for any --threads value.  Exit codes:
0 success, 2 bad arguments, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

import numpy as np

from . import quad
from .errors import NumericError
from .expansion import expansion_integral
from .fileio import format_real, write_csv, write_image
from .hyperbolic import hyperbolicity_certificate
from .lattes import (Lattice, lattes_map, line_field_residual,
                     repelling_density_probe, semiconjugacy_residual)
from .cycles import find_cycles
from .puzzle import piece_diameters, puzzle_build
from .ratmap import RationalMap
from .rays import BoettcherTracer, trace_ray
from .render import (RasterImage, Viewport, render_bifurcation,
                     render_julia_escape, render_julia_inverse,
                     render_logview, render_mandelbrot)
from .sphere import is_inf

__all__ = ["main"]


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected RE,IM")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _parse_view(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected X0,X1,Y0,Y1")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _parse_size(text: str):
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected WxH")
    try:
        w, h = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError("size must be positive")
    return w, h


def _parse_range(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected C0,C1")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _parse_angle(text: str) -> Fraction:
    try:
        return Fraction(text) % 1
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _viewport(args) -> Viewport:
    x0, x1, y0, y1 = args.view
    w, h = args.size
    return Viewport(x_min=x0, x_max=x1, y_min=y0, y_max=y1, width=w, height=h)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="holodyn",
                                 description="rational-map dynamics toolkit")
    ap.add_argument("--threads", type=int, default=1,
                    help="worker threads (never affects output bytes)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("julia", help="render a Julia set")
    p.add_argument("--c", type=_parse_complex, required=True)
    p.add_argument("--view", type=_parse_view, required=True)
    p.add_argument("--size", type=_parse_size, required=True)
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--out", required=True)
    p.add_argument("--method", choices=("escape", "inverse"), default="escape")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--coloring", choices=("binary", "bands"), default="binary")
    p.add_argument("--samples", type=int, default=200000,
                   help="backward-orbit length for --method inverse")

    p = sub.add_parser("mandel", help="render the Mandelbrot set")
    p.add_argument("--view", type=_parse_view, required=True)
    p.add_argument("--size", type=_parse_size, required=True)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--out", required=True)

    p = sub.add_parser("bifurcate", help="bifurcation diagram (image or CSV)")
    p.add_argument("--range", type=_parse_range, required=True)
    p.add_argument("--size", type=_parse_size, default=(800, 800))
    p.add_argument("--view", type=_parse_view, default=(-2.0, 2.0, 0.0, 1.0))
    p.add_argument("--transient", type=int, default=2000)
    p.add_argument("--count", type=int, default=64)
    p.add_argument("--step", type=float, default=1e-3,
                   help="parameter step for CSV output")
    p.add_argument("--out", required=True)

    p = sub.add_parser("cascade", help="superstable period-doubling cascade")
    p.add_argument("--kmax", type=int, default=12)
    p.add_argument("--out")

    p = sub.add_parser("windows", help="attracting-period windows on the real axis")
    p.add_argument("--range", type=_parse_range, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--budget", type=int, default=40000)
    p.add_argument("--out")

    p = sub.add_parser("classify", help="hyperbolicity certificate for z^2+c")
    p.add_argument("--c", type=_parse_complex, required=True)
    p.add_argument("--budget", type=int, default=10**6)

    p = sub.add_parser("cycles", help="cycles of z^2+c up to a period bound")
    p.add_argument("--c", type=_parse_complex, required=True)
    p.add_argument("--maxperiod", type=int, default=4)

    p = sub.add_parser("ray", help="trace an external ray")
    p.add_argument("--c", type=_parse_complex, required=True)
    p.add_argument("--angle", type=_parse_angle, required=True)
    p.add_argument("--gmin", type=float, default=1e-6)
    p.add_argument("--out", required=True)

    p = sub.add_parser("puzzle", help="build the Yoccoz puzzle")
    p.add_argument("--c", type=_parse_complex, required=True)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--angles", default="1/7,2/7,4/7",
                   help="comma-separated landed ray angles")
    p.add_argument("--out", required=True)

    p = sub.add_parser("lattes", help="verify a Lattes map numerically")
    p.add_argument("--tau", type=_parse_complex, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--probe", action="store_true",
                   help="also run the repelling-density probe")
    p.add_argument("--grid", type=int, default=50)
    p.add_argument("--maxperiod", type=int, default=4)

    p = sub.add_parser("dimension", help="box-counting dimension of an image")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--scales", default="2,4,8,16,32")
    p.add_argument("--threshold", type=int, default=128)

    p = sub.add_parser("challenge", help="the z^2 - 1.99999 experiment")
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--c", type=float, default=-1.99999)

    p = sub.add_parser("logview", help="Mandelbrot set in log coordinates")
    p.add_argument("--c0", type=_parse_complex,
                   default=complex(-0.39054087, -0.58678790))
    p.add_argument("--view", type=_parse_view, required=True)
    p.add_argument("--size", type=_parse_size, required=True)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--out", required=True)

    p = sub.add_parser("expansion", help="mean-square expansion of f^n")
    p.add_argument("--c", type=_parse_complex, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=1)

    return ap


def _print_certificate(cert) -> None:
    print(f"status: {cert.status}")
    print(f"finite attracting cycles: {cert.n_attracting}")
    for fate in cert.fates:
        pt = "INF" if is_inf(fate.point) else format(fate.point, ".12g")
        line = f"critical point {pt}: {fate.outcome}"
        if fate.cycle is not None:
            lam = fate.cycle.multiplier
            line += (f" (period {fate.cycle.period}, |multiplier| "
                     f"{abs(lam):.12g}, {fate.cycle.cls})")
        print(line)


def _cmd_julia(args) -> int:
    vp = _viewport(args)
    if args.method == "escape":
        img = render_julia_escape(args.c, vp, args.iters, args.coloring,
                                  threads=args.threads)
    else:
        img = render_julia_inverse(RationalMap.quadratic(args.c), args.samples,
                                   args.seed, vp)
    write_image(img, args.out)
    return 0


def _cmd_mandel(args) -> int:
    img = render_mandelbrot(_viewport(args), args.iters, threads=args.threads)
    write_image(img, args.out)
    return 0


def _cmd_bifurcate(args) -> int:
    c0, c1 = args.range
    if args.out.lower().endswith(".csv"):
        grid, samples, _ = quad.bifurcation_scan(c0, c1, args.step,
                                                 args.transient, args.count)
        rows = []
        for ci, row in zip(grid, samples):
            for x in row:
                if not math.isnan(x):
                    rows.append((ci, x))
        write_csv(["c", "x"], rows, args.out)
    else:
        vp = _viewport(args)
        img = render_bifurcation(c0, c1, vp, args.transient, args.count)
        write_image(img, args.out)
    return 0


def _cmd_cascade(args) -> int:
    res = quad.superstable_cascade(args.kmax)
    rows = []
    for i, sk in enumerate(res.superstable_params, start=1):
        dk = res.delta_estimates[i - 3] if i >= 3 else ""
        rows.append((i, sk, dk))
    if args.out:
        write_csv(["k", "s_k", "delta_k"], rows, args.out)
    for k, sk, dk in rows:
        print(f"k={k} s_k={format_real(sk)}" + (f" delta_k={format_real(dk)}" if dk != "" else ""))
    print(f"accumulation={format_real(res.accumulation)}")
    return 0


def _cmd_windows(args) -> int:
    c0, c1 = args.range
    records = quad.window_scan(c0, c1, args.step, args.budget)
    rows = [(r.c_lo, r.c_hi, r.period) for r in records]
    if args.out:
        write_csv(["c_lo", "c_hi", "period"], rows, args.out)
    for lo, hi, period in rows:
        print(f"window period={period} [{format_real(lo)}, {format_real(hi)}]")
    return 0


def _cmd_classify(args) -> int:
    cert = quad.quad_certificate(args.c, args.budget)
    _print_certificate(cert)
    return 0


def _cmd_cycles(args) -> int:
    cycles = find_cycles(RationalMap.quadratic(args.c), args.maxperiod)
    for cyc in cycles:
        pts = ", ".join("INF" if is_inf(p) else format(p, ".10g")
                        for p in cyc.points)
        print(f"period {cyc.period} {cyc.cls} |multiplier|="
              f"{abs(cyc.multiplier):.10g} points: {pts}")
    return 0


def _cmd_ray(args) -> int:
    poly = trace_ray(args.c, args.angle, args.gmin)
    rows = [(str(poly.angle), g, z.real, z.imag)
            for z, g in zip(poly.vertices, poly.potentials)]
    write_csv(["t", "G", "re", "im"], rows, args.out)
    if poly.failed:
        print(f"ray trace failed: {poly.failure_reason}", file=sys.stderr)
        return 3
    if poly.landing is not None:
        print(f"landing {format_real(poly.landing.real)},"
              f"{format_real(poly.landing.imag)}")
    else:
        print("landing not detected")
    return 0


def _cmd_puzzle(args) -> int:
    angles = [Fraction(a) % 1 for a in args.angles.split(",")]
    tree = puzzle_build(args.c, angles=angles, depth_max=args.depth)
    rows = []
    for d, pieces in enumerate(tree.depths):
        for piece in pieces:
            rows.append((d, piece.label,
                         piece.parent if piece.parent is not None else -1,
                         piece.diameter()))
    write_csv(["depth", "label", "parent", "diameter"], rows, args.out)
    for d, pieces in enumerate(tree.depths):
        print(f"depth {d}: {len(pieces)} pieces")
    lp = tree.landing_point
    print(f"rays land at {format_real(lp.real)},{format_real(lp.imag)}")
    return 0


def _cmd_lattes(args) -> int:
    lat = Lattice(args.tau)
    f = lattes_map(args.n, lat)
    print(f"degree: {f.degree}")
    semi = semiconjugacy_residual(f, args.n, lat, args.samples, args.seed)
    line = line_field_residual(f, args.n, lat, args.samples, args.seed + 1)
    print(f"semiconjugacy_residual: {format_real(semi)}")
    print(f"line_field_residual: {format_real(line)}")
    if args.probe:
        cov = repelling_density_probe(f, args.maxperiod, args.grid)
        print(f"repelling_coverage: {format_real(cov)} "
              f"(grid {args.grid}x{args.grid}, periods <= {args.maxperiod})")
    return 0


def _cmd_dimension(args) -> int:
    from .fileio import read_image
    img = read_image(args.infile)
    if img.ndim == 3:
        img = img[:, :, 0]
    occupied = img >= args.threshold
    scales = [int(s) for s in args.scales.split(",")]
    from .render import box_dimension
    est, counts = box_dimension(occupied, scales)
    for s, n in counts:
        print(f"scale {s}: {n} boxes")
    print(f"dimension_estimate: {format_real(est)}")
    print("note: raster box counting is a desk-scale proxy; it cannot "
          "resolve dimension-two boundary phenomena")
    return 0


def _cmd_challenge(args) -> int:
    rep = quad.challenge_report(args.c, args.budget)
    for line in rep.lines():
        print(line)
    return 0


def _cmd_logview(args) -> int:
    img = render_logview(args.c0, _viewport(args), args.iters,
                         threads=args.threads)
    write_image(img, args.out)
    return 0


def _cmd_expansion(args) -> int:
    f = RationalMap.quadratic(args.c)
    value = expansion_integral(f, args.n, args.samples, args.seed)
    print(f"expansion_integral: {format_real(value)}")
    print(f"degree^n: {f.degree ** args.n}")
    return 0


_DISPATCH = {
    "julia": _cmd_julia,
    "mandel": _cmd_mandel,
    "bifurcate": _cmd_bifurcate,
    "cascade": _cmd_cascade,
    "windows": _cmd_windows,
    "classify": _cmd_classify,
    "cycles": _cmd_cycles,
    "ray": _cmd_ray,
    "puzzle": _cmd_puzzle,
    "lattes": _cmd_lattes,
    "dimension": _cmd_dimension,
    "challenge": _cmd_challenge,
    "logview": _cmd_logview,
    "expansion": _cmd_expansion,
}


# flags whose values may start with '-' (argparse would mistake them for
# options); they get joined into --flag=value before parsing
_VALUE_FLAGS = {"--c", "--c0", "--tau", "--view", "--range", "--angle"}


def _join_negative_values(argv):
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    ap = build_parser()
    args = ap.parse_args(_join_negative_values(list(argv)))
    try:
        return _DISPATCH[args.command](args)
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
