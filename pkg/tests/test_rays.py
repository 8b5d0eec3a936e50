import cmath
import math
from fractions import Fraction

import pytest

from holodyn import (BoettcherTracer, alpha_fixed_point, equipotential,
                     external_angle, green_dynamical, trace_ray)
from holodyn.errors import BranchTrackError, DegenerateError


def test_green_examples():
    assert green_dynamical(0, 2.0).G == pytest.approx(math.log(2), abs=1e-12)
    assert green_dynamical(-1, 0.3).G == 0.0
    assert green_dynamical(1j, 0.0).G == 0.0


def test_green_functional_equation(rng):
    count = 0
    while count < 200:
        c = complex(rng.uniform(-1.5, 0.5), rng.uniform(-1.2, 1.2))
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        g = green_dynamical(c, z).G
        if g <= 1e-6:
            continue
        g2 = green_dynamical(c, z * z + c).G
        assert g2 == pytest.approx(2 * g, abs=1e-8)
        count += 1


def test_external_angle_identity_map():
    z = 2 * cmath.exp(2j * math.pi / 6)
    assert external_angle(0, z) == pytest.approx(1 / 6, abs=1e-12)


def test_external_angle_doubling(rng):
    count = 0
    while count < 40:
        c = complex(rng.uniform(-1.5, 0.5), rng.uniform(-1, 1))
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if green_dynamical(c, z).G <= 1e-3:
            continue
        try:
            t1 = external_angle(c, z)
            t2 = external_angle(c, z * z + c)
        except BranchTrackError:
            continue
        err = abs((2 * t1 - t2 + 0.5) % 1.0 - 0.5)
        assert err < 1e-7
        count += 1


def test_external_angle_rejects_bounded():
    with pytest.raises(BranchTrackError):
        external_angle(0, 0.5)


def test_ray_roundtrip_at_tiny_potential():
    tracer = BoettcherTracer(1j, anchor=1e-6)
    for t in (Fraction(1, 7), Fraction(2, 7), Fraction(4, 7)):
        ray = tracer.ray(t, 1e-6)
        got = external_angle(1j, ray.vertices[-1])
        assert got == pytest.approx(float(t), abs=1e-6)


def test_angle_doubling_is_exact_three_cycle():
    t = Fraction(1, 7)
    seen = [t]
    for _ in range(3):
        t = (2 * t) % 1
        seen.append(t)
    assert seen == [Fraction(1, 7), Fraction(2, 7), Fraction(4, 7), Fraction(1, 7)]


def test_radial_ray_for_squaring_map():
    ray = trace_ray(0, 0, g_min=1e-6)
    assert not ray.failed
    for z in ray.vertices:
        assert abs(z.imag) < 1e-12
    assert ray.vertices[-1].real == pytest.approx(1.0, abs=1e-5)
    assert ray.landing == pytest.approx(1.0, abs=1e-9)


def test_rays_land_at_common_alpha_for_c_i():
    alpha, lam, cls = alpha_fixed_point(1j)
    assert cls == "repelling"
    tracer = BoettcherTracer(1j, anchor=1e-6)
    landings = []
    for t in (Fraction(1, 7), Fraction(2, 7), Fraction(4, 7)):
        ray = tracer.ray(t, 1e-6)
        assert not ray.failed and ray.landing is not None
        landings.append(ray.landing)
        assert abs(ray.landing - alpha) < 1e-4
    spread = max(abs(a - b) for a in landings for b in landings)
    assert spread < 1e-4


def test_ray_functional_equation():
    for c in (1j, -1):
        tracer = BoettcherTracer(c, anchor=1e-6)
        angles = ((Fraction(1, 7), Fraction(2, 7)), (Fraction(1, 3), Fraction(2, 3)))
        for t, t2 in angles:
            ray = tracer.ray(t, 1e-6)
            ray2 = tracer.ray(t2, 1e-6)
            by_pot = {round(math.log(g), 9): z
                      for z, g in zip(ray2.vertices, ray2.potentials)}
            worst = 0.0
            for z, g in zip(ray.vertices, ray.potentials):
                key = round(math.log(2 * g), 9)
                if key in by_pot:
                    worst = max(worst, abs((z * z + c) - by_pot[key]))
            assert worst < 1e-6


def test_equipotential_circle_for_squaring_map():
    pts = equipotential(0, math.log(2), 64)
    assert len(pts) == 64
    for z in pts:
        assert abs(abs(z) - 2.0) < 1e-8


def test_equipotential_maps_to_doubled_level():
    c = 1j
    n = 64
    inner = equipotential(c, math.log(2) / 2, n)
    outer = equipotential(c, math.log(2), n)
    worst = 0.0
    for k in range(n):
        img = inner[k] ** 2 + c
        worst = max(worst, abs(img - outer[(2 * k) % n]))
    assert worst < 1e-6


def test_alpha_fixed_point_examples():
    a, lam, cls = alpha_fixed_point(0)
    assert a == pytest.approx(0.0)
    assert cls == "superattracting"
    a, lam, cls = alpha_fixed_point(-0.75)
    assert a == pytest.approx(-0.5)
    assert lam == pytest.approx(-1.0)
    assert cls == "indifferent"
    a, lam, cls = alpha_fixed_point(1j)
    assert a == pytest.approx(-0.30024259022012045 + 0.6248105338438266j, abs=1e-12)
    assert abs(a * a + 1j - a) < 1e-12
    assert abs(lam) == pytest.approx(1.3864109292475946, abs=1e-12)
    assert cls == "repelling"
    with pytest.raises(DegenerateError):
        alpha_fixed_point(0.25)


def test_alpha_is_not_the_zero_ray_landing():
    # the zero ray lands at the other fixed point beta for real c in M
    tracer = BoettcherTracer(-1, anchor=1e-8)
    ray0 = tracer.ray(Fraction(0), 1e-8)
    beta = (1 + math.sqrt(5)) / 2
    assert abs(ray0.landing - beta) < 1e-6
    alpha = alpha_fixed_point(-1)[0]
    assert abs(ray0.landing - alpha) > 0.5
