import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discwall.affine import (affine_coords, attractor_ray, boundary_covector, initial_ray, marginal_wall,
                             special_line)
from discwall.central_charge import central_charge, phase_equal, support_phase
from discwall.charges import Charge
from discwall.errors import DegenerateChargeError, UnsupportedClassError
from discwall.scene import Scene, Singularity

G1, G2 = Charge(1, 0), Charge(0, 1)


def test_special_line_ov(ov):
    seg = special_line(G1, 0.0, ov).segment
    assert abs(seg.start.real) < 1e-12 and abs(seg.end.real) < 1e-12
    assert {round(seg.start.imag, 9), round(seg.end.imag, 9)} == {-3.0, 3.0}
    flat = special_line(G1, math.pi / 2, ov).segment
    assert abs(flat.start.imag) < 1e-12 and abs(flat.end.imag) < 1e-12
    assert special_line(G1 * 2, 0.0, ov) == special_line(G1, 0.0, ov)


def test_special_line_phase_property(pentagon):
    g = Charge(2, -1)
    theta = 0.4
    seg = special_line(g, theta, pentagon).segment
    for t in np.linspace(0.05, 0.95, 7):
        u = seg.start + t * (seg.end - seg.start)
        ph = support_phase(g, u, pentagon)
        assert phase_equal(ph, theta, 1e-7) or phase_equal(ph, theta + math.pi, 1e-7)


def test_special_line_constant_charge():
    sc = Scene((-1, 1, -1, 1), (Singularity(0j, Charge(1, 0, (0,))),), 0.5j, flux_values=(1j,))
    assert special_line(Charge(0, 0, (1,)), 0.0, sc).whole_chart
    with pytest.raises(DegenerateChargeError):
        special_line(Charge(0, 0, (1,)), math.pi / 2, sc)


def test_initial_ray(ov):
    assert initial_ray(0, 0.0, ov).direction == pytest.approx(1j)
    assert initial_ray(0, -math.pi / 2, ov).direction == pytest.approx(1)


@settings(max_examples=30, deadline=None)
@given(st.floats(-2.9, 2.9), st.floats(-2.9, 2.9))
def test_initial_rays_sweep_base(x, y):
    sc = Scene((-3, 3, -3, 3), (Singularity(0j, G1, 1 + 0.5j),), 2j)
    u = complex(x, y)
    if abs(u) < 1e-3:
        return
    r = initial_ray(0, support_phase(G1, u, sc), sc)
    w = (u - r.start) / r.direction
    assert abs(w.imag) < 1e-9 and w.real > 0


def test_affine_coords(ov, pentagon):
    assert affine_coords(1.5 + 2j, 0.0, [G1], ov) == pytest.approx((1.5,))
    assert affine_coords(-1 + 0j, 0.3, [G1, G2], pentagon)[0] == pytest.approx(0.0)
    a = affine_coords(0.7 + 0.2j, 0.3, [G1, G2], pentagon)
    b = affine_coords(0.7 + 0.2j, 0.3 + math.pi, [G1, G2], pentagon)
    assert b == pytest.approx(tuple(-x for x in a))


def test_boundary_covector(ov, pentagon):
    assert boundary_covector(Charge(0, 0), 1j, 0.0, ov) == (0.0, 0.0)
    assert boundary_covector(G1, 1j, 0.0, ov) == pytest.approx((0.0, 1.0))
    s = boundary_covector(G1 + G2, 0j, 0.2, pentagon)
    a = boundary_covector(G1, 0j, 0.2, pentagon)
    b = boundary_covector(G2, 0j, 0.2, pentagon)
    assert s == pytest.approx((a[0] + b[0], a[1] + b[1]))


def test_pm1_wall(pm1):
    walls = marginal_wall(G1, G2, pm1)
    assert len(walls) == 2
    for w in walls:
        assert all(abs(p.imag) < 1e-12 and abs(p.real) >= 1 - 1e-12 for p in w.polyline)
    ends = sorted(round(p.real, 9) for w in walls for p in (w.polyline[0], w.polyline[-1]))
    assert ends == [-3.0, -1.0, 1.0, 3.0]


def test_pentagon_semicircles(pentagon):
    up = marginal_wall(G1, G2, pentagon)
    down = marginal_wall(G1, -G2, pentagon)
    assert len(up) == 1 and len(down) == 1
    assert all(abs(abs(p) - 1) < 1e-9 and p.imag >= -1e-12 for p in up[0].polyline)
    assert all(abs(abs(p) - 1) < 1e-9 and p.imag <= 1e-12 for p in down[0].polyline)
    for p in up[0].polyline[1:-1]:
        z1, z2 = central_charge(G1, p, pentagon), central_charge(G2, p, pentagon)
        assert phase_equal(cmath.phase(z1), cmath.phase(z2), 1e-9)


def test_wall_degenerate_and_empty(pentagon):
    deg = marginal_wall(G1, G1 * 2, pentagon)
    assert len(deg) == 1 and deg[0].degenerate
    assert marginal_wall(G1, -G1, pentagon) == []
    far = Scene((5, 6, 5, 6), pentagon.singularities[:0] + (Singularity(5.5 + 5.5j, G1),
                                                          Singularity(5.2 + 5.5j, G2, -1j)), 5.5 + 5.9j)
    walls = marginal_wall(G1, G2, far)
    assert all(far.in_chart(p) for w in walls for p in w.polyline)


def test_flux_only_zero_charge_errors():
    sc = Scene((-1, 1, -1, 1), (Singularity(0j, Charge(1, 0, (0,))),), 0.5j, flux_values=(0j,))
    with pytest.raises(DegenerateChargeError):
        marginal_wall(Charge(1, 0, (0,)), Charge(0, 0, (1,)), sc)


def test_attractor_ov(ov):
    seg = attractor_ray(G1, 2j, ov)
    assert seg.end == pytest.approx(0) and seg.stop.kind == "singularity" and seg.stop.singularity == 0


def test_attractor_stops_at_wall(pentagon):
    seg = attractor_ray(G1 + G2, 2j, pentagon)
    assert seg.stop.kind == "wall"
    assert seg.end == pytest.approx(1j)
    # Arg Z is constant and |Z| decreases along the flow
    pts = [seg.start + t * (seg.end - seg.start) for t in np.linspace(0, 1, 20)]
    zs = [central_charge(G1 + G2, p, pentagon) for p in pts]
    assert all(phase_equal(cmath.phase(z), cmath.phase(zs[0]), 1e-9) for z in zs)
    assert all(abs(a) > abs(b) for a, b in zip(zs, zs[1:]))


def test_attractor_errors(ov):
    sc = Scene((-1, 1, -1, 1), (Singularity(0j, Charge(1, 0, (0,))),), 0.5j, flux_values=(1j,))
    with pytest.raises(UnsupportedClassError):
        attractor_ray(Charge(0, 0, (1,)), 0.5j, sc)
    with pytest.raises(DegenerateChargeError):
        attractor_ray(G1, 0j, ov)
