import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from discwall.central_charge import (canonical_phase, central_charge, cr_residual, disc_area, phase_equal,
                                     rotated_periods, support_phase)
from discwall.charges import Charge
from discwall.errors import BasisError, DegenerateChargeError
from discwall.scene import Scene, Singularity

coords = st.floats(-2.5, 2.5, allow_nan=False)


def test_ov_central_charge(ov):
    g = Charge(1, 0)
    assert central_charge(g, 2j, ov) == 2j
    assert central_charge(g * 3, 1 + 1j, ov) == 3 + 3j
    assert disc_area(g, 2j, ov) == 2.0
    with pytest.raises(BasisError):
        central_charge(Charge(0, 1), 1j, ov)


def test_support_phase(ov):
    # Arg Z = theta + pi/2
    assert support_phase(Charge(1, 0), 2j, ov) == pytest.approx(0.0)
    assert support_phase(Charge(1, 0), 2, ov) == pytest.approx(-math.pi / 2)
    with pytest.raises(DegenerateChargeError):
        support_phase(Charge(1, 0), 0j, ov)


def test_flux_constant():
    sc = Scene((-1, 1, -1, 1), (Singularity(0j, Charge(1, 0, (0,))),), 0.5j, flux_values=(2 - 1j,))
    assert central_charge(Charge(0, 0, (1,)), 0.3j, sc) == 2 - 1j
    assert central_charge(Charge(1, 0, (2,)), 0.5j, sc) == pytest.approx(0.5j + 4 - 2j)


def test_pentagon_values(pentagon):
    g1, g2 = Charge(1, 0), Charge(0, 1)
    assert central_charge(g1, 1j, pentagon) == pytest.approx(1 + 1j)
    assert central_charge(g2, 1j, pentagon) == pytest.approx(1 + 1j)
    assert central_charge(g1 + g2, -1j, pentagon) == pytest.approx(0)


@given(coords, coords)
def test_holomorphic(x, y):
    sc = Scene((-3, 3, -3, 3), (Singularity(-1 + 0j, Charge(1, 0), 1 + 0.5j), Singularity(1 + 0j, Charge(0, 1), -1j)), 0j)
    assert cr_residual(Charge(2, -3), complex(x, y), sc) < 1e-8


@given(st.floats(-10, 10, allow_nan=False))
def test_canonical_phase_range(t):
    c = canonical_phase(t)
    assert -math.pi < c <= math.pi
    assert phase_equal(c, t)


def test_rotated_periods():
    w, z = rotated_periods(0.7, 1j, 0.0)
    assert w == pytest.approx(-1.0)
    assert z == pytest.approx(0.7 + 0j)
    w2, z2 = rotated_periods(0.7, 1j, math.pi / 2)
    assert w2 == pytest.approx(0.0, abs=1e-15)
    assert z2 == pytest.approx(0.7 - 1j)
    assert cmath.isclose(rotated_periods(0, 2 + 0j, math.pi)[1], 2j)
