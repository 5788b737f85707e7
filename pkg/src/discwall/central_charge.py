"""Central charge on a model base, support phases, areas and rotated periods."""

from __future__ import annotations

import cmath
import math

from .charges import Charge
from .errors import DegenerateChargeError
from .scene import EPS_NUM, EPS_PHASE, Scene


def canonical_phase(theta: float) -> float:
    """Map an angle into (-pi, pi]."""
    t = math.remainder(theta, 2 * math.pi)
    if t <= -math.pi:
        t += 2 * math.pi
    return t


def phase_equal(s: float, t: float, tol: float = EPS_PHASE) -> bool:
    return abs(canonical_phase(s - t)) < tol


def central_charge(g: Charge, u: complex, scene: Scene) -> complex:
    slope, offset = scene.affine_parts(g)
    return slope * complex(u) + offset


def support_phase(g: Charge, u: complex, scene: Scene) -> float:
    """The equatorial phase at which g can be represented holomorphically at u."""
    z = central_charge(g, u, scene)
    if abs(z) <= EPS_NUM:
        raise DegenerateChargeError(f"Z_{g}({u}) = 0: phase undefined")
    return canonical_phase(cmath.phase(z) - math.pi / 2)


def disc_area(g: Charge, u: complex, scene: Scene) -> float:
    return abs(central_charge(g, u, scene))


def rotated_periods(area_omega: float, z: complex, theta: float) -> tuple[float, complex]:
    """Periods of (omega_theta, Omega_theta) for a class with omega-period A and Omega-period Z."""
    w = cmath.exp(-1j * theta) * z
    return -w.imag, complex(area_omega, -w.real)


def cr_residual(g: Charge, u: complex, scene: Scene, h: float = 1e-4) -> float:
    """|dZ/dx + i dZ/dy| by central differences; zero for holomorphic Z."""
    u = complex(u)
    dx = (central_charge(g, u + h, scene) - central_charge(g, u - h, scene)) / (2 * h)
    dy = (central_charge(g, u + 1j * h, scene) - central_charge(g, u - 1j * h, scene)) / (2 * h)
    return abs(dx + 1j * dy)


def model_derivative(g: Charge, scene: Scene) -> complex:
    return scene.affine_parts(g)[0]
