"""Model base: chart, I1 singularities with thimble charges and cuts, flux constants."""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .charges import EPS_GEOM, Charge, cut_crossings, is_primitive_boundary, pair, solve_combination
from .errors import BasisError, SceneError

EPS_NUM = 1e-9
EPS_PHASE = 1e-9


@dataclass(frozen=True)
class Singularity:
    position: complex
    thimble: Charge
    slope: complex = 1 + 0j
    cut_angle: float = -math.pi / 2


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" | "warning"
    where: str
    message: str

    def __str__(self):
        return f"{self.level}: {self.where}: {self.message}"


@dataclass(frozen=True)
class Scene:
    chart: tuple[float, float, float, float]  # xmin, xmax, ymin, ymax
    singularities: tuple[Singularity, ...]
    basepoint: complex
    flux_values: tuple[complex, ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "singularities", tuple(self.singularities))
        object.__setattr__(self, "flux_values", tuple(complex(z) for z in self.flux_values))
        object.__setattr__(self, "basepoint", complex(self.basepoint))
        object.__setattr__(self, "chart", tuple(float(x) for x in self.chart))

    @property
    def k(self) -> int:
        return len(self.flux_values)

    @property
    def thimbles(self) -> tuple[Charge, ...]:
        return tuple(self._pad(s.thimble) for s in self.singularities)

    def _pad(self, g: Charge) -> Charge:
        if len(g.flux) == self.k:
            return g
        if not g.flux:
            return Charge(g.a, g.b, (0,) * self.k)
        raise BasisError(f"charge {g} has flux rank {len(g.flux)}, scene has {self.k}")

    def flux_basis(self) -> tuple[Charge, ...]:
        return tuple(Charge(0, 0, tuple(int(i == j) for i in range(self.k))) for j in range(self.k))

    @property
    def diameter(self) -> float:
        x0, x1, y0, y1 = self.chart
        return math.hypot(x1 - x0, y1 - y0)

    def in_chart(self, u: complex, tol: float = EPS_GEOM) -> bool:
        x0, x1, y0, y1 = self.chart
        return x0 - tol <= u.real <= x1 + tol and y0 - tol <= u.imag <= y1 + tol

    # -- model central charge: Z_g(u) = slope(g) * u + offset(g) --------------

    def decompose(self, g: Charge) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        """Coordinates of g in the scene basis (thimbles, then flux units)."""
        return _decompose(self, self._pad(g))

    def thimble_degree(self, g: Charge) -> Fraction:
        c, _ = self.decompose(g)
        return sum((abs(x) for x in c), Fraction(0))

    def affine_parts(self, g: Charge) -> tuple[complex, complex]:
        return _affine_parts(self, self._pad(g))

    def thimble_multiple(self, g: Charge) -> tuple[int, int] | None:
        """(i, d) if g == d * thimble_i exactly, else None."""
        g = self._pad(g)
        for i, t in enumerate(self.thimbles):
            sol = solve_combination([t], g)
            if sol is not None and sol[0].denominator == 1 and sol[0] != 0:
                return i, int(sol[0])
        return None

    # -- geometry helpers ----------------------------------------------------

    def near_singularity(self, u: complex, tol: float = EPS_GEOM) -> int | None:
        for i, s in enumerate(self.singularities):
            if abs(u - s.position) < tol:
                return i
        return None

    def on_cut(self, u: complex, tol: float = EPS_GEOM) -> int | None:
        for i, s in enumerate(self.singularities):
            w = u - s.position
            d = cmath.exp(1j * s.cut_angle)
            along = (w * d.conjugate()).real
            across = (w * d.conjugate()).imag
            if along > -tol and abs(across) < tol:
                return i
        return None

    def segment_crosses_cut(self, p: complex, q: complex) -> bool:
        return any(cut_crossings(p, q, s.position, s.cut_angle) for s in self.singularities)

    @cached_property
    def diagnostics(self) -> tuple[Diagnostic, ...]:
        return tuple(_diagnose(self))

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.level == "error"]

    def check(self) -> "Scene":
        errs = self.errors()
        if errs:
            raise SceneError("; ".join(str(e) for e in errs))
        return self


@lru_cache(maxsize=65536)
def _decompose(scene: Scene, g: Charge):
    basis = list(scene.thimbles) + list(scene.flux_basis())
    sol = solve_combination(basis, g)
    if sol is None:
        raise BasisError(f"charge {g} is not uniquely expressible in the scene basis")
    n = len(scene.singularities)
    return tuple(sol[:n]), tuple(sol[n:])


@lru_cache(maxsize=65536)
def _affine_parts(scene: Scene, g: Charge):
    c, f = _decompose(scene, g)
    slope = 0j
    offset = 0j
    for ci, s in zip(c, scene.singularities):
        if ci:
            slope += float(ci) * s.slope
            offset -= float(ci) * s.slope * s.position
    for fj, zf in zip(f, scene.flux_values):
        if fj:
            offset += float(fj) * zf
    return slope, offset


def _diagnose(scene: Scene):
    x0, x1, y0, y1 = scene.chart
    if not (x0 < x1 and y0 < y1):
        yield Diagnostic("error", "chart", "chart must satisfy xmin < xmax and ymin < ymax")
    sings = scene.singularities
    for i, s in enumerate(sings):
        where = f"singularities[{i}]"
        if abs(s.slope) < EPS_NUM:
            yield Diagnostic("error", where + ".slope", "slope must be nonzero")
        if not is_primitive_boundary(s.thimble):
            yield Diagnostic("error", where + ".thimble", f"thimble {s.thimble} must have a primitive boundary")
        if s.thimble.flux and len(s.thimble.flux) != scene.k:
            yield Diagnostic("error", where + ".thimble", f"thimble flux rank {len(s.thimble.flux)} != {scene.k}")
        if not scene.in_chart(s.position, 0.0):
            yield Diagnostic("error", where + ".position", "singularity outside the chart")
    for i, j in itertools.combinations(range(len(sings)), 2):
        if abs(sings[i].position - sings[j].position) < EPS_GEOM:
            yield Diagnostic("error", f"singularities[{i}],singularities[{j}]",
                             f"singularities {i} and {j} coincide")
    if len(sings) > 2:
        yield Diagnostic("error", "singularities",
                         "the affine-linear model supports at most two singularities "
                         "(thimbles plus flux units must form a lattice basis)")
    elif len(sings) == 2 and pair(sings[0].thimble, sings[1].thimble) == 0:
        yield Diagnostic("error", "singularities", "thimble boundaries must be linearly independent")
    if not scene.in_chart(scene.basepoint, 0.0):
        yield Diagnostic("error", "basepoint", "basepoint outside the chart")
    i = scene.near_singularity(scene.basepoint)
    if i is not None:
        yield Diagnostic("error", "basepoint", f"basepoint coincides with singularity {i}")
    i = scene.on_cut(scene.basepoint)
    if i is not None:
        yield Diagnostic("error", "basepoint", f"basepoint lies on the cut of singularity {i}")
    if any(d.level == "error" for d in _cheap_errors(scene)):
        return
    if len(sings) == 2:
        t1, t2 = sings[0].thimble, sings[1].thimble
        geo = (sings[0].slope * sings[1].slope.conjugate()).imag
        if abs(geo) < EPS_NUM:
            yield Diagnostic("warning", "singularities",
                             "slopes are real-proportional: the affine structure is degenerate "
                             "and thimble rays through a common point are parallel")
        elif (geo > 0) != (pair(t1, t2) > 0):
            yield Diagnostic("warning", "singularities",
                             "orientation mismatch: sign of <g1,g2> differs from sign of "
                             "Im(slope1*conj(slope2)); wall-crossing and attractor flows will disagree")
    for g in _small_charges(scene, 2):
        slope, _ = scene.affine_parts(g)
        if abs(slope) < EPS_NUM:
            yield Diagnostic("warning", f"charge {g}",
                             "model-degenerate charge: dZ vanishes identically")


def _cheap_errors(scene: Scene):
    sings = scene.singularities
    out = []
    for s in sings:
        if abs(s.slope) < EPS_NUM or not is_primitive_boundary(s.thimble):
            out.append(Diagnostic("error", "", ""))
        if s.thimble.flux and len(s.thimble.flux) != scene.k:
            out.append(Diagnostic("error", "", ""))
    if len(sings) > 2 or (len(sings) == 2 and pair(sings[0].thimble, sings[1].thimble) == 0):
        out.append(Diagnostic("error", "", ""))
    return out


def _small_charges(scene: Scene, degree: int):
    """Nonzero integer thimble combinations up to sign, with thimble degree <= degree."""
    n = len(scene.singularities)
    thimbles = scene.thimbles
    seen = set()
    for coeffs in itertools.product(range(-degree, degree + 1), repeat=n):
        if sum(abs(c) for c in coeffs) == 0 or sum(abs(c) for c in coeffs) > degree:
            continue
        g = Charge.zero(scene.k)
        for c, t in zip(coeffs, thimbles):
            g = g + t * c
        g = g.canonical()
        if g not in seen:
            seen.add(g)
            yield g
