"""Special Lagrangian lines, walls of marginal stability and attractor flows on the base."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .central_charge import canonical_phase, central_charge
from .charges import EPS_GEOM, Charge, pair
from .errors import DegenerateChargeError, UnsupportedClassError
from .scene import EPS_NUM, Scene

GRID = 256


@dataclass(frozen=True)
class Segment:
    start: complex
    end: complex

    def points(self) -> tuple[complex, complex]:
        return (self.start, self.end)


@dataclass(frozen=True)
class Ray:
    start: complex
    direction: complex  # unit vector
    end: complex  # exit point from the chart


def _clip_line(p: complex, v: complex, chart) -> tuple[float, float] | None:
    """Parameter interval of p + t v inside the chart rectangle (Liang-Barsky)."""
    x0, x1, y0, y1 = chart
    lo, hi = -math.inf, math.inf
    for pc, vc, a, b in ((p.real, v.real, x0, x1), (p.imag, v.imag, y0, y1)):
        if abs(vc) < 1e-15:
            if pc < a - EPS_GEOM or pc > b + EPS_GEOM:
                return None
            continue
        t0, t1 = (a - pc) / vc, (b - pc) / vc
        if t0 > t1:
            t0, t1 = t1, t0
        lo, hi = max(lo, t0), min(hi, t1)
    if lo > hi:
        return None
    return lo, hi


@dataclass(frozen=True)
class LineLocus:
    segment: Segment | None
    whole_chart: bool = False


def special_line(g: Charge, theta: float, scene: Scene) -> LineLocus:
    """Zero set of Re(e^{-i theta} Z_g) clipped to the chart (a straight line in the model)."""
    slope, offset = scene.affine_parts(g)
    rot = cmath.exp(-1j * theta)
    if abs(slope) < EPS_NUM:
        if abs((rot * offset).real) < EPS_NUM:
            return LineLocus(None, True)
        raise DegenerateChargeError(f"Z_{g} is constant on the base; its special line is empty")
    # Re(rot*(A u + B)) = 0: normal vector conj(rot*A), direction i*conj(rot*A)
    n = (rot * slope).conjugate()
    p0 = -(rot * offset).real * n / abs(n) ** 2
    v = 1j * n / abs(n)
    iv = _clip_line(p0, v, scene.chart)
    if iv is None:
        return LineLocus(None)
    return LineLocus(Segment(p0 + iv[0] * v, p0 + iv[1] * v))


def initial_ray(i: int, theta: float, scene: Scene) -> Ray:
    """Ray from singularity i along which Arg Z of its thimble is theta + pi/2."""
    s = scene.singularities[i]
    v = cmath.exp(1j * (theta + math.pi / 2)) / s.slope
    v /= abs(v)
    iv = _clip_line(s.position, v, scene.chart)
    end = s.position + (max(iv[1], 0.0) if iv else 0.0) * v
    return Ray(s.position, v, end)


def affine_coords(u: complex, theta: float, basis: Sequence[Charge], scene: Scene) -> tuple[float, float]:
    rot = cmath.exp(-1j * theta)
    return tuple((rot * central_charge(g, u, scene)).real for g in basis)


def boundary_covector(g: Charge, u: complex, theta: float, scene: Scene) -> tuple[float, float]:
    """Differential of Im(e^{-i theta} Z_g) at u, as (d/dx, d/dy)."""
    if g.is_zero():
        return (0.0, 0.0)
    w = cmath.exp(-1j * theta) * scene.affine_parts(g)[0]
    return (w.imag, w.real)


# -- walls of marginal stability -------------------------------------------------

@dataclass
class WallLocus:
    charges: tuple[Charge, Charge]
    polyline: tuple[complex, ...] = ()
    degenerate: bool = False
    endpoints: tuple[str, str] = ("", "")

    def sample(self, n: int = 1000) -> list[complex]:
        pts = self.polyline
        if len(pts) < 2:
            return list(pts)
        lengths = [abs(b - a) for a, b in zip(pts[:-1], pts[1:])]
        total = sum(lengths)
        out = []
        for j in range(n):
            s = total * j / (n - 1)
            k = 0
            while k < len(lengths) - 1 and s > lengths[k]:
                s -= lengths[k]
                k += 1
            t = s / lengths[k] if lengths[k] else 0.0
            out.append(pts[k] + t * (pts[k + 1] - pts[k]))
        return out

    def to_dict(self) -> dict:
        return {
            "charges": [str(g) for g in self.charges],
            "degenerate": self.degenerate,
            "endpoints": list(self.endpoints),
            "polyline": [[p.real, p.imag] for p in self.polyline],
        }


class _WallField:
    def __init__(self, g1: Charge, g2: Charge, scene: Scene):
        self.a1, self.b1 = scene.affine_parts(g1)
        self.a2, self.b2 = scene.affine_parts(g2)
        self.scene = scene

    def w(self, u):
        return (self.a1 * u + self.b1) * np.conj(self.a2 * u + self.b2)

    def f(self, u):
        return np.imag(self.w(u))

    def g(self, u):
        return np.real(self.w(u))

    def grad(self, u: complex) -> complex:
        # d/dx and d/dy of Im(Z1 conj Z2)
        z1, z2 = self.a1 * u + self.b1, self.a2 * u + self.b2
        dx = (self.a1 * z2.conjugate() + z1 * self.a2.conjugate()).imag
        dy = (1j * self.a1 * z2.conjugate() + z1 * (1j * self.a2).conjugate()).imag
        return complex(dx, dy)

    def zeros(self) -> list[complex]:
        out = []
        for a, b in ((self.a1, self.b1), (self.a2, self.b2)):
            if abs(a) > EPS_NUM:
                out.append(-b / a)
        return out

    def project(self, u: complex, iters: int = 30) -> complex:
        for _ in range(iters):
            gr = self.grad(u)
            n2 = abs(gr) ** 2
            if n2 == 0:
                break
            step = self.f(u) / n2 * gr
            u = u - step
            if abs(step) < 1e-15:
                break
        return u


def _bisect_edge(fld: _WallField, p: complex, q: complex) -> complex:
    fp = fld.f(p)
    for _ in range(80):
        m = 0.5 * (p + q)
        fm = fld.f(m)
        if fm == 0:
            return m
        if (fm > 0) == (fp > 0):
            p, fp = m, fm
        else:
            q = m
        if abs(q - p) < 1e-15:
            break
    return 0.5 * (p + q)


def _boundary_hit(fld: _WallField, p: complex, q: complex, chart) -> complex:
    """Point where the traced curve leaves the chart between p (inside) and q (outside)."""
    x0, x1, y0, y1 = chart
    v = q - p
    iv = _clip_line(p, v, chart)
    t = min(1.0, iv[1]) if iv else 0.0
    b = p + t * v
    # slide along the chart edge to the exact zero of Im(Z1 conj Z2)
    if abs(b.real - x0) < 1e-9 or abs(b.real - x1) < 1e-9:
        e = 1j
    else:
        e = 1.0
    lo, hi = b - 0.05 * e * abs(v) - 1e-9 * e, b + 0.05 * e * abs(v) + 1e-9 * e
    if fld.f(lo) * fld.f(hi) < 0:
        b = _bisect_edge(fld, lo, hi)
    return complex(min(max(b.real, x0), x1), min(max(b.imag, y0), y1))


def _trace(fld: _WallField, seed: complex, direction: int, h: float, scene: Scene):
    pts = [seed]
    zeros = fld.zeros()
    u = seed
    end = "max-steps"
    prev_t = None
    for _ in range(200000):
        gr = fld.grad(u)
        if abs(gr) < 1e-14:
            end = "critical"
            break
        t = direction * 1j * gr / abs(gr)
        if prev_t is not None and (t * prev_t.conjugate()).real < 0:
            t = -t
        prev_t = t
        # stop at a zero of Z1 or Z2 that lies within the next step
        hit = None
        for z in zeros:
            w = z - u
            along = (w * t.conjugate()).real
            if 0 < along <= 1.5 * h and abs(w) <= 1.5 * h:
                hit = z
        if hit is not None:
            if scene.in_chart(hit):
                pts.append(hit)
                end = "zero"
                break
        nxt = fld.project(u + h * t)
        if not scene.in_chart(nxt, 0.0):
            pts.append(_boundary_hit(fld, u, nxt, scene.chart))
            end = "chart"
            break
        if fld.g(nxt) <= 0:
            end = "antiparallel"
            break
        if len(pts) > 3 and abs(nxt - pts[0]) < 0.5 * h:
            pts.append(pts[0])
            end = "closed"
            break
        pts.append(nxt)
        u = nxt
    return pts, end


def marginal_wall(g1: Charge, g2: Charge, scene: Scene, grid: int = GRID,
                  step: float | None = None) -> list[WallLocus]:
    """Trace {arg Z_g1 = arg Z_g2} inside the chart; one WallLocus per connected piece."""
    fld = _WallField(g1, g2, scene)
    if abs(fld.a1) < EPS_NUM and abs(fld.b1) < EPS_NUM or abs(fld.a2) < EPS_NUM and abs(fld.b2) < EPS_NUM:
        raise DegenerateChargeError("a charge with identically vanishing central charge has no wall")
    # Z1 = c Z2 identically: every point (c > 0) or no point (c < 0) is on the wall
    det = fld.a1 * fld.b2 - fld.a2 * fld.b1
    if abs(det) < EPS_NUM * max(1.0, abs(fld.a1) + abs(fld.b1)) * max(1.0, abs(fld.a2) + abs(fld.b2)):
        ratio = (fld.a1 / fld.a2) if abs(fld.a2) > EPS_NUM else (fld.b1 / fld.b2)
        if ratio.real < 0:
            return []
        x0, x1, y0, y1 = scene.chart
        box = (complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1), complex(x0, y0))
        return [WallLocus((g1, g2), box, True, ("degenerate", "degenerate"))]
    x0, x1, y0, y1 = scene.chart
    h = step or scene.diameter / 512
    xs = x0 + (np.arange(grid) + 0.5) * (x1 - x0) / grid
    ys = y0 + (np.arange(grid) + 0.5) * (y1 - y0) / grid
    U = xs[None, :] + 1j * ys[:, None]
    F = fld.f(U)
    seeds = []
    sign = np.sign(F)
    for di, dj in ((0, 1), (1, 0)):
        a = sign[: grid - di, : grid - dj]
        b = sign[di:, dj:]
        idx = np.argwhere(a * b < 0)
        for i, j in idx:
            seeds.append(_bisect_edge(fld, complex(U[i, j]), complex(U[i + di, j + dj])))
    for i, j in np.argwhere(F == 0):
        seeds.append(complex(U[i, j]))
    seeds = [s for s in seeds if fld.g(s) > 0]
    out = []
    covered: list[complex] = []
    cell = max((x1 - x0), (y1 - y0)) / grid
    for s in seeds:
        if any(abs(s - c) < 2 * max(h, cell) for c in covered[-4000:]) or _near_any(s, out, 2 * max(h, cell)):
            continue
        fwd, e1 = _trace(fld, s, 1, h, scene)
        bwd, e2 = _trace(fld, s, -1, h, scene)
        if e1 == "closed":
            poly = fwd
            ends = ("closed", "closed")
        else:
            poly = bwd[::-1] + fwd[1:]
            ends = (e2, e1)
        out.append(WallLocus((g1, g2), tuple(poly), False, ends))
    return out


def _near_any(u: complex, loci: Sequence[WallLocus], tol: float) -> bool:
    for w in loci:
        pts = w.polyline
        for a, b in zip(pts[:-1], pts[1:]):
            d = b - a
            if d == 0:
                if abs(u - a) < tol:
                    return True
                continue
            t = min(1.0, max(0.0, ((u - a) * d.conjugate()).real / abs(d) ** 2))
            if abs(a + t * d - u) < tol:
                return True
    return False


def hausdorff(a: Sequence[complex], b: Sequence[complex]) -> float:
    """Hausdorff distance between two finite point sets."""
    A = np.asarray(a, dtype=complex)
    B = np.asarray(b, dtype=complex)
    d = np.abs(A[:, None] - B[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def distance_to_polylines(u, polylines: Sequence[Sequence[complex]]):
    """Distance from a point (or array of points) to the union of polylines."""
    U = np.atleast_1d(np.asarray(u, dtype=complex))
    best = np.full(U.shape, np.inf)
    for pts in polylines:
        P = np.asarray(pts, dtype=complex)
        if len(P) == 1:
            best = np.minimum(best, np.abs(U - P[0]))
            continue
        A, D = P[:-1], np.diff(P)
        L2 = np.abs(D) ** 2
        L2[L2 == 0] = 1.0
        t = np.clip(np.real((U[:, None] - A[None, :]) * np.conj(D)[None, :]) / L2[None, :], 0.0, 1.0)
        best = np.minimum(best, np.abs(A[None, :] + t * D[None, :] - U[:, None]).min(axis=1))
    return float(best[0]) if np.ndim(u) == 0 else best


# -- attractor flow ------------------------------------------------------------------

@dataclass
class FlowStop:
    kind: str  # "singularity" | "regular-zero" | "wall" | "chart" | "target"
    point: complex
    singularity: int | None = None
    wall: tuple[Charge, ...] | None = None


@dataclass
class AttractorSegment:
    charge: Charge
    start: complex
    end: complex
    stop: FlowStop
    events: list = field(default_factory=list)

    @property
    def length(self) -> float:
        return abs(self.end - self.start)


def flow_target(g: Charge, scene: Scene) -> complex:
    """The point where Z_g vanishes; flow lines are straight segments toward it."""
    slope, offset = scene.affine_parts(g)
    if abs(slope) < EPS_NUM:
        raise DegenerateChargeError(f"Z_{g} is constant: no attractor flow")
    return -offset / slope


def attractor_ray(g: Charge, u: complex, scene: Scene, table=None, order: int = 6) -> AttractorSegment:
    """Flow of decreasing |Z_g| from u, stopped at the first wall that splits g."""
    from .invariants import propagate_segment, table_at

    u = complex(u)
    if g.a == 0 and g.b == 0:
        raise UnsupportedClassError(f"{g} has zero boundary: attractor flow unsupported")
    if abs(central_charge(g, u, scene)) <= EPS_NUM:
        raise DegenerateChargeError(f"Z_{g}({u}) = 0")
    target = flow_target(g, scene)
    if table is None:
        table, _ = table_at(u, scene, order)
    end = target
    stop_kind = "target"
    ti = scene.thimble_multiple(g)
    sing = None
    if ti is not None and abs(scene.singularities[ti[0]].position - target) < 1e-9:
        stop_kind, sing = "singularity", ti[0]
    elif scene.near_singularity(target, 1e-9) is None:
        stop_kind = "regular-zero"
    _, events = propagate_segment(table, u, end, scene)
    for ev in events:
        if ev.before.get(g) != ev.after.get(g):
            return AttractorSegment(g, u, ev.point, FlowStop("wall", ev.point, None, ev.charges), [ev])
    return AttractorSegment(g, u, end, FlowStop(stop_kind, end, sing), events)


def flow_direction(g: Charge, u: complex, scene: Scene) -> complex:
    t = flow_target(g, scene)
    d = t - complex(u)
    if abs(d) < EPS_GEOM:
        return 0j
    return d / abs(d)


def phase_of(g: Charge, u: complex, scene: Scene) -> float:
    return canonical_phase(cmath.phase(central_charge(g, u, scene)))
