"""The charge lattice: boundary part in Z^2 plus a flux part in the pairing kernel."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import GeometryError, DiscwallError

EPS_GEOM = 1e-9


@dataclass(frozen=True, order=True)
class Charge:
    a: int
    b: int
    flux: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "b", int(self.b))
        object.__setattr__(self, "flux", tuple(int(f) for f in self.flux))

    @classmethod
    def zero(cls, k: int = 0) -> "Charge":
        return cls(0, 0, (0,) * k)

    @property
    def boundary(self) -> tuple[int, int]:
        return (self.a, self.b)

    @property
    def rank(self) -> int:
        return 2 + len(self.flux)

    def vector(self) -> tuple[int, ...]:
        return (self.a, self.b) + self.flux

    @classmethod
    def from_vector(cls, v: Sequence[int]) -> "Charge":
        return cls(v[0], v[1], tuple(v[2:]))

    def _flux_match(self, other: "Charge") -> tuple[tuple[int, ...], tuple[int, ...]]:
        f, g = self.flux, other.flux
        if len(f) != len(g):
            # an empty flux part is read as zero flux of any rank
            if not f:
                f = (0,) * len(g)
            elif not g:
                g = (0,) * len(f)
            else:
                raise ValueError(f"flux rank mismatch: {len(f)} vs {len(g)}")
        return f, g

    def __add__(self, other: "Charge") -> "Charge":
        f, g = self._flux_match(other)
        return Charge(self.a + other.a, self.b + other.b, tuple(x + y for x, y in zip(f, g)))

    def __sub__(self, other: "Charge") -> "Charge":
        return self + (-other)

    def __neg__(self) -> "Charge":
        return Charge(-self.a, -self.b, tuple(-x for x in self.flux))

    def __mul__(self, d: int) -> "Charge":
        d = int(d)
        return Charge(d * self.a, d * self.b, tuple(d * x for x in self.flux))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and not any(self.flux)

    def divisibility(self) -> int:
        """gcd of all coordinates (0 for the zero charge)."""
        g = 0
        for x in self.vector():
            g = math.gcd(g, x)
        return g

    def primitive(self) -> tuple["Charge", int]:
        """Return (p, d) with self == d * p and p primitive in the full lattice."""
        d = self.divisibility()
        if d == 0:
            raise ValueError("zero charge has no primitive direction")
        return Charge.from_vector([x // d for x in self.vector()]), d

    def canonical(self) -> "Charge":
        """Representative of {self, -self} whose coordinate vector is lexicographically positive."""
        for x in self.vector():
            if x > 0:
                return self
            if x < 0:
                return -self
        return self

    def __str__(self) -> str:
        return f"({self.a},{self.b}|{','.join(str(f) for f in self.flux)})"

    @classmethod
    def parse(cls, text: str, k: int | None = None) -> "Charge":
        """Parse ``a,b`` / ``a,b|f1,f2`` / ``(a,b|f1,f2)``."""
        s = text.strip()
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        head, _, tail = s.partition("|")
        parts = [p for p in head.split(",") if p.strip()]
        if len(parts) != 2:
            raise ValueError(f"charge {text!r}: expected two boundary integers")
        flux = tuple(int(p) for p in tail.split(",") if p.strip())
        if k is not None and flux == () and k > 0:
            flux = (0,) * k
        if k is not None and len(flux) != k:
            raise ValueError(f"charge {text!r}: expected {k} flux entries")
        return cls(int(parts[0]), int(parts[1]), flux)


def pair(g: Charge, d: Charge) -> int:
    """Skew pairing on boundaries; flux lies in the kernel."""
    return g.a * d.b - g.b * d.a


def is_primitive_boundary(g: Charge) -> bool:
    return (g.a, g.b) != (0, 0) and math.gcd(abs(g.a), abs(g.b)) == 1


def picard_lefschetz(g: Charge, thimble: Charge, sign: int = 1) -> Charge:
    if not is_primitive_boundary(thimble):
        raise DiscwallError(f"thimble {thimble} does not have a primitive boundary")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return g + thimble * (sign * pair(g, thimble))


def solve_combination(basis: Sequence[Charge], target: Charge) -> tuple[Fraction, ...] | None:
    """Exact coefficients c with sum c_i basis_i == target.

    Returns None when there is no solution or the solution is not unique.
    """
    n = len(basis)
    vecs = [b.vector() for b in basis]
    tv = target.vector()
    rows = max([len(tv)] + [len(v) for v in vecs])

    def pad(v):
        return list(v) + [0] * (rows - len(v))

    m = [[Fraction(pad(vecs[j])[i]) for j in range(n)] + [Fraction(pad(tv)[i])] for i in range(rows)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, rows) if m[i][col] != 0), None)
        if piv is None:
            return None
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][col]
        m[r] = [x / pv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    if any(m[i][n] != 0 for i in range(r, rows)):
        return None
    return tuple(m[i][n] for i in range(n))


@dataclass(frozen=True)
class BasePath:
    polyline: tuple[complex, ...]

    def __init__(self, points: Sequence[complex]):
        pts = tuple(complex(p) for p in points)
        if len(pts) < 2:
            raise ValueError("a path needs at least two points")
        object.__setattr__(self, "polyline", pts)

    def reversed(self) -> "BasePath":
        return BasePath(self.polyline[::-1])

    def segments(self):
        return zip(self.polyline[:-1], self.polyline[1:])


def _cross(u: complex, v: complex) -> float:
    return u.real * v.imag - u.imag * v.real


def segment_point_distance(p: complex, q: complex, z: complex) -> float:
    d = q - p
    if d == 0:
        return abs(z - p)
    t = ((z - p) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(p + t * d - z)


def cut_crossings(p: complex, q: complex, position: complex, cut_angle: float):
    """Parameters t in [0,1) where segment p->q crosses the cut ray, with crossing sign.

    Sign +1 means the segment passes the cut counterclockwise around ``position``.
    """
    d = cmath.exp(1j * cut_angle)
    s = q - p
    denom = _cross(s, d)
    if abs(denom) < 1e-15:
        return []
    # p + t s = position + r d
    w = position - p
    t = _cross(w, d) / denom
    r = _cross(w, s) / denom
    if 0.0 <= t < 1.0 and r > 0.0:
        sign = 1 if _cross(d, s) > 0 else -1
        return [(t, sign)]
    return []


def parallel_transport(g: Charge, path: BasePath, scene) -> Charge:
    """Transport a charge label along a path in the chart, one Picard-Lefschetz step per cut crossing."""
    events = []
    for k, (p, q) in enumerate(path.segments()):
        for i, s in enumerate(scene.singularities):
            if segment_point_distance(p, q, s.position) < EPS_GEOM:
                raise GeometryError(f"path segment {k} passes through singularity {i}")
            for t, sign in cut_crossings(p, q, s.position, s.cut_angle):
                events.append((k, t, i, sign))
    events.sort()
    for _, _, i, sign in events:
        g = picard_lefschetz(g, scene.singularities[i].thimble, sign)
    return g
