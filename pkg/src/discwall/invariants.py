"""Chamber tables of rational disc invariants, propagated across walls of marginal stability."""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .central_charge import central_charge
from .charges import EPS_GEOM, Charge, pair, segment_point_distance, solve_combination
from .errors import DegenerateChargeError, InvalidWallError, WallAmbiguityError
from .scene import EPS_NUM, EPS_PHASE, Scene
from .series import Grading, Wall, factorize_scattering, format_rational, invariants_from_wall_function, wall_function

DEFAULT_ORDER = 6
# relative tolerance for "phases agree" when grouping charges at a crossing point
ALIGN_TOL = 1e-7


def initial_invariant(d: int) -> Fraction:
    """Multiple-cover value (-1)^(|d|-1)/d^2 of the d-fold thimble class."""
    if d == 0:
        raise ValueError("the zero class has no invariant")
    d = abs(int(d))
    return Fraction((-1) ** (d - 1), d * d)


initial_invariants = initial_invariant


@dataclass
class InvariantTable:
    point: complex
    values: dict[Charge, Fraction]
    order: int

    def get(self, g: Charge) -> Fraction:
        if g in self.values:
            return self.values[g]
        return self.values.get(-g, Fraction(0))

    def __getitem__(self, g: Charge) -> Fraction:
        return self.get(g)

    def nonzero(self) -> dict[Charge, Fraction]:
        return {g: v for g, v in self.values.items() if v}

    def directions(self) -> list[Charge]:
        seen = []
        for g in sorted(self.nonzero(), key=lambda c: c.vector()):
            p = g.primitive()[0].canonical()
            if p not in seen:
                seen.append(p)
        return seen

    def same_values(self, other: "InvariantTable") -> bool:
        return self.nonzero() == other.nonzero()

    def to_text(self) -> str:
        rows = sorted(self.nonzero().items(), key=lambda kv: (sum(abs(x) for x in kv[0].vector()), kv[0].vector()))
        return "\n".join(f"{g} -> {format_rational(v)}" for g, v in rows)

    @classmethod
    def from_text(cls, text: str, point: complex = 0j, order: int = DEFAULT_ORDER) -> "InvariantTable":
        vals = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            lhs, _, rhs = line.partition("->")
            vals[Charge.parse(lhs)] = Fraction(rhs.strip())
        return cls(complex(point), vals, order)

    def to_dict(self) -> dict:
        return {
            "point": [self.point.real, self.point.imag],
            "order": self.order,
            "values": {str(g): format_rational(v) for g, v in sorted(self.nonzero().items(), key=lambda kv: kv[0].vector())},
        }


def reality_check(table: InvariantTable) -> bool:
    return all(table.values.get(-g, v) == v for g, v in table.values.items())


@dataclass
class WallCrossingEvent:
    charges: tuple[Charge, ...]  # cone directions at the crossing, incoming phase order
    point: complex
    incoming: complex
    outgoing: complex
    before: InvariantTable
    after: InvariantTable

    @property
    def generators(self) -> tuple[Charge, Charge]:
        return self.charges[0], self.charges[-1]

    def jump(self) -> dict[Charge, Fraction]:
        keys = set(self.before.nonzero()) | set(self.after.nonzero())
        out = {}
        for g in keys:
            d = self.after.get(g) - self.before.get(g)
            if d:
                out[g] = d
        return out

    def to_dict(self) -> dict:
        return {
            "wall": [str(g) for g in self.charges],
            "point": [self.point.real, self.point.imag],
            "before": self.before.to_dict(),
            "after": self.after.to_dict(),
        }


# -- seeds and charge bookkeeping ---------------------------------------------

def seed_table(scene: Scene, order: int = DEFAULT_ORDER) -> InvariantTable:
    vals = {}
    for t in scene.thimbles:
        for d in range(1, order + 1):
            vals[(t * d).canonical()] = initial_invariant(d)
    return InvariantTable(scene.basepoint, vals, order)


def _signed(directions: Iterable[Charge]) -> list[Charge]:
    out = []
    for d in directions:
        out.extend([d, -d])
    return out


def _z(g: Charge, u: complex, scene: Scene) -> complex:
    return central_charge(g, u, scene)


def _aligned(za: complex, zb: complex, tol: float = ALIGN_TOL) -> bool:
    if abs(za) <= EPS_NUM or abs(zb) <= EPS_NUM:
        return False
    w = za * zb.conjugate()
    return w.real > 0 and abs(w.imag) <= tol * abs(w)


def _quadratic_roots(c2: float, c1: float, c0: float) -> list[float]:
    scale = max(abs(c2), abs(c1), abs(c0))
    if scale == 0:
        return []
    if abs(c2) <= 1e-14 * scale:
        if abs(c1) <= 1e-14 * scale:
            return []
        return [-c0 / c1]
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    q = -0.5 * (c1 + math.copysign(sq, c1))
    roots = [q / c2]
    if q != 0:
        roots.append(c0 / q)
    return sorted(set(roots))


def _pair_crossings(a: Charge, b: Charge, p: complex, q: complex, scene: Scene, t_lo: float):
    """Parameters t in (t_lo, 1] where Z_a and Z_b become aligned transversally along p->q."""
    a0, a1 = _z(a, p, scene), _z(a, q, scene)
    b0, b1 = _z(b, p, scene), _z(b, q, scene)
    da, db = a1 - a0, b1 - b0
    w0 = a0 * b0.conjugate()
    w1 = da * b0.conjugate() + a0 * db.conjugate()
    w2 = da * db.conjugate()
    out = []
    for t in _quadratic_roots(w2.imag, w1.imag, w0.imag):
        if not (t_lo < t <= 1.0):
            continue
        za, zb = a0 + t * da, b0 + t * db
        if abs(za) <= EPS_NUM or abs(zb) <= EPS_NUM:
            continue
        if (za * zb.conjugate()).real <= 0:
            continue
        # transversality: the derivative of Im must not vanish
        deriv = w1.imag + 2 * t * w2.imag
        if abs(deriv) <= 1e-12 * (abs(w1) + abs(w2) + abs(w0)):
            continue
        out.append(t)
    return out


def _cone_directions(table: InvariantTable, ref: Charge, c: complex, scene: Scene) -> list[Charge]:
    zr = _z(ref, c, scene)
    return [x for x in _signed(table.directions()) if _aligned(_z(x, c, scene), zr)]


def _incoming_order(dirs: Sequence[Charge], c: complex, v: complex, scene: Scene) -> list[Charge]:
    """Sort aligned directions by phase just before c when moving along v (increasing)."""

    def key(x):
        slope, _ = scene.affine_parts(x)
        return -(slope * v / _z(x, c, scene)).imag

    return sorted(dirs, key=lambda x: (key(x), x.vector()))


@lru_cache(maxsize=1024)
def _outgoing_invariants(gen, key, order):
    """Outgoing ray invariants for incoming rays ((direction, ((d, value), ...)), ...)."""
    grading = Grading(gen)
    incoming = []
    for r, vals in key:
        m = sum(grading.coords(r))
        incoming.append(Wall(r, wall_function(dict(vals), r, order // m)))
    outgoing = factorize_scattering(incoming, order) if len(incoming) > 1 else incoming
    out = []
    for w in outgoing:
        r = w.direction
        m = sum(grading.coords(r))
        out.append((r, invariants_from_wall_function(w.function, r, order // m)))
    return tuple(out)


def _apply_crossing(table: InvariantTable, dirs: list[Charge], c: complex, v: complex,
                    scene: Scene) -> WallCrossingEvent:
    order = table.order
    v = v / abs(v)
    ordered = _incoming_order(dirs, c, v, scene)
    if len(ordered) < 2:
        raise InvalidWallError("a wall crossing needs two non-proportional charges")
    gen = (ordered[0], ordered[-1])
    if solve_combination([gen[0]], gen[1]) is not None:
        raise InvalidWallError(f"degenerate wall: {gen[0]} and {gen[1]} are proportional")
    grading = Grading(gen)
    key = []
    for r in ordered:
        m = sum(grading.coords(r))
        vals = tuple((d, table.get(r * d)) for d in range(1, order // m + 1) if table.get(r * d))
        if vals:
            key.append((r, vals))
    new_vals = {g: x for g, x in table.values.items()
                if not any(solve_combination([r], g) is not None for r in ordered)}
    for r, inv in _outgoing_invariants(gen, tuple(key), order):
        for d, x in inv.items():
            if x and scene.thimble_degree(r * d) <= order:
                new_vals[(r * d).canonical()] = x
    before = InvariantTable(c - 1e-9 * v, dict(table.values), order)
    after = InvariantTable(c + 1e-9 * v, new_vals, order)
    return WallCrossingEvent(tuple(ordered), c, before.point, after.point, before, after)


def propagate_segment(table: InvariantTable, p: complex, q: complex, scene: Scene,
                      t_lo: float = 1e-9) -> tuple[InvariantTable, list[WallCrossingEvent]]:
    """Carry a table from p to q, crossing every wall met on the straight segment."""
    events = []
    t = t_lo
    if abs(q - p) < EPS_GEOM:
        return InvariantTable(q, table.values, table.order), events
    while True:
        dirs = table.directions()
        best = None
        for a, b in itertools.combinations(dirs, 2):
            if pair(a, b) == 0:
                continue
            for bb in (b, -b):
                for tc in _pair_crossings(a, bb, p, q, scene, t):
                    if best is None or tc < best[0]:
                        best = (tc, a)
        if best is None:
            break
        tc, a = best
        c = p + tc * (q - p)
        cone = _cone_directions(table, a, c, scene)
        ev = _apply_crossing(table, cone, c, q - p, scene)
        events.append(ev)
        table = ev.after
        t = tc + 1e-12
    return InvariantTable(q, table.values, table.order), events


# -- routing in the cut chart ---------------------------------------------------

def _segment_ok(p: complex, q: complex, scene: Scene) -> bool:
    if scene.segment_crosses_cut(p, q):
        return False
    return all(segment_point_distance(p, q, s.position) > 10 * EPS_GEOM for s in scene.singularities)


def cut_chart_path(scene: Scene, start: complex, end: complex) -> list[complex]:
    """Shortest polyline from start to end through the plane minus the cuts."""
    start, end = complex(start), complex(end)
    if _segment_ok(start, end, scene):
        return [start, end]
    pos = [s.position for s in scene.singularities]
    sep = min([abs(x - y) for x, y in itertools.combinations(pos, 2)] + [scene.diameter])
    r = 0.05 * sep
    nodes = [start, end]
    for s in scene.singularities:
        for j in range(24):
            ang = s.cut_angle + math.pi * (j + 0.5) / 12
            nodes.append(s.position + r * complex(math.cos(ang), math.sin(ang)))
    n = len(nodes)
    dist = [math.inf] * n
    prev = [-1] * n
    dist[0] = 0.0
    heap = [(0.0, 0)]
    while heap:
        d, i = heapq.heappop(heap)
        if d > dist[i]:
            continue
        if i == 1:
            break
        for j in range(n):
            if j == i:
                continue
            nd = d + abs(nodes[j] - nodes[i])
            if nd < dist[j] and _segment_ok(nodes[i], nodes[j], scene):
                dist[j] = nd
                prev[j] = i
                heapq.heappush(heap, (nd, j))
    if dist[1] == math.inf:
        raise DegenerateChargeError("no cut-avoiding path between the two points")
    path = [1]
    while path[-1] != 0:
        path.append(prev[path[-1]])
    return [nodes[i] for i in reversed(path)]


def propagate_path(table: InvariantTable, points: Sequence[complex], scene: Scene):
    events = []
    for p, q in zip(points[:-1], points[1:]):
        table, ev = propagate_segment(table, p, q, scene)
        events.extend(ev)
    return table, events


@lru_cache(maxsize=4096)
def _table_at_cached(scene: Scene, u: complex, order: int):
    path = cut_chart_path(scene, scene.basepoint, u)
    return propagate_path(seed_table(scene, order), path, scene)


def table_at(u: complex, scene: Scene, order: int = DEFAULT_ORDER, path: Sequence[complex] | None = None):
    """Invariant table at u, reached from the basepoint chamber. Returns (table, events)."""
    u = complex(u)
    if path is None:
        table, events = _table_at_cached(scene, u, order)
        return InvariantTable(u, dict(table.values), order), list(events)
    path = list(path)
    if abs(path[0] - scene.basepoint) > EPS_GEOM or abs(path[-1] - u) > EPS_GEOM:
        raise ValueError("path must run from the basepoint to u")
    for p, q in zip(path[:-1], path[1:]):
        if not _segment_ok(p, q, scene):
            raise DegenerateChargeError("path crosses a cut or passes through a singularity")
    return propagate_path(seed_table(scene, order), path, scene)


def active_walls_at(g: Charge, u: complex, table: InvariantTable, scene: Scene) -> list[tuple[Charge, Charge]]:
    """Pairs of active charges aligned at u whose open positive cone contains g."""
    out = []
    zg = _z(g, u, scene)
    dirs = _signed(table.directions())
    for a, b in itertools.combinations(dirs, 2):
        if pair(a, b) == 0:
            continue
        za, zb = _z(a, u, scene), _z(b, u, scene)
        if abs(za) <= EPS_NUM or abs(zb) <= EPS_NUM:
            continue
        w = za * zb.conjugate()
        if w.real <= 0 or abs(w.imag) > EPS_PHASE * abs(w):
            continue
        sol = solve_combination([a, b], g)
        if sol is not None and sol[0] > 0 and sol[1] > 0:
            out.append((a, b))
    return out


def invariant_at(g: Charge, u: complex, order: int, scene: Scene) -> Fraction:
    if g.is_zero():
        raise ValueError("the invariant of the zero class is undefined")
    scene.decompose(g)
    table, _ = table_at(u, scene, order)
    walls = active_walls_at(g, complex(u), table, scene)
    if walls:
        a, b = walls[0]
        raise WallAmbiguityError(f"point {u} lies on the wall of marginal stability of {a} and {b}",
                                 wall=(a, b), point=u)
    return table.get(g)


def cross_wall(table: InvariantTable, wall, point: complex, scene: Scene,
               direction: complex | None = None) -> WallCrossingEvent:
    """Cross the wall of ``wall`` (a WallLocus or a pair of charges) at ``point``.

    ``direction`` is the travel direction; by default the crossing goes from
    the table's anchor point through ``point``.
    """
    g1, g2 = getattr(wall, "charges", wall)
    if solve_combination([g1], g2) is not None:
        raise InvalidWallError(f"degenerate wall: {g1} and {g2} are proportional "
                               "(the summed class has a non-primitive boundary)")
    point = complex(point)
    if direction is None:
        direction = point - table.point
        if abs(direction) < EPS_GEOM:
            raise ValueError("crossing direction undefined: pass direction=")
    z1 = _z(g1, point, scene)
    dirs = [x for x in _signed(table.directions()) if _aligned(_z(x, point, scene), z1)]
    for g in (g1, g2):
        p = g.primitive()[0]
        if p not in dirs:
            dirs.append(p)
    return _apply_crossing(table, dirs, point, direction, scene)


# -- multiple covers ----------------------------------------------------------

def quadratic_refinement(g: Charge, basis: Sequence[Charge], signs: Sequence[int]) -> int:
    """sigma(g) for the refinement with sigma(basis_i) = signs_i.

    sigma(x + y) = sigma(x) sigma(y) (-1)^<x,y>; g must be an integer
    combination of the basis.
    """
    sol = solve_combination(list(basis), g)
    if sol is None or any(c.denominator != 1 for c in sol):
        raise ValueError(f"{g} is not an integer combination of the basis")
    n = [int(c) for c in sol]
    e = 0
    for i, (ni, si) in enumerate(zip(n, signs)):
        if si == -1:
            e += ni
        for j in range(i + 1, len(n)):
            e += ni * n[j] * pair(basis[i], basis[j])
    return -1 if e % 2 else 1


def _cover_sign(n: int, k: int, sigma: int | None) -> int:
    # sign of the k-fold cover term of the class n*g
    if sigma is None:
        return (-1) ** (k - 1)
    return -(sigma ** (n * k))


@dataclass
class GVResult:
    values: dict[int, Fraction]
    integral: bool

    def integers(self) -> dict[int, int]:
        return {d: int(v) for d, v in self.values.items()}


def gv_invariants(values: Mapping[int, object], order: int, sigma: int | None = None) -> GVResult:
    """Invert the multiple-cover sum for the integer invariants along one ray.

    Default: the k-fold cover of n*g enters with (-1)^(k-1)/k^2. Passing the
    refinement sign ``sigma`` = sigma(g) of the primitive class uses
    -sigma(n g)^k/k^2 instead.
    """
    vt = {d: Fraction(values.get(d, 0)) for d in range(1, order + 1)}
    out: dict[int, Fraction] = {}
    for m in range(1, order + 1):
        acc = vt[m]
        for k in range(2, m + 1):
            if m % k == 0:
                n = m // k
                acc -= Fraction(_cover_sign(n, k, sigma), k * k) * out[n]
        out[m] = acc * _cover_sign(m, 1, sigma)
    return GVResult(out, all(v.denominator == 1 for v in out.values()))


def multiple_cover_sum(omegas: Mapping[int, object], order: int, sigma: int | None = None) -> dict[int, Fraction]:
    """Forward map: rational invariants from integer ones along one ray."""
    out = {}
    for m in range(1, order + 1):
        acc = Fraction(0)
        for k in range(1, m + 1):
            if m % k == 0:
                acc += Fraction(_cover_sign(m // k, k, sigma), k * k) * Fraction(omegas.get(m // k, 0))
        out[m] = acc
    return out


# -- tropical form of the jump --------------------------------------------------

def _partitions(n: int, max_part: int | None = None):
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def weight_vectors(g: Charge, d: int, charges: Sequence[Charge], max_total: int = 12):
    """All w with sum_i |w_i| charges_i == d g (parts as descending tuples)."""
    target = g * d
    bounds = []
    for c in charges:
        bounds.append(range(0, max_total + 1))
    for sizes in itertools.product(*bounds):
        if sum(sizes) == 0 or sum(sizes) > max_total:
            continue
        tot = Charge.zero(len(target.flux))
        for s, c in zip(sizes, charges):
            if s:
                tot = tot + c * s
        if tot != target:
            continue
        for parts in itertools.product(*[_partitions(s) for s in sizes]):
            yield parts


def aut_order(w: Sequence[Sequence[int]]) -> int:
    out = 1
    for part in w:
        for _, grp in itertools.groupby(sorted(part)):
            out *= math.factorial(len(list(grp)))
    return out


def delta_tropical(g: Charge, d: int, charges: Sequence[Charge], table: InvariantTable,
                   point: complex | None = None, scene: Scene | None = None, max_total: int = 8) -> Fraction:
    """Jump of the invariant of d*g predicted by weighted tropical counts."""
    from .tropical import count_tropical

    if g.divisibility() != 1:
        raise ValueError(f"{g} is not primitive")
    if d < 1:
        raise ValueError("d must be positive")
    if point is not None and scene is not None:
        z0 = _z(charges[0], point, scene)
        for c in charges[1:]:
            if not _aligned(_z(c, point, scene), z0, 1e-6):
                raise ValueError(f"charge {c} is not phase-aligned at {point}")
    total = Fraction(0)
    for w in weight_vectors(g, d, charges, max_total):
        weight = Fraction(1)
        for part, c in zip(w, charges):
            for x in part:
                weight *= table.get(c * x)
        if not weight:
            continue
        n = count_tropical(w, charges)
        total += Fraction(n, aut_order(w)) * weight
    return total
