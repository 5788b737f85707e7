"""Tropical discs on the base: validation, attractor-flow tropicalization and tropical counts."""

from __future__ import annotations

import cmath
import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .central_charge import central_charge, support_phase
from .charges import EPS_GEOM, BasePath, Charge, pair, parallel_transport, solve_combination
from .errors import UnsupportedClassError, WallAmbiguityError
from .scene import EPS_NUM, Scene

ANGLE_TOL = 1e-7


@dataclass(frozen=True)
class Edge:
    child: int
    parent: int
    charge: Charge  # class carried toward the root
    weight: int


@dataclass(frozen=True)
class TropicalDisc:
    vertices: tuple[complex, ...]  # vertex 0 is the root
    edges: tuple[Edge, ...]
    leaves: tuple[tuple[int, int], ...] = ()  # (vertex, singularity index)
    phase: float = 0.0

    @property
    def root(self) -> complex:
        return self.vertices[0]

    def children(self, v: int) -> list[Edge]:
        return [e for e in self.edges if e.parent == v]

    def parent_edge(self, v: int) -> Edge | None:
        return next((e for e in self.edges if e.child == v), None)

    def path_to_root(self, v: int) -> list[complex]:
        pts = [self.vertices[v]]
        while v != 0:
            e = self.parent_edge(v)
            if e is None:
                break
            v = e.parent
            pts.append(self.vertices[v])
        return pts

    def to_dict(self) -> dict:
        return {
            "phase": self.phase,
            "vertices": [[round(z.real, 12), round(z.imag, 12)] for z in self.vertices],
            "edges": [{"child": e.child, "parent": e.parent, "charge": str(e.charge), "weight": e.weight}
                      for e in self.edges],
            "leaves": [{"vertex": v, "singularity": i} for v, i in self.leaves],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TropicalDisc":
        return cls(
            tuple(complex(x, y) for x, y in d["vertices"]),
            tuple(Edge(e["child"], e["parent"], Charge.parse(e["charge"]), int(e["weight"])) for e in d["edges"]),
            tuple((x["vertex"], x["singularity"]) for x in d.get("leaves", [])),
            float(d.get("phase", 0.0)),
        )

    def key(self) -> str:
        return repr(self.to_dict())


@dataclass(frozen=True)
class WeightVector:
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for p in self.parts:
            if any(int(x) < 1 for x in p):
                raise ValueError("weights must be positive integers")
        object.__setattr__(self, "parts", tuple(tuple(sorted((int(x) for x in p), reverse=True))
                                                for p in self.parts))

    def sizes(self) -> tuple[int, ...]:
        return tuple(sum(p) for p in self.parts)

    def aut(self) -> int:
        out = 1
        for p in self.parts:
            for c in Counter(p).values():
                out *= math.factorial(c)
        return out


# -- validation ------------------------------------------------------------------

@dataclass
class ValidationReport:
    violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def clauses(self) -> set[str]:
        return {c for c, _ in self.violations}

    def add(self, clause: str, msg: str):
        self.violations.append((clause, msg))


CLAUSES = {
    1: "(1) affine segments",
    2: "(2) root in B0",
    3: "(3) leaves at singularities",
    4: "(4) balancing",
}


def integral_tangent(c: Charge, theta: float, scene: Scene) -> complex | None:
    """The vector v_c with Re(e^{-i theta} A_x v_c) = <x, c> for the scene basis classes x.

    None when the slopes do not span the plane over the reals.
    """
    rot = cmath.exp(-1j * theta)
    rows = []
    for x in scene.thimbles:
        w = rot * scene.affine_parts(x)[0]
        # Re(w v) = w.re v.x - w.im v.y
        rows.append((w.real, -w.imag, pair(x, c)))
    if len(rows) < 2:
        return None
    (a, b, r), (c2, d, s) = rows[:2]
    det = a * d - b * c2
    if abs(det) < EPS_NUM:
        return None
    return complex((r * d - b * s) / det, (a * s - c2 * r) / det)


def balanced(vectors: Sequence[tuple[int, complex]], tol: float = 1e-9) -> bool:
    """Sum of weight * primitive outgoing vector is zero."""
    tot = sum((w * v for w, v in vectors), 0j)
    scale = max([abs(w * v) for w, v in vectors] + [1.0])
    return abs(tot) <= tol * scale


def _boundary_gcd(c: Charge) -> int:
    return math.gcd(abs(c.a), abs(c.b))


def validate(disc: TropicalDisc, scene: Scene) -> ValidationReport:
    rep = ValidationReport()
    theta = disc.phase
    target = cmath.exp(1j * (theta + math.pi / 2))
    nv = len(disc.vertices)
    seen_children = Counter(e.child for e in disc.edges)
    if any(n > 1 for n in seen_children.values()) or any(e.child == 0 for e in disc.edges):
        rep.add(CLAUSES[1], "edges do not form a tree rooted at vertex 0")
    for k, e in enumerate(disc.edges):
        if not (0 <= e.child < nv and 0 <= e.parent < nv):
            rep.add(CLAUSES[1], f"edge {k} references a missing vertex")
            continue
        p, q = disc.vertices[e.child], disc.vertices[e.parent]
        if abs(q - p) < EPS_GEOM:
            rep.add(CLAUSES[1], f"edge {k} has zero length")
            continue
        dz = central_charge(e.charge, q, scene) - central_charge(e.charge, p, scene)
        if abs(dz) < EPS_NUM or abs(cmath.phase(dz / target)) > ANGLE_TOL:
            rep.add(CLAUSES[1], f"edge {k} is not a phase-{theta:.6g} segment of class {e.charge}")
        if e.weight < 1 or e.weight != _boundary_gcd(e.charge):
            rep.add(CLAUSES[4], f"edge {k} weight {e.weight} differs from the divisibility of {e.charge}")
    root = disc.root
    if not scene.in_chart(root) or scene.near_singularity(root) is not None:
        rep.add(CLAUSES[2], "root is not a smooth point of the chart")
    if disc.parent_edge(0) is not None:
        rep.add(CLAUSES[2], "root has a parent edge")
    leaf_map = dict(disc.leaves)
    parents = {e.parent for e in disc.edges}
    for v in range(1, nv):
        if v in parents:
            continue
        e = disc.parent_edge(v)
        i = leaf_map.get(v)
        if i is None:
            i = scene.near_singularity(disc.vertices[v], 1e-7)
        if i is None or abs(disc.vertices[v] - scene.singularities[i].position) > 1e-7:
            rep.add(CLAUSES[3], f"leaf {v} is not at a singularity")
            continue
        if e is None:
            rep.add(CLAUSES[3], f"leaf {v} has no edge")
            continue
        sol = solve_combination([scene.thimbles[i]], scene._pad(e.charge))
        if sol is None or sol[0].denominator != 1 or sol[0] == 0:
            rep.add(CLAUSES[3], f"leaf {v} carries {e.charge}, not a multiple of thimble {scene.thimbles[i]}")
    for v in range(nv):
        kids = disc.children(v)
        if v == 0 and len(kids) <= 1:
            continue
        if v != 0 and not kids:
            continue
        up = disc.parent_edge(v)
        flow_in = Charge.zero(scene.k)
        for e in kids:
            flow_in = flow_in + scene._pad(e.charge)
        out_charge = scene._pad(up.charge) if up is not None else None
        if out_charge is not None and flow_in != out_charge:
            rep.add(CLAUSES[4], f"charges at vertex {v} are not conserved: {flow_in} != {out_charge}")
        if v == 0:
            continue
        vecs = []
        here = disc.vertices[v]
        tangent_ok = True
        for e, sgn in [(x, -1) for x in kids] + [(up, 1)]:
            t = integral_tangent(scene._pad(e.charge), theta, scene)
            other = disc.vertices[e.child] if sgn < 0 else disc.vertices[e.parent]
            geo = other - here
            if t is None:
                tangent_ok = False
                break
            w = max(e.weight, 1)
            prim = t / _boundary_gcd(e.charge) if _boundary_gcd(e.charge) else t
            # the primitive vector must point along the geometric edge
            unit = geo / abs(geo) if abs(geo) > 0 else 0j
            vecs.append((w, abs(prim) * unit))
        if tangent_ok and not balanced(vecs):
            rep.add(CLAUSES[4], f"vertex {v} is not balanced")
    return rep


def relative_class(disc: TropicalDisc, scene: Scene | None = None) -> Charge:
    """Sum over leaf edges of the carried thimble class, transported to the root."""
    parents = {e.parent for e in disc.edges}
    total = None
    for e in disc.edges:
        if e.child in parents:
            continue
        c = e.charge
        if scene is not None:
            pts = disc.path_to_root(e.child)
            if len(pts) >= 2:
                # start just off the leaf, which sits on a singularity
                pts[0] = pts[0] + 1e-6 * (pts[1] - pts[0])
                c = parallel_transport(scene._pad(c), BasePath(pts), scene)
        total = c if total is None else total + c
    if total is None:
        k = scene.k if scene is not None else 0
        return Charge.zero(k)
    return total


def affine_length(disc: TropicalDisc, scene: Scene) -> float:
    tot = 0.0
    for e in disc.edges:
        p, q = disc.vertices[e.child], disc.vertices[e.parent]
        tot += abs(central_charge(e.charge, q, scene) - central_charge(e.charge, p, scene))
    return tot


# -- tropicalization by attractor flow ---------------------------------------------

@dataclass
class _Node:
    point: complex
    charge: Charge
    children: list
    singularity: int | None = None


def _decompositions(g: Charge, cone_vals: dict[Charge, Fraction], max_parts: int):
    """Multisets of charges from cone_vals summing to g, with at least two parts."""
    cands = sorted(cone_vals, key=lambda c: c.vector())

    def rec(rest: Charge, start: int, acc: list):
        if rest.is_zero() and len(acc) >= 2:
            yield tuple(acc)
            return
        if len(acc) >= max_parts:
            return
        for j in range(start, len(cands)):
            c = cands[j]
            nr = rest - c
            # remaining class must stay in the cone spanned by the candidates
            if _outside(nr, cands):
                continue
            yield from rec(nr, j, acc + [c])

    yield from rec(g, 0, [])


def _outside(r: Charge, cands: Sequence[Charge]) -> bool:
    if r.is_zero():
        return False
    if len(cands) < 2:
        sol = solve_combination(cands, r) if cands else None
        return sol is None or sol[0] < 0
    g1, g2 = cands[0], cands[-1]
    # cone test with the two extreme candidates (candidates are sorted, generators may differ)
    best = None
    for a, b in itertools.combinations(cands, 2):
        sol = solve_combination([a, b], r)
        if sol is not None:
            best = sol if best is None else best
            if sol[0] >= 0 and sol[1] >= 0:
                return False
    if best is None:
        sol = solve_combination([g1], r)
        return sol is None or sol[0] < 0
    return True


def _flow(g: Charge, u: complex, table, scene: Scene, order: int, depth: int) -> list[_Node]:
    from .affine import attractor_ray

    if depth > 4 * order + 4:
        return []
    seg = attractor_ray(g, u, scene, table)
    stop = seg.stop
    if stop.kind == "singularity":
        ti = scene.thimble_multiple(g)
        if ti is None:
            return []
        tab = seg.events[-1].after if seg.events else table
        if tab.get(g) == 0:
            return []
        return [_Node(stop.point, g, [], ti[0])]
    if stop.kind != "wall":
        return []
    ev = seg.events[-1]
    after = ev.after
    c = ev.point
    cone_dirs = list(ev.charges)
    cone_vals = {}
    for r in cone_dirs:
        for d in range(1, order + 1):
            x = after.get(r * d)
            if x and scene.thimble_degree(r * d) <= order:
                cone_vals[r * d] = x
    out = []
    for parts in _decompositions(g, cone_vals, order):
        if all(solve_combination([g], p) is not None for p in parts):
            continue
        subs = [_flow(p, c, after, scene, order, depth + 1) for p in parts]
        if any(not s for s in subs):
            continue
        for combo in itertools.product(*subs):
            out.append(_Node(c, g, list(combo)))
    return out


def _to_disc(root_point: complex, root_charge: Charge, nodes: list[_Node], theta: float) -> TropicalDisc:
    verts = [root_point]
    edges = []
    leaves = []

    def add(node: _Node, parent: int):
        idx = len(verts)
        verts.append(node.point)
        edges.append(Edge(idx, parent, node.charge, _boundary_gcd(node.charge)))
        if node.singularity is not None and not node.children:
            leaves.append((idx, node.singularity))
        for ch in node.children:
            add(ch, idx)

    for n in nodes:
        add(n, 0)
    return TropicalDisc(tuple(verts), tuple(edges), tuple(leaves), theta)


def tropicalize(g: Charge, u: complex, order: int, scene: Scene) -> list[TropicalDisc]:
    """Tropical discs of class g rooted at u, by recursive attractor flow."""
    from .invariants import active_walls_at, table_at

    u = complex(u)
    if g.a == 0 and g.b == 0:
        raise UnsupportedClassError(f"{g} has zero boundary: tropicalization unsupported")
    g = scene._pad(g)
    table, _ = table_at(u, scene, order)
    walls = active_walls_at(g, u, table, scene)
    if walls:
        raise WallAmbiguityError(f"point {u} lies on an active wall for {g}", wall=walls[0], point=u)
    theta = support_phase(g, u, scene)
    discs = {}
    for node in _flow(g, u, table, scene, order, 0):
        d = _to_disc(u, g, [node], theta)
        discs[d.key()] = d
    return [discs[k] for k in sorted(discs)]


# -- tropical counts -------------------------------------------------------------

@dataclass(frozen=True)
class _Piece:
    legs: frozenset
    base: tuple[Fraction, Fraction]
    direction: tuple[int, int]
    is_line: bool
    mult: int


def _meet(p: _Piece, q: _Piece):
    (x1, y1), (a1, b1) = p.base, p.direction
    (x2, y2), (a2, b2) = q.base, q.direction
    det = a1 * b2 - b1 * a2
    if det == 0:
        return None
    # p.base + s d1 = q.base + t d2
    dx, dy = x2 - x1, y2 - y1
    s = Fraction(dx * b2 - dy * a2, det)
    t = Fraction(dx * b1 - dy * a1, det)
    if (not p.is_line and s < 0) or (not q.is_line and t < 0):
        return None
    pt = (x1 + s * a1, y1 + s * b1)
    return pt, abs(det)


def count_tropical(w, directions: Sequence[Charge], point=None, scene: Scene | None = None,
                   seed: int = 20240613) -> int:
    """Tropical count N^trop(w) with product-of-determinants vertex multiplicity.

    Each weight w_ij gives a line of direction w_ij * boundary(directions[i]) in
    generic position; trees are built by merging pieces whose forward rays meet.
    """
    parts = w.parts if isinstance(w, WeightVector) else tuple(tuple(p) for p in w)
    if len(parts) != len(directions):
        raise ValueError("one weight part per direction")
    if any(not p for p in parts):
        return 0
    rng = random.Random(seed)
    legs = []
    for i, p in enumerate(parts):
        m = directions[i]
        for x in p:
            off = (Fraction(rng.randrange(1, 10 ** 9), 10 ** 9 + 7), Fraction(rng.randrange(1, 10 ** 9), 10 ** 9 + 9))
            legs.append((off, (x * m.a, x * m.b)))
    n = len(legs)
    if n < 2:
        return 0
    pieces: dict[frozenset, list[_Piece]] = {}
    for k, (off, d) in enumerate(legs):
        pieces[frozenset([k])] = [_Piece(frozenset([k]), off, d, True, 1)]
    full = frozenset(range(n))
    for size in range(2, n + 1):
        for subset in itertools.combinations(range(n), size):
            S = frozenset(subset)
            first = min(S)
            rest = sorted(S - {first})
            acc = []
            # unordered splits: the part holding the smallest leg is listed first
            for r in range(0, len(rest)):
                for extra in itertools.combinations(rest, r):
                    A = frozenset((first,) + extra)
                    B = S - A
                    if not B:
                        continue
                    for pa in pieces.get(A, []):
                        for pb in pieces.get(B, []):
                            hit = _meet(pa, pb)
                            if hit is None:
                                continue
                            pt, det = hit
                            d = (pa.direction[0] + pb.direction[0], pa.direction[1] + pb.direction[1])
                            acc.append(_Piece(S, pt, d, False, pa.mult * pb.mult * det))
            if acc:
                pieces[S] = acc
    return sum(p.mult for p in pieces.get(full, []))
