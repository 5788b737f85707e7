"""Truncated group-algebra series, wall automorphisms and scattering factorization.

All coefficients are exact ``Fraction`` values. A series lives over a graded
monoid: every monomial x^c is a nonnegative integer combination of the
grading basis, and the degree of x^c is the sum of those coefficients.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .charges import Charge, pair, solve_combination
from .errors import InvalidWallError


@dataclass(frozen=True)
class Grading:
    basis: tuple[Charge, ...]

    def coords(self, c: Charge) -> tuple[int, ...]:
        return _coords(self.basis, c)

    def degree(self, c: Charge) -> int:
        return sum(self.coords(c))

    def charge(self, coords: Sequence[int]) -> Charge:
        out = Charge.zero(len(self.basis[0].flux))
        for m, b in zip(coords, self.basis):
            if m:
                out = out + b * m
        return out


@lru_cache(maxsize=None)
def _coords(basis: tuple[Charge, ...], c: Charge) -> tuple[int, ...]:
    sol = solve_combination(basis, c)
    if sol is None or any(x.denominator != 1 or x < 0 for x in sol):
        raise ValueError(f"{c} is not a nonnegative integer combination of {[str(b) for b in basis]}")
    return tuple(int(x) for x in sol)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"coefficient {x!r} is not an exact rational")


class FormalSeries:
    """Element of Q[monoid] modulo monomials of degree > order."""

    __slots__ = ("terms", "order", "grading")

    def __init__(self, terms: Mapping[Charge, object], order: int, grading: Grading):
        self.order = int(order)
        self.grading = grading
        clean = {}
        for c, v in terms.items():
            v = _frac(v)
            if v and grading.degree(c) <= self.order:
                clean[c] = clean.get(c, Fraction(0)) + v
        self.terms = {c: v for c, v in clean.items() if v}

    # constructors
    @classmethod
    def one(cls, order: int, grading: Grading) -> "FormalSeries":
        k = len(grading.basis[0].flux)
        return cls({Charge.zero(k): 1}, order, grading)

    @classmethod
    def monomial(cls, c: Charge, coeff, order: int, grading: Grading) -> "FormalSeries":
        return cls({c: coeff}, order, grading)

    def _new(self, terms) -> "FormalSeries":
        s = FormalSeries.__new__(FormalSeries)
        s.order, s.grading = self.order, self.grading
        s.terms = {c: v for c, v in terms.items() if v}
        return s

    def _zero_charge(self) -> Charge:
        return Charge.zero(len(self.grading.basis[0].flux))

    def constant_term(self) -> Fraction:
        return self.terms.get(self._zero_charge(), Fraction(0))

    def coefficient(self, c: Charge) -> Fraction:
        return self.terms.get(c, Fraction(0))

    def degree_part(self, k: int) -> dict[Charge, Fraction]:
        return {c: v for c, v in self.terms.items() if self.grading.degree(c) == k}

    def is_one(self) -> bool:
        z = self._zero_charge()
        return self.terms == {z: Fraction(1)}

    def _check(self, other: "FormalSeries"):
        if other.grading != self.grading:
            raise ValueError("series over different gradings")

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.order == other.order and self.grading == other.grading and self.terms == other.terms

    def __hash__(self):
        return hash((self.order, frozenset(self.terms.items())))

    def __add__(self, other):
        if not isinstance(other, FormalSeries):
            other = FormalSeries({self._zero_charge(): other}, self.order, self.grading)
        self._check(other)
        out = dict(self.terms)
        for c, v in other.terms.items():
            out[c] = out.get(c, Fraction(0)) + v
        s = self._new(out)
        return s.truncate(min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return self._new({c: -v for c, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            v = _frac(other)
            return self._new({c: x * v for c, x in self.terms.items()})
        self._check(other)
        n = min(self.order, other.order)
        deg = self.grading.degree
        a = [(c, v, deg(c)) for c, v in self.terms.items()]
        b = [(c, v, deg(c)) for c, v in other.terms.items()]
        out: dict[Charge, Fraction] = {}
        for c1, v1, d1 in a:
            for c2, v2, d2 in b:
                if d1 + d2 <= n:
                    c = c1 + c2
                    out[c] = out.get(c, Fraction(0)) + v1 * v2
        s = self._new(out)
        s.order = n
        return s

    __rmul__ = __mul__

    def truncate(self, order: int) -> "FormalSeries":
        order = min(order, self.order)
        s = self._new({c: v for c, v in self.terms.items() if self.grading.degree(c) <= order})
        s.order = order
        return s

    def inverse(self) -> "FormalSeries":
        c0 = self.constant_term()
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        # 1/(c0 (1 + g)) = (1/c0) sum (-g)^k
        g = self * (1 / c0) - 1
        acc = FormalSeries.one(self.order, self.grading)
        term = acc
        for _ in range(self.order):
            term = term * (-g)
            if not term.terms:
                break
            acc = acc + term
        return acc * (1 / c0)

    def __pow__(self, k: int) -> "FormalSeries":
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        result = FormalSeries.one(self.order, self.grading)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exp(self) -> "FormalSeries":
        if self.constant_term() != 0:
            raise ValueError("exp needs zero constant term")
        acc = FormalSeries.one(self.order, self.grading)
        term = acc
        for m in range(1, self.order + 1):
            term = term * self * Fraction(1, m)
            if not term.terms:
                break
            acc = acc + term
        return acc

    def log(self) -> "FormalSeries":
        if self.constant_term() != 1:
            raise ValueError("log needs constant term 1")
        g = self - 1
        acc = FormalSeries({}, self.order, self.grading)
        term = FormalSeries.one(self.order, self.grading)
        for m in range(1, self.order + 1):
            term = term * g
            if not term.terms:
                break
            acc = acc + term * Fraction((-1) ** (m + 1), m)
        return acc

    def substitute_signs(self, sign) -> "FormalSeries":
        """x^c -> sign(c) x^c for a sign function on charges."""
        return self._new({c: v * sign(c) for c, v in self.terms.items()})

    def regrade(self, grading: Grading, order: int | None = None) -> "FormalSeries":
        return FormalSeries(self.terms, self.order if order is None else order, grading)

    # text form
    def sorted_terms(self) -> list[tuple[Charge, Fraction]]:
        return sorted(self.terms.items(), key=lambda cv: (self.grading.degree(cv[0]), cv[0].vector()))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{_fmt(v)} * x^{c}" for c, v in self.sorted_terms())

    @classmethod
    def from_text(cls, text: str, order: int, grading: Grading) -> "FormalSeries":
        text = text.strip()
        if text == "0":
            return cls({}, order, grading)
        terms = {}
        for part in text.split(" + "):
            m = re.fullmatch(r"\s*(-?\d+(?:/\d+)?)\s*\*\s*x\^(\([^)]*\))\s*", part)
            if not m:
                raise ValueError(f"cannot parse monomial {part!r}")
            c = Charge.parse(m.group(2))
            terms[c] = terms.get(c, Fraction(0)) + Fraction(m.group(1))
        return cls(terms, order, grading)

    def __repr__(self):
        return f"FormalSeries({self.to_text()}, order={self.order})"


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


format_rational = _fmt


@dataclass(frozen=True)
class Wall:
    direction: Charge
    function: FormalSeries
    anchor: complex | None = None
    phase: float | None = None

    def __post_init__(self):
        validate_wall(self)

    def __str__(self):
        return f"{self.direction}: {self.function.to_text()}"


def validate_wall(w: Wall):
    f = w.function
    if f.constant_term() != 1:
        raise InvalidWallError(f"wall {w.direction}: function must have constant term 1")
    p, d = w.direction.primitive()
    if d != 1:
        raise InvalidWallError(f"wall direction {w.direction} must be primitive")
    z = f._zero_charge()
    for c in f.terms:
        if c == z:
            continue
        sol = solve_combination([w.direction], c)
        if sol is None or sol[0].denominator != 1 or sol[0] < 1:
            raise InvalidWallError(f"wall {w.direction}: monomial {c} is not a positive multiple")


def act(wall: Wall, s: FormalSeries) -> FormalSeries:
    """Apply x^mu -> x^mu f^<mu, direction> to a series."""
    validate_wall(wall)
    f = wall.function.regrade(s.grading, min(s.order, wall.function.order))
    powers: dict[int, FormalSeries] = {}
    out = FormalSeries({}, f.order, s.grading)
    for c, v in s.terms.items():
        k = pair(c, wall.direction)
        if k not in powers:
            powers[k] = f ** k
        out = out + FormalSeries.monomial(c, v, f.order, s.grading) * powers[k]
    return out


def wall_function(values: Mapping[int, object], direction: Charge, order: int) -> FormalSeries:
    """exp(sum_d d * Omega(d*direction) x^(d*direction)), truncated at ``order``."""
    grading = Grading((direction,))
    terms = {}
    for d, v in values.items():
        if int(d) < 1:
            raise ValueError("multiplicities must be positive")
        if int(d) <= order:
            terms[direction * int(d)] = int(d) * _frac(v)
    return FormalSeries(terms, order, grading).exp()


def invariants_from_wall_function(f: FormalSeries, direction: Charge, order: int) -> dict[int, Fraction]:
    lf = f.truncate(order).log()
    return {d: lf.coefficient(direction * d) / d for d in range(1, order + 1)}


class Automorphism:
    """Automorphism x^mu -> x^mu * h[mu], tracked on a finite set of test charges.

    The test set contains the grading basis, so the action on any graded
    series is determined multiplicatively.
    """

    def __init__(self, factors: dict[Charge, FormalSeries], order: int, grading: Grading):
        self.factors = factors
        self.order = order
        self.grading = grading

    @classmethod
    def identity(cls, tests: Iterable[Charge], order: int, grading: Grading) -> "Automorphism":
        one = FormalSeries.one(order, grading)
        return cls({t: one for t in tests}, order, grading)

    @classmethod
    def from_wall(cls, wall: Wall, tests: Iterable[Charge], order: int, grading: Grading) -> "Automorphism":
        f = wall.function.regrade(grading, order)
        return cls({t: f ** pair(t, wall.direction) for t in tests}, order, grading)

    def apply(self, s: FormalSeries) -> FormalSeries:
        basis = self.grading.basis
        out = FormalSeries({}, self.order, self.grading)
        cache: dict[tuple[int, ...], FormalSeries] = {}
        for c, v in s.terms.items():
            m = self.grading.coords(c)
            if m not in cache:
                acc = FormalSeries.one(self.order, self.grading)
                for mj, b in zip(m, basis):
                    if mj:
                        acc = acc * self.factors[b] ** mj
                cache[m] = acc
            out = out + FormalSeries.monomial(c, v, self.order, self.grading) * cache[m]
        return out

    def then(self, other: "Automorphism") -> "Automorphism":
        """other o self: apply self first, then other."""
        return Automorphism(
            {t: other.factors[t] * other.apply(h) for t, h in self.factors.items()},
            self.order, self.grading,
        )

    def is_identity(self) -> bool:
        return all(h.is_one() for h in self.factors.values())


def path_product(walls: Sequence[Wall], tests, order: int, grading: Grading) -> Automorphism:
    """Successive application of the wall automorphisms in list order."""
    tests = list(tests)
    p = Automorphism.identity(tests, order, grading)
    for w in walls:
        p = p.then(Automorphism.from_wall(w, tests, order, grading))
    return p


def boundary_tests(k: int) -> list[Charge]:
    z = (0,) * k
    return [Charge(1, 0, z), Charge(0, 1, z)]


def _proportional(p: Charge, q: Charge) -> bool:
    sol = solve_combination([p], q)
    return sol is not None


def factorize_scattering(incoming: Sequence[Wall], order: int) -> list[Wall]:
    """Refactor a phase-ordered product of walls into the opposite phase order.

    Returns the outgoing walls, listed in their own phase order (the reverse
    of the incoming angular order), such that applying the incoming walls in
    order equals applying the outgoing walls in order, modulo degree > order.
    """
    if not incoming:
        return []
    anchors = {w.anchor for w in incoming if w.anchor is not None}
    if len(anchors) > 1:
        a0 = next(iter(anchors))
        if any(abs(a - a0) > 1e-9 for a in anchors):
            raise InvalidWallError("incoming walls do not share an anchor point")
    anchor = next(iter(anchors)) if anchors else None
    for w in incoming:
        validate_wall(w)
    dirs: list[Charge] = []
    for w in incoming:
        if not any(d == w.direction for d in dirs):
            dirs.append(w.direction)
    first = dirs[0]
    last = next((d for d in reversed(dirs) if not _proportional(first, d)), None)
    if last is None:
        f = None
        for w in incoming:
            g = w.function.regrade(Grading((first,)), order)
            f = g if f is None else f * g
        return [] if f.is_one() else [Wall(first, f, anchor)]
    grading = Grading((first, last))
    for d in dirs:
        grading.coords(d)  # raises unless inside the cone
    k = len(first.flux)
    tests = list(grading.basis) + [t for t in boundary_tests(k) if t not in grading.basis]
    target = path_product(incoming, tests, order, grading)

    def angle(d: Charge) -> float:
        m, n = solve_combination(grading.basis, d)
        return math.atan2(float(n), float(m))

    out: dict[Charge, FormalSeries] = {}
    for deg in range(1, order + 1):
        walls = [Wall(d, out[d], anchor) for d in sorted(out, key=angle, reverse=True)]
        current = path_product(walls, tests, order, grading)
        resid = {t: (target.factors[t] * current.factors[t].inverse()).degree_part(deg) for t in tests}
        monos = sorted({c for part in resid.values() for c in part}, key=lambda c: c.vector())
        for c in monos:
            mc = grading.coords(c)
            g = math.gcd(*mc)
            p, _ = grading.charge([x // g for x in mc]).primitive()
            mu = next((t for t in tests if pair(t, p) != 0), None)
            if mu is None:
                raise ArithmeticError(f"cannot resolve flux-only direction {p}")
            e = resid[mu].get(c, Fraction(0)) / pair(mu, p)
            for t in tests:
                if resid[t].get(c, Fraction(0)) != e * pair(t, p):
                    raise ArithmeticError(f"degree-{deg} discrepancy at {c} is not a wall factor")
            if e:
                factor = FormalSeries({c.zero(k): 1, c: e}, order, grading)
                out[p] = out[p] * factor if p in out else factor
    result = []
    for d in sorted(out, key=angle, reverse=True):
        f = out[d].regrade(Grading((d,)), order)
        if not f.is_one():
            result.append(Wall(d, f, anchor))
    return result


def factorize_twisted(incoming: Sequence[Wall], order: int, sigma) -> list[Wall]:
    """Factorization in the twisted algebra x^a x^b = (-1)^<a,b> x^(a+b).

    ``sigma`` is a quadratic refinement (charge -> +-1); x^c -> sigma(c) x^c
    identifies the twisted algebra with the untwisted one.
    """
    untw = [Wall(w.direction, w.function.substitute_signs(sigma), w.anchor, w.phase) for w in incoming]
    return [Wall(w.direction, w.function.substitute_signs(sigma), w.anchor, w.phase)
            for w in factorize_scattering(untw, order)]
