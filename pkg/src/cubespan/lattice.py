"""Rational lattices containing Z^n, their quotient groups and box points.

A lattice is given by rational generators; Z^n is always adjoined
implicitly.  :func:`build_quotient` turns that into an invariant-factor
presentation ``Z/r_1 + ... + Z/r_m`` of the quotient by Z^n together with
the coordinate projections, and :func:`cube_points` lists the lattice
points in the half-open unit cube, one per group element.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

from .exactmath import det_int, frac, lcm, rref, snf

DEFAULT_MAX_POINTS = 10**6
MAX_POINTS_ENV = "CUBESPAN_MAX_POINTS"

GroupElement = tuple[int, ...]


class ResourceLimitError(RuntimeError):
    """Raised when an enumeration would exceed the configured point cap."""


class DegenerateSimplexError(ValueError):
    pass


def max_points_default() -> int:
    raw = os.environ.get(MAX_POINTS_ENV)
    if raw is None:
        return DEFAULT_MAX_POINTS
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{MAX_POINTS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{MAX_POINTS_ENV} must be positive")
    return value


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                p, q = int(num), int(den)
            except ValueError:
                raise ValueError(f"malformed rational {value!r}") from None
            if q == 0:
                raise ValueError(f"zero denominator in {value!r}")
            return Fraction(p, q)
        try:
            return Fraction(int(text))
        except ValueError:
            raise ValueError(f"malformed rational {value!r}") from None
    raise ValueError(f"cannot read {value!r} as a rational (use an int or 'p/q')")


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class LatticeSpec:
    """Generators of a lattice; Z^n is included implicitly."""

    n: int
    generators: tuple[tuple[Fraction, ...], ...] = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.n!r}")
        gens = []
        for k, g in enumerate(self.generators):
            if len(g) != self.n:
                raise ValueError(f"generator {k} has length {len(g)}, expected {self.n}")
            gens.append(tuple(parse_rational(x) for x in g))
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def from_json(cls, data: dict) -> "LatticeSpec":
        if not isinstance(data, dict):
            raise ValueError("lattice document must be a JSON object")
        if "n" not in data:
            raise ValueError("missing field 'n'")
        n = data["n"]
        if isinstance(n, bool) or not isinstance(n, int):
            raise ValueError("field 'n' must be an integer")
        gens = data.get("generators", [])
        if not isinstance(gens, list):
            raise ValueError("field 'generators' must be a list")
        parsed = []
        for k, g in enumerate(gens):
            if not isinstance(g, list):
                raise ValueError(f"generators[{k}] must be a list")
            try:
                parsed.append(tuple(parse_rational(x) for x in g))
            except ValueError as exc:
                raise ValueError(f"generators[{k}]: {exc}") from None
        return cls(n=n, generators=tuple(parsed))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "generators": [[format_rational(x) for x in g] for g in self.generators],
        }


@dataclass(frozen=True)
class CubePoint:
    coords: tuple[Fraction, ...]
    element: GroupElement

    @property
    def support(self) -> int:
        return sum(1 for x in self.coords if x != 0)

    @property
    def total(self) -> Fraction:
        return sum(self.coords, Fraction(0))


@dataclass(frozen=True)
class QuotientGroup:
    """Invariant-factor presentation of Λ/Z^n with the coordinate projections.

    ``proj[i][j] = p`` means the i-th coordinate of the j-th group generator
    is ``p / factors[j]`` mod 1.
    """

    n: int
    factors: tuple[int, ...]
    proj: tuple[tuple[int, ...], ...]
    max_points: int | None = field(default=None, compare=False)

    def __post_init__(self):
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain: {self.factors}")
        if any(r < 2 for r in self.factors):
            raise ValueError("invariant factors must be at least 2")
        if len(self.proj) != self.n or any(len(row) != len(self.factors) for row in self.proj):
            raise ValueError("projection table has the wrong shape")
        for row in self.proj:
            for p, r in zip(row, self.factors):
                if not 0 <= p < r:
                    raise ValueError("projection residues must lie in [0, r_j)")

    @property
    def m(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    @property
    def trivial_coords(self) -> tuple[int, ...]:
        """Coordinates whose projection is identically zero (0-based)."""
        return tuple(i for i, row in enumerate(self.proj) if not any(row))

    def neg_proj(self, i: int) -> tuple[int, ...]:
        return tuple((-p) % r for p, r in zip(self.proj[i], self.factors))

    def elements(self) -> Iterator[GroupElement]:
        return product(*(range(r) for r in self.factors))

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return tuple((x + y) % r for x, y, r in zip(a, b, self.factors))

    def neg(self, a: GroupElement) -> GroupElement:
        return tuple((-x) % r for x, r in zip(a, self.factors))

    def coordinate(self, i: int, a: GroupElement) -> Fraction:
        """{π_i(a)} as an exact rational in [0, 1)."""
        L = self.exponent
        num = sum(x * p * (L // r) for x, p, r in zip(a, self.proj[i], self.factors))
        return Fraction(num % L, L)

    def point(self, a: GroupElement) -> CubePoint:
        return CubePoint(tuple(self.coordinate(i, a) for i in range(self.n)), tuple(a))

    def kernel(self, i: int) -> frozenset:
        L = self.exponent
        weights = [p * (L // r) for p, r in zip(self.proj[i], self.factors)]
        return frozenset(
            a for a in self.elements() if sum(x * w for x, w in zip(a, weights)) % L == 0
        )

    def generator_vectors(self) -> list[tuple[Fraction, ...]]:
        """Representatives in [0,1)^n of the group generators."""
        return [
            tuple(Fraction(self.proj[i][j], r) for i in range(self.n))
            for j, r in enumerate(self.factors)
        ]

    @cached_property
    def _element_index(self) -> dict:
        return {p.coords: p.element for p in cube_points(self)}

    def element_of(self, coords: Sequence) -> GroupElement:
        key = tuple(frac(x) for x in coords)
        try:
            return self._element_index[key]
        except KeyError:
            raise ValueError(f"{coords} is not a point of the lattice") from None


def _inverse_unimodular(V: list[list[int]]) -> list[list[int]]:
    n = len(V)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(V)]
    R, _ = rref(aug)
    inv = [row[n:] for row in R]
    out = [[int(x) for x in row] for row in inv]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ArithmeticError("matrix is not unimodular")
    return out


def build_quotient(spec: LatticeSpec, max_points: int | None = None) -> QuotientGroup:
    """Invariant-factor presentation of ⟨generators, Z^n⟩ / Z^n."""
    n = spec.n
    gens = [tuple(frac(x) for x in g) for g in spec.generators]
    d = lcm(x.denominator for g in gens for x in g)
    if d == 1:
        return QuotientGroup(n=n, factors=(), proj=tuple(() for _ in range(n)), max_points=max_points)

    # d·Λ is spanned by the scaled generators and d·Z^n; its Smith form gives
    # a basis w_j of Z^n with d·Λ = ⊕ d_j w_j Z, so Λ/Z^n = ⊕ Z/(d/d_j).
    rows = [[int(x * d) for x in g] for g in gens]
    rows += [[d * int(i == j) for j in range(n)] for i in range(n)]
    dec = snf(rows)
    diag = dec.diagonal
    W = _inverse_unimodular(dec.V)

    blocks = []
    for j, dj in enumerate(diag):
        r = d // dj
        if r > 1:
            blocks.append((r, [W[j][i] % r for i in range(n)]))
    blocks.sort(key=lambda b: b[0])
    factors = tuple(r for r, _ in blocks)
    proj = tuple(tuple(col[i] for _, col in blocks) for i in range(n))
    return QuotientGroup(n=n, factors=factors, proj=proj, max_points=max_points)


def _check_cap(qg: QuotientGroup, max_points: int | None) -> None:
    cap = max_points if max_points is not None else qg.max_points
    if cap is None:
        cap = max_points_default()
    if qg.order > cap:
        raise ResourceLimitError(
            f"group of order {qg.order} exceeds the point cap {cap} "
            f"(raise it with --max-points or {MAX_POINTS_ENV})"
        )


def cube_points(qg: QuotientGroup, max_points: int | None = None) -> list[CubePoint]:
    """All lattice points in [0,1)^n, in lexicographic order of group element."""
    _check_cap(qg, max_points)
    return [qg.point(a) for a in qg.elements()]


def negate_point(p: CubePoint, qg: QuotientGroup) -> CubePoint:
    """The unique box point μ with λ + Z^n = -μ + Z^n."""
    return qg.point(qg.neg(p.element))


# ---------------------------------------------------------------------------
# Lattice simplices


def simplex_matrix(vertices: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(vertices)
    if n == 0:
        raise DegenerateSimplexError("a simplex needs at least one vertex")
    rows = []
    for v in vertices:
        if len(v) != n - 1:
            raise ValueError(f"{n} vertices must lie in Z^{n - 1}, got a vertex of length {len(v)}")
        if any(isinstance(x, bool) or not isinstance(x, int) for x in v):
            raise ValueError(f"vertex {list(v)} must have integer coordinates")
        rows.append([*v, 1])
    return rows


def simplex_dual_lattice(vertices: Sequence[Sequence[int]]) -> LatticeSpec:
    """Coefficient lattice {λ : Σ λ_i (v_i, 1) ∈ Z^n} of a lattice simplex.

    Its box points are the lattice points of the fundamental parallelepiped
    spanned by the homogenized vertices.  The generators are the rows of
    A^{-1}, where A has rows (v_i, 1).
    """
    A = simplex_matrix(vertices)
    n = len(A)
    if det_int(A) == 0:
        raise DegenerateSimplexError("vertices are affinely dependent")
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    R, _ = rref(aug)
    inv = [row[n:] for row in R]
    return LatticeSpec(n=n, generators=tuple(tuple(row) for row in inv))


def h_star(vertices: Sequence[Sequence[int]], max_points: int | None = None) -> list[int]:
    """h*-vector of a lattice simplex by counting box points per level."""
    spec = simplex_dual_lattice(vertices)
    qg = build_quotient(spec, max_points=max_points)
    counts = [0] * spec.n
    for p in cube_points(qg, max_points):
        level = p.total
        if level.denominator != 1:
            raise ArithmeticError(f"box point {p.coords} has non-integral level {level}")
        counts[int(level)] += 1
    return counts
