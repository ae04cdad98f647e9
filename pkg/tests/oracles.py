"""Brute-force reference computations used as test oracles.

None of these touch the package; they are slow, direct implementations of
the definitions.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import sympy


def frac_part(x: Fraction) -> Fraction:
    return x - math.floor(x)


def sawtooth(x: Fraction) -> Fraction:
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return frac_part(x) - Fraction(1, 2)


def closure_points(n: int, generators) -> set[tuple[Fraction, ...]]:
    """All points of the lattice in [0,1)^n, by closing the generators under addition mod 1."""
    gens = [tuple(frac_part(Fraction(x)) for x in g) for g in generators]
    origin = tuple(Fraction(0) for _ in range(n))
    seen = {origin}
    frontier = [origin]
    while frontier:
        p = frontier.pop()
        for g in gens:
            q = tuple(frac_part(a + b) for a, b in zip(p, g))
            if q not in seen:
                seen.add(q)
                frontier.append(q)
    return seen


def sympy_nullspace(rows, n: int) -> sympy.Matrix:
    """Row-reduced basis of the nullspace of the given rows (n columns)."""
    if not rows:
        return sympy.eye(n)
    M = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])
    basis = M.nullspace()
    if not basis:
        return sympy.zeros(0, n)
    return sympy.Matrix.hstack(*basis).T.rref()[0]


def as_sympy_rows(vectors, n: int) -> sympy.Matrix:
    if not vectors:
        return sympy.zeros(0, n)
    M = sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in v] for v in vectors])
    return M.rref()[0]


def ehrhart_h_star(vertices) -> list[int]:
    """h* of a lattice simplex from lattice-point counts of its dilates."""
    d = len(vertices) - 1
    V = sympy.Matrix([[*v, 1] for v in vertices]).T
    Vinv = V.inv()
    lo = [min(v[i] for v in vertices) for i in range(d)]
    hi = [max(v[i] for v in vertices) for i in range(d)]

    def count(t: int) -> int:
        total = 0
        for x in itertools.product(*(range(t * a, t * b + 1) for a, b in zip(lo, hi))):
            bary = Vinv * sympy.Matrix([*x, t])
            if all(c >= 0 for c in bary):
                total += 1
        return total

    L = [count(t) for t in range(d + 1)]
    # (1 - z)^(d+1) * sum L(t) z^t, truncated at degree d
    return [
        sum((-1) ** j * math.comb(d + 1, j) * L[k - j] for j in range(k + 1))
        for k in range(d + 1)
    ]


def subgroup_count_elementary(p: int, k: int) -> int:
    """Number of subgroups of (Z/p)^k: sum of Gaussian binomials."""

    def gauss(k, j):
        num = den = 1
        for i in range(j):
            num *= p ** (k - i) - 1
            den *= p ** (i + 1) - 1
        return num // den

    return sum(gauss(k, j) for j in range(k + 1))


def abelian_group_count(order: int) -> int:
    return math.prod(int(sympy.partition(e)) for e in sympy.factorint(order).values())


def brute_w(chi, a, c, factors) -> complex:
    """Σ over units b of χ(b) B1(Σ a_i b_i c_i / r_i), straight from the definition."""
    units = itertools.product(*([u for u in range(r) if math.gcd(u, r) == 1] for r in factors))
    total = 0j
    for b in units:
        x = sum((Fraction(ai * bi * ci, r) for ai, bi, ci, r in zip(a, b, c, factors)), Fraction(0))
        total += chi(b) * float(sawtooth(x))
    return total


def smallest_period(values: dict[int, complex], r: int) -> int:
    """Least f | r with χ(a) = χ(b) whenever a ≡ b mod f and both are units."""
    for f in sympy.divisors(r):
        if all(
            abs(values[a] - values[b]) < 1e-12
            for a in values
            for b in values
            if (a - b) % f == 0
        ):
            return f
    return r
