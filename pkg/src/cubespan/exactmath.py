"""Exact integer/rational kernels shared by the rest of the package.

Rationals are plain :class:`fractions.Fraction` values (always reduced, so
value equality is structural equality).  Integer matrices are lists of rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Callable, Iterable, Sequence, Union

import numpy as np

IntMatrix = list[list[int]]
Divisor = Union[int, tuple[int, ...]]

COMPLEX_TOL = 1e-9


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfDecomposition:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0])))]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def _swap_rows(A, i, j):
    A[i], A[j] = A[j], A[i]


def _swap_cols(A, i, j):
    for row in A:
        row[i], row[j] = row[j], row[i]


def _add_row(A, dst, src, k):
    # row[dst] += k * row[src]
    if k:
        A[dst] = [x + k * y for x, y in zip(A[dst], A[src])]


def _add_col(A, dst, src, k):
    if k:
        for row in A:
            row[dst] += k * row[src]


def snf(M: Sequence[Sequence[int]]) -> SnfDecomposition:
    """Smith normal form with transforms.

    >>> snf([[4, 6]]).D
    [[2, 0]]
    """
    if not M or not M[0]:
        raise ValueError("snf needs a nonempty matrix")
    m, n = len(M), len(M[0])
    if any(len(row) != n for row in M):
        raise ValueError("ragged matrix")
    D = [[int(x) for x in row] for row in M]
    U = identity(m)
    V = identity(n)

    for t in range(min(m, n)):
        entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        _swap_rows(D, t, i0)
        _swap_rows(U, t, i0)
        _swap_cols(D, t, j0)
        _swap_cols(V, t, j0)

        while True:
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    _add_row(D, i, t, -q)
                    _add_row(U, i, t, -q)
                    if D[i][t]:
                        # remainder is smaller than the pivot: make it the pivot
                        _swap_rows(D, t, i)
                        _swap_rows(U, t, i)
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    _add_col(D, j, t, -q)
                    _add_col(V, j, t, -q)
                    if D[t][j]:
                        _swap_cols(D, t, j)
                        _swap_cols(V, t, j)
                        dirty = True
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            _add_row(D, t, bad, 1)
            _add_row(U, t, bad, 1)

        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]

    return SnfDecomposition(U=U, D=D, V=V)


def det_int(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    n = len(M)
    A = [list(map(int, row)) for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


# ---------------------------------------------------------------------------
# Rational linear algebra


def rref(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q, plus the pivot columns."""
    A = [[Fraction(x) for x in row] for row in M]
    if not A:
        return A, []
    rows, cols = len(A), len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rational_rank(M: Sequence[Sequence]) -> int:
    return len(rref(M)[1])


def nullspace_basis(M: Sequence[Sequence], cols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{v : M v = 0}``; ``cols`` is needed when ``M`` has no rows."""
    if cols is None:
        if not M:
            raise ValueError("cols must be given for an empty matrix")
        cols = len(M[0])
    if not M:
        return [[Fraction(int(i == j)) for i in range(cols)] for j in range(cols)]
    R, pivots = rref(M)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def same_subspace(A: Sequence[Sequence], B: Sequence[Sequence], dim: int) -> bool:
    """True iff the row spaces of ``A`` and ``B`` in Q^dim coincide."""
    ra = rational_rank(A) if A else 0
    rb = rational_rank(B) if B else 0
    if ra != rb:
        return False
    if not A:
        return True
    return rational_rank(list(A) + list(B)) == ra


def complex_rank(M, tol: float = COMPLEX_TOL) -> int:
    """Rank over C by elimination with partial pivoting.

    A column whose best remaining pivot has magnitude below ``tol`` is
    treated as zero.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = np.array(M, dtype=complex)
    if A.size == 0:
        return 0
    A = A.copy()
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = np.abs(A[r:, c])
        p = int(np.argmax(col))
        if col[p] < tol:
            continue
        p += r
        if p != r:
            A[[r, p]] = A[[p, r]]
        below = A[r + 1 :, c] / A[r, c]
        A[r + 1 :, c:] -= np.outer(below, A[r, c:])
        r += 1
    return r


# ---------------------------------------------------------------------------
# Fractional part and the periodic Bernoulli function


def frac(x) -> Fraction:
    """Fractional part in [0, 1)."""
    x = Fraction(x)
    return x - math.floor(x)


def b1(x) -> Fraction:
    """First periodic Bernoulli function: {x} - 1/2 off the integers, 0 on them."""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return frac(x) - Fraction(1, 2)


# ---------------------------------------------------------------------------
# Multiplicative arithmetic functions


def factorize(k: int) -> dict[int, int]:
    if k < 1:
        raise ValueError(f"expected a positive integer, got {k}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= k:
        while k % p == 0:
            out[p] = out.get(p, 0) + 1
            k //= p
        p += 1
    if k > 1:
        out[k] = out.get(k, 0) + 1
    return out


def _componentwise(fn: Callable[[int], int]) -> Callable[[Divisor], int]:
    def wrapped(k: Divisor) -> int:
        if isinstance(k, tuple):
            return math.prod(fn(x) for x in k)
        return fn(k)

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


@_componentwise
def mobius(k: int) -> int:
    """Möbius function; tuples give the product over components."""
    f = factorize(k)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


@_componentwise
def euler_phi(k: int) -> int:
    result = k
    for p in factorize(k):
        result = result // p * (p - 1)
    return result


@_componentwise
def divisor_count(k: int) -> int:
    return math.prod(e + 1 for e in factorize(k).values())


def omega_total(k: Divisor) -> int:
    """Number of prime factors with multiplicity, summed over components."""
    ks = k if isinstance(k, tuple) else (k,)
    return sum(sum(factorize(x).values()) for x in ks)


def divisors(k: int) -> list[int]:
    if k < 1:
        raise ValueError(f"expected a positive integer, got {k}")
    small = [d for d in range(1, math.isqrt(k) + 1) if k % d == 0]
    return sorted(set(small + [k // d for d in small]))


def tuple_divisors(q: Divisor) -> list:
    """All divisors of ``q``; for a tuple, componentwise divisors in lex order."""
    if isinstance(q, tuple):
        return list(product(*(divisors(x) for x in q)))
    return divisors(q)


def divides(a: Divisor, b: Divisor) -> bool:
    if isinstance(a, tuple):
        return all(y % x == 0 for x, y in zip(a, b))
    return b % a == 0


def tuple_div(a: Divisor, d: Divisor) -> Divisor:
    if isinstance(a, tuple):
        return tuple(x // y for x, y in zip(a, d))
    return a // d


def tuple_mul(a: Divisor, b: Divisor) -> Divisor:
    if isinstance(a, tuple):
        return tuple(x * y for x, y in zip(a, b))
    return a * b


def dirichlet_convolve(g: Callable, h: Callable, q: Divisor) -> dict:
    """``(g * h)(a) = sum_{d | a} g(d) h(a/d)`` for every divisor ``a`` of ``q``."""
    return {
        a: sum((g(d) * h(tuple_div(a, d)) for d in tuple_divisors(a)), start=0)
        for a in tuple_divisors(q)
    }


def lcm(values: Iterable[int]) -> int:
    return reduce(math.lcm, values, 1)
