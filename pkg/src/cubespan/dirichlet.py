"""Dirichlet characters and the eigenspace machinery on R = ⊕ Z/r_i.

Character values are stored as exact phases (rationals mod 1) and only turned
into complex numbers at evaluation time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

from .characters import FunctionOnGroup, e, odd_dimension
from .exactmath import (
    b1,
    complex_rank,
    divides,
    divisor_count,
    divisors,
    euler_phi,
    factorize,
    lcm,
    mobius,
    omega_total,
    tuple_div,
    tuple_divisors,
    tuple_mul,
)

ZERO_TOL = 1e-9
NONZERO_TOL = 1e-6
DEFAULT_SERIES_TERMS = 10**5


# ---------------------------------------------------------------------------
# Unit groups and characters of a single modulus


@dataclass(frozen=True)
class UnitGroup:
    """(Z/r)^× as a product of cyclic groups with discrete-log table."""

    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    logs: dict = field(compare=False, hash=False, repr=False)


def _local_generators(p: int, k: int) -> list[tuple[int, int]]:
    pk = p**k
    if p == 2 and k >= 3:
        return [(pk - 1, 2), (5, 2 ** (k - 2))]
    phi = euler_phi(pk)
    if phi == 1:
        return []
    for g in range(2, pk):
        if math.gcd(g, pk) != 1:
            continue
        if all(pow(g, phi // q, pk) != 1 for q in factorize(phi)):
            return [(g, phi)]
    raise ArithmeticError(f"no generator for (Z/{pk})^x")


def _crt_lift(x: int, pk: int, r: int) -> int:
    # x mod pk, 1 mod r/pk
    rest = r // pk
    for t in range(x % pk, r, pk):
        if t % rest == 1 % rest:
            return t
    raise ArithmeticError("CRT lift failed")


_UNIT_GROUPS: dict[int, UnitGroup] = {}


def unit_group(r: int) -> UnitGroup:
    if r < 1:
        raise ValueError(f"modulus must be positive, got {r}")
    cached = _UNIT_GROUPS.get(r)
    if cached is not None:
        return cached
    gens, orders = [], []
    for p, k in sorted(factorize(r).items()) if r > 1 else []:
        for g, o in _local_generators(p, k):
            gens.append(_crt_lift(g, p**k, r))
            orders.append(o)
    logs = {}
    for exps in product(*(range(o) for o in orders)):
        u = 1 % r
        for g, x in zip(gens, exps):
            u = u * pow(g, x, r) % r
        logs[u] = exps
    if len(logs) != euler_phi(r):
        raise ArithmeticError(f"discrete-log table for modulus {r} is incomplete")
    group = UnitGroup(r, tuple(gens), tuple(orders), logs)
    _UNIT_GROUPS[r] = group
    return group


@dataclass(frozen=True)
class DirichletCharacter:
    """Dirichlet character mod ``modulus``; ``phases[n]`` is None off the units."""

    modulus: int
    phases: tuple[Fraction | None, ...]
    unit_index: tuple[int, ...] | None = field(default=None, compare=False)

    def phase(self, n: int) -> Fraction | None:
        return self.phases[n % self.modulus]

    def __call__(self, n: int) -> complex:
        ph = self.phase(n)
        return 0j if ph is None else e(ph)

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(
            self.modulus,
            tuple(None if p is None else (-p) % 1 for p in self.phases),
        )

    @property
    def is_principal(self) -> bool:
        return all(p is None or p == 0 for p in self.phases)

    @property
    def is_odd(self) -> bool:
        return self.phase(-1) == Fraction(1, 2)

    @cached_property
    def primitive_data(self) -> "PrimitiveData":
        return conductor_and_primitive(self)


@dataclass(frozen=True)
class PrimitiveData:
    conductor: int
    primitive: DirichletCharacter


def characters_mod(r: int) -> list[DirichletCharacter]:
    """All φ(r) characters mod r, principal first."""
    G = unit_group(r)
    chars = []
    for c in product(*(range(o) for o in G.orders)):
        phases: list[Fraction | None] = [None] * r
        for u, exps in G.logs.items():
            phases[u] = sum((Fraction(ci * x, o) for ci, x, o in zip(c, exps, G.orders)), Fraction(0)) % 1
        chars.append(DirichletCharacter(r, tuple(phases), unit_index=tuple(c)))
    return chars


def conductor_and_primitive(chi: DirichletCharacter) -> PrimitiveData:
    r = chi.modulus
    for f in divisors(r):
        kernel_ok = all(
            chi.phase(a) == 0 for a in range(1, r + 1) if a % f == 1 % f and math.gcd(a, r) == 1
        )
        if kernel_ok:
            break
    phases: list[Fraction | None] = [None] * f
    for t in range(f):
        if math.gcd(t, f) != 1:
            continue
        lift = next(a for a in range(t, t + r * f, f) if math.gcd(a, r) == 1)
        phases[t] = chi.phase(lift)
    return PrimitiveData(conductor=f, primitive=DirichletCharacter(f, tuple(phases)))


def gauss_sum(chi: DirichletCharacter) -> complex:
    """τ(χ) = Σ_t χ(t) e(t/f) for a primitive character of modulus f."""
    f = chi.modulus
    if chi.primitive_data.conductor != f:
        raise ValueError(f"character mod {f} is not primitive")
    return sum(
        (e(chi.phases[t] + Fraction(t, f)) for t in range(f) if chi.phases[t] is not None),
        0j,
    )


# ---------------------------------------------------------------------------
# The ring R and its character tuples


@dataclass(frozen=True)
class RingR:
    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(r) for r in self.factors))
        if not self.factors or any(r < 1 for r in self.factors):
            raise ValueError(f"ring factors must be positive integers: {self.factors}")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def unit_count(self) -> int:
        return math.prod(euler_phi(r) for r in self.factors)

    def elements(self) -> list[tuple[int, ...]]:
        return list(product(*(range(r) for r in self.factors)))

    def units(self) -> list[tuple[int, ...]]:
        return list(product(*([u for u in range(r) if math.gcd(u, r) == 1] for r in self.factors)))

    def index(self, a: Sequence[int]) -> int:
        k = 0
        for x, r in zip(a, self.factors):
            k = k * r + x % r
        return k

    def reduce(self, a: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % r for x, r in zip(a, self.factors))

    def mul(self, a, b) -> tuple[int, ...]:
        return tuple(x * y % r for x, y, r in zip(a, b, self.factors))

    def count_even_factors(self) -> int:
        return sum(1 for r in self.factors if r % 2 == 0)


@dataclass(frozen=True)
class TupleCharacter:
    components: tuple[DirichletCharacter, ...]

    @property
    def ring(self) -> RingR:
        return RingR(tuple(c.modulus for c in self.components))

    def phase(self, a: Sequence[int]) -> Fraction | None:
        total = Fraction(0)
        for chi, x in zip(self.components, a):
            ph = chi.phase(x)
            if ph is None:
                return None
            total += ph
        return total % 1

    def __call__(self, a: Sequence[int]) -> complex:
        ph = self.phase(a)
        return 0j if ph is None else e(ph)

    def conjugate(self) -> "TupleCharacter":
        return TupleCharacter(tuple(c.conjugate() for c in self.components))

    @property
    def parity(self) -> int:
        ph = self.phase([-1] * len(self.components))
        return -1 if ph == Fraction(1, 2) else 1

    @property
    def is_odd(self) -> bool:
        return self.parity == -1

    @cached_property
    def primitives(self) -> tuple[DirichletCharacter, ...]:
        return tuple(c.primitive_data.primitive for c in self.components)

    @property
    def conductor(self) -> tuple[int, ...]:
        return tuple(p.modulus for p in self.primitives)

    @property
    def q(self) -> tuple[int, ...]:
        return tuple(c.modulus // f for c, f in zip(self.components, self.conductor))

    def primitive_value(self, d: Sequence[int]) -> complex:
        """χ*(d) = Π χ_i*(d_i)."""
        return math.prod((p(x) for p, x in zip(self.primitives, d)), start=1 + 0j)

    @cached_property
    def _unit_table(self) -> tuple[np.ndarray, np.ndarray]:
        units = self.ring.units()
        U = np.array(units, dtype=np.int64).reshape(len(units), len(self.components))
        X = np.array([self(b) for b in units], dtype=complex)
        return U, X

    @cached_property
    def _w_cache(self) -> dict:
        return {}


def tuple_characters(R: RingR) -> list[TupleCharacter]:
    return [TupleCharacter(comp) for comp in product(*(characters_mod(r) for r in R.factors))]


def odd_characters(R: RingR) -> list[TupleCharacter]:
    return [chi for chi in tuple_characters(R) if chi.is_odd]


# ---------------------------------------------------------------------------
# S_a, eigenspaces and the w / v functions


def s_a(a: Sequence[int], c: Sequence[int], R: RingR) -> Fraction:
    return b1(sum((Fraction(x * y, r) for x, y, r in zip(a, c, R.factors)), Fraction(0)))


def s_a_function(a: Sequence[int], R: RingR) -> FunctionOnGroup:
    return FunctionOnGroup(R.factors, np.array([float(s_a(a, c, R)) for c in R.elements()], dtype=complex))


def eigen_project(chi: TupleCharacter, w: FunctionOnGroup) -> FunctionOnGroup:
    """Average of conj(χ(b)) (b·w) over units b, where (b·w)(a) = w(ba)."""
    R = chi.ring
    if tuple(w.factors) != R.factors:
        raise ValueError("function and character live on different rings")
    elems = R.elements()
    out = np.zeros(R.order, dtype=complex)
    for b in R.units():
        coeff = np.conj(chi(b))
        perm = [R.index(R.mul(b, a)) for a in elems]
        out += coeff * w.values[perm]
    return FunctionOnGroup(R.factors, out / R.unit_count)


def act(c: Sequence[int], w: FunctionOnGroup, R: RingR) -> FunctionOnGroup:
    """(c·w)(a) = w(ca)."""
    return FunctionOnGroup(R.factors, w.values[[R.index(R.mul(c, a)) for a in R.elements()]])


def _w_at_product(chi: TupleCharacter, t: tuple[int, ...]) -> complex:
    # w_{χ,a}(c) only depends on the product t = ac in R
    cache = chi._w_cache
    if t not in cache:
        R = chi.ring
        U, X = chi._unit_table
        L = lcm(R.factors)
        weights = np.array([x * (L // r) for x, r in zip(t, R.factors)], dtype=np.int64)
        num = (U @ weights) % L
        vals = np.where(num == 0, 0.0, num / L - 0.5)
        cache[t] = complex(X @ vals)
    return cache[t]


def w_chi(chi: TupleCharacter, a: Sequence[int], c: Sequence[int]) -> complex:
    """w_{χ,a}(c) = Σ_{b ∈ R^×} χ(b) S_{ab}(c)."""
    R = chi.ring
    return _w_at_product(chi, R.mul(R.reduce(a), R.reduce(c)))


def _series_factor(prim: DirichletCharacter, tau: complex, r: int, q: int, n: int) -> complex:
    beta = math.gcd(r, n)
    if q % beta:
        return 0j
    F = prim(q // beta) * mobius(q // beta) * euler_phi(r) * tau / euler_phi(r // beta)
    return np.conj(prim(n // beta)) * F


def series_terms(chi: TupleCharacter, a: Sequence[int], c: Sequence[int]) -> np.ndarray:
    """One period of the k-dependent numerators: entry k holds T(k mod P), P = lcm(r)."""
    R = chi.ring
    a, c = R.reduce(a), R.reduce(c)
    P = lcm(R.factors)
    taus = [gauss_sum(p) for p in chi.primitives]
    T = np.zeros(P, dtype=complex)
    for k in range(P):
        kk = k or P
        val = 1 + 0j
        for prim, tau, r, q, x, y in zip(chi.primitives, taus, R.factors, chi.q, a, c):
            val *= _series_factor(prim, tau, r, q, kk * x * y)
            if val == 0:
                break
        T[k] = val
    return T


def series_w(chi: TupleCharacter, a: Sequence[int], c: Sequence[int], K: int = DEFAULT_SERIES_TERMS) -> complex:
    """(i/π) Σ_{k ≤ K} T(k)/k, truncated at a whole number of periods.

    Periods of T sum to zero, so stopping at a period boundary keeps the
    truncation error small.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    T = series_terms(chi, a, c)
    P = len(T)
    stop = (K // P) * P or K
    k = np.arange(1, stop + 1)
    return complex(1j / math.pi * np.sum(T[k % P] / k))


def v_chi(chi: TupleCharacter, a: Sequence[int], c: Sequence[int]) -> complex:
    """v_{χ,a}(c) = Σ_{d | a} μ(d) conj(χ*(d)) w_{χ,a/d}(c), for a | q_χ."""
    a = tuple(a)
    q = chi.q
    if len(a) != len(q) or any(x < 1 for x in a) or not divides(a, q):
        raise ValueError(f"{a} does not divide q = {q}")
    total = 0j
    for d in tuple_divisors(a):
        mu = mobius(d)
        if mu == 0:
            continue
        weight = np.conj(chi.primitive_value(d))
        if weight == 0:
            continue
        total += mu * weight * w_chi(chi, tuple_div(a, d), c)
    return complex(total)


def divisor_ordering(q: int | tuple[int, ...]) -> list:
    """Divisors of q ordered by total prime-factor count so that a later
    divisor never divides an earlier one and the i-th and (N-i+1)-th
    multiply to q."""
    divs = sorted(tuple_divisors(q))
    total = omega_total(q)
    lower = sorted((a for a in divs if 2 * omega_total(a) < total), key=lambda a: (omega_total(a), a))
    middle = [a for a in divs if 2 * omega_total(a) == total]
    reps = [a for a in middle if a < tuple_div(q, a)]
    center = [a for a in middle if a == tuple_div(q, a)]
    order = lower + reps + center
    order += [tuple_div(q, a) for a in reversed(reps)]
    order += [tuple_div(q, a) for a in reversed(lower)]
    return order


def v_matrix(chi: TupleCharacter) -> tuple[list, np.ndarray]:
    order = divisor_ordering(chi.q)
    M = np.array([[v_chi(chi, a, c) for c in order] for a in order], dtype=complex)
    return order, M


def v_matrix_failures(chi: TupleCharacter) -> list[str]:
    q = chi.q
    order, M = v_matrix(chi)
    problems = []
    for i, a in enumerate(order):
        for j, c in enumerate(order):
            ac = tuple_mul(a, c)
            mag = abs(M[i, j])
            if not divides(ac, q) and mag >= ZERO_TOL:
                problems.append(f"v[a={a}, c={c}] = {M[i, j]:.3g} should vanish (ac does not divide q={q})")
            if ac == q and mag <= NONZERO_TOL:
                problems.append(f"v[a={a}, c={c}] = {M[i, j]:.3g} should be nonzero (ac = q)")
    if complex_rank(M) != len(order):
        problems.append(f"v-matrix rank {complex_rank(M)} < {len(order)}")
    return problems


def v_matrix_check(chi: TupleCharacter) -> bool:
    if not chi.is_odd:
        raise ValueError("v-matrix check needs an odd character")
    return not v_matrix_failures(chi)


def w_matrix(chi: TupleCharacter) -> np.ndarray:
    R = chi.ring
    return np.array([[w_chi(chi, a, c) for c in R.elements()] for a in tuple_divisors(chi.q)], dtype=complex)


def w_independence_check(chi: TupleCharacter) -> bool:
    if not chi.is_odd:
        raise ValueError("independence check needs an odd character")
    return complex_rank(w_matrix(chi)) == divisor_count(chi.q)


def odd_basis_count(R: RingR) -> int:
    """Σ over odd characters of d(q_χ)."""
    return sum(divisor_count(chi.q) for chi in odd_characters(R))


def s_a_matrix(R: RingR) -> np.ndarray:
    elems = R.elements()
    return np.array([[float(s_a(a, c, R)) for c in elems] for a in elems])


def basis_count_check(R: RingR, check_rank: bool = True) -> bool:
    target = odd_dimension(R.factors)
    if odd_basis_count(R) != target:
        return False
    if check_rank:
        return complex_rank(s_a_matrix(R)) == target
    return True
