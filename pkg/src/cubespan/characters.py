"""Characters and harmonic analysis on finite abelian groups.

A group is ``Z/r_1 + ... + Z/r_m`` (invariant factors), elements are residue
tuples in lexicographic order.  The character group and H = Hom(G, R/Z) are
indexed by the same tuples: the index ``c`` stands for the homomorphism
``a -> Σ a_j c_j / r_j`` (mod 1) and for the character ``e`` of it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .exactmath import b1, complex_rank, divisors

Element = tuple[int, ...]

_EXACT_ROOTS = {
    Fraction(0): 1 + 0j,
    Fraction(1, 4): 1j,
    Fraction(1, 2): -1 + 0j,
    Fraction(3, 4): -1j,
}


def e(x) -> complex:
    """exp(2πi x); exact at multiples of 1/4."""
    x = Fraction(x) % 1
    exact = _EXACT_ROOTS.get(x)
    if exact is not None:
        return exact
    return cmath.exp(2j * math.pi * float(x))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(r) for r in self.factors))
        if any(r < 2 for r in self.factors):
            raise ValueError(f"invariant factors must be at least 2: {self.factors}")
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain: {self.factors}")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def elements(self) -> list[Element]:
        return list(product(*(range(r) for r in self.factors)))

    def index(self, a: Element) -> int:
        k = 0
        for x, r in zip(a, self.factors):
            k = k * r + x % r
        return k

    def zero(self) -> Element:
        return tuple(0 for _ in self.factors)

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % r for x, y, r in zip(a, b, self.factors))

    def neg(self, a: Element) -> Element:
        return tuple((-x) % r for x, r in zip(a, self.factors))

    def pairing(self, a: Element, c: Element) -> Fraction:
        """Σ a_j c_j / r_j reduced into [0, 1)."""
        L = self.exponent
        num = sum(x * y * (L // r) for x, y, r in zip(a, c, self.factors))
        return Fraction(num % L, L)

    def count_even_factors(self) -> int:
        return sum(1 for r in self.factors if r % 2 == 0)


@dataclass(frozen=True)
class Character:
    group: FiniteAbelianGroup
    index: Element

    def phase(self, a: Element) -> Fraction:
        """Value of the matching homomorphism G -> Q/Z, in [0, 1)."""
        return self.group.pairing(a, self.index)

    def __call__(self, a: Element) -> complex:
        return e(self.phase(a))

    def conjugate(self) -> "Character":
        return Character(self.group, self.group.neg(self.index))


@dataclass(frozen=True)
class FunctionOnGroup:
    """Complex values indexed by the lexicographic element order."""

    factors: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (math.prod(self.factors),):
            raise ValueError(f"expected {math.prod(self.factors)} values, got shape {values.shape}")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Subgroup:
    elements: tuple[Element, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, a) -> bool:
        return tuple(a) in set(self.elements)


def make_subgroup(elements: Iterable[Element], G: FiniteAbelianGroup) -> Subgroup:
    """Validate closure and wrap; raises ValueError for non-subgroups."""
    elems = {tuple(x % r for x, r in zip(a, G.factors)) for a in elements}
    if G.zero() not in elems:
        raise ValueError("not a subgroup: identity missing")
    for a in elems:
        if G.neg(a) not in elems:
            raise ValueError(f"not a subgroup: inverse of {a} missing")
        for b in elems:
            if G.add(a, b) not in elems:
                raise ValueError(f"not a subgroup: {a} + {b} missing")
    return Subgroup(tuple(sorted(elems)))


def all_characters(G: FiniteAbelianGroup) -> list[Character]:
    return [Character(G, c) for c in G.elements()]


def character_table(G: FiniteAbelianGroup) -> np.ndarray:
    """Rows are characters, columns group elements (both lexicographic)."""
    elems = G.elements()
    L = G.exponent
    w = [L // r for r in G.factors]
    A = np.array(elems, dtype=np.int64).reshape(len(elems), len(G.factors))
    phases = (A * np.array(w, dtype=np.int64)) @ A.T % L if G.factors else np.zeros((1, 1), dtype=np.int64)
    return np.exp(2j * np.pi * phases / L)


def inner(f: np.ndarray, h: np.ndarray) -> complex:
    """<f, h> = mean of f * conj(h)."""
    return complex(np.vdot(h, f)) / len(f)


def fourier(f: FunctionOnGroup, G: FiniteAbelianGroup) -> FunctionOnGroup:
    """f^(χ) = <f, χ>, indexed by characters in lexicographic order."""
    if tuple(f.factors) != G.factors:
        raise ValueError("function and group do not match")
    T = character_table(G)
    return FunctionOnGroup(G.factors, T.conj() @ f.values / G.order)


def cyclic_subgroup(g: Element, G: FiniteAbelianGroup) -> Subgroup:
    elems = [G.zero()]
    x = tuple(g)
    while x != G.zero():
        elems.append(x)
        x = G.add(x, g)
    return Subgroup(tuple(sorted(elems)))


def annihilator(K: Subgroup, G: FiniteAbelianGroup) -> Subgroup:
    """K^⊥ as a subgroup of the character group (index tuples)."""
    make_subgroup(K.elements, G)
    perp = [c for c in G.elements() if all(G.pairing(k, c) == 0 for k in K.elements)]
    return Subgroup(tuple(perp))


def all_subgroups(G: FiniteAbelianGroup) -> list[Subgroup]:
    """Every subgroup, found by adjoining generators one at a time."""
    elems = G.elements()

    def join(H: frozenset, g: Element) -> frozenset:
        out = set(H)
        frontier = list(H)
        while frontier:
            x = G.add(frontier.pop(), g)
            if x not in out:
                out.add(x)
                frontier.append(x)
                # H is a group, so x + H is a coset we can add wholesale
                for h in H:
                    y = G.add(x, h)
                    if y not in out:
                        out.add(y)
                        frontier.append(y)
        return frozenset(out)

    found = {frozenset([G.zero()])}
    queue = list(found)
    while queue:
        H = queue.pop()
        for g in elems:
            if g in H:
                continue
            J = join(H, g)
            if J not in found:
                found.add(J)
                queue.append(J)
    return sorted((Subgroup(tuple(sorted(H))) for H in found), key=lambda S: (len(S), S.elements))


def indicator(K: Subgroup, G: FiniteAbelianGroup) -> np.ndarray:
    v = np.zeros(G.order)
    for k in K.elements:
        v[G.index(k)] = 1.0
    return v


def poisson_sides(f: FunctionOnGroup, K: Subgroup, G: FiniteAbelianGroup) -> tuple[complex, complex]:
    perp = annihilator(K, G)
    fh = fourier(f, G).values
    lhs = sum(f.values[G.index(k)] for k in K.elements) / G.order
    rhs = sum(fh[G.index(c)] for c in perp.elements) / len(perp)
    return complex(lhs), complex(rhs)


def poisson_check(f: FunctionOnGroup, K: Subgroup, G: FiniteAbelianGroup, tol: float = 1e-10) -> bool:
    lhs, rhs = poisson_sides(f, K, G)
    return abs(lhs - rhs) < tol


def cyclic_annihilator_family(G: FiniteAbelianGroup) -> list[Subgroup]:
    """Distinct subgroups K whose annihilator is cyclic, i.e. K = ⟨χ⟩^⊥."""
    family: dict[tuple, Subgroup] = {}
    for c in G.elements():
        K = annihilator(cyclic_subgroup(c, G), G)
        family.setdefault(K.elements, K)
    return sorted(family.values(), key=lambda S: (len(S), S.elements))


def indicator_independence(G: FiniteAbelianGroup, tol: float = 1e-9) -> bool:
    family = cyclic_annihilator_family(G)
    M = np.array([indicator(K, G) for K in family])
    return complex_rank(M, tol) == len(family)


def s_values_exact(g: Element, G: FiniteAbelianGroup) -> list[Fraction]:
    """S_g(φ) = B1(φ(g)) for φ in H, exact."""
    return [b1(G.pairing(g, c)) for c in G.elements()]


def s_function(g: Element, G: FiniteAbelianGroup) -> FunctionOnGroup:
    return FunctionOnGroup(G.factors, np.array([float(x) for x in s_values_exact(g, G)], dtype=complex))


def odd_dimension(factors: Sequence[int]) -> int:
    """dim of odd functions on ⊕ Z/r_i: (|G| - 2^s)/2 with s = #even r_i."""
    s = sum(1 for r in factors if r % 2 == 0)
    return (math.prod(factors) - 2**s) // 2


def s_matrix(G: FiniteAbelianGroup) -> np.ndarray:
    return np.array([[float(x) for x in s_values_exact(g, G)] for g in G.elements()])


def odd_span_check(G: FiniteAbelianGroup, tol: float = 1e-9) -> bool:
    return complex_rank(s_matrix(G), tol) == odd_dimension(G.factors)


def invariant_factor_types(order: int) -> list[tuple[int, ...]]:
    """All abelian groups of the given order, as invariant-factor chains."""
    if order == 1:
        return [()]

    def chains(remaining: int, prev: int):
        if remaining == 1:
            yield ()
            return
        for r in divisors(remaining):
            if r < 2 or r % prev:
                continue
            for rest in chains(remaining // r, r):
                yield (r, *rest)

    return list(chains(order, 1))


def abelian_groups_up_to(max_order: int) -> list[FiniteAbelianGroup]:
    return [FiniteAbelianGroup(f) for N in range(1, max_order + 1) for f in invariant_factor_types(N)]
