"""Seeded verification sweeps shared by the CLI and the acceptance tests."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import characters as ct
from . import dirichlet as dc
from .exactmath import lcm
from .lattice import LatticeSpec, build_quotient, cube_points
from .span import (
    check_alternate_identity,
    coordinate_classes,
    involution_is_valid,
    iota_kappa,
    point_matrix_rank,
    sebo_check,
    verify_terminal_lemma,
)

SUITES = ("chars", "dirichlet", "lattice")


@dataclass
class VerifyReport:
    suite: str
    cases: int = 0
    failures: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, check: str, **params) -> None:
        self.failures.append({"check": check, **params})

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "cases": self.cases,
            "passed": self.passed,
            "failures": self.failures,
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out


def _timed(fn: Callable[..., VerifyReport]) -> Callable[..., VerifyReport]:
    def wrapper(*args, **kwargs) -> VerifyReport:
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.wall_time = time.perf_counter() - start
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------------------------
# Random lattices


def random_lattice(rng: random.Random, max_n: int = 6, max_order: int = 200) -> LatticeSpec:
    """Random lattice with one or two cyclic generators of modulus ≤ 20.

    Coordinates are often copies, negatives or multiples of earlier ones so
    that the class partitions are nontrivial.
    """
    n = rng.randint(1, max_n)
    m = rng.choice((1, 2))
    while True:
        moduli = [rng.randint(2, 20) for _ in range(m)]
        if math.prod(moduli) <= max_order:
            break
    cols: list[list[int]] = []
    for _ in range(n):
        roll = rng.random()
        if cols and roll < 0.45:
            src = rng.choice(cols)
            k = rng.choice((1, -1, -1, rng.randint(2, 19)))
            cols.append([(k * x) % r for x, r in zip(src, moduli)])
        elif roll < 0.5:
            cols.append([0] * m)
        else:
            col = [0] * m
            while not any(col):
                col = [rng.randrange(r) for r in moduli]
            cols.append(col)
    gens = tuple(tuple(Fraction(cols[i][j], r) for i in range(n)) for j, r in enumerate(moduli))
    return LatticeSpec(n=n, generators=gens)


def random_paired_lattice(rng: random.Random, max_r: int = 20) -> LatticeSpec:
    """Lattice whose coordinates come in complementary pairs (x, -x)."""
    r = rng.randint(2, max_r)
    pairs = rng.randint(1, 3)
    m = rng.choice((1, 2))
    rows = []
    for _ in range(m):
        vals = []
        for _ in range(pairs):
            a = rng.randrange(r)
            vals.append((a, (-a) % r))
        rows.append(vals)
    order = list(range(2 * pairs))
    rng.shuffle(order)
    gens = []
    for vals in rows:
        flat = [x for pair in vals for x in pair]
        gens.append(tuple(Fraction(flat[k], r) for k in order))
    return LatticeSpec(n=2 * pairs, generators=tuple(gens))


# ---------------------------------------------------------------------------
# Suites


@_timed
def verify_lattice(instances: int = 200, max_n: int = 6, max_order: int = 200, seed: int = 42,
                   identity_instances: int = 50) -> VerifyReport:
    report = VerifyReport("lattice")
    rng = random.Random(seed)
    for k in range(instances):
        spec = random_lattice(rng, max_n, max_order)
        qg = build_quotient(spec)
        params = {"instance": k, "lattice": spec.to_json()}
        report.cases += 1
        if not verify_terminal_lemma(qg):
            report.fail("terminal_lemma", **params)
        iota, kappa = iota_kappa(coordinate_classes(qg))
        rank = point_matrix_rank(qg)
        if iota + kappa != rank:
            report.fail("dimension_formula", iota=iota, kappa=kappa, rank=rank, **params)
        result = sebo_check(qg)
        if result.holds and not involution_is_valid(qg, result.involution):
            report.fail("sebo_involution", **params)

    rng = random.Random(seed + 1)
    for k in range(identity_instances):
        spec = random_lattice(rng, max_n=min(max_n, 5), max_order=60)
        qg = build_quotient(spec)
        u = [Fraction(rng.randint(-5, 5)) for _ in range(qg.n)]
        report.cases += 1
        for p in cube_points(qg):
            if not check_alternate_identity(u, p, qg):
                report.fail("alternate_identity", instance=k, lattice=spec.to_json(),
                            u=[str(x) for x in u], element=list(p.element))
                break

    rng = random.Random(seed + 2)
    for k in range(50):
        spec = random_paired_lattice(rng)
        qg = build_quotient(spec)
        report.cases += 1
        result = sebo_check(qg)
        if not result.holds or not involution_is_valid(qg, result.involution):
            report.fail("sebo_paired", instance=k, lattice=spec.to_json())
    return report


@_timed
def verify_chars(max_order: int = 36, poisson_max_order: int = 24, samples: int = 20,
                 seed: int = 42) -> VerifyReport:
    report = VerifyReport("chars")
    rng = np.random.default_rng(seed)
    for G in ct.abelian_groups_up_to(max_order):
        params = {"group": list(G.factors)}
        report.cases += 1
        T = ct.character_table(G)
        gram = T @ T.conj().T / G.order
        if not np.allclose(gram, np.eye(G.order), atol=1e-10, rtol=0):
            report.fail("orthonormality", **params)
        if not ct.indicator_independence(G):
            report.fail("indicator_independence", **params)
        if not ct.odd_span_check(G):
            report.fail("odd_span", **params)
        if G.order > poisson_max_order:
            continue
        for K in ct.all_subgroups(G):
            perp = ct.annihilator(K, G)
            if len(K) * len(perp) != G.order or ct.annihilator(perp, G) != K:
                report.fail("annihilator", subgroup=[list(x) for x in K.elements], **params)
            for _ in range(samples):
                f = ct.FunctionOnGroup(G.factors, rng.normal(size=G.order) + 1j * rng.normal(size=G.order))
                if not ct.poisson_check(f, K, G):
                    report.fail("poisson", subgroup=[list(x) for x in K.elements], **params)
                    break
    return report


def rings_up_to(max_modulus: int) -> list[dc.RingR]:
    """Rings with one or two factors ≥ 2 whose lcm is at most ``max_modulus``."""
    rings = [dc.RingR((r,)) for r in range(2, max_modulus + 1)]
    rings += [
        dc.RingR((r1, r2))
        for r1 in range(2, max_modulus + 1)
        for r2 in range(r1, max_modulus + 1)
        if lcm((r1, r2)) <= max_modulus
    ]
    return rings


@_timed
def verify_dirichlet(max_modulus: int = 30, series_max_order: int = 10, series_terms: int = dc.DEFAULT_SERIES_TERMS,
                     seed: int = 42) -> VerifyReport:
    report = VerifyReport("dirichlet")
    rng = np.random.default_rng(seed)

    for r in range(1, max_modulus + 1):
        report.cases += 1
        for chi in dc.characters_mod(r):
            idx = list(chi.unit_index or ())
            for a in range(r):
                for b in range(r):
                    if abs(chi(a * b) - chi(a) * chi(b)) > 1e-12:
                        report.fail("multiplicativity", modulus=r, character=idx, a=a, b=b)
            f = chi.primitive_data.conductor
            for f2 in dc.divisors(f)[:-1]:
                if all(chi.phase(a) == 0 for a in range(1, r + 1) if a % f2 == 1 % f2 and math.gcd(a, r) == 1):
                    report.fail("conductor_minimality", modulus=r, character=idx, divisor=f2)
            if f == r:
                tau = dc.gauss_sum(chi)
                if abs(abs(tau) ** 2 - f) > 1e-9 or abs(tau) == 0:
                    report.fail("gauss_sum", modulus=r, character=idx)

    for R in rings_up_to(max_modulus):
        params = {"ring": list(R.factors)}
        report.cases += 1
        if dc.odd_basis_count(R) != ct.odd_dimension(R.factors):
            report.fail("basis_count", **params)
        chars = dc.tuple_characters(R)
        for chi in chars:
            if not chi.is_odd:
                continue
            problems = dc.v_matrix_failures(chi)
            if problems:
                report.fail("v_matrix", character=_char_params(chi), problems=problems, **params)

        if R.order <= 30:
            w = ct.FunctionOnGroup(R.factors, rng.normal(size=R.order) + 1j * rng.normal(size=R.order))
            total = sum(dc.eigen_project(chi, w).values for chi in chars)
            units = [R.index(u) for u in R.units()]
            if not np.allclose(total[units], w.values[units], atol=1e-9, rtol=0):
                report.fail("eigen_decomposition", **params)

        if R.order <= series_max_order:
            for chi in chars:
                if not chi.is_odd:
                    continue
                for a in R.elements():
                    for c in R.elements():
                        err = abs(dc.series_w(chi, a, c, series_terms) - dc.w_chi(chi, a, c))
                        if err >= 1e-3:
                            report.fail("series", character=_char_params(chi), a=list(a), c=list(c),
                                        error=float(err), **params)
    return report


def _char_params(chi: dc.TupleCharacter) -> dict:
    return {
        "unit_index": [list(c.unit_index or ()) for c in chi.components],
        "conductor": list(chi.conductor),
        "q": list(chi.q),
    }
