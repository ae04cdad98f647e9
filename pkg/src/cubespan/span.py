"""Linear span of box points: relation system, dimension formula, involutions.

Coordinates are 0-based throughout the API; reports render them 1-based.
Coordinates whose projection is identically zero ("trivial" coordinates)
are excluded from the class partitions and impose no relation, since the
corresponding box-point coordinate is always 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from .exactmath import COMPLEX_TOL, b1, nullspace_basis, rational_rank, same_subspace
from .lattice import CubePoint, QuotientGroup, cube_points

Residues = tuple[int, ...]


@dataclass(frozen=True)
class CoordClasses:
    i_classes: tuple[tuple[int, ...], ...]
    k_classes: tuple[tuple[int, ...], ...]
    self_negative: tuple[bool, ...]
    proj: tuple[Residues, ...]
    neg_proj: tuple[Residues, ...]
    trivial: tuple[int, ...]


@dataclass(frozen=True)
class RelationSystem:
    n: int
    rows: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class SeboResult:
    holds: bool
    involution: tuple[int, ...] | None = None
    witness: CubePoint | None = None


def coordinate_classes(qg: QuotientGroup) -> CoordClasses:
    trivial = set(qg.trivial_coords)
    proj = tuple(qg.proj)
    neg = tuple(qg.neg_proj(i) for i in range(qg.n))

    i_groups: dict[frozenset, list[int]] = {}
    k_groups: dict[frozenset, list[int]] = {}
    for i in range(qg.n):
        if i in trivial:
            continue
        i_groups.setdefault(frozenset((proj[i], neg[i])), []).append(i)
        k_groups.setdefault(qg.kernel(i), []).append(i)

    return CoordClasses(
        i_classes=tuple(tuple(c) for c in i_groups.values()),
        k_classes=tuple(tuple(c) for c in k_groups.values()),
        self_negative=tuple(proj[i] == neg[i] for i in range(qg.n)),
        proj=proj,
        neg_proj=neg,
        trivial=tuple(sorted(trivial)),
    )


def iota_kappa(classes: CoordClasses) -> tuple[int, int]:
    iota = sum(1 for c in classes.i_classes if not classes.self_negative[c[0]])
    kappa = 0
    for c in classes.k_classes:
        projs = {classes.proj[i] for i in c}
        if any(classes.neg_proj[i] in projs for i in c):
            kappa += 1
    return iota, kappa


def span_dimension(qg: QuotientGroup) -> int:
    iota, kappa = iota_kappa(coordinate_classes(qg))
    return iota + kappa


def relation_system(qg: QuotientGroup, classes: CoordClasses | None = None) -> RelationSystem:
    """Pairing relations and kernel-sum relations, one row per class."""
    classes = classes or coordinate_classes(qg)
    n = qg.n
    rows: list[tuple[Fraction, ...]] = []
    seen: set = set()

    def push(row):
        if any(row) and row not in seen:
            seen.add(row)
            rows.append(row)

    for c in classes.i_classes:
        j = c[0]
        row = tuple(
            Fraction(int(classes.proj[i] == classes.proj[j]) - int(classes.proj[i] == classes.neg_proj[j]))
            if i not in classes.trivial
            else Fraction(0)
            for i in range(n)
        )
        push(row)
    for c in classes.k_classes:
        members = set(c)
        push(tuple(Fraction(int(i in members)) for i in range(n)))
    return RelationSystem(n=n, rows=tuple(rows))


def vanishing_functionals(
    qg: QuotientGroup,
    method: Literal["formula", "bruteforce"] = "formula",
    max_points: int | None = None,
) -> list[list[Fraction]]:
    """Basis of the functionals u with <u, λ> = 0 on every box point."""
    if method == "formula":
        return nullspace_basis(list(relation_system(qg).rows), cols=qg.n)
    if method == "bruteforce":
        points = [list(p.coords) for p in cube_points(qg, max_points)]
        return nullspace_basis(points, cols=qg.n)
    raise ValueError(f"unknown method {method!r}")


def verify_terminal_lemma(qg: QuotientGroup, max_points: int | None = None) -> bool:
    formula = vanishing_functionals(qg, "formula")
    brute = vanishing_functionals(qg, "bruteforce", max_points)
    return same_subspace(formula, brute, qg.n)


def point_matrix_rank(qg: QuotientGroup, max_points: int | None = None) -> int:
    return rational_rank([list(p.coords) for p in cube_points(qg, max_points)])


def _h_elements(qg: QuotientGroup):
    return list(qg.elements())


def alternate_identity_sides(u: Sequence, point: CubePoint, qg: QuotientGroup) -> tuple[float, complex]:
    """Both sides of <u,λ> = ½(|H|<h_u, S_λ> + Σ_{λ_i≠0} u_i).

    H is indexed by residue tuples c; φ_c(g) = Σ g_j c_j / r_j and the
    projection π_i is the tuple ``qg.proj[i]``.
    """
    u = [Fraction(x) for x in u]
    if len(u) != qg.n:
        raise ValueError("u has the wrong length")
    lhs = float(sum((ui * li for ui, li in zip(u, point.coords)), Fraction(0)))

    H = _h_elements(qg)
    L = qg.exponent
    weights = [L // r for r in qg.factors]
    h_u = np.zeros(len(H))
    s_lam = np.zeros(len(H))
    index = {c: k for k, c in enumerate(H)}
    for i, ui in enumerate(u):
        if ui:
            h_u[index[qg.proj[i]]] += float(ui)
            h_u[index[qg.neg_proj(i)]] -= float(ui)
    for k, c in enumerate(H):
        num = sum(a * cj * w for a, cj, w in zip(point.element, c, weights))
        s_lam[k] = float(b1(Fraction(num, L)))
    inner = complex(np.vdot(s_lam.astype(complex), h_u.astype(complex))) / len(H)
    rhs = 0.5 * (len(H) * inner + float(sum((ui for ui, x in zip(u, point.coords) if x != 0), Fraction(0))))
    return lhs, rhs


def check_alternate_identity(u: Sequence, point: CubePoint, qg: QuotientGroup, tol: float = COMPLEX_TOL) -> bool:
    lhs, rhs = alternate_identity_sides(u, point, qg)
    return abs(lhs - rhs) < tol


def sebo_check(qg: QuotientGroup, max_points: int | None = None) -> SeboResult:
    """Test Σλ_i = |supp λ|/2 on all box points; build the involution if it holds."""
    for p in cube_points(qg, max_points):
        if 2 * p.total != p.support:
            return SeboResult(holds=False, witness=p)

    sigma = list(range(qg.n))
    by_proj: dict[Residues, list[int]] = {}
    for i in range(qg.n):
        by_proj.setdefault(qg.proj[i], []).append(i)
    done: set[Residues] = set()
    for pi, coords in by_proj.items():
        neg = tuple((-x) % r for x, r in zip(pi, qg.factors))
        if neg == pi or pi in done:
            continue
        partners = by_proj.get(neg, [])
        if len(partners) != len(coords):
            raise ArithmeticError(
                f"projection classes {coords} and {partners} have different sizes "
                "although every box point is balanced"
            )
        for i, j in zip(coords, partners):
            sigma[i], sigma[j] = j, i
        done.update((pi, neg))

    result = SeboResult(holds=True, involution=tuple(sigma))
    if not involution_is_valid(qg, result.involution):
        raise ArithmeticError("constructed involution fails on a generator")
    return result


def involution_is_valid(qg: QuotientGroup, sigma: Sequence[int]) -> bool:
    if any(sigma[sigma[i]] != i for i in range(qg.n)):
        return False
    for g in qg.generator_vectors():
        if any((g[i] + g[sigma[i]]).denominator != 1 for i in range(qg.n)):
            return False
    return True


def format_cycles(sigma: Sequence[int]) -> str:
    """1-based cycle notation, e.g. ``(1 2)(3 4)``; ``id`` for the identity."""
    seen: set[int] = set()
    parts = []
    for i in range(len(sigma)):
        if i in seen or sigma[i] == i:
            continue
        cycle = [i]
        seen.add(i)
        j = sigma[i]
        while j != i:
            cycle.append(j)
            seen.add(j)
            j = sigma[j]
        parts.append("(" + " ".join(str(k + 1) for k in cycle) + ")")
    return "".join(parts) or "id"
