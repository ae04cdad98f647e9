from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import lattice
from oracles import as_sympy_rows, closure_points, sympy_nullspace
from test_lattice import lattices
from cubespan.lattice import LatticeSpec, build_quotient, cube_points
from cubespan.span import (
    check_alternate_identity,
    coordinate_classes,
    format_cycles,
    involution_is_valid,
    iota_kappa,
    point_matrix_rank,
    relation_system,
    sebo_check,
    span_dimension,
    vanishing_functionals,
    verify_terminal_lemma,
)


def one_based(classes):
    return {frozenset(i + 1 for i in c) for c in classes}


def oracle_nullspace(spec):
    pts = sorted(closure_points(spec.n, spec.generators))
    return sympy_nullspace([list(p) for p in pts], spec.n)


class TestRankSixLattice:
    def test_classes(self, rank6):
        cls = coordinate_classes(build_quotient(rank6))
        assert one_based(cls.i_classes) == {frozenset(s) for s in ({1, 2}, {3, 4}, {5, 6}, {7}, {8})}
        assert one_based(cls.k_classes) == {frozenset(s) for s in ({1, 2, 3, 4}, {5, 6, 7}, {8})}

    def test_counts(self, rank6):
        qg = build_quotient(rank6)
        assert iota_kappa(coordinate_classes(qg)) == (4, 2)
        assert span_dimension(qg) == 6
        assert point_matrix_rank(qg) == 6

    def test_vanishing_space(self, rank6):
        qg = build_quotient(rank6)
        basis = vanishing_functionals(qg)
        assert len(basis) == 2
        pts = cube_points(qg)
        for u in ([1, 1, -1, -1, 0, 0, 0, 0], [0, 0, 0, 0, 1, -1, 0, 0]):
            assert all(sum(a * x for a, x in zip(u, p.coords)) == 0 for p in pts)
            assert sympy.Matrix([*basis, u]).rank() == 2
        assert verify_terminal_lemma(qg)

    def test_alternate_identity_e1(self, rank6):
        qg = build_quotient(rank6)
        u = [1, 0, 0, 0, 0, 0, 0, 0]
        assert all(check_alternate_identity(u, p, qg) for p in cube_points(qg))


class TestWhite:
    def test_classes_and_counts(self, white_5_2):
        qg = build_quotient(white_5_2)
        cls = coordinate_classes(qg)
        assert one_based(cls.i_classes) == {frozenset({1, 2}), frozenset({3})}
        assert one_based(cls.k_classes) == {frozenset({1, 2, 3})}
        assert iota_kappa(cls) == (2, 1)
        assert span_dimension(qg) == 3

    def test_no_vanishing_functionals(self, white_5_2):
        qg = build_quotient(white_5_2)
        assert vanishing_functionals(qg) == []
        assert vanishing_functionals(qg, "bruteforce") == []

    def test_alternate_identity(self, white_5_2):
        qg = build_quotient(white_5_2)
        assert all(check_alternate_identity([1, 1, 1], p, qg) for p in cube_points(qg))


class TestTrivialGroup:
    def test_everything_vanishes(self):
        qg = build_quotient(LatticeSpec(n=3))
        cls = coordinate_classes(qg)
        assert cls.i_classes == () and cls.k_classes == ()
        assert iota_kappa(cls) == (0, 0)
        assert span_dimension(qg) == 0
        assert len(vanishing_functionals(qg)) == 3
        assert verify_terminal_lemma(qg)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            vanishing_functionals(build_quotient(LatticeSpec(n=1)), "magic")


class TestProperties:
    @settings(max_examples=200, deadline=None)
    @given(lattices(max_n=6))
    def test_formula_nullspace_matches_oracle(self, spec):
        qg = build_quotient(spec)
        formula = as_sympy_rows(vanishing_functionals(qg), spec.n)
        assert formula == oracle_nullspace(spec)

    @settings(max_examples=200, deadline=None)
    @given(lattices(max_n=6))
    def test_dimension_formula(self, spec):
        qg = build_quotient(spec)
        pts = sorted(closure_points(spec.n, spec.generators))
        assert span_dimension(qg) == sympy.Matrix([list(p) for p in pts]).rank()

    @settings(max_examples=100, deadline=None)
    @given(lattices(max_n=6))
    def test_partitions(self, spec):
        qg = build_quotient(spec)
        cls = coordinate_classes(qg)
        nontrivial = set(range(spec.n)) - set(cls.trivial)
        for part in (cls.i_classes, cls.k_classes):
            flat = [i for c in part for i in c]
            assert sorted(flat) == sorted(nontrivial)
        # every I-class sits inside one K-class
        for c in cls.i_classes:
            assert any(set(c) <= set(k) for k in cls.k_classes)

    @settings(max_examples=100, deadline=None)
    @given(lattices(max_n=6))
    def test_relations_vanish_on_points(self, spec):
        qg = build_quotient(spec)
        basis = vanishing_functionals(qg)
        for p in cube_points(qg):
            assert all(sum(u * x for u, x in zip(v, p.coords)) == 0 for v in basis)
        assert len(relation_system(qg).rows) >= span_dimension(qg)

    @settings(max_examples=60, deadline=None)
    @given(lattices(max_n=4, max_den=8), st.lists(st.integers(-4, 4), min_size=4, max_size=4))
    def test_alternate_identity(self, spec, u):
        qg = build_quotient(spec)
        u = u[: spec.n]
        assert all(check_alternate_identity(u, p, qg) for p in cube_points(qg))

    def test_alternate_identity_zero_functional(self, rank6):
        qg = build_quotient(rank6)
        assert all(check_alternate_identity([0] * 8, p, qg) for p in cube_points(qg)[:10])


def is_balanced(spec):
    return all(2 * sum(p) == sum(1 for x in p if x) for p in closure_points(spec.n, spec.generators))


class TestSebo:
    def test_paired(self):
        res = sebo_check(build_quotient(lattice(4, (1, 4, 2, 3), r=5)))
        assert res.holds
        assert format_cycles(res.involution) == "(1 2)(3 4)"

    def test_unpaired_witness(self):
        res = sebo_check(build_quotient(lattice(4, (1, 1, 2, 3), r=5)))
        assert not res.holds
        w = res.witness
        assert w.element == (1,)
        assert w.coords == (F(1, 5), F(1, 5), F(2, 5), F(3, 5))
        assert w.total == F(7, 5) and w.support == 4

    def test_half_integral_uses_identity(self):
        res = sebo_check(build_quotient(lattice(4, (1, 1, 0, 1), (0, 1, 1, 0), r=2)))
        assert res.holds and format_cycles(res.involution) == "id"

    @settings(max_examples=150, deadline=None)
    @given(lattices(max_n=6))
    def test_agrees_with_direct_balance(self, spec):
        qg = build_quotient(spec)
        res = sebo_check(qg)
        assert res.holds == is_balanced(spec)
        if res.holds:
            sigma = res.involution
            for g in spec.generators:
                assert all((g[i] + g[sigma[i]]).denominator == 1 for i in range(spec.n))
        else:
            assert 2 * res.witness.total != res.witness.support

    def test_invalid_involution_rejected(self):
        qg = build_quotient(lattice(4, (1, 4, 2, 3), r=5))
        assert not involution_is_valid(qg, (2, 3, 0, 1))
        assert not involution_is_valid(qg, (1, 2, 0, 3))
        assert involution_is_valid(qg, (1, 0, 3, 2))


def test_format_cycles():
    assert format_cycles((0, 1, 2)) == "id"
    assert format_cycles((1, 0, 3, 2)) == "(1 2)(3 4)"
    assert format_cycles((2, 1, 0)) == "(1 3)"
