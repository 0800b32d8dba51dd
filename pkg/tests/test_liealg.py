"""Tests for Chevalley algebras, sl2-triples and gradings."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import DomainError, VerificationError
from liealg import (
    build_algebra,
    dependent_positions,
    dynkin_labels,
    grading,
    h_from_labels,
    integer_rank,
    sl2_complete,
    solve_exact,
)
from rootdata import SimpleType, build_root_system, height


def algebra(name: str):
    return build_algebra(SimpleType.parse(name))


def principal_f(g):
    """f': the sum of the negative simple root vectors."""
    f = g.element()
    for i in range(g.rank):
        f = f + g.f(g.roots.simple_root(i))
    return f


def f_sum(g, *roots: str):
    f = g.element()
    for text in roots:
        f = f + g.f(tuple(int(c) for c in text))
    return f


class TestSolveExact:
    def test_unique_solution(self):
        rows = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
        assert solve_exact(rows, [Fraction(3), Fraction(4)], 2) == [Fraction(1), Fraction(1)]

    def test_free_variables_are_zero(self):
        assert solve_exact([[Fraction(1), Fraction(1)]], [Fraction(5)], 2) == [Fraction(5), Fraction(0)]

    def test_inconsistent(self):
        rows = [[Fraction(1), Fraction(1)], [Fraction(2), Fraction(2)]]
        with pytest.raises(VerificationError):
            solve_exact(rows, [Fraction(1), Fraction(3)], 2)

    def test_integer_rank(self):
        assert integer_rank([(1, 0, 1), (0, 1, 1), (1, 1, 2)]) == 2


class TestBuildAlgebra:
    @pytest.mark.parametrize("name,dimension", [("A1", 3), ("G2", 14), ("F4", 52), ("E6", 78), ("E8", 248)])
    def test_dimension(self, name, dimension):
        assert algebra(name).dimension == dimension

    def test_a1_bracket(self):
        g = algebra("A1")
        assert g.bracket(g.e((1,)), g.f((1,))) == g.h(0)

    def test_basis_names(self):
        names = algebra("A2").basis_names
        assert names[:3] == ["e_10", "e_01", "e_11"]
        assert names[-2:] == ["h_1", "h_2"]

    def test_unknown_root(self):
        with pytest.raises(DomainError):
            algebra("A2").x((2, 1))


class TestBracket:
    def test_self_bracket_vanishes(self):
        g = algebra("G2")
        x = g.e((1, 1)) + 3 * g.f((1, 3)) + g.h(1)
        assert not g.bracket(x, x)

    @pytest.mark.parametrize("name", ["A3", "B3", "G2", "F4"])
    def test_cartan_action_on_simple_roots(self, name):
        g = algebra(name)
        cartan = g.roots.cartan
        for i in range(g.rank):
            for j in range(g.rank):
                root = g.roots.simple_root(j)
                assert g.bracket(g.h(i), g.e(root)) == cartan[j][i] * g.e(root)

    def test_antisymmetry(self):
        g = algebra("B3")
        x, y = g.e((1, 0, 0)), g.e((0, 1, 1))
        assert g.bracket(x, y) == -g.bracket(y, x)

    @pytest.mark.parametrize("name", ["B2", "G2", "F4", "E6"])
    def test_structure_constants_are_root_string_bounds(self, name):
        g = algebra(name)
        system = g.roots
        for a in system.roots:
            for b in system.roots:
                total = tuple(x + y for x, y in zip(a, b))
                if not system.is_root(total):
                    continue
                p = 0
                while system.is_root(tuple(y - (p + 1) * x for x, y in zip(a, b))):
                    p += 1
                assert abs(g.structure_constant(a, b)) == p + 1

    @given(data=st.data(), name=st.sampled_from(["A3", "B3", "C3", "D4", "G2", "F4"]))
    @settings(max_examples=80, deadline=None)
    def test_jacobi(self, data, name):
        g = algebra(name)
        index = st.integers(min_value=0, max_value=g.dimension - 1)
        x, y, z = (g.element({data.draw(index): 1}) for _ in range(3))
        total = (
            g.bracket(x, g.bracket(y, z))
            + g.bracket(y, g.bracket(z, x))
            + g.bracket(z, g.bracket(x, y))
        )
        assert not total

    @pytest.mark.slow
    def test_jacobi_e8_sample(self):
        g = algebra("E8")
        roots = g.roots.roots
        sample = [g.x(roots[k]) for k in range(0, len(roots), 17)]
        for x in sample[:6]:
            for y in sample:
                for z in sample[:6]:
                    total = (
                        g.bracket(x, g.bracket(y, z))
                        + g.bracket(y, g.bracket(z, x))
                        + g.bracket(z, g.bracket(x, y))
                    )
                    assert not total


class TestSl2Complete:
    def test_a1(self):
        g = algebra("A1")
        triple = sl2_complete(g.f((1,)))
        assert g.roots.labels(g.cartan_coordinates(triple.h)) == (2,)
        assert triple.e == g.e((1,))

    def test_principal_g2(self):
        g = algebra("G2")
        triple = sl2_complete(principal_f(g))
        assert dynkin_labels(triple.h) == (2, 2)
        assert grading(triple.h).depth == 10

    def test_f4_a2(self):
        g = algebra("F4")
        triple = sl2_complete(f_sum(g, "0100", "0120", "1110", "0001"))
        assert grading(triple.h).depth == 10
        assert dynkin_labels(triple.h) == (0, 2, 0, 2)

    def test_e_reaches_negative_root_spaces(self):
        g = algebra("F4")
        triple = sl2_complete(f_sum(g, "0100", "0010", "0111"))
        assert g.roots.labels(g.cartan_coordinates(triple.h)) == (-5, 2, 2, -2)
        assert dynkin_labels(triple.h) == (1, 0, 1, 0)
        assert grading(triple.h).depth == 6
        assert any(height(g.root_of(k)) < 0 for k in triple.e.coefficients)

    def test_e6_d4_a1_off_the_dominant_chamber(self):
        g = algebra("E6")
        triple = sl2_complete(f_sum(g, "000010", "010000", "000100", "001110"))
        assert dynkin_labels(triple.h) == (0, 0, 0, 2, 0, 0)
        assert grading(triple.h).depth == 6

    def test_simple_system_of_d4_in_f4_is_principal_there(self):
        g = algebra("F4")
        triple = sl2_complete(f_sum(g, "1000", "0100", "0120", "0122"))
        assert grading(triple.h).depth == 10

    def test_minimal_nilpotent_on_a_non_orthogonal_pair(self):
        g = algebra("A2")
        with pytest.raises(VerificationError):
            sl2_complete(f_sum(g, "01", "11"))

    def test_support_without_neutral_element(self):
        g = algebra("A2")
        with pytest.raises(VerificationError):
            sl2_complete(f_sum(g, "10", "01", "11"))

    def test_relations_hold(self):
        g = algebra("B3")
        triple = sl2_complete(f_sum(g, "100", "010"))
        assert g.bracket(triple.e, triple.f) == triple.h
        assert g.bracket(triple.h, triple.e) == 2 * triple.e
        assert g.bracket(triple.h, triple.f) == -2 * triple.f

    def test_zero(self):
        with pytest.raises(DomainError):
            sl2_complete(algebra("A2").element())

    def test_positive_support_rejected(self):
        g = algebra("A2")
        with pytest.raises(DomainError):
            sl2_complete(g.e((1, 0)))


class TestGrading:
    def test_zero_h(self):
        g = algebra("A2")
        graded = grading(g.cartan_element((0, 0)))
        assert graded.eigen_dims == {0: 8}
        with pytest.raises(DomainError):
            graded.depth

    def test_dimensions_are_symmetric(self):
        g = algebra("E6")
        graded = grading(h_from_labels(g, (2, 0, 0, 2, 0, 2)))
        assert sum(graded.eigen_dims.values()) == 78
        assert all(graded.dim(j) == graded.dim(-j) for j in graded.eigen_dims)
        assert graded.dim(graded.depth) > 0

    def test_e8_a7(self):
        g = algebra("E8")
        triple = sl2_complete(
            f_sum(g, "12354321", "00000001", "00000010", "00000100", "00001000", "00100000", "10000000", "01000000")
        )
        graded = grading(triple.h)
        assert graded.depth == 10
        assert graded.dim(10) == 4
        assert dynkin_labels(triple.h) == (0, 0, 0, 0, 2, 0, 0, 0)

    def test_even(self):
        g = algebra("G2")
        assert grading(h_from_labels(g, (2, 2))).is_even
        assert not grading(h_from_labels(g, (1, 0))).is_even


class TestDynkinLabels:
    @pytest.mark.parametrize("name", ["A4", "C3", "D5", "F4", "E7"])
    def test_principal_is_all_twos(self, name):
        g = algebra(name)
        assert dynkin_labels(sl2_complete(principal_f(g)).h) == (2,) * g.rank

    def test_moves_to_dominant_chamber(self):
        g = algebra("A2")
        assert dynkin_labels(h_from_labels(g, (-2, 2))) == (2, 0)

    def test_labels_round_trip(self):
        g = algebra("E6")
        assert dynkin_labels(h_from_labels(g, (0, 2, 0, 0, 0, 0))) == (0, 2, 0, 0, 0, 0)


def test_dependent_positions():
    system = build_root_system(SimpleType("E", 6))
    roots = [(0, 0, 0, 0, 0, 1), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 1, 1)]
    assert all(system.is_root(r) for r in roots)
    assert dependent_positions(roots) == [2]
