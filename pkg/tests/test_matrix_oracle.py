"""Tests for the exact matrix oracle."""

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy import Rational, SparseMatrix, diag, eye, zeros

import classical
from classical import ClassicalAlgebra, Partition
from errors import DomainError
from matrix_oracle import (
    FormedSpace,
    ad_depth,
    jordan_type,
    lower_shift,
    nilpotent_from_partition,
    oracle_depth,
    realize_normal_form,
    sl2_complete_matrix,
    verify_normal_form,
)
from normalform import NormalFormComponent

EXSP = "19^8,17^4,12^6,11^10,10^3,6,5^4,2^7,1^2"
EXSO = "20^4,17^5,15^6,13^4,10^2,9^4,8^2,7^3,5^4,4^4,3^8,2^8,1^6"


def case(series: str, parts: str) -> tuple[ClassicalAlgebra, Partition]:
    p = Partition.parse(parts)
    return ClassicalAlgebra.for_partition(series, p), p


@st.composite
def valid_cases(draw, min_n: int, max_n: int) -> tuple[ClassicalAlgebra, Partition]:
    """A nonzero orbit of sl_N, sp_N or so_N; sp takes odd parts in pairs, so takes even parts in pairs."""
    series = draw(st.sampled_from(classical.SERIES))
    n = draw(st.integers(min_value=min_n, max_value=max_n).filter(lambda n: series != "sp" or n % 2 == 0))
    fallback = 2 if series == "sp" else 1
    parts: list[int] = []
    remaining = n
    while remaining:
        part = draw(st.integers(min_value=1, max_value=remaining))
        paired = (series == "sp" and part % 2 == 1) or (series == "so" and part % 2 == 0)
        if not paired:
            taken = [part]
        elif 2 * part <= remaining:
            taken = [part, part]
        else:
            taken = [fallback]
        parts += taken
        remaining -= sum(taken)
    p = Partition.from_parts(parts)
    assume(not p.is_zero)
    return ClassicalAlgebra(series, n), p


def jordan_block(n: int) -> SparseMatrix:
    return SparseMatrix(n, n, lower_shift(n))


def block_sum(*sizes: int) -> SparseMatrix:
    return SparseMatrix(diag(*[jordan_block(n) for n in sizes]))


class TestFormedSpace:
    def test_sl_membership_is_trace_zero(self):
        space = FormedSpace(2, "none")
        assert space.contains(SparseMatrix([[1, 0], [0, -1]]))
        assert not space.contains(SparseMatrix([[1, 0], [0, 0]]))

    def test_degenerate_gram(self):
        with pytest.raises(DomainError, match="degenerate"):
            FormedSpace(2, "symmetric", SparseMatrix([[1, 1], [1, 1]]))

    def test_gram_must_match_kind(self):
        with pytest.raises(DomainError):
            FormedSpace(2, "antisymmetric", SparseMatrix(eye(2)))

    def test_series(self):
        assert FormedSpace(2, "antisymmetric", SparseMatrix([[0, 1], [-1, 0]])).series == "sp"


class TestNilpotentFromPartition:
    @pytest.mark.parametrize(
        "series,parts",
        [("sl", "3,2"), ("sp", "3,3"), ("so", "3,2,2"), ("sp", "4,2,2"), ("so", "5,4,4"), ("so", "7,3,3,1")],
    )
    def test_in_algebra_with_jordan_type(self, series, parts):
        algebra, p = case(series, parts)
        space, f = nilpotent_from_partition(algebra, p)
        assert space.dimension == algebra.n
        assert space.contains(f)
        assert jordan_type(f) == p

    def test_sl_blocks(self):
        _, f = nilpotent_from_partition(*case("sl", "3,2"))
        assert f == block_sum(3, 2)

    def test_invalid(self):
        with pytest.raises(DomainError):
            nilpotent_from_partition(ClassicalAlgebra("sp", 4), Partition.parse("3,1"))


class TestJordanType:
    def test_blocks(self):
        assert jordan_type(block_sum(3, 2)) == Partition.parse("3,2")

    def test_zero(self):
        assert jordan_type(SparseMatrix(zeros(4))) == Partition.parse("1^4")

    def test_not_nilpotent(self):
        with pytest.raises(DomainError):
            jordan_type(SparseMatrix(eye(3)))

    @given(entries=st.lists(st.integers(min_value=-3, max_value=3), min_size=36, max_size=36))
    @settings(max_examples=25, deadline=None)
    def test_conjugation_invariant(self, entries):
        # unit lower triangular, so always invertible
        g = SparseMatrix(eye(9))
        for k, value in enumerate(entries):
            i, j = divmod(k, 9)
            if i > j:
                g[i, j] = value
        m = block_sum(4, 4, 1)
        assert jordan_type(g * m * g.inv()) == Partition.parse("4,4,1")


class TestSl2CompleteMatrix:
    def test_j2(self):
        algebra, p = case("sl", "2")
        space, f = nilpotent_from_partition(algebra, p)
        e, h, _ = sl2_complete_matrix(f, space)
        assert h == SparseMatrix([[1, 0], [0, -1]])
        assert e == SparseMatrix([[0, 1], [0, 0]])

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_jordan_block(self, n):
        space, f = nilpotent_from_partition(ClassicalAlgebra("sl", n), Partition.parse(str(n)))
        e, h, _ = sl2_complete_matrix(f, space)
        assert [h[i, i] for i in range(n)] == [n - 1 - 2 * i for i in range(n)]
        assert [e[i, i + 1] for i in range(n - 1)] == [(i + 1) * (n - 1 - i) for i in range(n - 1)]

    def test_so9_regular(self):
        space, f = nilpotent_from_partition(*case("so", "9"))
        _, h, _ = sl2_complete_matrix(f, space)
        assert ad_depth(space, h) == 14

    def test_rejects_unstructured(self):
        f = SparseMatrix([[0, 0, 0], [1, 0, 0], [1, 0, 0]])
        with pytest.raises(DomainError):
            sl2_complete_matrix(f, FormedSpace(3, "none"))


class TestAdDepth:
    @pytest.mark.parametrize(
        "series,parts,expected",
        [("sl", "3,2,1", 4), ("so", "3,2,2", 3), ("sp", "4", 6), ("so", "5,4,4", 7), ("so", "5,3,1", 6)],
    )
    def test_examples(self, series, parts, expected):
        assert oracle_depth(*case(series, parts)) == expected

    def test_non_diagonal(self):
        with pytest.raises(DomainError):
            ad_depth(FormedSpace(2, "none"), SparseMatrix([[0, 1], [0, 0]]))

    def test_half_integer(self):
        with pytest.raises(DomainError):
            ad_depth(FormedSpace(2, "none"), SparseMatrix([[Rational(1, 2), 0], [0, Rational(-1, 2)]]))


class TestRealizeNormalForm:
    def test_sl_two_blocks(self):
        components = realize_normal_form(*case("sl", "3,2"))
        assert [c.component for c in components] == [NormalFormComponent("A", 2), NormalFormComponent("C", 1)]
        a, b = components[0].matrix, components[1].matrix
        assert (a * b - b * a).is_zero_matrix
        assert jordan_type(a + b) == Partition.parse("3,2")

    def test_sp_pair_and_block(self):
        components = realize_normal_form(*case("sp", "3,3,2"))
        assert {c.component for c in components} == {NormalFormComponent("A", 2), NormalFormComponent("C", 1)}
        assert {c.block.dimension for c in components} == {6, 2}

    def test_so_box(self):
        algebra, p = case("so", "5,3,2,2")
        components = realize_normal_form(algebra, p)
        by_kind = {c.component.kind_label: c for c in components}
        assert set(by_kind) == {"D_4(a_1)", "C_1"}
        assert by_kind["D_4(a_1)"].block.dimension == 8
        assert jordan_type(by_kind["D_4(a_1)"].local) == Partition.parse("5,3")
        assert by_kind["C_1"].block.dimension == 4
        total = sum((c.matrix for c in components), SparseMatrix(zeros(algebra.n)))
        assert jordan_type(total) == p

    def test_three_one_box_gives_two_commuting_matrices(self):
        components = realize_normal_form(*case("so", "3,1^4"))
        assert [c.component.kind_label for c in components] == ["C_1", "C_1"]
        a, b = components[0].matrix, components[1].matrix
        assert (a * b - b * a).is_zero_matrix


class TestVerifyNormalForm:
    @pytest.mark.parametrize(
        "series,parts",
        [("sp", "3,3,2"), ("so", "5,4,4"), ("so", "7,1"), ("so", "9,7,3,3,1"), ("sl", "4,3,3,1"), ("so", "3,1^4")],
    )
    def test_all_flags(self, series, parts):
        report = verify_normal_form(*case(series, parts))
        assert report.ok, report.failures

    def test_nilpotent_type_reduced_depth(self):
        report = verify_normal_form(*case("so", "5,4,4"))
        assert report.oracle_depth == 7
        assert report.normal_form.depth == 6

    def test_as_dict(self):
        record = verify_normal_form(*case("sp", "3,3,2")).as_dict()
        assert record["algebra"] == "sp_8"
        assert record["partition"] == "3^2,2"
        assert record["commute"] is True
        assert record["failures"] == []

    @pytest.mark.parametrize("series", ["sl", "sp", "so"])
    def test_exhaustive_small(self, series):
        for n in range(2, 11):
            try:
                algebra = ClassicalAlgebra(series, n)
            except DomainError:
                continue
            for p in classical.partitions(algebra):
                report = verify_normal_form(algebra, p)
                assert report.ok, f"{algebra} {p}: {report.failures}"

    @pytest.mark.slow
    @pytest.mark.parametrize("series", ["sl", "sp", "so"])
    def test_exhaustive(self, series):
        for n in range(11, 17):
            try:
                algebra = ClassicalAlgebra(series, n)
            except DomainError:
                continue
            for p in classical.partitions(algebra):
                assert verify_normal_form(algebra, p).ok, f"{algebra} {p}"

    @pytest.mark.slow
    @given(valid_cases(min_n=17, max_n=30))
    @settings(max_examples=60, deadline=None)
    def test_sampled_beyond_exhaustive(self, orbit):
        algebra, p = orbit
        assert classical.validate(algebra, p) is None
        report = verify_normal_form(algebra, p)
        assert report.ok, f"{algebra} {p}: {report.failures}"

    @pytest.mark.slow
    @pytest.mark.parametrize("series,parts", [("sp", EXSP), ("so", EXSO)])
    def test_worked_examples(self, series, parts):
        report = verify_normal_form(*case(series, parts))
        assert report.ok, report.failures
