"""Tests for built-in checks."""

from types import SimpleNamespace

import pytest

from checks import (
    Batch,
    ClassicalCase,
    ClassicalOrbits,
    Concat,
    ExceptionalOrbits,
    Failures,
    NormalFormCertificate,
    OracleDepth,
    ParityLaw,
    ReducedDepth,
    classical_branch,
    classical_checks,
    load_report,
)
from classical import ClassicalAlgebra, Partition
from observation import Observation
from pipeline import Pipeline


def make_case(series: str, n: int, parts: str) -> ClassicalCase:
    return ClassicalCase(ClassicalAlgebra(series, n), Partition.parse(parts))


def make_obs(series: str, n: int, parts: str, **metadata) -> Observation:
    return Observation(subject=make_case(series, n, parts), loader=load_report, metadata=metadata)


def fake_report(depth: int):
    return lambda case: SimpleNamespace(oracle_depth=depth)


class TestClassicalOrbits:
    def test_scan_sl(self):
        observations = list(ClassicalOrbits("sl", 4).scan())

        # 1 + 2 + 4 nonzero orbits for N = 2, 3, 4
        assert len(observations) == 7
        assert all(not obs.subject.partition.is_zero for obs in observations)

    def test_scan_sp_skips_odd_n(self):
        observations = list(ClassicalOrbits("sp", 5).scan())

        assert {obs.subject.algebra.n for obs in observations} == {2, 4}
        assert len(observations) == 4

    def test_so_starts_at_seven(self):
        source = ClassicalOrbits("so", 8, min_n=3)

        assert [a.n for a in source.algebras()] == [7, 8]

    def test_so_7(self):
        found = {str(obs.subject.partition) for obs in ClassicalOrbits("so", 7).scan()}

        assert found == {"7", "5,1^2", "3^2,1", "3,2^2", "3,1^4", "2^2,1^3"}

    def test_process_chains_upstream(self):
        upstream = make_obs("sp", 4, "4")
        (first, *rest) = ClassicalOrbits("sl", 3).process(iter([upstream]))

        assert first is upstream
        assert first.checks == []
        assert len(rest) == 3
        assert all(obs.checks == ["ClassicalOrbits"] for obs in rest)

    def test_sources_compose_in_a_pipeline(self):
        pipeline = Pipeline([ClassicalOrbits("sl", 3), ClassicalOrbits("sp", 4)])

        series = [obs.subject.algebra.series for obs in pipeline.run()]

        assert series == ["sl"] * 3 + ["sp"] * 3

    def test_content_is_lazy(self):
        (obs, *_) = ClassicalOrbits("sl", 2).scan()

        assert obs._content is None
        assert obs.content.ok


class TestParityLaw:
    def test_passes_even_type(self):
        obs = ParityLaw().map(make_obs("so", 7, "7"))

        assert obs.passed
        assert obs.metadata["results"] == {"ParityLaw": True}

    def test_passes_nilpotent_type(self):
        assert ParityLaw().map(make_obs("so", 13, "5,4,4")).passed

    def test_records_failure(self):
        obs = Observation(subject=make_case("so", 7, "7"), loader=fake_report(9))

        ParityLaw().map(obs)

        assert not obs.passed
        assert obs.metadata["results"]["ParityLaw"] is False
        assert obs.failures[0].startswith("ParityLaw:")


class TestOracleDepth:
    def test_agrees(self):
        obs = OracleDepth().map(make_obs("sp", 6, "4,2"))

        assert obs.passed

    def test_disagrees(self):
        obs = Observation(subject=make_case("sp", 6, "4,2"), loader=fake_report(1))

        assert not OracleDepth().map(obs).passed
        assert "oracle 1" in obs.failures[0]


class TestNormalFormCertificate:
    def test_records_report(self):
        obs = NormalFormCertificate().map(make_obs("so", 8, "5,3"))

        assert obs.passed
        assert obs.metadata["report"]["normal_form"] == "D_4(a_1)"
        assert obs.metadata["report"]["commute"] is True


@pytest.mark.parametrize("series, max_n", [("sl", 6), ("sp", 8), ("so", 10)])
def test_classical_checks_pass(series, max_n):
    pipeline = Pipeline().add(ClassicalOrbits(series, max_n))
    for check in classical_checks():
        pipeline.add(check)

    results = list(pipeline.run())

    assert results
    assert all(obs.passed for obs in results), [obs.failures for obs in results if not obs.passed]
    assert results[0].checks == ["ClassicalOrbits", "ParityLaw", "OracleDepth", "NormalFormCertificate"]


class TestExceptionalOrbits:
    def test_scan_g2(self):
        observations = list(ExceptionalOrbits("G2").scan())

        assert [obs.subject.label for obs in observations] == ["A_1", "~A_1", "G_2(a_1)", "G_2"]

    def test_process_marks(self):
        observations = list(ExceptionalOrbits("F4").process(iter([])))

        assert len(observations) == 15
        assert all("ExceptionalOrbits" in obs.checks for obs in observations)


class TestFailures:
    def test_passes_failed(self):
        obs = make_obs("sl", 2, "2", failures=["ParityLaw: odd"])

        assert Failures().filter(obs) is True

    def test_rejects_clean(self):
        assert Failures().filter(make_obs("sl", 2, "2")) is False


class TestBatch:
    def test_batches_observations(self):
        observations = [make_obs("sl", 5, "5") for _ in range(25)]

        batches = list(Batch(n=10).merge([iter(observations)]))

        assert [len(b) for b in batches] == [10, 10, 5]

    def test_adds_mark(self):
        (batch,) = Batch(n=2).merge([iter([make_obs("sl", 2, "2")])])

        assert batch[0].checks == ["Batch"]

    def test_rebatches_lists(self):
        chunks = [[make_obs("sl", 3, "3"), make_obs("sl", 3, "2,1")], [make_obs("sl", 2, "2")]]

        batches = list(Batch(n=2).merge([iter(chunks)]))

        assert [len(b) for b in batches] == [2, 1]


class TestConcat:
    def test_upstream_then_branches(self):
        upstream = [make_obs("sl", 2, "2")]
        branches = [Pipeline([ClassicalOrbits("sl", 3)]), Pipeline([ExceptionalOrbits("G2")])]

        merged = list(Concat(branches).merge([iter(upstream)]))

        assert merged[0] is upstream[0]
        assert {str(obs.subject.partition) for obs in merged[1:4]} == {"2", "3", "2,1"}
        assert [obs.subject.label for obs in merged[4:]] == ["A_1", "~A_1", "G_2(a_1)", "G_2"]

    def test_branches_keep_their_checks(self):
        branches = [classical_branch("sl", 3), Pipeline([ExceptionalOrbits("G2"), ReducedDepth()])]

        merged = list(Pipeline([Concat(branches)]).run())

        assert merged[0].checks == ["ClassicalOrbits", "ParityLaw", "OracleDepth", "NormalFormCertificate"]
        assert merged[-1].checks == ["ExceptionalOrbits", "ReducedDepth"]
        assert all(obs.passed for obs in merged)


def test_failures_select_from_a_batch():
    passing = make_obs("sl", 2, "2")
    failing = make_obs("sl", 3, "3", failures=["OracleDepth: formula 4, oracle 2"])

    (batch,) = Pipeline([Batch(n=5)]).run(iter([passing, failing]))
    reported = list(Failures().process(iter(batch)))

    assert reported == [failing]
    assert failing.checks == ["Batch", "Failures"]
