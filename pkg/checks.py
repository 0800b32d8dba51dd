"""Built-in checks for classical cases and exceptional table rows."""

import logging
from collections.abc import Iterator
from dataclasses import dataclass
from itertools import islice
from typing import Any, TypeVar

import classical
import exceptional
from check import Check, Merge, Source
from classical import ClassicalAlgebra, NilpotentType, Partition
from errors import NilformError
from exceptional import OrbitRecord
from liealg import Realization, SignSearch, build_algebra, dynkin_labels
from matrix_oracle import OracleReport, verify_normal_form
from normalform import NormalFormComponent
from observation import Observation
from pipeline import Pipeline
from rootdata import SimpleType

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassicalCase:
    """A partition in a classical algebra."""

    algebra: ClassicalAlgebra
    partition: Partition

    def __str__(self) -> str:
        return f"{self.algebra} ({self.partition})"


ClassicalObservation = Observation[ClassicalCase, OracleReport]
RecordObservation = Observation[OrbitRecord, Realization]

T = TypeVar("T", Observation[Any, Any], list[Observation[Any, Any]])


def load_report(case: ClassicalCase) -> OracleReport:
    return verify_normal_form(case.algebra, case.partition)


def load_realization(record: OrbitRecord) -> Realization:
    return SignSearch(build_algebra(record.type)).realize(record)


class ClassicalOrbits(Source):
    """Source: every nonzero orbit of one series for N in [min_n, max_n]."""

    def __init__(self, series: str, max_n: int, min_n: int | None = None):
        self.series = series
        self.max_n = max_n
        self.min_n = min_n if min_n is not None else (ClassicalAlgebra.MIN_SO_N if series == "so" else 2)

    def algebras(self) -> Iterator[ClassicalAlgebra]:
        for n in range(self.min_n, self.max_n + 1):
            if self.series == "sp" and n % 2:
                continue
            if self.series == "so" and n < ClassicalAlgebra.MIN_SO_N:
                continue
            yield ClassicalAlgebra(self.series, n)

    def scan(self) -> Iterator[ClassicalObservation]:
        for algebra in self.algebras():
            for p in classical.partitions(algebra):
                yield Observation(subject=ClassicalCase(algebra, p), loader=load_report)


class ExceptionalOrbits(Source):
    """Source: every row of an exceptional table."""

    def __init__(self, t: SimpleType | str):
        self.type = exceptional.exceptional_type(t)

    def scan(self) -> Iterator[RecordObservation]:
        for record in exceptional.records(self.type):
            yield Observation(subject=record, loader=load_realization)


class ParityLaw(Check):
    """Nilpotent type exactly when the oracle depth is odd."""

    def map(self, obs: ClassicalObservation) -> ClassicalObservation:
        case = obs.subject
        try:
            nilpotent = classical.classify_type(case.algebra, case.partition) is NilpotentType.NILPOTENT
            odd = obs.content.oracle_depth % 2 == 1
        except NilformError as e:
            return self.verdict(obs, False, str(e))
        return self.verdict(obs, nilpotent == odd, f"nilpotent={nilpotent}, oracle depth {obs.content.oracle_depth}")


class OracleDepth(Check):
    """The depth formula agrees with ad h on matrices."""

    def map(self, obs: ClassicalObservation) -> ClassicalObservation:
        case = obs.subject
        try:
            expected = classical.depth(case.algebra, case.partition)
            found = obs.content.oracle_depth
        except NilformError as e:
            return self.verdict(obs, False, str(e))
        return self.verdict(obs, found == expected, f"formula {expected}, oracle {found}")


class NormalFormCertificate(Check):
    """Every flag of the oracle report holds."""

    def map(self, obs: ClassicalObservation) -> ClassicalObservation:
        try:
            report = obs.content
        except NilformError as e:
            return self.verdict(obs, False, str(e))
        obs.metadata["report"] = report.as_dict()
        return self.verdict(obs, report.ok, "; ".join(report.failures))


class TableDepth(Check):
    """The realized representative has the printed depth."""

    def map(self, obs: RecordObservation) -> RecordObservation:
        record = obs.subject
        try:
            realization = obs.content
        except NilformError as e:
            return self.verdict(obs, False, str(e))
        obs.metadata["coefficients"] = realization.coefficients
        obs.metadata["searched"] = realization.searched
        return self.verdict(obs, realization.depth == record.depth, f"depth {realization.depth}, printed {record.depth}")


class ReducedDepth(Check):
    """The first normal form component reaches the reduced depth and none exceeds it."""

    def map(self, obs: RecordObservation) -> RecordObservation:
        record = obs.subject
        depths = [c.intrinsic_depth for c in record.normal_form]
        ok = bool(depths) and depths[0] == record.reduced_depth and max(depths) <= record.reduced_depth
        return self.verdict(obs, ok, f"component depths {depths}, reduced depth {record.reduced_depth}")


class BushCoherence(Check):
    """Members equal their leader plus the delta; odd-depth leaders stand alone."""

    def map(self, obs: RecordObservation) -> RecordObservation:
        record = obs.subject
        members = exceptional.bush(record.type, record.label)
        leader = members[0]
        if record.is_leader:
            alone = record.depth % 2 == 0 or len(members) == 1
            return self.verdict(obs, alone, f"nilpotent-type leader with {len(members) - 1} members")
        ok = (
            record.delta is not None
            and record.normal_form == leader.normal_form.plus(record.delta)
            and record.depth == leader.depth
        )
        return self.verdict(obs, ok, f"{record.normal_form} differs from {leader.normal_form} + {record.delta}")


def _irreducible_component(record: OrbitRecord) -> NormalFormComponent | None:
    if len(record.normal_form) != 1:
        return None
    (component,) = record.normal_form
    if (component.family, component.rank) != (record.type.family, record.type.rank):
        return None
    return component


class IrreducibleLabels(Check):
    """Irreducible rows reproduce the catalogue diagram and dim g_d."""

    def map(self, obs: RecordObservation) -> RecordObservation:
        component = _irreducible_component(obs.subject)
        if component is None:
            return obs
        entry = exceptional.irreducible(component)
        try:
            realization = obs.content
            labels = dynkin_labels(realization.triple.h)
        except NilformError as e:
            return self.verdict(obs, False, str(e))
        top = realization.grading.dim(realization.depth)
        obs.metadata["dynkin_labels"] = labels
        ok = labels == entry.labels and top == entry.dim_gd
        return self.verdict(obs, ok, f"labels {labels} dim {top}, catalogue {entry.labels} dim {entry.dim_gd}")


class Failures(Check):
    """Passes only observations with a failed check."""

    def filter(self, obs: Observation[Any, Any]) -> bool:
        return not obs.passed


class Batch(Merge):
    """Collapse: window observations into groups of N.

    Lists arriving from an earlier Batch are flattened and rewindowed.
    """

    def __init__(self, n: int = 10):
        self.n = n

    def merge(self, streams: list[Iterator[T]]) -> Iterator[list[Observation[Any, Any]]]:
        flat = (single for stream in streams for item in stream for single in (item if isinstance(item, list) else [item]))
        while batch := list(islice(flat, self.n)):
            for obs in batch:
                obs.checks.append(self.name)
            yield batch


class Concat(Merge):
    """Merge: the incoming stream, then the output of each branch in turn.

    Branches are whole pipelines, so each can carry its own source and checks.
    """

    def __init__(self, branches: list[Pipeline]):
        self.branches = branches

    def merge(self, streams: list[Iterator[T]]) -> Iterator[T]:
        for stream in streams:
            yield from stream
        for branch in self.branches:
            logger.info("branch %s", branch)
            yield from branch.run()


def classical_checks() -> list[Check]:
    return [ParityLaw(), OracleDepth(), NormalFormCertificate()]


def exceptional_checks() -> list[Check]:
    return [TableDepth(), ReducedDepth(), BushCoherence(), IrreducibleLabels()]


def classical_branch(series: str, max_n: int) -> Pipeline:
    """Every orbit of one series up to max_n, through the classical checks."""
    return Pipeline([ClassicalOrbits(series, max_n), *classical_checks()])


def exceptional_branch(t: SimpleType | str) -> Pipeline:
    """Every row of one exceptional table, through the table checks."""
    return Pipeline([ExceptionalOrbits(t), *exceptional_checks()])
