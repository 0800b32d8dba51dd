#!/usr/bin/env python3
"""CLI for nilpotent orbit normal forms."""

import argparse
import json
import logging
import sys
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Any

import classical
import exceptional
from checks import (
    Batch,
    ClassicalCase,
    ClassicalOrbits,
    Concat,
    Failures,
    classical_branch,
    exceptional_branch,
    exceptional_checks,
    load_realization,
)
from classical import ClassicalAlgebra, NilpotentType, Partition
from errors import DomainError, NilformError, VerificationError
from exceptional import OrbitRecord
from liealg import dynkin_labels
from matrix_oracle import verify_normal_form
from observation import Observation
from pipeline import Pipeline
from rootdata import SimpleType
from weyl import CLASSICAL_FROM_TYPE, composite_invariant, kac_data

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

COMMANDS = ("classify", "normal-form", "bush", "weyl", "verify", "list", "lookup")

Record = dict[str, Any]


@dataclass(frozen=True)
class Query:
    """One command against one algebra.

    Attributes:
        command: One of COMMANDS
        algebra: "so", "so_13", "sp(8)", "E8", ...
        partition: Orbit of a classical algebra
        label: Orbit of an exceptional algebra
        structured: Emit JSON lines instead of text
        max_n: Bound for classical enumeration
        batch: Verify every orbit instead of one
    """

    command: str
    algebra: str
    partition: str | None = None
    label: str | None = None
    structured: bool = False
    max_n: int | None = None
    batch: bool = False


@dataclass
class Outcome:
    code: int = 0
    records: list[Record] = field(default_factory=list)


def parse_algebra(text: str, partition: Partition | None = None) -> ClassicalAlgebra | SimpleType:
    """A classical algebra (a series alone takes N from the partition) or an exceptional type."""
    cleaned = text.strip().lower()
    if cleaned in classical.SERIES:
        if partition is None:
            raise DomainError(f"{text} needs N, e.g. {cleaned}_8, or a partition")
        return ClassicalAlgebra.for_partition(cleaned, partition)
    if cleaned[:2] in classical.SERIES:
        return ClassicalAlgebra.parse(cleaned)
    t = SimpleType.parse(text)
    return t if t.is_exceptional else CLASSICAL_FROM_TYPE[t.family](t.rank)


def resolve(query: Query) -> ClassicalCase | OrbitRecord:
    """The orbit a query names: a partition for classical algebras, a label for exceptional ones."""
    p = Partition.parse(query.partition) if query.partition is not None else None
    algebra = parse_algebra(query.algebra, p)
    if isinstance(algebra, SimpleType):
        if p is not None:
            raise DomainError(f"{algebra} orbits are given by label, not by a partition")
        if query.label is None:
            raise DomainError(f"{algebra} needs an orbit label, e.g. A_1")
        return exceptional.lookup(algebra, query.label)
    if query.label is not None:
        raise DomainError("classical orbits are given by --partition, not by a label")
    if p is None:
        raise DomainError(f"{algebra} needs --partition")
    classical.require_valid(algebra, p)
    return ClassicalCase(algebra, p)


def _header(subject: ClassicalCase | OrbitRecord) -> Record:
    if isinstance(subject, ClassicalCase):
        return {"algebra": subject.algebra.label, "partition": str(subject.partition)}
    return {"algebra": subject.type.label, "orbit": subject.display_label}


def classify(subject: ClassicalCase | OrbitRecord) -> Record:
    if isinstance(subject, ClassicalCase):
        algebra, p = subject.algebra, subject.partition
        kind = classical.classify_type(algebra, p)
        depth, reduced = classical.depth(algebra, p), classical.reduced_depth(algebra, p)
    else:
        kind, depth, reduced = subject.nilpotent_type, subject.depth, subject.reduced_depth
    return {**_header(subject), "type": str(kind), "depth": depth, "reduced_depth": reduced}


def normal_form(subject: ClassicalCase | OrbitRecord) -> Record:
    if isinstance(subject, ClassicalCase):
        nf = classical.normal_form(subject.algebra, subject.partition)
        blocks = [f"{b.copies}x{b.component.label}<-{','.join(map(str, b.parts))}" for b in nf.blocks]
        return {**_header(subject), "normal_form": str(nf), "depth": nf.depth, "blocks": blocks}
    return {**_header(subject), "normal_form": str(subject.normal_form), "depth": subject.normal_form.depth}


def _classical_bush(case: ClassicalCase) -> tuple[Partition, list[Partition]]:
    algebra, p = case.algebra, case.partition
    if classical.classify_type(algebra, p) is NilpotentType.NILPOTENT:
        return p, [p]
    leader = classical.bush_leader(algebra, p)
    members = []
    for q in classical.partitions(algebra):
        if classical.classify_type(algebra, q) is NilpotentType.NILPOTENT:
            continue
        if classical.bush_leader(algebra, q) == leader:
            members.append(q)
    return leader, members


def bush(subject: ClassicalCase | OrbitRecord) -> Record:
    if isinstance(subject, ClassicalCase):
        leader, members = _classical_bush(subject)
        return {
            **_header(subject),
            "leader": str(leader),
            "members": [str(q) for q in members],
            "normal_forms": [str(classical.normal_form(subject.algebra, q)) for q in members],
        }
    records = exceptional.bush(subject.type, subject.label)
    return {
        **_header(subject),
        "leader": records[0].display_label,
        "members": [r.display_label for r in records],
        "normal_forms": [str(r.normal_form) for r in records],
    }


def weyl(subject: ClassicalCase | OrbitRecord) -> Record:
    if isinstance(subject, ClassicalCase):
        nf = classical.normal_form(subject.algebra, subject.partition)
        return {**_header(subject), **composite_invariant(subject.algebra, nf).as_dict()}
    invariant = composite_invariant(subject.type, subject.normal_form)
    realization = load_realization(subject)
    kac = kac_data(subject.type, dynkin_labels(realization.triple.h))
    return {
        **_header(subject),
        **invariant.as_dict(),
        "dynkin_labels": "".join(map(str, kac.labels)),
        "kac_modulus": kac.modulus,
        "kac_order": kac.order,
    }


def lookup(subject: ClassicalCase | OrbitRecord) -> Record:
    if isinstance(subject, ClassicalCase):
        raise DomainError("lookup reads the exceptional tables; use classify or normal-form for partitions")
    catalogue = [exceptional.resolve_embedding(tag) for tag in subject.embedding_tags]
    return {
        **_header(subject),
        "aliases": [exceptional.display_label(a) for a in subject.aliases],
        "depth": subject.depth,
        "representative": str(subject.representative),
        "normal_form": str(subject.normal_form),
        "embedding": " + ".join(subject.embedding_tags),
        "embedding_codes": [e.code for e in catalogue],
        "bush_role": subject.bush_role,
        "leader": exceptional.display_label(subject.leader or subject.label),
        "dependent": subject.dependent,
    }


def _verify_one(subject: ClassicalCase | OrbitRecord) -> Record:
    if isinstance(subject, ClassicalCase):
        return verify_normal_form(subject.algebra, subject.partition).as_dict()
    obs = Observation(subject=subject, loader=load_realization)
    (checked,) = Pipeline(list(exceptional_checks())).run(iter([obs]))
    return {
        **_header(subject),
        **{name.lower(): passed for name, passed in checked.metadata.get("results", {}).items()},
        "failures": checked.failures,
    }


def _branches(query: Query) -> list[Pipeline]:
    """One pipeline per algebra a batch covers; "classical" and "exceptional" cover every series or type."""
    algebra = query.algebra.strip().lower()
    if algebra == "exceptional":
        return [exceptional_branch(t) for t in exceptional.EXCEPTIONAL_TYPES]
    if algebra == "classical" or algebra in classical.SERIES:
        if query.max_n is None:
            raise DomainError(f"verify --batch on {algebra} needs --max-N")
        series = classical.SERIES if algebra == "classical" else (algebra,)
        return [classical_branch(s, query.max_n) for s in series]
    return [exceptional_branch(query.algebra)]


def _batch_stream(query: Query) -> Iterator[list[Observation[Any, Any]]]:
    return Pipeline([Concat(_branches(query)), Batch()]).run()


def verify_batch(query: Query) -> Record:
    """Run every orbit of the named algebras through their checks, a batch at a time."""
    report = Failures()
    checked, failed, failures = 0, 0, []
    for batch in _batch_stream(query):
        for obs in report.process(iter(batch)):
            failed += 1
            failures.extend(f"{obs.subject}: {failure}" for failure in obs.failures)
        for obs in batch:
            obs.unload()
        checked += len(batch)
        logger.info("verified %d orbits", checked)
    return {"algebra": query.algebra, "checked": checked, "failed": failed, "failures": failures}


def list_orbits(query: Query) -> list[Record]:
    algebra = query.algebra.strip().lower()
    if algebra in classical.SERIES:
        if query.max_n is None:
            raise DomainError("list on a classical series needs --max-N")
        source = ClassicalOrbits(algebra, query.max_n)
        return [
            {**_header(ClassicalCase(a, p)), "depth": classical.depth(a, p), "normal_form": str(classical.normal_form(a, p))}
            for a in source.algebras()
            for p in classical.partitions(a)
        ]
    target = parse_algebra(query.algebra)
    if isinstance(target, ClassicalAlgebra):
        return [
            {**_header(ClassicalCase(target, p)), "depth": classical.depth(target, p), "normal_form": str(classical.normal_form(target, p))}
            for p in classical.partitions(target)
        ]
    return [
        {**_header(r), "depth": r.depth, "normal_form": str(r.normal_form)}
        for r in exceptional.records(target)
    ]


HANDLERS = {
    "classify": classify,
    "normal-form": normal_form,
    "bush": bush,
    "weyl": weyl,
    "lookup": lookup,
}


def run(query: Query) -> Outcome:
    """Answer a query; domain errors exit 1, failed verification exits 2."""
    if query.command not in COMMANDS:
        raise DomainError(f"unknown command {query.command!r}")
    if query.command == "list":
        return Outcome(0, list_orbits(query))
    if query.command == "verify":
        record = verify_batch(query) if query.batch else _verify_one(resolve(query))
        failed = record.get("failed", 0) or bool(record.get("failures"))
        return Outcome(2 if failed else 0, [record])
    return Outcome(0, [HANDLERS[query.command](resolve(query))])


def _text_value(value: Any) -> str:
    if isinstance(value, list):
        return ", ".join(_text_value(v) for v in value)
    if isinstance(value, dict):
        return "; ".join(f"{k}={_text_value(v)}" for k, v in value.items())
    if isinstance(value, bool):
        return "yes" if value else "no"
    return "-" if value is None else str(value)


def render(query: Query, outcome: Outcome) -> str:
    """Text mirrors the table notation; structured mode is one JSON record per line."""
    if query.structured:
        return "\n".join(
            json.dumps({"schema": SCHEMA_VERSION, "command": query.command, **record}, sort_keys=True, ensure_ascii=False)
            for record in outcome.records
        )
    if query.command == "list":
        return "\n".join(
            f"{record.get('orbit') or record['partition']}\t{record['depth']}\t{record['normal_form']}"
            for record in outcome.records
        )
    return "\n\n".join(
        "\n".join(f"{key}: {_text_value(value)}" for key, value in record.items())
        for record in outcome.records
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilform", description="Normal forms of nilpotent orbits")
    parser.add_argument("command", choices=COMMANDS, help="What to compute")
    parser.add_argument("algebra", help="so, so_13, sp(8), sl_6, G2, F4, E6, E7 or E8; verify --batch also takes classical or exceptional")
    parser.add_argument("label", nargs="?", help="Exceptional orbit label, e.g. \"A_4+A_3\"")
    parser.add_argument("--partition", "-p", help="Classical orbit, e.g. \"5,4,4\" or \"24^3,23^4\"")
    parser.add_argument("--json", action="store_true", help="Emit JSON lines")
    parser.add_argument("--batch", action="store_true", help="verify: check every orbit")
    parser.add_argument("--max-N", dest="max_n", type=int, help="Largest N for classical list and batch verify")
    parser.add_argument("--quiet", "-q", action="store_true", help="Only warnings and errors on stderr")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    query = Query(
        command=args.command,
        algebra=args.algebra,
        partition=args.partition,
        label=args.label,
        structured=args.json,
        max_n=args.max_n,
        batch=args.batch,
    )
    try:
        outcome = run(query)
    except DomainError as e:
        logger.error("%s", e)
        return 1
    except VerificationError as e:
        logger.error("verification failed: %s", e)
        return 2
    except NilformError as e:
        logger.error("%s", e)
        return 1
    print(render(query, outcome))
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
