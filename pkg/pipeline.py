"""Pipeline - observations flowing through checks."""

import logging
from collections.abc import Iterator
from typing import Any, TypeVar

from check import Check, Merge
from observation import Observation

logger = logging.getLogger(__name__)

Obs = Observation[Any, Any]
T = TypeVar("T", Obs, list[Obs])


class Pipeline:
    """Compose checks into an executable flow.

    Stages run in order. Checks see single observations or, after a Batch,
    lists of them; merges see the whole stream.
    """

    def __init__(self, checks: list[Check | Merge] | None = None):
        self.checks: list[Check | Merge] = checks or []

    def add(self, check: Check | Merge) -> "Pipeline":
        """Add a check. Returns self for chaining."""
        self.checks.append(check)
        return self

    def __str__(self) -> str:
        return " -> ".join(check.name for check in self.checks)

    def run(self, initial: Iterator[Obs] | None = None) -> Iterator[T]:
        """Execute pipeline, yielding observations or batches."""
        logger.debug("running %s", self)
        stream: Iterator[T] = initial or iter([])

        for check in self.checks:
            if isinstance(check, Merge):
                stream = check.merge([stream])
            else:
                stream = self._process_check(check, stream)

        yield from stream

    def _process_check(self, check: Check, stream: Iterator[T]) -> Iterator[T]:
        """Apply a check to single observations and inside batches."""
        if type(check).process is not Check.process:
            yield from check.process(stream)
            return

        for item in stream:
            if isinstance(item, list):
                kept = [result for single in item if (result := check.apply(single)) is not None]
                if kept:
                    yield kept
            elif (result := check.apply(item)) is not None:
                yield result
