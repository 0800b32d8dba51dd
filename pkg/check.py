"""Check - one verification stage."""

import logging
from abc import ABC, abstractmethod
from collections.abc import Iterator
from typing import Any, TypeVar

from observation import Observation

logger = logging.getLogger(__name__)

# Observation with any subject and content
Obs = Observation[Any, Any]
T = TypeVar("T", Obs, list[Obs])


class Check(ABC):
    """A stage observations flow through.

    filter decides whether an observation continues, map annotates it.
    """

    @property
    def name(self) -> str:
        """Check name recorded in the observation's checks list."""
        return self.__class__.__name__

    def filter(self, obs: Obs) -> bool:
        """Does this observation pass? Default: accept all."""
        return True

    def map(self, obs: Obs) -> Obs:
        """Annotate the observation. Default: passthrough."""
        return obs

    def apply(self, obs: Obs) -> Obs | None:
        """Filter, map and mark one observation; None when it is dropped."""
        if not self.filter(obs):
            return None
        result = self.map(obs)
        result.checks.append(self.name)
        return result

    def process(self, stream: Iterator[Obs]) -> Iterator[Obs]:
        for obs in stream:
            result = self.apply(obs)
            if result is not None:
                yield result

    def verdict(self, obs: Obs, passed: bool, detail: str = "") -> Obs:
        """Record the outcome under this check's name; failures are logged, never raised."""
        obs.metadata.setdefault("results", {})[self.name] = passed
        if not passed:
            obs.metadata.setdefault("failures", []).append(f"{self.name}: {detail}")
            logger.warning("%s failed for %s: %s", self.name, obs.subject, detail)
        return obs


class Source(Check):
    """A stage that adds observations of its own after the ones flowing in.

    Upstream observations pass through untouched, so sources chain:
    two sources in a row yield both sets of subjects.
    """

    @abstractmethod
    def scan(self) -> Iterator[Obs]:
        """Fresh observations, content not yet loaded."""
        ...

    def process(self, stream: Iterator[Obs]) -> Iterator[Obs]:
        yield from stream
        count = 0
        for obs in self.scan():
            obs.checks.append(self.name)
            count += 1
            yield obs
        logger.debug("%s produced %d observations", self.name, count)


class Merge(ABC):
    """Stage that collapses multiple streams into one.

    Implements merge() instead of filter/map.
    """

    @property
    def name(self) -> str:
        return self.__class__.__name__

    @abstractmethod
    def merge(self, streams: list[Iterator[T]]) -> Iterator[T]:
        """Collapse multiple streams into one."""
        ...
