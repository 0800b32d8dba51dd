"""Observation - one subject under verification."""

from dataclasses import dataclass, field
from typing import Any, Callable, Generic, TypeVar

S = TypeVar("S")
T = TypeVar("T")


@dataclass
class Observation(Generic[S, T]):
    """A subject and what was found out about it.

    Generic over subject type S and content type T. Content, the expensive
    part (an oracle report, a Chevalley realization), is computed on first
    access.

    Attributes:
        subject: What is being verified, a classical case or an orbit record
        loader: Computes content from the subject
        metadata: Check results and failure notes
        checks: Names of the checks this observation passed through
    """
    subject: S
    loader: Callable[[S], T]
    metadata: dict[str, Any] = field(default_factory=dict)
    checks: list[str] = field(default_factory=list)
    _content: T | None = field(default=None, repr=False)

    @property
    def content(self) -> T:
        """Compute content on first access."""
        if self._content is None:
            self._content = self.loader(self.subject)
        return self._content

    @content.setter
    def content(self, value: T) -> None:
        self._content = value

    def unload(self) -> None:
        """Release content from memory."""
        self._content = None

    @property
    def failures(self) -> list[str]:
        return self.metadata.get("failures", [])

    @property
    def passed(self) -> bool:
        return not self.failures
