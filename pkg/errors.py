"""Errors - what can go wrong, and whose fault it is."""


class NilformError(Exception):
    """Base for every error raised by this package."""


class DomainError(NilformError, ValueError):
    """The input names no valid object: bad type, partition, label or component.

    The CLI exits with status 1 on these.
    """


class VerificationError(NilformError):
    """An independent check disagreed with a stated result.

    Raised for inconsistent sl2 systems, exhausted coefficient searches and
    non-cyclotomic factors. The CLI exits with status 2 on these.
    """
