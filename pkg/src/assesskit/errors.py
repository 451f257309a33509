"""Exception types shared across the package."""

from __future__ import annotations


class CatalogError(Exception):
    """A catalog file or catalog value is unusable: bad syntax, bad shape,
    or a structural rule violation detected during strict parsing."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(message if location is None else f"{location}: {message}")


class AssessmentError(Exception):
    """An assessment operation was rejected: unknown requirement, tier rule
    violation, out-of-range value, or a broken precondition."""


class AssessmentFormatError(AssessmentError):
    """An assessment file could not be read: JSON syntax or schema violation."""


class DigestMismatchError(AssessmentError):
    """The assessment file references a catalog digest that does not match
    the catalog supplied at load time. Loadable only with an explicit override."""

    def __init__(self, expected: str, actual: str):
        self.expected = expected
        self.actual = actual
        super().__init__(
            "assessment references catalog digest "
            f"{expected[:12]}... but the supplied catalog has {actual[:12]}..."
        )


class ReportError(Exception):
    """A report cannot be produced from the given inputs."""
