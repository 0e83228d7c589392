"""Exception hierarchy shared across the package.

Every domain error raised by siterank derives from SiterankError so the
CLI can map any of them to a single nonzero exit code with a one-line
diagnostic.
"""


class SiterankError(Exception):
    """Base class for all siterank domain errors."""


class ArtifactError(SiterankError):
    """A persisted artifact is unreadable, corrupt, or version-mismatched."""


class StateMismatch(SiterankError):
    """Loaded artifacts were not produced from one another (checksum conflict)."""
