"""Exception taxonomy."""


class KolmlabError(Exception):
    """Base class for package errors."""


class ConfigError(KolmlabError):
    """Invalid configuration or budget outside the hard caps."""


class NullEventError(KolmlabError):
    """Conditioning on an event of probability zero."""


class SnapshotError(KolmlabError):
    """Base class for witness-snapshot problems."""


class DigestMismatchError(SnapshotError):
    """Snapshot content does not match its embedded digest."""


class IsaVersionError(SnapshotError):
    """Snapshot was produced under a different opcode table."""


class MalformedRecordError(SnapshotError):
    """Snapshot line cannot be parsed."""
