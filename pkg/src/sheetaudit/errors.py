"""Exception types shared across the toolkit."""

from __future__ import annotations


class AuditError(Exception):
    """Base class for all errors raised by sheetaudit."""


class NotAZipArchive(AuditError):
    """The input file is not a ZIP container."""


class EncryptedContainer(AuditError):
    """The container is password-protected; decryption is out of scope."""


class MissingContentPart(AuditError):
    """The archive has no content.xml entry."""


class UnreadableEntry(AuditError):
    """An archive entry exists but its bytes cannot be read."""


class UnknownPart(AuditError):
    """A part name was requested that is not in the manifest."""


class MalformedXml(AuditError):
    """An XML part failed to parse.

    `offset` is the byte offset of the first error when known, else -1.
    """

    def __init__(self, part: str, message: str, offset: int = -1):
        super().__init__(f"{part}: {message} (byte offset {offset})")
        self.part = part
        self.offset = offset


class BadCellAddress(AuditError):
    """A change record points at a sheet or cell that does not exist."""


class FormulaSyntaxError(AuditError):
    """A formula failed to parse.

    `position` is the character offset into the source text; `expected`
    names what the parser was looking for there.
    """

    def __init__(self, source: str, position: int, expected: str):
        super().__init__(f"at {position} in {source!r}: expected {expected}")
        self.source = source
        self.position = position
        self.expected = expected


class NotFoldable(AuditError):
    """Constant folding was asked to evaluate something it does not cover."""


class InvalidFilter(AuditError):
    """A filter specification is malformed (bad syntax, reversed range...)."""


class CheckpointNotFound(AuditError):
    """A checkpoint names a record id or instant outside the change log."""


class UnreplayableRecord(AuditError):
    """The change log contains records that cannot be undone.

    `earliest_reachable` is the timestamp of the newest such record:
    checkpoints at or after it can still be reconstructed.
    """

    def __init__(self, record_id: str, kind: str, earliest_reachable):
        super().__init__(
            f"record {record_id} ({kind}) cannot be replayed; "
            f"earliest reachable checkpoint: {earliest_reachable}"
        )
        self.record_id = record_id
        self.kind = kind
        self.earliest_reachable = earliest_reachable
