"""Exception hierarchy.

Every exception carries a ``code`` equal to its class name; the CLI prints it
as the machine-readable error token.
"""

from __future__ import annotations


class HamcheckError(Exception):
    """Base class for all data errors raised by hamcheck."""

    @property
    def code(self) -> str:
        return type(self).__name__


# -- inventory ---------------------------------------------------------------

class ManifestError(HamcheckError):
    pass


class DuplicateSymbol(ManifestError):
    def __init__(self, key: str, lines: tuple[int, int]):
        self.key = key
        self.lines = lines
        super().__init__(f"duplicate symbol {key!r} on lines {lines[0]} and {lines[1]}")


class GapInIndices(ManifestError):
    pass


class MissingBlock(ManifestError):
    def __init__(self, block: str):
        self.block = block
        super().__init__(f"mandatory block {block} has no entries")


class MalformedRow(ManifestError):
    def __init__(self, line: int, reason: str):
        self.line = line
        super().__init__(f"line {line}: {reason}")


class UnknownSymbol(HamcheckError, LookupError):
    def __init__(self, key, span: tuple[int, int] | None = None):
        self.key = key
        self.span = span
        super().__init__(f"unknown symbol {key!r}")


class IndexOutOfRange(HamcheckError, IndexError):
    pass


# -- labels ------------------------------------------------------------------

class UnterminatedAlias(HamcheckError):
    def __init__(self, span: tuple[int, int]):
        self.span = span
        super().__init__(f"alias starting at byte {span[0]} has no closing ':'")


class LabelParseError(HamcheckError):
    """Raised by the convenience readers when a label has Error diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = next(d for d in self.diagnostics if d.severity == "error")
        self._code = first.code
        super().__init__(first.message)

    @property
    def code(self) -> str:
        return self._code


# -- codec / corpus ----------------------------------------------------------

class InventoryVersionMismatch(HamcheckError):
    pass


class EmptyCorpus(HamcheckError):
    pass


class AllRecordsUnparsable(HamcheckError):
    pass


class FileUnreadable(HamcheckError):
    pass


class DuplicateGlossId(HamcheckError):
    pass


class NoEligibleRecords(HamcheckError):
    pass


class WriteFailed(HamcheckError):
    pass


# -- pose --------------------------------------------------------------------

class SchemaError(HamcheckError):
    pass


class TopologyMismatch(HamcheckError):
    pass


class TooShort(HamcheckError):
    pass


class NoExtremumFound(HamcheckError):
    pass


class RoleUnresolved(HamcheckError):
    pass


class FrameOutOfRange(HamcheckError, IndexError):
    pass


class LandmarkNotVisible(HamcheckError):
    def __init__(self, role: str, frame: int):
        self.role = role
        self.frame = frame
        super().__init__(f"landmark {role!r} not visible at frame {frame}")
