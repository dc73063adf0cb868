"""HamNoSys symbol alphabet loaded from a CSV manifest.

The manifest columns are ``codepoint_hex,alias,block,subclass,class_index,
display_name``. Lines starting with ``#`` are comments; a comment of the form
``# version: <id>`` names the inventory version. Within each block the
``class_index`` column must equal the row's ordinal position.
"""

from __future__ import annotations

import csv
import hashlib
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .errors import (
    DuplicateSymbol,
    GapInIndices,
    IndexOutOfRange,
    MalformedRow,
    MissingBlock,
    UnknownSymbol,
)

COLUMNS = ("codepoint_hex", "alias", "block", "subclass", "class_index", "display_name")


class Block(str, Enum):
    SYMMETRY = "Symmetry"
    NON_MANUAL = "NonManual"
    HANDSHAPE_BASE = "HandshapeBase"
    THUMB_POSITION = "ThumbPosition"
    BENDING = "Bending"
    EXTENDED_FINGER_DIRECTION = "ExtendedFingerDirection"
    PALM_ORIENTATION = "PalmOrientation"
    LOCATION_LR = "LocationLR"
    LOCATION_TB = "LocationTB"
    LOCATION_DISTANCE = "LocationDistance"
    MOVEMENT = "Movement"
    PUNCTUATION = "Punctuation"


class MovementKind(str, Enum):
    STRAIGHT = "Straight"
    CURVED = "Curved"
    CIRCULAR = "Circular"
    TARGETED = "Targeted"
    COMBINATOR = "Combinator"


#: blocks without which no sign can be parsed
MANDATORY_BLOCKS = (
    Block.HANDSHAPE_BASE,
    Block.EXTENDED_FINGER_DIRECTION,
    Block.PALM_ORIENTATION,
)

#: cardinalities of the HamNoSys 4.0 blocks the reference manifest must reproduce
REFERENCE_CARDINALITIES = {
    Block.SYMMETRY: 8,
    Block.HANDSHAPE_BASE: 12,
    Block.THUMB_POSITION: 4,
    Block.BENDING: 6,
    Block.EXTENDED_FINGER_DIRECTION: 26,
    Block.PALM_ORIENTATION: 8,
    Block.LOCATION_TB: 36,
    Block.LOCATION_LR: 6,
    Block.LOCATION_DISTANCE: 7,
}

_ALIAS_RE = re.compile(r"^[A-Z][A-Z0-9_]*$")
_VERSION_RE = re.compile(r"^#\s*version\s*:\s*(\S+)")


@dataclass(frozen=True)
class SymbolEntry:
    codepoint: int
    alias: str
    block: Block
    subclass: MovementKind | None
    class_index: int
    display_name: str
    #: position among entries of the same movement kind (movement rows only)
    kind_index: int | None = None

    @property
    def char(self) -> str:
        return chr(self.codepoint)


@dataclass(frozen=True)
class SymbolInventory:
    """Immutable, indexed collection of :class:`SymbolEntry`."""

    entries: tuple[SymbolEntry, ...]
    version: str
    _by_codepoint: Mapping[int, SymbolEntry] = field(repr=False, compare=False)
    _by_alias: Mapping[str, SymbolEntry] = field(repr=False, compare=False)
    _by_block: Mapping[Block, tuple[SymbolEntry, ...]] = field(repr=False, compare=False)
    _by_kind: Mapping[MovementKind, tuple[SymbolEntry, ...]] = field(repr=False, compare=False)

    @classmethod
    def from_entries(cls, entries, version: str = "unversioned") -> "SymbolInventory":
        entries = tuple(entries)
        by_block: dict[Block, list[SymbolEntry]] = {b: [] for b in Block}
        by_kind: dict[MovementKind, list[SymbolEntry]] = {k: [] for k in MovementKind}
        for e in entries:
            by_block[e.block].append(e)
            if e.subclass is not None:
                by_kind[e.subclass].append(e)
        return cls(
            entries=entries,
            version=version,
            _by_codepoint=MappingProxyType({e.codepoint: e for e in entries}),
            _by_alias=MappingProxyType({e.alias: e for e in entries}),
            _by_block=MappingProxyType(
                {b: tuple(sorted(v, key=lambda e: e.class_index)) for b, v in by_block.items()}
            ),
            _by_kind=MappingProxyType({k: tuple(v) for k, v in by_kind.items()}),
        )

    @property
    def block_counts(self) -> dict[Block, int]:
        return {b: len(v) for b, v in self._by_block.items()}

    def count(self, block: Block) -> int:
        return len(self._by_block[block])

    def block(self, block: Block) -> tuple[SymbolEntry, ...]:
        return self._by_block[block]

    def movement(self, kind: MovementKind) -> tuple[SymbolEntry, ...]:
        """Entries of one movement kind, in class-index order."""
        return self._by_kind[kind]

    def entry(self, block: Block, index: int) -> SymbolEntry:
        entries = self._by_block[block]
        if not 0 <= index < len(entries):
            raise IndexOutOfRange(f"class index {index} out of range for {block.value} "
                                  f"({len(entries)} classes)")
        return entries[index]

    def get(self, key) -> SymbolEntry | None:
        if isinstance(key, int):
            return self._by_codepoint.get(key)
        if isinstance(key, str):
            if len(key) == 1:
                return self._by_codepoint.get(ord(key))
            return self._by_alias.get(key)
        return None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def lookup(inventory: SymbolInventory, key) -> SymbolEntry:
    """Return the entry for a codepoint (int or 1-char str) or an alias.

    Raises
    ------
    UnknownSymbol
        If no entry matches ``key``.
    """
    entry = inventory.get(key)
    if entry is None:
        raise UnknownSymbol(key)
    return entry


def reference_manifest_path() -> Path:
    return Path(str(resources.files("hamcheck") / "data" / "hamnosys_ref.csv"))


def load_inventory(manifest_path=None) -> SymbolInventory:
    """Load and validate a manifest; ``None`` loads the bundled reference."""
    path = Path(manifest_path) if manifest_path is not None else reference_manifest_path()
    text = path.read_text(encoding="utf-8")
    return parse_manifest(text)


def parse_manifest(text: str) -> SymbolInventory:
    version = None
    data_lines: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            m = _VERSION_RE.match(stripped)
            if m and version is None:
                version = m.group(1)
            continue
        data_lines.append((lineno, line))
    if version is None:
        version = "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]

    if not data_lines:
        raise MalformedRow(1, "missing header row")
    header_line, header = data_lines[0]
    if tuple(c.strip() for c in next(csv.reader([header]))) != COLUMNS:
        raise MalformedRow(header_line, f"header must be {','.join(COLUMNS)}")

    entries: list[SymbolEntry] = []
    seen_cp: dict[int, int] = {}
    seen_alias: dict[str, int] = {}
    ordinal: dict[Block, int] = {}
    kind_ordinal: dict[MovementKind, int] = {}
    for lineno, line in data_lines[1:]:
        row = next(csv.reader([line]))
        if len(row) != len(COLUMNS):
            raise MalformedRow(lineno, f"expected {len(COLUMNS)} columns, got {len(row)}")
        cp_hex, alias, block_name, sub_name, idx_text, display = (c.strip() for c in row)
        try:
            cp = int(cp_hex, 16)
            if not 0 <= cp <= 0x10FFFF or 0xD800 <= cp <= 0xDFFF:
                raise ValueError
        except ValueError:
            raise MalformedRow(lineno, f"bad codepoint {cp_hex!r}") from None
        if chr(cp) in ": \t\r\n" or chr(cp).isspace():
            raise MalformedRow(lineno, f"codepoint {cp_hex} is reserved")
        if not _ALIAS_RE.match(alias):
            raise MalformedRow(lineno, f"bad alias {alias!r}")
        try:
            block = Block(block_name)
        except ValueError:
            raise MalformedRow(lineno, f"unknown block {block_name!r}") from None
        subclass = None
        if block is Block.MOVEMENT:
            try:
                subclass = MovementKind(sub_name)
            except ValueError:
                raise MalformedRow(lineno, f"movement row needs a subclass, got {sub_name!r}") from None
        elif sub_name:
            raise MalformedRow(lineno, "subclass only allowed for Movement rows")
        try:
            class_index = int(idx_text)
        except ValueError:
            raise MalformedRow(lineno, f"bad class_index {idx_text!r}") from None

        if cp in seen_cp:
            raise DuplicateSymbol(f"U+{cp:04X}", (seen_cp[cp], lineno))
        if alias in seen_alias:
            raise DuplicateSymbol(alias, (seen_alias[alias], lineno))
        seen_cp[cp] = lineno
        seen_alias[alias] = lineno

        expected = ordinal.get(block, 0)
        if class_index != expected:
            raise GapInIndices(
                f"line {lineno}: {block.value} class_index {class_index}, expected {expected}"
            )
        ordinal[block] = expected + 1
        kind_index = None
        if subclass is not None:
            kind_index = kind_ordinal.get(subclass, 0)
            kind_ordinal[subclass] = kind_index + 1
        entries.append(SymbolEntry(cp, alias, block, subclass, class_index, display, kind_index))

    for block in MANDATORY_BLOCKS:
        if ordinal.get(block, 0) == 0:
            raise MissingBlock(block.value)
    return SymbolInventory.from_entries(entries, version)
