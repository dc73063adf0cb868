"""Tokenizer, parser and canonical serializer for HamNoSys labels.

A label is a string of inventory symbols written either raw (one Unicode
scalar per symbol) or as ``:ALIAS:`` atoms; both forms may be mixed and
whitespace between symbols is ignored. Blocks are read in the order

    [symmetry] [non-manual...] base [thumb] [bending] efd palm
    [location] [second hand] [movement...]

The parser recovers from out-of-order symbols by skipping them with a
warning, so inconsistent corpus labels still yield a sign. ``strict=True``
turns every warning into an error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import IndexOutOfRange, LabelParseError, UnknownSymbol, UnterminatedAlias
from .inventory import Block, MovementKind, SymbolEntry, SymbolInventory, lookup

ALT_ALIAS = "BACKSLASH"
HAND_BEGIN_ALIAS = "HAND2_BEGIN"
HAND_END_ALIAS = "HAND2_END"
PARALLEL_ALIAS = "MOV_PAR"
SEQUENTIAL_ALIAS = "MOV_SEQ"


class SourceForm(str, Enum):
    RAW = "raw"
    ALIAS = "alias"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


class Combination(str, Enum):
    SEQUENTIAL = "sequential"
    PARALLEL = "parallel"


@dataclass(frozen=True)
class Token:
    entry: SymbolEntry
    span: tuple[int, int]
    source_form: SourceForm


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    span: tuple[int, int]
    message: str

    def __str__(self) -> str:
        return f"{self.severity.value} {self.code} {self.span[0]}:{self.span[1]} {self.message}"


@dataclass(frozen=True)
class Alternation:
    primary: int
    alternate: int | None = None


@dataclass(frozen=True)
class Handshape:
    base: int
    thumb: int | None = None
    bending: int | None = None


@dataclass(frozen=True)
class HandPosition:
    efd: Alternation
    palm: Alternation


@dataclass(frozen=True)
class Location:
    lr: int | None = None
    tb: int | None = None
    distance: int | None = None


@dataclass(frozen=True)
class MovementAtom:
    kind: MovementKind
    index: int
    combination: Combination = Combination.SEQUENTIAL


@dataclass(frozen=True)
class HandDescription:
    handshape: Handshape
    hand_position: HandPosition
    location: Location | None = None


@dataclass(frozen=True, kw_only=True)
class ParsedSign:
    handshape: Handshape
    hand_position: HandPosition
    symmetry: int | None = None
    non_manual: tuple[int, ...] = ()
    location: Location | None = None
    movement: tuple[MovementAtom, ...] = ()
    second_hand: HandDescription | None = None

    @property
    def in_neutral_space(self) -> bool:
        return self.location is None


# -- tokenizer ---------------------------------------------------------------

_SCAN_RE = re.compile(r":([^:]*):|(:)|(\s+)|(.)", re.DOTALL)


def _utf8_len(ch: str) -> int:
    o = ord(ch)
    return 1 if o < 0x80 else 2 if o < 0x800 else 3 if o < 0x10000 else 4


def _byte_offsets(source: str) -> list[int]:
    offsets = [0] * (len(source) + 1)
    b = 0
    for i, ch in enumerate(source):
        offsets[i] = b
        b += _utf8_len(ch)
    offsets[len(source)] = b
    return offsets


def tokenize(source: str, inventory: SymbolInventory) -> list[Token]:
    """Split ``source`` into inventory tokens with UTF-8 byte spans.

    Raises
    ------
    UnknownSymbol
        For the first scalar or alias not in the inventory (``span`` set).
    UnterminatedAlias
        For a ``:`` with no closing ``:``.
    """
    if source.isascii():
        offsets = None
    else:
        offsets = _byte_offsets(source)
    tokens: list[Token] = []
    for m in _SCAN_RE.finditer(source):
        start, end = m.span()
        if offsets is not None:
            start, end = offsets[start], offsets[end]
        alias, lone_colon, space, char = m.groups()
        if space is not None:
            continue
        if lone_colon is not None:
            raise UnterminatedAlias((start, len(source.encode("utf-8"))))
        if alias is not None:
            entry = inventory.get(alias) if len(alias) != 1 else None
            if entry is None:
                raise UnknownSymbol(alias, (start, end))
            tokens.append(Token(entry, (start, end), SourceForm.ALIAS))
        else:
            entry = inventory.get(ord(char))
            if entry is None:
                raise UnknownSymbol(char, (start, end))
            tokens.append(Token(entry, (start, end), SourceForm.RAW))
    return tokens


# -- parser ------------------------------------------------------------------

# token categories, valued by their position in the block order
_SYM, _NM, _BASE, _THUMB, _BEND, _EFD, _PALM, _LOC, _HAND2, _MOV = range(10)
_COMB, _ALT, _HAND_BEGIN, _HAND_END, _OTHER = 20, 21, 22, 23, 24

_CATEGORY = {
    Block.SYMMETRY: _SYM,
    Block.NON_MANUAL: _NM,
    Block.HANDSHAPE_BASE: _BASE,
    Block.THUMB_POSITION: _THUMB,
    Block.BENDING: _BEND,
    Block.EXTENDED_FINGER_DIRECTION: _EFD,
    Block.PALM_ORIENTATION: _PALM,
    Block.LOCATION_LR: _LOC,
    Block.LOCATION_TB: _LOC,
    Block.LOCATION_DISTANCE: _LOC,
}
_PUNCT = {ALT_ALIAS: _ALT, HAND_BEGIN_ALIAS: _HAND_BEGIN, HAND_END_ALIAS: _HAND_END}
_LOC_SLOT = {Block.LOCATION_LR: "lr", Block.LOCATION_TB: "tb", Block.LOCATION_DISTANCE: "distance"}
_BLOCK_NAMES = {_BASE: "HandshapeBase", _EFD: "ExtendedFingerDirection", _PALM: "PalmOrientation"}


def _category(entry: SymbolEntry) -> int:
    cat = _CATEGORY.get(entry.block)
    if cat is not None:
        return cat
    if entry.block is Block.MOVEMENT:
        return _COMB if entry.subclass is MovementKind.COMBINATOR else _MOV
    return _PUNCT.get(entry.alias, _OTHER)


class _Parser:
    def __init__(self, tokens: list[Token], strict: bool):
        self.tokens = tokens
        self.cats = [_category(t.entry) for t in tokens]
        self.i = 0
        self.strict = strict
        self.diagnostics: list[Diagnostic] = []

    def error(self, code, span, message):
        self.diagnostics.append(Diagnostic(Severity.ERROR, code, span, message))

    def warn(self, code, span, message):
        sev = Severity.ERROR if self.strict else Severity.WARNING
        self.diagnostics.append(Diagnostic(sev, code, span, message))

    @property
    def end_span(self) -> tuple[int, int]:
        end = self.tokens[-1].span[1] if self.tokens else 0
        return (end, end)

    def _skip_symbol(self, code: str, message: str) -> None:
        tok = self.tokens[self.i]
        self.warn(code, tok.span, message)
        self.i += 1
        # an alternation glued to the skipped symbol goes with it
        if (self.i + 1 < len(self.tokens) and self.cats[self.i] == _ALT
                and self.tokens[self.i + 1].entry.block is tok.entry.block):
            self.i += 2

    def _skip_group(self) -> None:
        depth = 0
        while self.i < len(self.tokens):
            cat = self.cats[self.i]
            self.i += 1
            if cat == _HAND_BEGIN:
                depth += 1
            elif cat == _HAND_END:
                depth -= 1
                if depth == 0:
                    return

    def _take_symbol(self) -> tuple[SymbolEntry, SymbolEntry | None]:
        tok = self.tokens[self.i]
        self.i += 1
        if self.i < len(self.tokens) and self.cats[self.i] == _ALT:
            alt = self.tokens[self.i]
            nxt = self.tokens[self.i + 1] if self.i + 1 < len(self.tokens) else None
            if nxt is not None and nxt.entry.block is tok.entry.block:
                self.i += 2
                return tok.entry, nxt.entry
            self.error("DanglingAlternation", alt.span,
                       f"'\\' after {tok.entry.alias} has no {tok.entry.block.value} operand")
            self.i += 1
        return tok.entry, None

    def _scalar(self, field: str) -> int:
        tok = self.tokens[self.i]
        entry, alternate = self._take_symbol()
        if alternate is not None:
            self.warn("AlternationDropped", tok.span,
                      f"intermediate position is not kept for {field}; using {entry.alias}")
        return entry.class_index

    def description(self, top: bool):
        fields: dict = {"non_manual": [], "movement": [], "loc": {}}
        last = -1
        pending = None  # combinator token awaiting its atom
        while self.i < len(self.tokens):
            tok = self.tokens[self.i]
            cat = self.cats[self.i]

            if pending is not None and cat != _MOV:
                self.error("DanglingCombinator", pending.span,
                           f"{pending.entry.alias} is not followed by a movement")
                pending = None

            if cat == _ALT:
                self.error("DanglingAlternation", tok.span, "'\\' without a left operand")
                self.i += 1
                continue
            if cat == _HAND_END:
                if not top:
                    break
                self.warn("UnmatchedHandEnd", tok.span, "closing bracket without an opening one")
                self.i += 1
                continue
            if cat == _HAND_BEGIN:
                if not top:
                    self.error("NestedHandDescription", tok.span,
                               "nested hand descriptions are not supported")
                    self._skip_group()
                elif "second_hand" in fields or last > _HAND2:
                    self.error("ExtraHandDescription", tok.span,
                               "only one second-hand description may follow the first")
                    self._skip_group()
                else:
                    self.i += 1
                    fields["second_hand"] = self.description(top=False)
                    if self.i < len(self.tokens) and self.cats[self.i] == _HAND_END:
                        self.i += 1
                    else:
                        self.error("UnclosedHandDescription", tok.span,
                                   "second-hand description is not closed")
                    last = _HAND2
                continue
            if cat == _OTHER:
                self._skip_symbol("UnexpectedSymbol", f"{tok.entry.alias} is not valid here")
                continue
            if not top and cat in (_SYM, _NM, _MOV, _COMB):
                self._skip_symbol("BlockOrderViolation",
                                  f"{tok.entry.alias} is not allowed in a second-hand description")
                continue

            if cat == _COMB:
                pending = tok
                self.i += 1
                last = max(last, _MOV)
                continue

            repeatable = cat in (_NM, _MOV, _LOC)
            if cat < last or (cat == last and not repeatable):
                self._skip_symbol("BlockOrderViolation",
                                  f"{tok.entry.alias} ({tok.entry.block.value}) is out of block order")
                continue
            if cat == _LOC:
                slot = _LOC_SLOT[tok.entry.block]
                if slot in fields["loc"]:
                    self._skip_symbol("BlockOrderViolation",
                                      f"location {slot} given twice")
                    continue
                fields["loc"][slot] = self._scalar("location")
            elif cat == _EFD or cat == _PALM:
                entry, alternate = self._take_symbol()
                fields[cat] = Alternation(entry.class_index,
                                          None if alternate is None else alternate.class_index)
            elif cat == _NM:
                fields["non_manual"].append(self._scalar("non-manual features"))
            elif cat == _MOV:
                kind, local = tok.entry.subclass, tok.entry.kind_index
                self._scalar("movement")
                combination = Combination.SEQUENTIAL
                if pending is not None:
                    if pending.entry.alias == PARALLEL_ALIAS:
                        if fields["movement"]:
                            combination = Combination.PARALLEL
                        else:
                            self.warn("LeadingCombinator", pending.span,
                                      "first movement cannot be parallel to a previous one")
                    pending = None
                fields["movement"].append(MovementAtom(kind, local, combination))
            else:
                fields[cat] = self._scalar(tok.entry.block.value)
            last = cat

        if pending is not None:
            self.error("DanglingCombinator", pending.span,
                       f"{pending.entry.alias} is not followed by a movement")

        missing = [c for c in (_BASE, _EFD, _PALM) if c not in fields]
        where = "" if top else "second hand "
        for c in missing:
            self.error("MissingMandatoryBlock", self.end_span, f"{where}{_BLOCK_NAMES[c]} is missing")
        if missing:
            return None

        loc = fields["loc"]
        location = Location(**loc) if loc else None
        handshape = Handshape(fields[_BASE], fields.get(_THUMB), fields.get(_BEND))
        position = HandPosition(fields[_EFD], fields[_PALM])
        if not top:
            return HandDescription(handshape, position, location)
        return ParsedSign(
            handshape=handshape,
            hand_position=position,
            symmetry=fields.get(_SYM),
            non_manual=tuple(fields["non_manual"]),
            location=location,
            movement=tuple(fields["movement"]),
            second_hand=fields.get("second_hand"),
        )


def parse_sign(tokens: list[Token], strict: bool = False) -> tuple[ParsedSign | None, list[Diagnostic]]:
    """Parse a token stream into a :class:`ParsedSign`.

    Returns the sign (``None`` if any Error diagnostic was produced) and the
    diagnostics in source order.
    """
    if not tokens:
        return None, [Diagnostic(Severity.ERROR, "EmptyLabel", (0, 0), "label is empty")]
    parser = _Parser(tokens, strict)
    sign = parser.description(top=True)
    diags = sorted(parser.diagnostics, key=lambda d: d.span)
    if any(d.severity is Severity.ERROR for d in diags):
        sign = None
    return sign, diags


def parse_label(source: str, inventory: SymbolInventory, strict: bool = False
                ) -> tuple[ParsedSign | None, list[Diagnostic]]:
    """Tokenize and parse; tokenizer failures become Error diagnostics."""
    try:
        tokens = tokenize(source, inventory)
    except UnknownSymbol as exc:
        return None, [Diagnostic(Severity.ERROR, "UnknownSymbol", exc.span, str(exc))]
    except UnterminatedAlias as exc:
        return None, [Diagnostic(Severity.ERROR, "UnterminatedAlias", exc.span, str(exc))]
    return parse_sign(tokens, strict=strict)


def read_sign(source: str, inventory: SymbolInventory, strict: bool = False) -> ParsedSign:
    """Like :func:`parse_label` but raise :class:`LabelParseError` on failure."""
    sign, diags = parse_label(source, inventory, strict)
    if sign is None:
        raise LabelParseError(diags)
    return sign


# -- serializer --------------------------------------------------------------

def _description_entries(inv: SymbolInventory, hs: Handshape, hp: HandPosition,
                         loc: Location | None, alt: SymbolEntry) -> list[SymbolEntry]:
    out = [inv.entry(Block.HANDSHAPE_BASE, hs.base)]
    if hs.thumb is not None:
        out.append(inv.entry(Block.THUMB_POSITION, hs.thumb))
    if hs.bending is not None:
        out.append(inv.entry(Block.BENDING, hs.bending))
    for block, a in ((Block.EXTENDED_FINGER_DIRECTION, hp.efd), (Block.PALM_ORIENTATION, hp.palm)):
        out.append(inv.entry(block, a.primary))
        if a.alternate is not None:
            out += [alt, inv.entry(block, a.alternate)]
    if loc is not None:
        for block, idx in ((Block.LOCATION_LR, loc.lr), (Block.LOCATION_TB, loc.tb),
                           (Block.LOCATION_DISTANCE, loc.distance)):
            if idx is not None:
                out.append(inv.entry(block, idx))
    return out


def _movement_entry(inv: SymbolInventory, atom: MovementAtom) -> SymbolEntry:
    entries = inv.movement(atom.kind)
    if not 0 <= atom.index < len(entries):
        raise IndexOutOfRange(f"movement index {atom.index} out of range for {atom.kind.value}")
    return entries[atom.index]


def serialize(sign: ParsedSign, inventory: SymbolInventory,
              form: SourceForm = SourceForm.ALIAS) -> str:
    """Emit ``sign`` in canonical block order (distance after body part)."""
    alt = lookup(inventory, ALT_ALIAS)
    entries: list[SymbolEntry] = []
    if sign.symmetry is not None:
        entries.append(inventory.entry(Block.SYMMETRY, sign.symmetry))
    entries += [inventory.entry(Block.NON_MANUAL, i) for i in sign.non_manual]
    entries += _description_entries(inventory, sign.handshape, sign.hand_position,
                                    sign.location, alt)
    if sign.second_hand is not None:
        h = sign.second_hand
        entries.append(lookup(inventory, HAND_BEGIN_ALIAS))
        entries += _description_entries(inventory, h.handshape, h.hand_position, h.location, alt)
        entries.append(lookup(inventory, HAND_END_ALIAS))
    for n, atom in enumerate(sign.movement):
        if n and atom.combination is Combination.PARALLEL:
            entries.append(lookup(inventory, PARALLEL_ALIAS))
        entries.append(_movement_entry(inventory, atom))
    if SourceForm(form) is SourceForm.ALIAS:
        return "".join(f":{e.alias}:" for e in entries)
    return "".join(e.char for e in entries)
