"""Numerical multilabels: reduction, reverse lookup and decoding efficiency.

A parsed sign is reduced to ten class indices::

    symmetry, handshape_base, thumb, bending, efd, palm,
    location_lr, location_tb, distance, movement_primary

with -1 marking an absent block. The reduction drops non-manual features,
the second-hand description, the alternate of an intermediate position and
every movement after the first. ``movement_primary`` numbers straight
movements first, then curved, circular and targeted ones (0-25, 26-33, 34,
35 with the reference alphabet).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from .errors import (
    AllRecordsUnparsable,
    EmptyCorpus,
    IndexOutOfRange,
    InventoryVersionMismatch,
)
from .inventory import Block, MovementKind, SymbolInventory
from .parser import ParsedSign

ABSENT = -1
REDUCTION_ID = "slots10-v1"

MOVEMENT_KIND_ORDER = (
    MovementKind.STRAIGHT,
    MovementKind.CURVED,
    MovementKind.CIRCULAR,
    MovementKind.TARGETED,
)


class MultiLabel(NamedTuple):
    symmetry: int = ABSENT
    handshape_base: int = ABSENT
    thumb: int = ABSENT
    bending: int = ABSENT
    efd: int = ABSENT
    palm: int = ABSENT
    location_lr: int = ABSENT
    location_tb: int = ABSENT
    distance: int = ABSENT
    movement_primary: int = ABSENT

    def to_text(self) -> str:
        return ",".join(str(v) for v in self)

    @classmethod
    def from_text(cls, text: str) -> "MultiLabel":
        parts = [p.strip() for p in text.strip().split(",")]
        if len(parts) != len(cls._fields):
            raise ValueError(f"multilabel needs {len(cls._fields)} comma-separated integers, "
                             f"got {len(parts)}")
        values = [int(p) for p in parts]
        if any(v < ABSENT for v in values):
            raise ValueError("multilabel slots must be >= -1")
        return cls(*values)


#: block behind each slot; the movement slot spans several kinds
SLOT_BLOCKS: tuple[Block, ...] = (
    Block.SYMMETRY,
    Block.HANDSHAPE_BASE,
    Block.THUMB_POSITION,
    Block.BENDING,
    Block.EXTENDED_FINGER_DIRECTION,
    Block.PALM_ORIENTATION,
    Block.LOCATION_LR,
    Block.LOCATION_TB,
    Block.LOCATION_DISTANCE,
    Block.MOVEMENT,
)


def movement_offsets(inventory: SymbolInventory) -> dict[MovementKind, int]:
    offsets, total = {}, 0
    for kind in MOVEMENT_KIND_ORDER:
        offsets[kind] = total
        total += len(inventory.movement(kind))
    return offsets


def slot_sizes(inventory: SymbolInventory) -> tuple[int, ...]:
    """Number of classes per slot (movement counts only atom kinds)."""
    n_mov = sum(len(inventory.movement(k)) for k in MOVEMENT_KIND_ORDER)
    return tuple(n_mov if b is Block.MOVEMENT else inventory.count(b) for b in SLOT_BLOCKS)


def movement_class(inventory: SymbolInventory, kind: MovementKind, index: int) -> int:
    return movement_offsets(inventory)[kind] + index


def encode(sign: ParsedSign, inventory: SymbolInventory | None = None) -> MultiLabel:
    """Reduce ``sign`` to its multilabel.

    ``inventory`` supplies the movement-kind offsets; without it the
    reference layout (26 straight, 8 curved, 1 circular, 1 targeted) is used.
    """
    hs, hp, loc = sign.handshape, sign.hand_position, sign.location
    movement = ABSENT
    if sign.movement:
        atom = sign.movement[0]
        offsets = _REFERENCE_OFFSETS if inventory is None else movement_offsets(inventory)
        movement = offsets[atom.kind] + atom.index

    def opt(v):
        return ABSENT if v is None else v

    return MultiLabel(
        symmetry=opt(sign.symmetry),
        handshape_base=hs.base,
        thumb=opt(hs.thumb),
        bending=opt(hs.bending),
        efd=hp.efd.primary,
        palm=hp.palm.primary,
        location_lr=ABSENT if loc is None else opt(loc.lr),
        location_tb=ABSENT if loc is None else opt(loc.tb),
        distance=ABSENT if loc is None else opt(loc.distance),
        movement_primary=movement,
    )


_REFERENCE_OFFSETS = {
    MovementKind.STRAIGHT: 0,
    MovementKind.CURVED: 26,
    MovementKind.CIRCULAR: 34,
    MovementKind.TARGETED: 35,
}


def validate(label: MultiLabel, inventory: SymbolInventory) -> None:
    """Raise :class:`IndexOutOfRange` if any slot exceeds its block size."""
    for name, value, size in zip(MultiLabel._fields, label, slot_sizes(inventory)):
        if value != ABSENT and not 0 <= value < size:
            raise IndexOutOfRange(f"slot {name}={value} outside 0..{size - 1}")


# -- corpus-level ------------------------------------------------------------

class GlossKey(NamedTuple):
    gloss_id: str
    language: str


@dataclass(frozen=True)
class CorpusIndex:
    """Inverse map multilabel -> glosses carrying it."""

    inventory_version: str
    entries: Mapping[MultiLabel, tuple[GlossKey, ...]]

    def __len__(self) -> int:
        return len(self.entries)


def _encoded_records(corpus):
    return [r for r in corpus.records if r.multilabel is not None]


def build_index(corpus) -> CorpusIndex:
    if not corpus.records:
        raise EmptyCorpus(f"corpus {corpus.name!r} has no records")
    groups: dict[MultiLabel, set[GlossKey]] = defaultdict(set)
    for r in _encoded_records(corpus):
        groups[r.multilabel].add(GlossKey(r.gloss_id, r.language))
    entries = {k: tuple(sorted(groups[k])) for k in sorted(groups)}
    return CorpusIndex(corpus.inventory_version, entries)


def decode(label: MultiLabel, index: CorpusIndex,
           inventory_version: str | None = None) -> list[GlossKey]:
    """All glosses whose multilabel equals ``label``, sorted by gloss id."""
    if inventory_version is not None and inventory_version != index.inventory_version:
        raise InventoryVersionMismatch(
            f"label from inventory {inventory_version!r}, index built on {index.inventory_version!r}"
        )
    return list(index.entries.get(MultiLabel(*label), ()))


@dataclass(frozen=True)
class EtaResult:
    unique_glosses: int
    singly_labeled: int
    eta: float
    collision_histogram: dict[int, int]
    max_collision: int
    eta_exact: Fraction = field(repr=False)

    @property
    def eta_percent(self) -> float:
        return float(self.eta_exact * 100)


class GlossGroups:
    """Partial map multilabel -> set of gloss texts.

    Partials built from disjoint record subsets combine with ``merge``
    (set union per key), which is associative and commutative.
    """

    def __init__(self, mapping: dict[MultiLabel, set[str]] | None = None):
        self.mapping: dict[MultiLabel, set[str]] = defaultdict(set)
        for k, v in (mapping or {}).items():
            self.mapping[k] |= set(v)

    @classmethod
    def from_records(cls, records: Iterable) -> "GlossGroups":
        g = cls()
        for r in records:
            if r.multilabel is not None:
                g.mapping[r.multilabel].add(r.gloss_text)
        return g

    def merge(self, other: "GlossGroups") -> "GlossGroups":
        out = GlossGroups(self.mapping)
        for k, v in other.mapping.items():
            out.mapping[k] |= v
        return out

    def result(self) -> EtaResult:
        return _eta_from_groups(self.mapping)


def _eta_from_groups(mapping: Mapping[MultiLabel, set[str]]) -> EtaResult:
    # a gloss text carrying several multilabels links their groups, so
    # collision groups are the connected components of the gloss/label graph
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for glosses in mapping.values():
        ordered = sorted(glosses)
        for g in ordered:
            parent.setdefault(g, g)
        root = find(ordered[0])
        for g in ordered[1:]:
            r = find(g)
            if r != root:
                parent[max(r, root)] = min(r, root)
                root = min(r, root)

    if not parent:
        raise AllRecordsUnparsable("no record could be encoded")
    sizes = Counter(find(g) for g in parent)
    histogram = Counter(sizes.values())
    unique = len(parent)
    singly = histogram.get(1, 0)
    exact = Fraction(singly, unique)
    return EtaResult(
        unique_glosses=unique,
        singly_labeled=singly,
        eta=float(exact),
        collision_histogram=dict(sorted(histogram.items())),
        max_collision=max(histogram),
        eta_exact=exact,
    )


def decoding_efficiency(corpus) -> EtaResult:
    """Fraction of distinct gloss texts whose multilabel identifies them alone."""
    if not corpus.records:
        raise EmptyCorpus(f"corpus {corpus.name!r} has no records")
    return GlossGroups.from_records(corpus.records).result()


def decoding_efficiency_by_language(corpus) -> dict[str, EtaResult]:
    if not corpus.records:
        raise EmptyCorpus(f"corpus {corpus.name!r} has no records")
    by_lang: dict[str, list] = defaultdict(list)
    for r in corpus.records:
        by_lang[r.language].append(r)
    out = {}
    for lang in sorted(by_lang):
        try:
            out[lang] = GlossGroups.from_records(by_lang[lang]).result()
        except AllRecordsUnparsable:
            continue
    if not out:
        raise AllRecordsUnparsable("no record could be encoded")
    return out
