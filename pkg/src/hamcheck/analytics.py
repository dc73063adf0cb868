"""Per-class hand-location statistics and per-block class distributions.

Both reports are built from mergeable partial aggregates, so a corpus split
into parts and merged gives the same result as one pass over the whole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .codec import ABSENT, MOVEMENT_KIND_ORDER, SLOT_BLOCKS, MultiLabel, slot_sizes
from .corpus import Corpus, ParseStatus
from .errors import AllRecordsUnparsable, HamcheckError, NoEligibleRecords
from .inventory import Block, SymbolInventory, lookup
from .kinematics import (
    Hand,
    Norm,
    TopologyConfig,
    config_for,
    detect_initial_frame,
    load_landmark_series,
    pairwise_distance,
)

NEUTRAL = "neutral"
CENTER = "center"
DEFAULT_REFERENCE_LINE = "LOC_BREAST_LINE"


class Dimension(str, Enum):
    TOP_BOTTOM = "tb"
    LEFT_RIGHT = "lr"


@dataclass(frozen=True)
class RunningStats:
    """Count, mean and sum of squared deviations; merged with Chan's update."""

    n: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, values) -> "RunningStats":
        out = cls()
        for v in values:
            out = out.push(v)
        return out

    def push(self, x: float) -> "RunningStats":
        n = self.n + 1
        delta = x - self.mean
        mean = self.mean + delta / n
        return RunningStats(n, mean, self.m2 + delta * (x - mean))

    def merge(self, other: "RunningStats") -> "RunningStats":
        if other.n == 0:
            return self
        if self.n == 0:
            return other
        n = self.n + other.n
        delta = other.mean - self.mean
        mean = self.mean + delta * other.n / n
        m2 = self.m2 + other.m2 + delta * delta * self.n * other.n / n
        return RunningStats(n, mean, m2)

    @property
    def std(self) -> float | None:
        """Sample standard deviation; None for a single value."""
        if self.n < 2:
            return None
        return math.sqrt(max(self.m2, 0.0) / (self.n - 1))


@dataclass(frozen=True)
class ConsistencyRow:
    class_alias: str
    norm: Norm
    n: int
    mean: float
    std: float | None


@dataclass(frozen=True)
class ConsistencyReport:
    corpus: str
    dimension: Dimension
    hand: Hand
    v_min: float
    window: int
    reference_line: str | None
    rows: tuple[ConsistencyRow, ...]
    frames: dict[str, int] = field(default_factory=dict)
    excluded: dict[str, str] = field(default_factory=dict)
    stats: dict = field(default_factory=dict, repr=False, compare=False)
    class_order: dict = field(default_factory=dict, repr=False, compare=False)

    def row(self, class_alias: str, norm: Norm | str) -> ConsistencyRow:
        norm = Norm(norm)
        for r in self.rows:
            if r.class_alias == class_alias and r.norm is norm:
                return r
        raise KeyError((class_alias, norm.value))

    def merge(self, other: "ConsistencyReport") -> "ConsistencyReport":
        if (self.dimension, self.hand, self.reference_line) != (
                other.dimension, other.hand, other.reference_line):
            raise ValueError("cannot merge reports of different dimension, hand or reference")
        stats = dict(self.stats)
        for k, s in other.stats.items():
            stats[k] = stats.get(k, RunningStats()).merge(s)
        order = {**self.class_order, **other.class_order}
        return _finish(self.corpus, self.dimension, self.hand, self.v_min, self.window,
                       self.reference_line, stats, order,
                       {**self.frames, **other.frames}, {**self.excluded, **other.excluded})


def _finish(corpus, dimension, hand, v_min, window, reference_line, stats, order,
            frames, excluded) -> ConsistencyReport:
    keys = sorted(stats, key=lambda k: (order[k[0]], k[0], k[1].value))
    rows = tuple(ConsistencyRow(c, norm, stats[(c, norm)].n, stats[(c, norm)].mean,
                                stats[(c, norm)].std) for c, norm in keys)
    return ConsistencyReport(
        corpus=corpus,
        dimension=dimension,
        hand=hand,
        v_min=v_min,
        window=window,
        reference_line=reference_line,
        rows=rows,
        frames=dict(sorted(frames.items())),
        excluded=dict(sorted(excluded.items())),
        stats=stats,
        class_order=order,
    )


def _location_class(record, dimension: Dimension, inventory: SymbolInventory,
                    reference_tb: int | None) -> tuple[str, int] | None:
    loc = record.sign.location
    tb = None if loc is None else loc.tb
    if dimension is Dimension.TOP_BOTTOM:
        if tb is None:
            return NEUTRAL, -1
        return inventory.entry(Block.LOCATION_TB, tb).alias, tb
    if tb != reference_tb:
        return None
    lr = None if loc is None else loc.lr
    if lr is None:
        return CENTER, -1
    return inventory.entry(Block.LOCATION_LR, lr).alias, lr


def location_consistency(corpus: Corpus, dimension: Dimension | str = Dimension.TOP_BOTTOM,
                         hand: Hand | str = Hand.RIGHT, cfg: TopologyConfig | None = None,
                         reference_line: str = DEFAULT_REFERENCE_LINE,
                         require_records: bool = True) -> ConsistencyReport:
    """Nose-to-hand L1/L2 pixel distances at the initial frame, per location class.

    Top/bottom groups records by their top/bottom class, with records lacking
    one under ``"neutral"``. Left/right keeps only records whose top/bottom
    class is ``reference_line`` and groups them by left/right class, with
    records lacking one under ``"center"``. Records whose landmarks cannot
    be read, whose initial frame cannot be detected, or whose landmarks are
    not visible at that frame are listed in ``excluded``.
    """
    dimension, hand = Dimension(dimension), Hand(hand)
    inventory = corpus.inventory
    if inventory is None:
        raise ValueError("corpus carries no inventory")
    reference_tb = None
    if dimension is Dimension.LEFT_RIGHT:
        reference_tb = lookup(inventory, reference_line).class_index
    base_cfg = cfg or TopologyConfig.default()

    stats: dict = {}
    order: dict = {}
    frames: dict[str, int] = {}
    excluded: dict[str, str] = {}
    eligible = 0
    for record in sorted(corpus.records, key=lambda r: r.gloss_id):
        if record.parse_status is ParseStatus.FAILED or record.landmark_path is None:
            continue
        cls = _location_class(record, dimension, inventory, reference_tb)
        if cls is None:
            continue
        eligible += 1
        alias, idx = cls
        try:
            series = load_landmark_series(record.landmark_path)
            rcfg = config_for(series, base_cfg)
            result = detect_initial_frame(series, rcfg, hand)
            point = f"{hand.value}_{rcfg.hand_point}"
            d1 = pairwise_distance(series, result.chosen, "nose", point, Norm.L1, rcfg)
            d2 = pairwise_distance(series, result.chosen, "nose", point, Norm.L2, rcfg)
        except (HamcheckError, OSError) as exc:
            code = exc.code if isinstance(exc, HamcheckError) else "FileUnreadable"
            excluded[record.gloss_id] = code
            continue
        frames[record.gloss_id] = result.chosen
        order[alias] = idx
        for norm, d in ((Norm.L1, d1), (Norm.L2, d2)):
            stats[(alias, norm)] = stats.get((alias, norm), RunningStats()).push(d)

    if require_records and eligible == 0:
        raise NoEligibleRecords(
            f"no parsed record in {corpus.name!r} has a landmark file and a "
            f"{'top/bottom' if dimension is Dimension.TOP_BOTTOM else reference_line} location"
        )
    return _finish(corpus.name, dimension, hand, base_cfg.v_min, base_cfg.window,
                   reference_line if dimension is Dimension.LEFT_RIGHT else None,
                   stats, order, frames, excluded)


# -- class distribution ------------------------------------------------------

@dataclass(frozen=True)
class DistributionReport:
    corpus: str
    n_records: int
    counts: dict[str, tuple[int, ...]]
    aliases: dict[str, tuple[str, ...]] = field(repr=False)

    def total(self, slot: str) -> int:
        return sum(self.counts[slot])

    def merge(self, other: "DistributionReport") -> "DistributionReport":
        if self.aliases != other.aliases:
            raise ValueError("cannot merge distributions over different inventories")
        counts = {k: tuple(a + b for a, b in zip(v, other.counts[k])) for k, v in self.counts.items()}
        return DistributionReport(self.corpus, self.n_records + other.n_records, counts, self.aliases)


def slot_aliases(inventory: SymbolInventory) -> dict[str, tuple[str, ...]]:
    out = {}
    for name, block in zip(MultiLabel._fields, SLOT_BLOCKS):
        if block is Block.MOVEMENT:
            entries = [e for kind in MOVEMENT_KIND_ORDER for e in inventory.movement(kind)]
        else:
            entries = inventory.block(block)
        out[name] = tuple(e.alias for e in entries)
    return out


SLOT_BLOCK_NAMES = dict(zip(MultiLabel._fields, (b.value for b in SLOT_BLOCKS)))


def class_distribution(corpus: Corpus, require_records: bool = True) -> DistributionReport:
    """Count each class of each multilabel slot over the encoded records.

    Absent slots are not counted; classes never seen appear with count 0.
    """
    inventory = corpus.inventory
    if inventory is None:
        raise ValueError("corpus carries no inventory")
    sizes = slot_sizes(inventory)
    counts = [[0] * size for size in sizes]
    n = 0
    for record in corpus.records:
        if record.multilabel is None:
            continue
        n += 1
        for slot, value in enumerate(record.multilabel):
            if value != ABSENT:
                counts[slot][value] += 1
    if require_records and n == 0:
        raise AllRecordsUnparsable(f"no record of {corpus.name!r} could be parsed")
    return DistributionReport(
        corpus=corpus.name,
        n_records=n,
        counts={name: tuple(c) for name, c in zip(MultiLabel._fields, counts)},
        aliases=slot_aliases(inventory),
    )

