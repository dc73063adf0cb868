"""Seeded generators for signs, corpora and landmark series.

The bundled fixtures under ``hamcheck/data`` are produced by
:func:`write_bundled_data`; ``python -m hamcheck.synthetic DIR`` rewrites them.
"""

from __future__ import annotations

import random
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .codec import encode
from .corpus import write_corpus_tsv
from .inventory import Block, MovementKind, SymbolInventory, load_inventory
from .kinematics import TOPOLOGY_SIZES, LandmarkSeries, save_landmark_series
from .parser import (
    Alternation,
    Combination,
    HandDescription,
    Handshape,
    HandPosition,
    Location,
    MovementAtom,
    ParsedSign,
    SourceForm,
    serialize,
)

ATOM_KINDS = (MovementKind.STRAIGHT, MovementKind.CURVED, MovementKind.CIRCULAR,
              MovementKind.TARGETED)
LANGUAGES = ("BSL", "DGS", "GSL", "LSF", "PJM")


def bundled_data_dir() -> Path:
    return Path(str(resources.files("hamcheck") / "data"))


# -- signs -------------------------------------------------------------------

def _maybe(rng: random.Random, p: float, n: int) -> int | None:
    return rng.randrange(n) if n and rng.random() < p else None


def _alternation(rng, n) -> Alternation:
    return Alternation(rng.randrange(n), _maybe(rng, 0.25, n))


def _location(rng, inv) -> Location | None:
    if rng.random() < 0.4:
        return None
    while True:
        loc = Location(_maybe(rng, 0.4, inv.count(Block.LOCATION_LR)),
                       _maybe(rng, 0.7, inv.count(Block.LOCATION_TB)),
                       _maybe(rng, 0.4, inv.count(Block.LOCATION_DISTANCE)))
        if loc != Location():
            return loc


def _description(rng, inv):
    hs = Handshape(rng.randrange(inv.count(Block.HANDSHAPE_BASE)),
                   _maybe(rng, 0.3, inv.count(Block.THUMB_POSITION)),
                   _maybe(rng, 0.3, inv.count(Block.BENDING)))
    hp = HandPosition(_alternation(rng, inv.count(Block.EXTENDED_FINGER_DIRECTION)),
                      _alternation(rng, inv.count(Block.PALM_ORIENTATION)))
    return hs, hp, _location(rng, inv)


def random_sign(rng: random.Random, inventory: SymbolInventory,
                second_hand: bool = True) -> ParsedSign:
    """A random valid sign over ``inventory``."""
    inv = inventory
    kinds = [k for k in ATOM_KINDS if inv.movement(k)]
    atoms = []
    for n in range(rng.choice((0, 1, 1, 2, 3))):
        kind = rng.choice(kinds)
        comb = Combination.SEQUENTIAL
        if n and rng.random() < 0.4:
            comb = Combination.PARALLEL
        atoms.append(MovementAtom(kind, rng.randrange(len(inv.movement(kind))), comb))
    hs, hp, loc = _description(rng, inv)
    second = None
    if second_hand and rng.random() < 0.15:
        second = HandDescription(*_description(rng, inv))
    n_nm = inv.count(Block.NON_MANUAL)
    non_manual = tuple(rng.randrange(n_nm) for _ in range(rng.choice((0, 0, 1, 2)))) if n_nm else ()
    return ParsedSign(
        handshape=hs,
        hand_position=hp,
        symmetry=_maybe(rng, 0.3, inv.count(Block.SYMMETRY)),
        non_manual=non_manual,
        location=loc,
        movement=tuple(atoms),
        second_hand=second,
    )


def _reduction_twin(rng: random.Random, sign: ParsedSign, inv: SymbolInventory) -> ParsedSign:
    """A different sign that encodes to the same multilabel."""
    from dataclasses import replace

    choice = rng.randrange(3)
    if choice == 0 and inv.count(Block.NON_MANUAL):
        return replace(sign, non_manual=sign.non_manual + (rng.randrange(inv.count(Block.NON_MANUAL)),))
    if choice == 1 and sign.movement:
        extra = MovementAtom(MovementKind.CIRCULAR, 0, Combination.SEQUENTIAL)
        return replace(sign, movement=sign.movement + (extra,))
    efd = sign.hand_position.efd
    n = inv.count(Block.EXTENDED_FINGER_DIRECTION)
    alternate = (efd.primary + 1) % n if efd.alternate is None else None
    return replace(sign, hand_position=HandPosition(Alternation(efd.primary, alternate),
                                                    sign.hand_position.palm))


def collision_corpus_rows(n_glosses: int, n_pairs: int, inventory: SymbolInventory,
                          seed: int = 0) -> list[tuple]:
    """Corpus rows where exactly ``n_pairs`` pairs of glosses share a multilabel.

    Every other gloss has a multilabel of its own, so the decoding efficiency
    is ``(n_glosses - 2 * n_pairs) / n_glosses``. Paired signs differ only in
    parts the reduction drops (non-manual features, later movements, the
    alternate of an intermediate position).
    """
    if 2 * n_pairs > n_glosses:
        raise ValueError("too many pairs for the gloss count")
    rng = random.Random(seed)
    signs: list[ParsedSign] = []
    seen = set()
    while len(signs) < n_glosses - n_pairs:
        s = random_sign(rng, inventory)
        key = encode(s, inventory)
        if key not in seen:
            seen.add(key)
            signs.append(s)
    twins = []
    for s in signs[:n_pairs]:
        t = _reduction_twin(rng, s, inventory)
        assert t != s and encode(t, inventory) == encode(s, inventory)
        twins.append(t)
    ordered = signs + twins
    order = list(range(len(ordered)))
    rng.shuffle(order)
    rows = []
    for n, k in enumerate(order):
        form = SourceForm.RAW if n % 3 == 2 else SourceForm.ALIAS
        rows.append((f"g{n:03d}", LANGUAGES[n % len(LANGUAGES)], f"gloss-{k:03d}",
                     serialize(ordered[k], inventory, form), None))
    return rows


# -- landmark series ---------------------------------------------------------

def static_series(topology: str = "body33", n_frames: int = 40, width: int = 256,
                  height: int = 256, fps: float = 25.0) -> LandmarkSeries:
    """All landmarks visible and motionless at the image centre."""
    k = TOPOLOGY_SIZES[topology]
    points = np.zeros((n_frames, k, 4))
    points[:, :, 0] = 0.5
    points[:, :, 1] = 0.5
    points[:, :, 3] = 1.0
    return LandmarkSeries(topology, fps, width, height, np.arange(n_frames), points)


def _with_track(series: LandmarkSeries, idx: int, xs, ys) -> LandmarkSeries:
    points = series.points.copy()
    points[:, idx, 0] = xs
    points[:, idx, 1] = ys
    return LandmarkSeries(series.topology, series.fps, series.width, series.height,
                          series.frame_index, points)


def unanimous_peak_series(peak: int = 17, n_frames: int = 40) -> LandmarkSeries:
    """Hand21 series whose wrist/thumb x and y all peak at ``peak``."""
    s = static_series("hand21", n_frames)
    t = np.arange(n_frames)
    bump = 1.0 - ((t - peak) / n_frames) ** 2
    for idx, scale in ((0, 0.20), (1, 0.15), (2, 0.10)):
        s = _with_track(s, idx, 0.3 + scale * bump, 0.2 + scale * bump)
    return s


def monotone_series(n_frames: int = 40) -> LandmarkSeries:
    """Hand21 series whose wrist/thumb trajectories only ever rise."""
    s = static_series("hand21", n_frames)
    t = np.arange(n_frames) / n_frames
    for idx in (0, 1, 2):
        s = _with_track(s, idx, 0.2 + 0.5 * t, 0.1 + 0.6 * t)
    return s


def offset_series(offset_px: tuple[int, int], peak: int, n_frames: int = 30,
                  width: int = 256, height: int = 256, hand: str = "right") -> LandmarkSeries:
    """Body33 series whose chosen initial frame is ``peak``.

    At that frame the wrist sits exactly ``offset_px`` pixels from the nose.
    The wrist and thumb follow parabolas with their minimum at ``peak``; the
    other hand is invisible.
    """
    s = static_series("body33", n_frames, width, height)
    nose = (0.5, 0.25)
    points = s.points.copy()
    points[:, 0, 0], points[:, 0, 1] = nose
    wrist, thumb = (16, 22) if hand == "right" else (15, 21)
    other = (15, 21) if hand == "right" else (16, 22)
    points[:, list(other), 3] = 0.0
    s = LandmarkSeries(s.topology, s.fps, width, height, s.frame_index, points)
    t = np.arange(n_frames)
    curve = ((t - peak) / n_frames) ** 2
    wx = nose[0] + offset_px[0] / width
    wy = nose[1] + offset_px[1] / height
    s = _with_track(s, wrist, wx + 0.3 * curve, wy + 0.2 * curve)
    return _with_track(s, thumb, wx + 0.02 + 0.25 * curve, wy + 0.01 + 0.3 * curve)


def three_four_five_series() -> LandmarkSeries:
    """Frame 0 has the nose at (128, 64) px and the right wrist at (131, 68) px."""
    return offset_series((3, 4), peak=0, n_frames=21)


def noisy_profile(kind: str, n_frames: int, peak: int, amplitude: float,
                  noise_frac: float, rng: np.random.Generator) -> np.ndarray:
    """A trajectory whose only extremum is at ``peak``, plus Gaussian noise.

    ``kind`` is ``"sine"`` (quarter-wave rise then fall) or ``"ramp"``
    (linear rise then linear fall).
    """
    t = np.arange(n_frames, dtype=float)
    if kind == "sine":
        clean = amplitude * np.sin(np.pi * t / (2 * peak))
    elif kind == "ramp":
        clean = np.where(t <= peak, t / peak, 1.0 - (t - peak) / peak) * amplitude
    else:
        raise ValueError(f"unknown profile {kind!r}")
    return clean + rng.normal(0.0, noise_frac * abs(amplitude), n_frames)


def noisy_hand_series(kind: str, peak: int, n_frames: int, rng: np.random.Generator,
                      noise_frac: float = 0.02) -> LandmarkSeries:
    """Hand21 series: wrist, thumb CMC and MCP x/y all follow one noisy profile."""
    s = static_series("hand21", n_frames)
    points = s.points.copy()
    for idx in (0, 1, 2):
        for axis in (0, 1):
            amp = rng.uniform(0.1, 0.3) * rng.choice((-1.0, 1.0))
            base = rng.uniform(0.35, 0.65)
            points[:, idx, axis] = base + noisy_profile(kind, n_frames, peak, amp, noise_frac, rng)
    return LandmarkSeries("hand21", s.fps, s.width, s.height, s.frame_index, points)


# -- bundled fixtures --------------------------------------------------------

#: (gloss_id, location alias, wrist offset from the nose in pixels, frame)
CONSISTENCY_FIXTURE = (
    ("c001", "LOC_HEAD", (3, 4), 9),
    ("c002", "LOC_HEAD", (6, 8), 12),
    ("c003", "LOC_CHIN", (5, 12), 10),
    ("c004", "LOC_CHIN", (8, 15), 14),
    ("c005", "LOC_NECK", (20, 21), 11),
)


def consistency_rows(landmark_dir: str = "landmarks") -> list[tuple]:
    rows = []
    for n, (gid, loc, _offset, _frame) in enumerate(CONSISTENCY_FIXTURE):
        label = f":HS_FLAT::EFD_U::PALM_L::{loc}::MOV_STRAIGHT_{'UD'[n % 2]}:"
        rows.append((gid, "DGS", f"gloss-{gid}", label, f"{landmark_dir}/{gid}.json"))
    return rows


def write_bundled_data(root=None) -> Path:
    root = Path(root) if root is not None else bundled_data_dir()
    inv = load_inventory(root / "hamnosys_ref.csv") if (root / "hamnosys_ref.csv").exists() \
        else load_inventory()
    corpora = root / "corpora"
    corpora.mkdir(parents=True, exist_ok=True)
    write_corpus_tsv(corpora / "synthetic10.tsv", collision_corpus_rows(10, 1, inv, seed=10))
    write_corpus_tsv(corpora / "synthetic100.tsv", collision_corpus_rows(100, 10, inv, seed=100))

    cons = root / "consistency"
    (cons / "landmarks").mkdir(parents=True, exist_ok=True)
    for gid, _loc, offset, frame in CONSISTENCY_FIXTURE:
        save_landmark_series(offset_series(offset, frame), cons / "landmarks" / f"{gid}.json")
    write_corpus_tsv(cons / "consistency.tsv", consistency_rows())

    pose = root / "pose"
    pose.mkdir(parents=True, exist_ok=True)
    save_landmark_series(unanimous_peak_series(), pose / "unanimous_peak.json")
    save_landmark_series(monotone_series(), pose / "monotone.json")
    save_landmark_series(three_four_five_series(), pose / "three_four_five.json")
    return root


if __name__ == "__main__":
    out = write_bundled_data(sys.argv[1] if len(sys.argv) > 1 else None)
    print(f"wrote fixtures under {out}")
