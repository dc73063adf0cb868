"""Acceptance criteria, each checked at its stated tolerance and time budget.

Every test registers a PASS/FAIL line that is printed in the terminal
summary under "acceptance criteria".
"""

import math
import random
import statistics
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from hamcheck.analytics import class_distribution, location_consistency
from hamcheck.codec import decoding_efficiency
from hamcheck.corpus import ingest_corpus, write_corpus_tsv
from hamcheck.inventory import Block, lookup
from hamcheck.kinematics import (
    Norm,
    TopologyConfig,
    detect_initial_frame,
    lower_median,
    pairwise_distance,
    save_landmark_series,
)
from hamcheck.parser import Severity, SourceForm, parse_label, serialize
from hamcheck.reports import to_csv
from hamcheck.synthetic import (
    CONSISTENCY_FIXTURE,
    bundled_data_dir,
    noisy_hand_series,
    offset_series,
    random_sign,
    three_four_five_series,
)

import oracles


def test_c1_grammar_round_trip(inv, record_criterion):
    rng = random.Random(1000)
    signs = [random_sign(rng, inv) for _ in range(1000)]
    start = time.perf_counter()
    failures = 0
    for n, s in enumerate(signs):
        form = SourceForm.RAW if n % 2 else SourceForm.ALIAS
        back, diags = parse_label(serialize(s, inv, form), inv)
        if back != s or any(d.severity is Severity.ERROR for d in diags):
            failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 5.0
    record_criterion("1 grammar round-trip", ok, f"{1000 - failures}/1000 in {elapsed:.2f}s (<5s)")
    assert failures == 0
    assert elapsed < 5.0


def _fuzz_inputs(inv, n, seed):
    rng = random.Random(seed)
    aliases = [f":{e.alias}:" for e in inv] + [":", "::", ":X:", " ", "\\"]
    chars = [e.char for e in inv]
    valid = [serialize(random_sign(rng, inv), inv, SourceForm.ALIAS) for _ in range(200)]

    def scalar():
        while True:
            cp = rng.randrange(0x110000)
            if not 0xD800 <= cp <= 0xDFFF:
                return chr(cp)

    for i in range(n):
        mode = i % 4
        k = rng.randrange(0, 24)
        if mode == 0:
            yield "".join(scalar() for _ in range(k))
        elif mode == 1:
            yield "".join(rng.choice(aliases) for _ in range(k))
        elif mode == 2:
            yield "".join(rng.choice(chars + aliases) for _ in range(k))
        else:
            s = rng.choice(valid)
            cut = sorted(rng.randrange(len(s) + 1) for _ in range(2))
            yield s[:cut[0]] + "".join(rng.choice(aliases) for _ in range(rng.randrange(3))) + s[cut[1]:]


def test_c2_fuzz_robustness(inv, record_criterion):
    inputs = list(_fuzz_inputs(inv, 100_000, seed=2))
    start = time.perf_counter()
    crashes = []
    parsed = 0
    for text in inputs:
        text.encode("utf-8")  # every input is valid UTF-8
        try:
            sign, diags = parse_label(text, inv)
        except Exception as exc:  # noqa: BLE001 - any escape is the failure being measured
            crashes.append((text, exc))
            continue
        if sign is None and not diags:
            crashes.append((text, "no parse and no diagnostics"))
        parsed += sign is not None
    elapsed = time.perf_counter() - start
    ok = not crashes and elapsed < 60.0
    record_criterion("2 fuzz robustness", ok,
                     f"{len(inputs)} inputs, {len(crashes)} abnormal, {parsed} parsed, {elapsed:.1f}s (<60s)")
    assert not crashes, crashes[:3]
    assert elapsed < 60.0


def test_c3_eta_oracle(inv, record_criterion):
    start = time.perf_counter()
    corpus = ingest_corpus(bundled_data_dir() / "corpora" / "synthetic100.tsv", inv)
    result = decoding_efficiency(corpus)
    elapsed = time.perf_counter() - start
    groups = oracles.collision_groups((r.gloss_text, r.multilabel) for r in corpus.parsed)
    oracle_hist = dict(Counter(len(g) for g in groups))
    oracle_eta = Fraction(sum(len(g) == 1 for g in groups), sum(len(g) for g in groups))
    ok = (result.eta_exact == Fraction(4, 5) == oracle_eta and result.eta_percent == 80.0
          and result.collision_histogram == {1: 80, 2: 10} == oracle_hist and elapsed < 1.0)
    record_criterion("3 eta oracle equivalence", ok,
                     f"eta={result.eta_percent}% hist={result.collision_histogram} {elapsed:.3f}s (<1s)")
    assert result.eta_exact == Fraction(4, 5) == oracle_eta
    assert result.eta_percent == 80.0
    assert result.collision_histogram == {1: 80, 2: 10} == oracle_hist
    assert elapsed < 1.0


def _oracle_chosen(series, window):
    frames = []
    for idx in (0, 1, 2):  # hand21 wrist, thumb CMC, thumb MCP
        for axis in (0, 1):
            sm = oracles.moving_average(list(series.points[:, idx, axis]), window)
            frames += [f for f in oracles.first_extrema(sm) if f is not None]
    return oracles.lower_median(frames)


def test_c4_initial_frame(record_criterion):
    rng = np.random.default_rng(4)
    cases = []
    for n in range(50):
        kind = "sine" if n % 2 == 0 else "ramp"
        peak = int(rng.integers(10, 21))
        n_frames = 2 * peak + int(rng.integers(0, peak // 2 + 1)) if kind == "sine" else 2 * peak
        cases.append((noisy_hand_series(kind, peak, n_frames, rng, noise_frac=0.02), peak))
    cfg = TopologyConfig.default("hand21").with_params(window=5)
    start = time.perf_counter()
    chosen = [detect_initial_frame(s, cfg).chosen for s, _ in cases]
    elapsed = time.perf_counter() - start
    vs_oracle = sum(abs(c - _oracle_chosen(s, 5)) <= 1 for c, (s, _) in zip(chosen, cases))
    vs_truth = sum(abs(c - peak) <= 1 for c, (_, peak) in zip(chosen, cases))
    fixture = lower_median([10, 12, 12, 13, 14, 14, 15, 16, 18, 20, 21, 30])
    ok = vs_oracle >= 48 and elapsed < 2.0 and fixture == 14
    record_criterion("4 initial-frame detection", ok,
                     f"within 1 of oracle {vs_oracle}/50, of truth {vs_truth}/50, "
                     f"{elapsed:.3f}s (<2s), lower median fixture={fixture}")
    assert vs_oracle / 50 >= 0.95
    assert elapsed < 2.0
    assert fixture == 14


def test_c5_distance_statistics(inv, record_criterion):
    corpus = ingest_corpus(bundled_data_dir() / "consistency" / "consistency.tsv", inv)
    report = location_consistency(corpus)
    # hand-computed from the pixel offsets (3,4) (6,8) | (5,12) (8,15) | (20,21)
    expected = {
        ("LOC_HEAD", "L1"): (10.5, math.sqrt(24.5)),
        ("LOC_HEAD", "L2"): (7.5, math.sqrt(12.5)),
        ("LOC_CHIN", "L1"): (20.0, math.sqrt(18.0)),
        ("LOC_CHIN", "L2"): (15.0, math.sqrt(8.0)),
        ("LOC_NECK", "L1"): (41.0, None),
        ("LOC_NECK", "L2"): (29.0, None),
    }
    ok = len(report.rows) == len(expected)
    for (alias, norm), (mean, std) in expected.items():
        row = report.row(alias, norm)
        ok &= math.isclose(row.mean, mean, rel_tol=1e-9)
        ok &= (row.std is None) if std is None else math.isclose(row.std, std, rel_tol=1e-9)
    s = three_four_five_series()
    l2 = pairwise_distance(s, 0, "nose", "right_wrist", Norm.L2)
    l1 = pairwise_distance(s, 0, "nose", "right_wrist", Norm.L1)
    ok &= l2 == 5.0 and l1 == 7.0
    record_criterion("5 distance statistics", ok,
                     f"{len(expected)} rows at rel 1e-9, n=1 std omitted, 3-4-5 -> L2={l2} L1={l1}")
    assert ok


def test_c6_inventory_cardinalities(inv, record_criterion):
    order = [Block.SYMMETRY, Block.HANDSHAPE_BASE, Block.THUMB_POSITION, Block.BENDING,
             Block.EXTENDED_FINGER_DIRECTION, Block.PALM_ORIENTATION, Block.LOCATION_TB,
             Block.LOCATION_LR, Block.LOCATION_DISTANCE]
    counts = [inv.count(b) for b in order]
    ok = counts == [8, 12, 4, 6, 26, 8, 36, 6, 7]
    record_criterion("6 inventory cardinalities", ok, "/".join(map(str, counts)))
    assert ok


@pytest.fixture(scope="module")
def landmark_corpus(tmp_path_factory, inv):
    root = tmp_path_factory.mktemp("partition")
    rng = random.Random(7)
    classes = ["LOC_HEAD", "LOC_CHIN", "LOC_NECK", "LOC_BREAST_LINE", "LOC_BELLY_LINE", None]
    rows = []
    for n in range(48):
        loc = rng.choice(classes)
        lr = rng.choice(["", ":LR_LEFT_SIDE:", ":LR_RIGHT_TO:"]) if loc == "LOC_BREAST_LINE" else ""
        label = f":HS_FLAT::EFD_U::PALM_L:{lr}" + (f":{loc}:" if loc else "") + ":MOV_CIRC:"
        offset = (rng.randrange(-60, 61), rng.randrange(5, 120))
        save_landmark_series(offset_series(offset, rng.randrange(6, 20)), root / f"p{n:02d}.json")
        rows.append((f"p{n:02d}", "DGS", f"G{n}", label, f"p{n:02d}.json"))
    rows.append(("zz", "DGS", "BAD", ":EFD_U:", ""))
    write_corpus_tsv(root / "partition.tsv", rows)
    return ingest_corpus(root / "partition.tsv", inv)


def _close(a, b):
    return (a is None and b is None) or (a is not None and b is not None and math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12))


def test_c7_partition_invariance(inv, landmark_corpus, record_criterion):
    dist_corpus = ingest_corpus(bundled_data_dir() / "corpora" / "synthetic100.tsv", inv)
    rng = random.Random(77)
    ok = True
    for corpus, dims in ((landmark_corpus, ("tb", "lr")),):
        for dim in dims:
            serial = location_consistency(corpus, dim)
            for _ in range(4):
                records = list(corpus.records)
                rng.shuffle(records)
                cuts = sorted(rng.sample(range(1, len(records)), 3))
                parts = [records[i:j] for i, j in zip([0] + cuts, cuts + [len(records)])]
                merged = None
                for part in parts:
                    partial = location_consistency(corpus.subset(part), dim, require_records=False)
                    merged = partial if merged is None else merged.merge(partial)
                ok &= [(r.class_alias, r.norm, r.n) for r in merged.rows] == \
                      [(r.class_alias, r.norm, r.n) for r in serial.rows]
                ok &= all(_close(a.mean, b.mean) and _close(a.std, b.std)
                          for a, b in zip(merged.rows, serial.rows))
                ok &= merged.frames == serial.frames and merged.excluded == serial.excluded
            ok &= to_csv(serial) == to_csv(location_consistency(corpus, dim))

    serial_dist = class_distribution(dist_corpus)
    for _ in range(4):
        records = list(dist_corpus.records)
        rng.shuffle(records)
        parts = [records[i::4] for i in range(4)]
        merged = None
        for part in parts:
            partial = class_distribution(dist_corpus.subset(part), require_records=False)
            merged = partial if merged is None else merged.merge(partial)
        ok &= merged == serial_dist
    ok &= to_csv(serial_dist) == to_csv(class_distribution(dist_corpus))
    record_criterion("7 partition invariance", ok,
                     "consistency (tb, lr) and distribution over 4 random 4-way splits; CSV byte-identical")
    assert ok
