"""CSV and JSON serialization of reports.

Output is deterministic: keys are sorted, floats use ``repr`` and nothing
time-dependent is written, so identical reports give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

from .analytics import (
    SLOT_BLOCK_NAMES,
    ConsistencyReport,
    ConsistencyRow,
    Dimension,
    DistributionReport,
    RunningStats,
    _finish,
)
from .codec import EtaResult
from .errors import WriteFailed
from .kinematics import Hand, Norm

CONSISTENCY_COLUMNS = ("class_alias", "norm", "n", "mean_px", "std_px")
DISTRIBUTION_COLUMNS = ("block", "class_index", "class_alias", "count")
ETA_COLUMNS = ("unique_glosses", "singly_labeled", "eta_percent", "max_collision")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _float(v: float | None) -> str:
    return "" if v is None else repr(float(v))


def to_csv(report) -> str:
    if isinstance(report, ConsistencyReport):
        return _csv_text(CONSISTENCY_COLUMNS, (
            (r.class_alias, r.norm.value, r.n, _float(r.mean), _float(r.std)) for r in report.rows
        ))
    if isinstance(report, DistributionReport):
        rows = []
        for slot, counts in report.counts.items():
            aliases = report.aliases[slot]
            for i, c in enumerate(counts):
                rows.append((SLOT_BLOCK_NAMES[slot], i, aliases[i], c))
        return _csv_text(DISTRIBUTION_COLUMNS, rows)
    if isinstance(report, EtaResult):
        return _csv_text(ETA_COLUMNS, [(report.unique_glosses, report.singly_labeled,
                                        _float(report.eta_percent), report.max_collision)])
    raise TypeError(f"unsupported report type {type(report).__name__}")


def to_dict(report) -> dict:
    if isinstance(report, ConsistencyReport):
        return {
            "kind": "consistency",
            "corpus": report.corpus,
            "dimension": report.dimension.value,
            "hand": report.hand.value,
            "v_min": report.v_min,
            "window": report.window,
            "reference_line": report.reference_line,
            "rows": [
                {"class_alias": r.class_alias, "norm": r.norm.value, "n": r.n,
                 "mean_px": r.mean, "std_px": r.std}
                for r in report.rows
            ],
            "frames": report.frames,
            "excluded": report.excluded,
        }
    if isinstance(report, DistributionReport):
        return {
            "kind": "distribution",
            "corpus": report.corpus,
            "n_records": report.n_records,
            "blocks": {
                slot: {"block": SLOT_BLOCK_NAMES[slot], "aliases": list(report.aliases[slot]),
                       "counts": list(report.counts[slot])}
                for slot in report.counts
            },
        }
    if isinstance(report, EtaResult):
        return {
            "kind": "eta",
            "unique_glosses": report.unique_glosses,
            "singly_labeled": report.singly_labeled,
            "eta": report.eta,
            "eta_percent": report.eta_percent,
            "collision_histogram": {str(k): v for k, v in report.collision_histogram.items()},
            "max_collision": report.max_collision,
        }
    raise TypeError(f"unsupported report type {type(report).__name__}")


def to_json(report) -> str:
    return json.dumps(to_dict(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def from_dict(data: dict):
    kind = data.get("kind")
    if kind == "consistency":
        rows = [ConsistencyRow(r["class_alias"], Norm(r["norm"]), r["n"], r["mean_px"], r["std_px"])
                for r in data["rows"]]
        stats = {}
        order = {}
        for pos, r in enumerate(rows):
            m2 = 0.0 if r.std is None else r.std ** 2 * (r.n - 1)
            stats[(r.class_alias, r.norm)] = RunningStats(r.n, r.mean, m2)
            order.setdefault(r.class_alias, pos)
        report = _finish(data["corpus"], Dimension(data["dimension"]), Hand(data["hand"]),
                         data["v_min"], data["window"], data["reference_line"], stats, order,
                         data["frames"], data["excluded"])
        # keep the stored row values verbatim
        return ConsistencyReport(**{**report.__dict__, "rows": tuple(rows)})
    if kind == "distribution":
        blocks = data["blocks"]
        return DistributionReport(
            corpus=data["corpus"],
            n_records=data["n_records"],
            counts={k: tuple(v["counts"]) for k, v in blocks.items()},
            aliases={k: tuple(v["aliases"]) for k, v in blocks.items()},
        )
    if kind == "eta":
        exact = Fraction(data["singly_labeled"], data["unique_glosses"])
        return EtaResult(
            unique_glosses=data["unique_glosses"],
            singly_labeled=data["singly_labeled"],
            eta=data["eta"],
            collision_histogram={int(k): v for k, v in data["collision_histogram"].items()},
            max_collision=data["max_collision"],
            eta_exact=exact,
        )
    raise ValueError(f"unknown report kind {kind!r}")


def emit_report(report, fmt: str, out) -> Path:
    """Write ``report`` as ``"csv"`` or ``"json"`` to ``out``."""
    if fmt == "csv":
        text = to_csv(report)
    elif fmt == "json":
        text = to_json(report)
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    path = Path(out)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise WriteFailed(f"{path}: {exc}") from None
    return path


def load_report(path):
    """Read a JSON report written by :func:`emit_report`."""
    return from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def eta_table_csv(results: dict[str, EtaResult]) -> str:
    """One CSV row per partition, keyed by a leading ``language`` column."""
    return _csv_text(("language",) + ETA_COLUMNS, [
        (lang, r.unique_glosses, r.singly_labeled, _float(r.eta_percent), r.max_collision)
        for lang, r in results.items()
    ])


def histogram_csv(result: EtaResult) -> str:
    """Plot-ready collision histogram: glosses per group and number of groups."""
    return _csv_text(("collision_size", "groups"), sorted(result.collision_histogram.items()))
