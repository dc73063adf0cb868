"""Gloss corpora read from TSV manifests.

Header: ``gloss_id  language  gloss_text  hamnosys  landmark_path`` (tab
separated). ``landmark_path`` may be empty; relative paths are resolved
against the manifest's directory.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from .codec import MultiLabel, encode
from .errors import DuplicateGlossId, EmptyCorpus, FileUnreadable
from .inventory import SymbolInventory
from .parser import Diagnostic, ParsedSign, Severity, parse_label

TSV_COLUMNS = ("gloss_id", "language", "gloss_text", "hamnosys", "landmark_path")


class ParseStatus(str, Enum):
    OK = "ok"
    RECOVERED = "recovered"
    FAILED = "failed"


@dataclass(frozen=True)
class GlossRecord:
    gloss_id: str
    language: str
    gloss_text: str
    hamnosys: str
    landmark_path: Path | None
    parse_status: ParseStatus
    sign: ParsedSign | None = field(default=None, repr=False)
    multilabel: MultiLabel | None = None
    diagnostics: tuple[Diagnostic, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class Corpus:
    name: str
    records: tuple[GlossRecord, ...]
    inventory_version: str
    inventory: SymbolInventory | None = field(default=None, repr=False, compare=False)

    @property
    def parsed(self) -> list[GlossRecord]:
        return [r for r in self.records if r.parse_status is not ParseStatus.FAILED]

    @property
    def failures(self) -> list[GlossRecord]:
        return [r for r in self.records if r.parse_status is ParseStatus.FAILED]

    def failure_summary(self) -> dict[str, int]:
        """Number of failed records per first error code."""
        summary: dict[str, int] = {}
        for r in self.failures:
            code = next(d.code for d in r.diagnostics if d.severity is Severity.ERROR)
            summary[code] = summary.get(code, 0) + 1
        return dict(sorted(summary.items()))

    def subset(self, records) -> "Corpus":
        return replace(self, records=tuple(records))


def make_record(gloss_id: str, language: str, gloss_text: str, hamnosys: str,
                landmark_path, inventory: SymbolInventory, strict: bool = False) -> GlossRecord:
    sign, diags = parse_label(hamnosys, inventory, strict=strict)
    if sign is None:
        status = ParseStatus.FAILED
    elif diags:
        status = ParseStatus.RECOVERED
    else:
        status = ParseStatus.OK
    return GlossRecord(
        gloss_id=gloss_id,
        language=language,
        gloss_text=gloss_text,
        hamnosys=hamnosys,
        landmark_path=Path(landmark_path) if landmark_path else None,
        parse_status=status,
        sign=sign,
        multilabel=None if sign is None else encode(sign, inventory),
        diagnostics=tuple(diags),
    )


def corpus_from_rows(name: str, rows, inventory: SymbolInventory, strict: bool = False) -> Corpus:
    """Build a corpus from ``(gloss_id, language, gloss_text, hamnosys, landmark_path)`` rows."""
    records = []
    seen: set[str] = set()
    for row in rows:
        gloss_id = row[0]
        if gloss_id in seen:
            raise DuplicateGlossId(f"gloss_id {gloss_id!r} appears more than once")
        seen.add(gloss_id)
        records.append(make_record(*row, inventory=inventory, strict=strict))
    if not records:
        raise EmptyCorpus(f"corpus {name!r} has no records")
    return Corpus(name, tuple(records), inventory.version, inventory)


def ingest_corpus(manifest_path, inventory: SymbolInventory, strict: bool = False) -> Corpus:
    path = Path(manifest_path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise FileUnreadable(f"{path}: {exc}") from None

    lines = text.splitlines()
    reader = csv.reader(lines, delimiter="\t", quoting=csv.QUOTE_NONE)
    header = next(reader, None)
    if header is None:
        raise EmptyCorpus(f"{path} is empty")
    if tuple(h.strip() for h in header) != TSV_COLUMNS:
        raise FileUnreadable(f"{path}: header must be {' '.join(TSV_COLUMNS)}")

    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) == 4:
            row.append("")
        if len(row) != 5:
            raise FileUnreadable(f"{path}:{lineno}: expected 5 tab-separated fields, got {len(row)}")
        gloss_id, language, gloss_text, hamnosys, lm = row
        lm = lm.strip()
        lm_path = None
        if lm:
            lm_path = Path(lm) if Path(lm).is_absolute() else path.parent / lm
        rows.append((gloss_id.strip(), language.strip(), gloss_text, hamnosys, lm_path))
    return corpus_from_rows(path.stem, rows, inventory, strict)


def write_corpus_tsv(path, rows) -> None:
    """Write ``(gloss_id, language, gloss_text, hamnosys, landmark_path)`` rows."""
    lines = ["\t".join(TSV_COLUMNS)]
    for row in rows:
        lines.append("\t".join("" if v is None else str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
