#!/usr/bin/env python3
"""
Implicit row/column audit of an annotated corpus.
"""

from dataclasses import dataclass, field
from typing import Iterable, Tuple

from src.corpus.loader import CorpusRecord
from src.table.implicit import detect_implicit


@dataclass(frozen=True)
class RecordAudit:
    id: str
    implicit_rows: Tuple[int, ...]
    implicit_cols: Tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "implicit_rows": list(self.implicit_rows),
            "implicit_cols": list(self.implicit_cols),
        }


@dataclass(frozen=True)
class AuditReport:
    total_records: int
    affected_records: int
    total_implicit_rows: int
    total_implicit_cols: int
    per_record: Tuple[RecordAudit, ...] = field(default_factory=tuple)

    @property
    def affected_fraction(self) -> float:
        if not self.total_records:
            return 0.0
        return self.affected_records / self.total_records

    def summary(self) -> dict:
        return {
            "total_records": self.total_records,
            "affected_records": self.affected_records,
            "affected_fraction": round(self.affected_fraction, 4),
            "total_implicit_rows": self.total_implicit_rows,
            "total_implicit_cols": self.total_implicit_cols,
        }


def audit_implicit(records: Iterable[CorpusRecord]) -> AuditReport:
    """
    Count implicit rows and columns over a corpus loaded without repair.

    Args:
        records: Corpus or any iterable of records

    Returns:
        Totals plus one entry per affected record, sorted by id
    """
    total = 0
    rows = 0
    cols = 0
    affected = []
    for record in records:
        total += 1
        report = detect_implicit(record.matrix)
        rows += len(report.implicit_rows)
        cols += len(report.implicit_cols)
        if not report.is_clean:
            affected.append(RecordAudit(record.id, report.implicit_rows, report.implicit_cols))
    affected.sort(key=lambda a: a.id)
    return AuditReport(total, len(affected), rows, cols, tuple(affected))
