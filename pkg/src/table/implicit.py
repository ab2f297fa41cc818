#!/usr/bin/env python3
"""
Implicit row/column detection and repair.

A row in which no cell anchors (no C and no L) is collapsed by browsers when
the table is rendered, so its image and its annotation disagree. Columns are
the transposed case (no C and no U).
"""

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

from src.table.matrix import CellMatrix, Token, require_valid
from src.table.structure import LogicalCell, TableStructure, cells_to_matrix, make_structure, matrix_to_cells

logger = logging.getLogger("table-matrix")


@dataclass(frozen=True)
class ImplicitReport:
    implicit_rows: Tuple[int, ...] = field(default_factory=tuple)
    implicit_cols: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def is_clean(self) -> bool:
        return not self.implicit_rows and not self.implicit_cols

    def reasons(self) -> List[str]:
        """Reason strings such as "implicit_row:2", 0-based."""
        return [f"implicit_row:{r}" for r in self.implicit_rows] + [
            f"implicit_col:{c}" for c in self.implicit_cols
        ]

    def as_dict(self) -> dict:
        return {"implicit_rows": list(self.implicit_rows), "implicit_cols": list(self.implicit_cols)}


def detect_implicit(m: CellMatrix) -> ImplicitReport:
    """
    Find rows without any C/L token and columns without any C/U token.

    Args:
        m: Valid matrix

    Returns:
        0-based indices of implicit rows and columns
    """
    require_valid(m)
    rows = tuple(
        r for r, row in enumerate(m.rows()) if not any(t in (Token.C, Token.L) for t in row)
    )
    cols = tuple(
        c
        for c in range(m.n_cols)
        if not any(m.at(r, c) in (Token.C, Token.U) for r in range(m.n_rows))
    )
    return ImplicitReport(rows, cols)


def remove_implicit_cells(s: TableStructure, rows: Tuple[int, ...], cols: Tuple[int, ...]) -> TableStructure:
    """
    Delete grid lines from a structure, shrinking the spans that cross them.

    Only lines without anchors may be deleted; contents and header flags are
    kept.
    """
    drop_rows = set(rows)
    drop_cols = set(cols)
    row_map = {}
    for r in range(s.n_rows):
        if r not in drop_rows:
            row_map[r] = len(row_map)
    col_map = {}
    for c in range(s.n_cols):
        if c not in drop_cols:
            col_map[c] = len(col_map)

    cells = []
    for cell in s.cells:
        kept_rows = [r for r in range(cell.anchor_row, cell.last_row + 1) if r not in drop_rows]
        kept_cols = [c for c in range(cell.anchor_col, cell.last_col + 1) if c not in drop_cols]
        cells.append(
            LogicalCell(
                row_map[kept_rows[0]],
                col_map[kept_cols[0]],
                len(kept_rows),
                len(kept_cols),
                cell.content,
                cell.is_header,
            )
        )
    return make_structure(len(row_map), len(col_map), cells)


def remove_implicit(m: CellMatrix) -> CellMatrix:
    """
    Delete every implicit row and column.

    Deleting an anchor-free line never removes a cell, so the result stays
    valid; removing one line cannot create another, so the operation is
    idempotent.

    Args:
        m: Valid matrix

    Returns:
        Matrix without implicit rows/columns
    """
    report = detect_implicit(m)
    if report.is_clean:
        return m
    logger.debug(
        f"removing implicit rows {list(report.implicit_rows)} and cols {list(report.implicit_cols)}"
    )
    repaired = remove_implicit_cells(matrix_to_cells(m), report.implicit_rows, report.implicit_cols)
    return cells_to_matrix(repaired)


def repair_structure(s: TableStructure) -> Tuple[TableStructure, ImplicitReport]:
    """Remove implicit lines from a structure, keeping contents."""
    report = detect_implicit(cells_to_matrix(s))
    if report.is_clean:
        return s, report
    return remove_implicit_cells(s, report.implicit_rows, report.implicit_cols), report
