#!/usr/bin/env python3
"""
Logical table view: anchored cells with spans tiling an n x m grid.

This is the representation behind both the HTML codec and the cell matrix;
matrix_to_cells and cells_to_matrix convert between the two.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.core.errors import InvalidMatrix, NonTiling
from src.table.matrix import CellMatrix, Token, validate_matrix

logger = logging.getLogger("table-structure")


@dataclass(frozen=True)
class LogicalCell:
    """A table cell identified by its anchor and span."""

    anchor_row: int
    anchor_col: int
    row_span: int = 1
    col_span: int = 1
    content: Optional[str] = None
    is_header: bool = False

    @property
    def key(self) -> Tuple[int, int]:
        return (self.anchor_row, self.anchor_col)

    @property
    def last_row(self) -> int:
        return self.anchor_row + self.row_span - 1

    @property
    def last_col(self) -> int:
        return self.anchor_col + self.col_span - 1

    @property
    def is_empty(self) -> bool:
        return not (self.content or "").strip()

    @property
    def is_merged(self) -> bool:
        return self.row_span > 1 or self.col_span > 1

    def covers(self, row: int, col: int) -> bool:
        return (
            self.anchor_row <= row <= self.last_row
            and self.anchor_col <= col <= self.last_col
        )

    def positions(self) -> Iterable[Tuple[int, int]]:
        for r in range(self.anchor_row, self.anchor_row + self.row_span):
            for c in range(self.anchor_col, self.anchor_col + self.col_span):
                yield r, c

    def as_dict(self) -> dict:
        data = {
            "row": self.anchor_row,
            "col": self.anchor_col,
            "row_span": self.row_span,
            "col_span": self.col_span,
        }
        if self.content is not None:
            data["content"] = self.content
        if self.is_header:
            data["is_header"] = True
        return data


@dataclass(frozen=True)
class TableStructure:
    """Logical cells ordered row-major by anchor."""

    n_rows: int
    n_cols: int
    cells: Tuple[LogicalCell, ...] = field(default_factory=tuple)

    def occupancy(self) -> List[List[int]]:
        """
        Map every grid position to the index of the cell covering it.

        Raises:
            NonTiling: when cells overlap, leave gaps, leave the grid or are
                out of order
        """
        if self.n_rows < 1 or self.n_cols < 1:
            raise NonTiling(f"table dims must be positive, got {self.n_rows}x{self.n_cols}")
        grid = [[-1] * self.n_cols for _ in range(self.n_rows)]
        previous = None
        for idx, cell in enumerate(self.cells):
            if cell.row_span < 1 or cell.col_span < 1:
                raise NonTiling(f"cell at {cell.key} has non-positive span", cell.key)
            if previous is not None and cell.key <= previous:
                raise NonTiling(f"cell at {cell.key} is out of row-major order", cell.key)
            previous = cell.key
            if cell.anchor_row < 0 or cell.anchor_col < 0 or cell.last_row >= self.n_rows or cell.last_col >= self.n_cols:
                raise NonTiling(
                    f"cell at {cell.key} spanning {cell.row_span}x{cell.col_span} "
                    f"leaves the {self.n_rows}x{self.n_cols} grid",
                    cell.key,
                )
            for r, c in cell.positions():
                if grid[r][c] != -1:
                    raise NonTiling(f"cells overlap at ({r}, {c})", (r, c))
                grid[r][c] = idx
        for r in range(self.n_rows):
            for c in range(self.n_cols):
                if grid[r][c] == -1:
                    raise NonTiling(f"no cell covers ({r}, {c})", (r, c))
        return grid

    def check_tiling(self) -> None:
        self.occupancy()

    def is_tiling(self) -> bool:
        try:
            self.occupancy()
            return True
        except NonTiling:
            return False

    def cell_at(self, row: int, col: int) -> LogicalCell:
        """Return the cell covering (row, col)."""
        for cell in self.cells:
            if cell.covers(row, col):
                return cell
        raise NonTiling(f"no cell covers ({row}, {col})", (row, col))

    def merged_cells(self) -> List[LogicalCell]:
        return [c for c in self.cells if c.is_merged]

    def empty_cells(self) -> List[LogicalCell]:
        return [c for c in self.cells if c.is_empty]

    def without_content(self) -> "TableStructure":
        cells = tuple(replace(c, content=None) for c in self.cells)
        return TableStructure(self.n_rows, self.n_cols, cells)

    def with_contents(self, contents: Sequence[Optional[str]]) -> "TableStructure":
        """Return a copy whose cells take contents in row-major anchor order."""
        if len(contents) != len(self.cells):
            raise ValueError(f"{len(contents)} contents for {len(self.cells)} cells")
        cells = tuple(replace(c, content=t) for c, t in zip(self.cells, contents))
        return TableStructure(self.n_rows, self.n_cols, cells)

    def header_rows(self) -> int:
        """Number of leading rows made only of header cells."""
        count = 0
        for r in range(self.n_rows):
            row_cells = [c for c in self.cells if c.anchor_row == r]
            if row_cells and all(c.is_header for c in row_cells):
                count += 1
            else:
                break
        return count

    def topology(self) -> Tuple[int, int, Tuple[Tuple[int, int, int, int], ...]]:
        """Content-free fingerprint used for structural equality checks."""
        return (
            self.n_rows,
            self.n_cols,
            tuple((c.anchor_row, c.anchor_col, c.row_span, c.col_span) for c in self.cells),
        )


def make_structure(n_rows: int, n_cols: int, cells: Iterable[LogicalCell]) -> TableStructure:
    """Sort cells row-major and wrap them in a TableStructure."""
    ordered = tuple(sorted(cells, key=lambda c: c.key))
    return TableStructure(n_rows, n_cols, ordered)


def matrix_to_cells(m: CellMatrix) -> TableStructure:
    """
    Recover logical cells from a well-formed matrix.

    One cell per C token; its column span is one plus the run of L to its
    right in the anchor row, its row span one plus the run of U below it in the
    anchor column.

    Args:
        m: Valid matrix

    Returns:
        Structure with contents absent
    """
    report = validate_matrix(m)
    if not report.is_valid:
        first = report.violations[0]
        raise InvalidMatrix(
            f"cannot convert malformed matrix: {first[2]} at ({first[0]}, {first[1]})",
            report.violations,
        )

    cells = []
    for r in range(m.n_rows):
        for c in range(m.n_cols):
            if m.at(r, c) is not Token.C:
                continue
            col_span = 1
            while c + col_span < m.n_cols and m.at(r, c + col_span) is Token.L:
                col_span += 1
            row_span = 1
            while r + row_span < m.n_rows and m.at(r + row_span, c) is Token.U:
                row_span += 1
            cells.append(LogicalCell(r, c, row_span, col_span))
    return TableStructure(m.n_rows, m.n_cols, tuple(cells))


def cells_to_matrix(s: TableStructure) -> CellMatrix:
    """
    Encode a tiling structure as an atomic cell matrix.

    Anchors become C, the rest of the anchor row L, the rest of the anchor
    column U and the interior X.

    Args:
        s: Structure whose cells tile its grid

    Returns:
        The corresponding matrix
    """
    s.check_tiling()
    grid: List[List[Optional[Token]]] = [[None] * s.n_cols for _ in range(s.n_rows)]
    for cell in s.cells:
        for r, c in cell.positions():
            if r == cell.anchor_row and c == cell.anchor_col:
                tok = Token.C
            elif r == cell.anchor_row:
                tok = Token.L
            elif c == cell.anchor_col:
                tok = Token.U
            else:
                tok = Token.X
            grid[r][c] = tok
    return CellMatrix.from_rows(grid)


def span_histogram(s: TableStructure) -> Dict[str, int]:
    """Count cells by merge kind."""
    counts = {"plain": 0, "row_merged": 0, "col_merged": 0, "both": 0}
    for cell in s.cells:
        if cell.row_span > 1 and cell.col_span > 1:
            counts["both"] += 1
        elif cell.row_span > 1:
            counts["row_merged"] += 1
        elif cell.col_span > 1:
            counts["col_merged"] += 1
        else:
            counts["plain"] += 1
    return counts
