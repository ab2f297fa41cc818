#!/usr/bin/env python3
"""
HTML table codec.

Parses the PubTabNet/FinTabNet markup subset (table, thead, tbody, tfoot, tr,
td, th with rowspan/colspan) into a TableStructure, and emits structural-only
or content-bearing markup back. Any other tag inside a cell is stripped to its
text. th is read as a header td.
"""

import html
import logging
from dataclasses import dataclass, field
from enum import Enum
from html.parser import HTMLParser
from typing import Dict, List, Optional, Tuple

from src.core.errors import MalformedMarkup, MultipleTables, OverlappingSpans
from src.table.structure import LogicalCell, TableStructure, make_structure

logger = logging.getLogger("html-codec")

GROUP_TAGS = ("thead", "tbody", "tfoot")
CELL_TAGS = ("td", "th")
STRUCTURAL_TAGS = ("table",) + GROUP_TAGS + ("tr",) + CELL_TAGS
# Largest span accepted from markup; guards against runaway grids
MAX_SPAN = 1000


class EmitMode(str, Enum):
    STRUCTURAL_ONLY = "structural_only"
    WITH_CONTENT = "with_content"


@dataclass(frozen=True)
class SourceCell:
    """A td/th exactly as written in the markup."""

    row_span: int
    col_span: int
    content: str
    is_header: bool


@dataclass(frozen=True)
class SourceRow:
    """A tr with the row group it was written in (None when bare)."""

    group: Optional[str]
    cells: Tuple[SourceCell, ...]
    # Ordinal of the group element, so adjacent groups of one tag stay apart
    group_index: int = 0


@dataclass(frozen=True)
class HtmlTableDoc:
    raw_text: str
    structure: TableStructure
    header_rows: int
    rows: Tuple[SourceRow, ...] = field(default_factory=tuple)


class _TableEventParser(HTMLParser):
    """Collects rows and cells of the single table in a document."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.tables_seen = 0
        self.stack: List[str] = []
        self.rows: List[SourceRow] = []
        self._group: Optional[str] = None
        self._groups_opened = 0
        self._row: Optional[List[SourceCell]] = None
        self._cell_attrs: Optional[Dict[str, str]] = None
        self._cell_tag: Optional[str] = None
        self._text: List[str] = []

    def _fail(self, message: str):
        line, col = self.getpos()
        raise MalformedMarkup(f"{message} (line {line}, column {col})")

    def handle_starttag(self, tag, attrs):
        if tag not in STRUCTURAL_TAGS:
            return
        if tag == "table":
            if self.tables_seen:
                raise MultipleTables("markup contains more than one table element")
            if self.stack:
                self._fail("nested table")
            self.tables_seen += 1
        elif not self.stack:
            self._fail(f"<{tag}> outside table")
        elif self._cell_tag is not None:
            self._fail(f"<{tag}> inside an open cell")
        elif tag in GROUP_TAGS:
            if self.stack[-1] != "table":
                self._fail(f"<{tag}> must be a child of table")
            self._group = tag
            self._groups_opened += 1
        elif tag == "tr":
            if self.stack[-1] not in ("table",) + GROUP_TAGS:
                self._fail("<tr> must be inside table or a row group")
            self._row = []
        elif tag in CELL_TAGS:
            if self.stack[-1] != "tr":
                self._fail(f"<{tag}> must be inside <tr>")
            self._cell_tag = tag
            self._cell_attrs = {k.lower(): (v or "") for k, v in attrs}
            self._text = []
        self.stack.append(tag)

    def handle_startendtag(self, tag, attrs):
        if tag in STRUCTURAL_TAGS:
            self._fail(f"self-closing <{tag}/> is not allowed")

    def handle_endtag(self, tag):
        if tag not in STRUCTURAL_TAGS:
            return
        if not self.stack or self.stack[-1] != tag:
            expected = f"</{self.stack[-1]}>" if self.stack else "nothing"
            self._fail(f"unbalanced </{tag}>, expected {expected}")
        self.stack.pop()
        if tag in CELL_TAGS:
            self._row.append(self._finish_cell(tag))
            self._cell_tag = None
        elif tag == "tr":
            index = self._groups_opened if self._group else 0
            self.rows.append(SourceRow(self._group, tuple(self._row), index))
            self._row = None
        elif tag in GROUP_TAGS:
            self._group = None

    def handle_data(self, data):
        if self._cell_tag is not None:
            self._text.append(data)

    def _span(self, name: str) -> int:
        raw = (self._cell_attrs or {}).get(name, "1").strip().strip('"') or "1"
        try:
            value = int(raw)
        except ValueError:
            self._fail(f"{name}={raw!r} is not an integer")
        if not 1 <= value <= MAX_SPAN:
            self._fail(f"{name}={value} outside [1, {MAX_SPAN}]")
        return value

    def _finish_cell(self, tag: str) -> SourceCell:
        content = "".join(self._text).strip()
        is_header = tag == "th" or self._group == "thead"
        return SourceCell(self._span("rowspan"), self._span("colspan"), content, is_header)

    def finish(self) -> List[SourceRow]:
        self.close()
        if self.tables_seen == 0:
            raise MalformedMarkup("no table element found")
        if self.stack:
            raise MalformedMarkup(f"unclosed <{self.stack[-1]}> at end of markup")
        return self.rows


def place_cells(rows: List[SourceRow], allow_ragged: bool = False) -> TableStructure:
    """
    Place source cells on a grid left to right, skipping occupied positions.

    Args:
        rows: Parsed source rows
        allow_ragged: Fill uncovered positions with empty 1x1 cells instead of
            raising

    Returns:
        The tiling structure
    """
    occupied: Dict[Tuple[int, int], bool] = {}
    cells: List[LogicalCell] = []
    n_cols = 0
    n_rows = len(rows)
    for r, row in enumerate(rows):
        c = 0
        for src in row.cells:
            while occupied.get((r, c)):
                c += 1
            for dr in range(src.row_span):
                for dc in range(src.col_span):
                    pos = (r + dr, c + dc)
                    if occupied.get(pos):
                        raise OverlappingSpans(
                            f"cell at row {r} column {c} collides with a span at {pos}"
                        )
                    occupied[pos] = True
            cells.append(LogicalCell(r, c, src.row_span, src.col_span, src.content, src.is_header))
            n_cols = max(n_cols, c + src.col_span)
            n_rows = max(n_rows, r + src.row_span)
            c += src.col_span

    if n_rows == 0 or n_cols == 0:
        raise MalformedMarkup("table has no cells")

    padded = 0
    for r in range(n_rows):
        for c in range(n_cols):
            if occupied.get((r, c)):
                continue
            if not allow_ragged:
                raise MalformedMarkup(f"row {r} leaves column {c} uncovered")
            cells.append(LogicalCell(r, c, 1, 1, ""))
            padded += 1
    if padded:
        logger.debug(f"padded {padded} uncovered positions in a {n_rows}x{n_cols} table")
    return make_structure(n_rows, n_cols, cells)


def parse_table_html(text: str, allow_ragged: bool = False) -> HtmlTableDoc:
    """
    Parse markup holding exactly one table.

    Args:
        text: Markup text
        allow_ragged: Pad short rows with empty cells instead of failing

    Returns:
        Parsed document with its structure and header row count
    """
    parser = _TableEventParser()
    parser.feed(text)
    rows = parser.finish()
    structure = place_cells(rows, allow_ragged=allow_ragged)
    header_rows = sum(1 for row in rows if row.group == "thead")
    return HtmlTableDoc(text, structure, header_rows, tuple(rows))


def _open_cell(cell: LogicalCell, tag: str) -> str:
    attrs = ""
    if cell.row_span > 1:
        attrs += f' rowspan="{cell.row_span}"'
    if cell.col_span > 1:
        attrs += f' colspan="{cell.col_span}"'
    return f"<{tag}{attrs}>"


def structure_to_html(
    s: TableStructure,
    mode: EmitMode = EmitMode.WITH_CONTENT,
    header_rows: Optional[int] = None,
) -> str:
    """
    Emit a structure as table markup.

    One tr per grid row, a cell only at anchors. When header rows exist they are
    wrapped in thead and the remaining rows in tbody; header cells outside
    thead are written as th.

    Args:
        s: Tiling structure
        mode: structural_only leaves every td empty
        header_rows: Override for the number of leading header rows

    Returns:
        Markup text
    """
    s.check_tiling()
    mode = EmitMode(mode)
    if header_rows is None:
        header_rows = s.header_rows()
    by_row: Dict[int, List[LogicalCell]] = {r: [] for r in range(s.n_rows)}
    for cell in s.cells:
        by_row[cell.anchor_row].append(cell)

    def render_row(r: int) -> str:
        parts = ["<tr>"]
        for cell in by_row[r]:
            body = ""
            if mode is EmitMode.WITH_CONTENT and cell.content:
                body = html.escape(cell.content, quote=False)
            tag = "th" if cell.is_header and r >= header_rows else "td"
            parts.append(f"{_open_cell(cell, tag)}{body}</{tag}>")
        parts.append("</tr>")
        return "".join(parts)

    if header_rows > 0:
        head = "".join(render_row(r) for r in range(header_rows))
        body = "".join(render_row(r) for r in range(header_rows, s.n_rows))
        inner = f"<thead>{head}</thead><tbody>{body}</tbody>"
    else:
        inner = "".join(render_row(r) for r in range(s.n_rows))
    return f"<table>{inner}</table>"


def same_structure(a: TableStructure, b: TableStructure) -> bool:
    """Grid and spans equal, contents ignored."""
    return a.topology() == b.topology()
