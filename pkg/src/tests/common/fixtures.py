"""
Deterministic table builders shared by tests and conftest fixtures.
"""

import json
import random
from typing import List, Optional

from src.corpus.loader import Corpus, make_record
from src.markup.html_codec import parse_table_html
from src.markup.tokens import tokenize_structure
from src.table.structure import LogicalCell, TableStructure, make_structure

# Full-width rowspan cell whose second row has no anchor: renders like a 2x2
# table although the markup describes three rows.
COLLAPSED_ROW_HTML = (
    "<table>"
    "<tr><td>a</td><td>b</td></tr>"
    '<tr><td rowspan="2" colspan="2">x</td></tr>'
    "<tr></tr>"
    "</table>"
)
COLLAPSED_ROW_MATRIX_TEXT = "CC\nCL\nUX"


def collapsed_row_structure() -> TableStructure:
    return parse_table_html(COLLAPSED_ROW_HTML).structure


def random_structure(
    rng: random.Random,
    n_rows: int,
    n_cols: int,
    span_prob: float = 0.3,
    max_span: int = 3,
    plain_border: bool = False,
    contents: bool = False,
    empty_prob: float = 0.2,
) -> TableStructure:
    """
    Random tiling built row-major: each uncovered position anchors a cell whose
    span is drawn and then shrunk until it fits.

    Args:
        rng: Random source
        n_rows: Rows
        n_cols: Columns
        span_prob: Chance that an anchor tries a span larger than 1x1
        max_span: Largest span drawn in either direction
        plain_border: Keep row 0 and column 0 made of 1x1 cells, so every
            top-left crop anchors every row and column
        contents: Give cells text, some left empty
        empty_prob: Chance a cell is empty when contents is set
    """
    covered = [[False] * n_cols for _ in range(n_rows)]
    cells: List[LogicalCell] = []
    for r in range(n_rows):
        for c in range(n_cols):
            if covered[r][c]:
                continue
            h = w = 1
            if rng.random() < span_prob and not (plain_border and (r == 0 or c == 0)):
                h = rng.randint(1, max_span)
                w = rng.randint(1, max_span)
            w = min(w, n_cols - c)
            while w > 1 and any(covered[r][c + k] for k in range(w)):
                w -= 1
            h = min(h, n_rows - r)
            while h > 1 and any(covered[r + i][c + k] for i in range(h) for k in range(w)):
                h -= 1
            for i in range(h):
                for k in range(w):
                    covered[r + i][c + k] = True
            content: Optional[str] = None
            if contents:
                content = "" if rng.random() < empty_prob else f"v{r}{c}{rng.randint(0, 99)}"
            cells.append(LogicalCell(r, c, h, w, content))
    return make_structure(n_rows, n_cols, cells)


def fixture_corpus_structures(count: int = 8, size: int = 20, seed: int = 7) -> List[TableStructure]:
    """Source tables large enough for any block of a 4..20 synthetic table."""
    rng = random.Random(seed)
    return [
        random_structure(rng, size, size, span_prob=0.25, plain_border=True, contents=True)
        for _ in range(count)
    ]


def mixed_instruction_structures(count: int = 50, seed: int = 11) -> List[TableStructure]:
    """Tables of varied size with empty cells and merges of every kind."""
    rng = random.Random(seed)
    tables = []
    for _ in range(count):
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        tables.append(random_structure(rng, rows, cols, span_prob=0.35, contents=True, empty_prob=0.3))
    return tables


def pubtabnet_line(record_id: str, s: TableStructure, split: Optional[str] = None) -> str:
    """One PubTabNet-style annotation line for a structure."""
    cells = [{"tokens": list(cell.content or "")} for cell in s.cells]
    data = {
        "imgid": record_id,
        "filename": f"{record_id}.png",
        "html": {"structure": {"tokens": list(tokenize_structure(s).tokens)}, "cells": cells},
    }
    if split:
        data["split"] = split
    return json.dumps(data, sort_keys=True)


def spanning_table() -> TableStructure:
    """4x4 with a 2x2, a rowspan, a colspan and one empty cell."""
    cells = [
        LogicalCell(0, 0, 2, 2, "x"),
        LogicalCell(0, 2, 2, 1, ""),
        LogicalCell(0, 3, 1, 1, "y"),
        LogicalCell(1, 3, 1, 1, "z"),
        LogicalCell(2, 0, 1, 2, "w"),
        LogicalCell(2, 2, 1, 1, "1"),
        LogicalCell(2, 3, 1, 1, "2"),
    ] + [LogicalCell(3, c, 1, 1, f"r{c}") for c in range(4)]
    return make_structure(4, 4, cells)


def fixture_corpus(count: int = 8, size: int = 20, seed: int = 7) -> Corpus:
    """In-memory corpus of the fixture source tables, ids src00, src01, ..."""
    structures = fixture_corpus_structures(count, size, seed)
    return Corpus([make_record(f"src{i:02d}", s) for i, s in enumerate(structures)], source="fixture")
