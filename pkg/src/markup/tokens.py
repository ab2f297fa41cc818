#!/usr/bin/env python3
"""
Structural token sequences (PubTabNet convention) and token-economy counts.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from src.markup.html_codec import EmitMode, structure_to_html
from src.table.matrix import CellMatrix
from src.table.structure import TableStructure

OPEN_TAGS = {"<thead>": "</thead>", "<tbody>": "</tbody>", "<tr>": "</tr>", "<td>": "</td>"}


@dataclass(frozen=True)
class StructuralTokenSequence:
    tokens: Tuple[str, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.tokens)

    def to_html(self, contents: Optional[Sequence[str]] = None) -> str:
        """
        Reassemble table markup, inserting one content string before each
        closing </td> when contents are given.
        """
        parts = ["<table>"]
        cell = 0
        for tok in self.tokens:
            if tok == "</td>" and contents is not None:
                if cell < len(contents):
                    parts.append(contents[cell])
                cell += 1
            parts.append(tok)
        parts.append("</table>")
        return "".join(parts)

    def is_balanced(self) -> bool:
        """Open/close tags nest properly and attributes sit inside "<td ... >"."""
        stack: List[str] = []
        in_td_open = False
        for tok in self.tokens:
            if in_td_open:
                if tok == ">":
                    in_td_open = False
                    stack.append("</td>")
                elif not (tok.startswith(" rowspan=") or tok.startswith(" colspan=")):
                    return False
            elif tok == "<td":
                in_td_open = True
            elif tok in OPEN_TAGS:
                stack.append(OPEN_TAGS[tok])
            elif tok in OPEN_TAGS.values():
                if not stack or stack.pop() != tok:
                    return False
            else:
                return False
        return not stack and not in_td_open


def tokenize_structure(s: TableStructure, header_rows: Optional[int] = None) -> StructuralTokenSequence:
    """
    Serialize a structure as PubTabNet-style structural tokens.

    Plain cells are "<td>", "</td>"; spanned cells are "<td", ' rowspan="k"',
    ' colspan="k"', ">", "</td>". thead/tbody tokens appear only when header
    rows exist, mirroring structure_to_html.

    Args:
        s: Tiling structure
        header_rows: Override for the number of leading header rows

    Returns:
        Token sequence
    """
    s.check_tiling()
    if header_rows is None:
        header_rows = s.header_rows()
    by_row: Dict[int, list] = {r: [] for r in range(s.n_rows)}
    for cell in s.cells:
        by_row[cell.anchor_row].append(cell)

    tokens: List[str] = []
    for r in range(s.n_rows):
        if header_rows > 0 and r == 0:
            tokens.append("<thead>")
        if header_rows > 0 and r == header_rows:
            tokens.extend(["</thead>", "<tbody>"])
        tokens.append("<tr>")
        for cell in by_row[r]:
            if cell.is_merged:
                tokens.append("<td")
                if cell.row_span > 1:
                    tokens.append(f' rowspan="{cell.row_span}"')
                if cell.col_span > 1:
                    tokens.append(f' colspan="{cell.col_span}"')
                tokens.append(">")
            else:
                tokens.append("<td>")
            tokens.append("</td>")
        tokens.append("</tr>")
    if header_rows > 0:
        if header_rows >= s.n_rows:
            tokens.extend(["</thead>", "<tbody>"])
        tokens.append("</tbody>")
    return StructuralTokenSequence(tuple(tokens))


def count_matrix_tokens(m: CellMatrix) -> int:
    """One token per grid position."""
    return m.n_rows * m.n_cols


def token_ratio(m: CellMatrix, s: TableStructure) -> float:
    """Matrix tokens divided by HTML structural tokens for the same table."""
    return count_matrix_tokens(m) / len(tokenize_structure(s))


def char_ratio(m: CellMatrix, s: TableStructure) -> float:
    """Serialized matrix length divided by structural HTML length."""
    return len(m.to_text()) / len(structure_to_html(s, EmitMode.STRUCTURAL_ONLY))
