#!/usr/bin/env python3
"""
Target selection: which cells of a table answer an instruction.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Tuple

from src.instructions.templates import InstructionSpec, check_params
from src.table.structure import LogicalCell, TableStructure, cells_to_matrix


class TargetKind(str, Enum):
    FULL_STRUCTURE = "full_structure"
    CELL_SUBSET = "cell_subset"


@dataclass(frozen=True)
class TargetSet:
    kind: TargetKind
    cells: Tuple[LogicalCell, ...] = field(default_factory=tuple)
    serialized: str = ""

    def __len__(self) -> int:
        return len(self.cells)

    def as_dict(self) -> dict:
        if self.kind is TargetKind.FULL_STRUCTURE:
            return {"target_kind": self.kind.value, "target_matrix": self.serialized}
        return {
            "target_kind": self.kind.value,
            "target_cells": [c.as_dict() for c in self.cells],
        }


def serialize_cells(cells) -> str:
    """One "row col row_span col_span" line per cell, 0-based anchors."""
    return "\n".join(
        f"{c.anchor_row} {c.anchor_col} {c.row_span} {c.col_span}" for c in cells
    )


def cell_subset(cells) -> TargetSet:
    ordered = tuple(sorted(set(cells), key=lambda c: c.key))
    return TargetSet(TargetKind.CELL_SUBSET, ordered, serialize_cells(ordered))


def _in_rows(s: TableStructure, spec: InstructionSpec) -> List[LogicalCell]:
    wanted = {r - 1 for r in spec.rows}
    return [c for c in s.cells if any(c.anchor_row <= r <= c.last_row for r in wanted)]


def _in_cols(s: TableStructure, spec: InstructionSpec) -> List[LogicalCell]:
    wanted = {col - 1 for col in spec.cols}
    return [c for c in s.cells if any(c.anchor_col <= k <= c.last_col for k in wanted)]


def _at_position(s: TableStructure, spec: InstructionSpec) -> List[LogicalCell]:
    row, col = spec.x - 1, spec.y - 1
    return [c for c in s.cells if c.anchor_row <= row <= c.last_row and c.anchor_col <= col <= c.last_col]


def _around_position(s: TableStructure, spec: InstructionSpec) -> List[LogicalCell]:
    center = s.cell_at(spec.x - 1, spec.y - 1)
    top, bottom = center.anchor_row - 1, center.last_row + 1
    left, right = center.anchor_col - 1, center.last_col + 1
    return [
        c
        for c in s.cells
        if c is not center
        and c.anchor_row <= bottom
        and c.last_row >= top
        and c.anchor_col <= right
        and c.last_col >= left
    ]


_SELECTORS: Dict[Tuple[int, int], Callable[[TableStructure, InstructionSpec], List[LogicalCell]]] = {
    (2, 1): _in_rows,
    (2, 2): _in_cols,
    (2, 3): _at_position,
    (2, 4): _around_position,
    (3, 1): lambda s, spec: [c for c in s.cells if c.is_empty],
    (3, 2): lambda s, spec: [c for c in s.cells if not c.is_empty],
    (4, 1): lambda s, spec: [c for c in s.cells if c.row_span > 1],
    (4, 2): lambda s, spec: [c for c in s.cells if c.col_span > 1],
    (4, 3): lambda s, spec: [c for c in s.cells if c.row_span > 1 and c.col_span > 1],
}


def select_targets(spec: InstructionSpec, s: TableStructure) -> TargetSet:
    """
    Compute the candidate targets of an instruction on a table.

    Group 1 yields the full structure, serialized as its cell matrix. Every
    other group yields the matching cells, unique and sorted by anchor.
    "Around" means edge- or corner-adjacent to the cell covering (x, y),
    that cell excluded.

    Args:
        spec: Template and parameters
        s: Tiling structure

    Returns:
        The candidate set, possibly empty
    """
    check_params(spec, s)
    if spec.group == 1:
        return TargetSet(
            TargetKind.FULL_STRUCTURE, tuple(s.cells), cells_to_matrix(s).to_text()
        )
    return cell_subset(_SELECTORS[(spec.group, spec.variant)](s, spec))
