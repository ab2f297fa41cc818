#!/usr/bin/env python3
"""
Block layouts and splicing of block matrices into a target matrix.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from src.core.errors import DimensionMismatch
from src.table.matrix import CellMatrix, Token, require_valid

logger = logging.getLogger("table-matrix")

Region = Tuple[int, int, int, int]  # (row0, col0, height, width)


@dataclass(frozen=True)
class BlockLayout:
    """A grid split of an n_rows x n_cols table by interior row and column cuts."""

    n_rows: int
    n_cols: int
    row_cuts: Tuple[int, ...] = ()
    col_cuts: Tuple[int, ...] = ()

    def __post_init__(self):
        for name, cuts, limit in (("row", self.row_cuts, self.n_rows), ("col", self.col_cuts, self.n_cols)):
            if list(cuts) != sorted(set(cuts)):
                raise DimensionMismatch(f"{name} cuts must be strictly increasing: {cuts}")
            if any(not 0 < cut < limit for cut in cuts):
                raise DimensionMismatch(f"{name} cuts {cuts} must be interior to [0, {limit}]")

    @property
    def regions(self) -> List[Region]:
        """Blocks in row-major order."""
        row_edges = [0, *self.row_cuts, self.n_rows]
        col_edges = [0, *self.col_cuts, self.n_cols]
        regions = []
        for r0, r1 in zip(row_edges, row_edges[1:]):
            for c0, c1 in zip(col_edges, col_edges[1:]):
                regions.append((r0, c0, r1 - r0, c1 - c0))
        return regions

    @property
    def n_blocks(self) -> int:
        return (len(self.row_cuts) + 1) * (len(self.col_cuts) + 1)

    def as_dict(self) -> dict:
        return {
            "n_rows": self.n_rows,
            "n_cols": self.n_cols,
            "row_cuts": list(self.row_cuts),
            "col_cuts": list(self.col_cuts),
        }


def splice(layout: BlockLayout, blocks: Sequence[CellMatrix]) -> CellMatrix:
    """
    Copy each block into its layout region.

    A valid block has no U/X in its first row and no L/X in its first column,
    so no merge crosses a block boundary and the result is valid.

    Args:
        layout: Target layout
        blocks: One valid matrix per region, in row-major region order

    Returns:
        The spliced target matrix
    """
    regions = layout.regions
    if len(blocks) != len(regions):
        raise DimensionMismatch(f"{len(blocks)} blocks for {len(regions)} layout regions")

    grid: List[List[Token]] = [[Token.C] * layout.n_cols for _ in range(layout.n_rows)]
    for idx, ((r0, c0, h, w), block) in enumerate(zip(regions, blocks)):
        if (block.n_rows, block.n_cols) != (h, w):
            raise DimensionMismatch(
                f"block {idx} is {block.n_rows}x{block.n_cols}, region expects {h}x{w}"
            )
        require_valid(block, context=f"block {idx}")
        for r, row in enumerate(block.rows()):
            grid[r0 + r][c0:c0 + w] = row
    return CellMatrix.from_rows(grid)
