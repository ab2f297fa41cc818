#!/usr/bin/env python3
"""
Block partitioning and block filling for Table Mix Expand.

A target grid is cut into a grid of blocks; each block is filled with the
top-left crop of a real table at least as large as the block.
"""

import logging
import random
from typing import List, Optional, Tuple

from src.config.config import config
from src.core.errors import NoCompatibleSource, Unpartitionable
from src.corpus.loader import Corpus, sample_compatible
from src.table.implicit import detect_implicit
from src.table.layout import BlockLayout
from src.table.matrix import CellMatrix, crop_top_left

logger = logging.getLogger("synth-blocks")


def grid_shape(rows: int, cols: int, n_blocks: int) -> Tuple[int, int]:
    """
    Pick the block grid a x b = n_blocks that fits the table.

    The most square factorization wins (4 -> 2x2); ties go to more block
    rows.

    Raises:
        Unpartitionable: if no factorization fits inside rows x cols
    """
    options: List[Tuple[int, int]] = []
    for a in range(1, n_blocks + 1):
        if n_blocks % a:
            continue
        b = n_blocks // a
        if a <= rows and b <= cols:
            options.append((a, b))
    if not options:
        raise Unpartitionable(f"cannot split a {rows}x{cols} grid into {n_blocks} blocks")
    return min(options, key=lambda ab: (abs(ab[0] - ab[1]), -ab[0]))


def partition_grid(rows: int, cols: int, n_blocks: int, rng: random.Random) -> BlockLayout:
    """
    Split a rows x cols grid into n_blocks rectangular blocks.

    Args:
        rows: Table rows
        cols: Table columns
        n_blocks: Number of blocks, a product a x b with a <= rows, b <= cols
        rng: Seeded random source

    Returns:
        Layout with a-1 row cuts and b-1 column cuts drawn without repetition
    """
    if n_blocks < 1:
        raise Unpartitionable(f"n_blocks must be positive, got {n_blocks}")
    a, b = grid_shape(rows, cols, n_blocks)
    row_cuts = tuple(sorted(rng.sample(range(1, rows), a - 1)))
    col_cuts = tuple(sorted(rng.sample(range(1, cols), b - 1)))
    return BlockLayout(rows, cols, row_cuts, col_cuts)


def fill_block(
    h: int,
    w: int,
    corpus: Corpus,
    rng: random.Random,
    max_attempts: Optional[int] = None,
) -> Tuple[CellMatrix, str]:
    """
    Draw a corpus table of at least h x w and crop its top-left corner.

    Crops that leave a row or column without any anchor are drawn again, since
    a block like that would put an implicit line into the synthetic table.

    Args:
        h: Block height
        w: Block width
        corpus: Source tables
        rng: Seeded random source
        max_attempts: Draw budget (SYNTH_SOURCE_RETRIES by default)

    Returns:
        (cropped matrix, source table id)

    Raises:
        NoCompatibleSource: when no table fits, with the largest available dims
    """
    budget = max_attempts or config.get("SYNTH_SOURCE_RETRIES", 1000)
    for _ in range(budget):
        record = sample_compatible(corpus, h, w, rng)
        block = crop_top_left(record.matrix, h, w)
        if detect_implicit(block).is_clean:
            logger.debug(f"block {h}x{w} from {record.id} ({record.n_rows}x{record.n_cols})")
            return block, record.id
    logger.warning(f"every {h}x{w} crop drawn in {budget} attempts had implicit lines")
    raise NoCompatibleSource(h, w, corpus.largest_dims())
