#!/usr/bin/env python3
"""
Table dimension sampling for synthesis.
"""

import logging
import random
from typing import Optional, Tuple

from src.config.config import config
from src.core.errors import RetryBudgetExhausted
from src.synth.settings import DimMode, SynthConfig

logger = logging.getLogger("synth-pipeline")


def sample_dims_uniform(cfg: SynthConfig, rng: random.Random) -> Tuple[int, int]:
    """Independent uniform rows and columns in [min_dim, max_dim]."""
    low, high = cfg.uniform.min_dim, cfg.uniform.max_dim
    return rng.randint(low, high), rng.randint(low, high)


def sample_dims_bcdstab(
    cfg: SynthConfig, rng: random.Random, max_attempts: Optional[int] = None
) -> Tuple[int, int]:
    """
    Rejection-sample dense table dimensions.

    A cell count is drawn from a rounded normal distribution and kept only
    inside cell_bounds; a row count is drawn uniformly from row_bounds; the
    column count is their integer quotient and must land in col_bounds.

    Args:
        cfg: Settings holding the bcdstab parameters
        rng: Seeded random source
        max_attempts: Draw budget (SYNTH_DIM_RETRIES by default)

    Returns:
        (rows, cols)

    Raises:
        RetryBudgetExhausted: when no draw is accepted within the budget
    """
    p = cfg.bcdstab
    budget = max_attempts or config.get("SYNTH_DIM_RETRIES", 100000)
    for _ in range(budget):
        cells = round(rng.gauss(p.cell_count_mean, p.cell_count_sd))
        if not p.cell_bounds[0] <= cells <= p.cell_bounds[1]:
            continue
        rows = rng.randint(*p.row_bounds)
        cols = cells // rows
        if p.col_bounds[0] <= cols <= p.col_bounds[1]:
            return rows, cols
    raise RetryBudgetExhausted(
        f"no dimensions accepted after {budget} draws "
        f"(mean={p.cell_count_mean}, sd={p.cell_count_sd})",
        budget,
    )


def sample_dims(cfg: SynthConfig, rng: random.Random) -> Tuple[int, int]:
    if cfg.dim_mode is DimMode.BCDSTAB:
        return sample_dims_bcdstab(cfg, rng)
    return sample_dims_uniform(cfg, rng)
