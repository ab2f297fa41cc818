#!/usr/bin/env python3
"""
Synthesis settings.

SynthConfig is a pydantic model so that JSON config documents handed to the
synthesize command are checked field by field (bound ordering included).
"""

import json
from enum import Enum
from pathlib import Path
from typing import Tuple, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from src.config.config import config
from src.core.errors import ConfigError, UnreadablePath


class DimMode(str, Enum):
    UNIFORM_RANGE = "uniform_range"
    BCDSTAB = "bcdstab"


class ContentMode(str, Enum):
    DETERMINISTIC = "deterministic"
    EXTERNAL = "external"


def _ordered(bounds: Tuple[int, int], name: str) -> None:
    low, high = bounds
    if low > high:
        raise ValueError(f"{name} must be ordered, got [{low}, {high}]")


class UniformDims(BaseModel):
    min_dim: int = Field(4, ge=4)
    max_dim: int = Field(20, ge=4)

    @model_validator(mode="after")
    def _check_order(self):
        _ordered((self.min_dim, self.max_dim), "uniform dims")
        return self


class BcdstabDims(BaseModel):
    # Mean and spread of the cell-count distribution are not published;
    # these defaults are tunable.
    cell_count_mean: float = 300.0
    cell_count_sd: float = Field(250.0, ge=0.0)
    cell_bounds: Tuple[int, int] = (4, 1000)
    row_bounds: Tuple[int, int] = (2, 100)
    col_bounds: Tuple[int, int] = (2, 15)

    @model_validator(mode="after")
    def _check_order(self):
        _ordered(self.cell_bounds, "cell_bounds")
        _ordered(self.row_bounds, "row_bounds")
        _ordered(self.col_bounds, "col_bounds")
        if self.row_bounds[0] < 1 or self.col_bounds[0] < 1:
            raise ValueError("row and column bounds must start at 1 or more")
        return self


class SynthConfig(BaseModel):
    dim_mode: DimMode = DimMode.UNIFORM_RANGE
    uniform: UniformDims = Field(default_factory=UniformDims)
    bcdstab: BcdstabDims = Field(default_factory=BcdstabDims)
    n_blocks: int = Field(4, ge=1)
    merge_injections: int = Field(2, ge=0)
    content_mode: ContentMode = ContentMode.DETERMINISTIC
    max_validation_retries: int = Field(default_factory=lambda: config.get("SYNTH_MAX_VALIDATION_RETRIES", 3), ge=1)
    seed: int = Field(default_factory=lambda: config.get("SEED", 0), ge=0, lt=2**64)
    empty_fraction: float = Field(default_factory=lambda: config.get("CONTENT_EMPTY_FRACTION", 0.1), ge=0.0, le=1.0)
    repair_sources: bool = True

    def as_dict(self) -> dict:
        return self.model_dump(mode="json")


def load_synth_config(source: Union[str, Path, dict, None] = None, **overrides) -> SynthConfig:
    """
    Build a SynthConfig from a JSON file, a mapping or defaults.

    Args:
        source: Path to a JSON document, an already-parsed mapping, or None
        **overrides: Field values applied on top (None values are ignored)

    Returns:
        Validated settings

    Raises:
        ConfigError: if the document is not valid JSON or fails validation
        UnreadablePath: if the file cannot be read
    """
    data: dict = {}
    if isinstance(source, dict):
        data = dict(source)
    elif source is not None:
        path = Path(source)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise UnreadablePath(f"cannot read synthesis config {path}: {e}")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"synthesis config {path} is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise ConfigError(f"synthesis config {path} must hold a JSON object")

    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return SynthConfig(**data)
    except ValidationError as e:
        raise ConfigError(f"invalid synthesis config: {e}")

