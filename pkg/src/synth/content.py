#!/usr/bin/env python3
"""
Content generation and validation interfaces, with offline implementations.

A ContentGenerator turns structural-only markup into filled markup; a
TableValidator judges filled markup. The external implementations talk to a
language model (see src.api.llm_client); the ones here need no network.
"""

import random
from dataclasses import dataclass
from typing import Optional, Protocol

from src.config.config import config
from src.core.errors import MalformedMarkup, OverlappingSpans
from src.markup.html_codec import EmitMode, parse_table_html, same_structure, structure_to_html
from src.table.implicit import detect_implicit
from src.table.structure import cells_to_matrix


@dataclass(frozen=True)
class Verdict:
    accept: bool
    reason: str = ""

    def as_dict(self) -> dict:
        return {"accept": self.accept, "reason": self.reason}


class ContentGenerator(Protocol):
    def populate(self, structural_html: str) -> str:
        ...


class TableValidator(Protocol):
    def judge(self, filled_html: str, structural_html: Optional[str] = None) -> Verdict:
        ...


class DeterministicFiller:
    """
    Fills cell k (row-major anchor order) with "cell-<row>-<col>".

    A fixed fraction of cells, chosen from the seed and the input markup, is
    left empty.
    """

    def __init__(self, empty_fraction: Optional[float] = None, seed: int = 0):
        if empty_fraction is None:
            empty_fraction = config.get("CONTENT_EMPTY_FRACTION", 0.1)
        if not 0.0 <= empty_fraction <= 1.0:
            raise ValueError(f"empty_fraction must lie in [0, 1], got {empty_fraction}")
        self.empty_fraction = empty_fraction
        self.seed = seed

    def populate(self, structural_html: str) -> str:
        structure = parse_table_html(structural_html).structure
        n_cells = len(structure.cells)
        rng = random.Random(f"{self.seed}|{structural_html}")
        empties = set(rng.sample(range(n_cells), round(self.empty_fraction * n_cells)))
        contents = [
            "" if k in empties else f"cell-{cell.anchor_row}-{cell.anchor_col}"
            for k, cell in enumerate(structure.cells)
        ]
        return structure_to_html(structure.with_contents(contents), EmitMode.WITH_CONTENT)


class StructuralValidator:
    """
    Accepts filled markup that parses, tiles its grid, has no implicit rows or
    columns and, when the structural markup is given, matches its grid.
    """

    def judge(self, filled_html: str, structural_html: Optional[str] = None) -> Verdict:
        try:
            filled = parse_table_html(filled_html).structure
        except OverlappingSpans as e:
            return Verdict(False, f"overlapping_spans: {e}")
        except MalformedMarkup as e:
            return Verdict(False, f"malformed: {e}")

        report = detect_implicit(cells_to_matrix(filled))
        if not report.is_clean:
            return Verdict(False, ",".join(report.reasons()))

        if structural_html is not None:
            expected = parse_table_html(structural_html).structure
            if not same_structure(expected, filled):
                return Verdict(False, "structure_mismatch")
        return Verdict(True, "ok")


def deterministic_filler(empty_fraction: Optional[float] = None, seed: int = 0) -> DeterministicFiller:
    return DeterministicFiller(empty_fraction, seed)


def structural_validator() -> StructuralValidator:
    return StructuralValidator()
