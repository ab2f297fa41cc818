#!/usr/bin/env python3
"""
Training triplet sampling.

A triplet pairs an instruction text with a source table and one target drawn
from the instruction's candidate set. Templates whose candidate set comes out
empty are redrawn, so accepted triplets are spread uniformly over the
templates a table admits.
"""

import logging
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from src.config.config import config
from src.core.errors import NoValidInstruction, ParamOutOfRange
from src.instructions.targets import TargetKind, TargetSet, cell_subset, select_targets
from src.instructions.templates import (
    ALL_GROUPS,
    InstructionSpec,
    TEMPLATES,
    render_instruction,
    template_keys,
)
from src.table.structure import TableStructure

logger = logging.getLogger("instruction-sampler")


@dataclass(frozen=True)
class TrainingTriplet:
    instruction_text: str
    source_id: str
    spec: InstructionSpec
    target: TargetSet
    attempts: int = 1

    def as_dict(self) -> dict:
        data = {"source_id": self.source_id, "instruction": self.instruction_text}
        data.update(self.target.as_dict())
        data["spec"] = self.spec.as_dict()
        return data


def _random_subset(size: int, rng: random.Random) -> Tuple[int, ...]:
    """Non-empty subset of 1..size, each index kept with probability 0.5."""
    while True:
        picked = tuple(i for i in range(1, size + 1) if rng.random() < 0.5)
        if picked:
            return picked


def sample_spec(key: Tuple[int, int], s: TableStructure, rng: random.Random) -> InstructionSpec:
    """Bind uniformly drawn parameters to the template at key."""
    group, variant = key
    needs = TEMPLATES[key].needs
    if "R" in needs:
        return InstructionSpec(group, variant, rows=_random_subset(s.n_rows, rng))
    if "C" in needs:
        return InstructionSpec(group, variant, cols=_random_subset(s.n_cols, rng))
    if "x" in needs:
        return InstructionSpec(
            group, variant, x=rng.randint(1, s.n_rows), y=rng.randint(1, s.n_cols)
        )
    return InstructionSpec(group, variant)


def _admits_any(s: TableStructure, groups: Iterable[int]) -> bool:
    groups = set(groups)
    if groups & {1, 2}:
        return True
    if 3 in groups and s.cells:
        return True
    return 4 in groups and bool(s.merged_cells())


def sample_triplet(
    s: TableStructure,
    source_id: str,
    rng: random.Random,
    enabled_groups: Iterable[int] = ALL_GROUPS,
    max_attempts: Optional[int] = None,
) -> TrainingTriplet:
    """
    Draw one training triplet for a table.

    Args:
        s: Tiling structure of the source table
        source_id: Identifier of the source table
        rng: Seeded random source; the triplet is a function of its state
        enabled_groups: Instruction groups to draw from
        max_attempts: Template redraw budget (INSTRUCTION_RETRIES by default)

    Returns:
        The triplet

    Raises:
        NoValidInstruction: if no enabled template has a non-empty candidate set
    """
    s.check_tiling()
    groups = tuple(sorted(set(enabled_groups)))
    unknown = [g for g in groups if g not in ALL_GROUPS]
    if unknown or not groups:
        raise ParamOutOfRange(f"enabled groups must be a non-empty subset of {ALL_GROUPS}, got {groups}")
    if not _admits_any(s, groups):
        raise NoValidInstruction(
            f"table {source_id} admits no instruction from groups {list(groups)}"
        )

    keys = template_keys(groups)
    budget = max_attempts or config.get("INSTRUCTION_RETRIES", 64)
    for attempt in range(1, budget + 1):
        spec = sample_spec(rng.choice(keys), s, rng)
        candidates = select_targets(spec, s)
        if candidates.kind is TargetKind.FULL_STRUCTURE:
            target = candidates
        elif len(candidates):
            target = cell_subset([rng.choice(candidates.cells)])
        else:
            continue
        return TrainingTriplet(render_instruction(spec, s), source_id, spec, target, attempt)

    raise NoValidInstruction(
        f"no instruction with targets for table {source_id} after {budget} draws"
    )


def verify_triplet(triplet: TrainingTriplet, s: TableStructure) -> bool:
    """
    Check that a triplet's text and target agree with its table.

    Args:
        triplet: Triplet to check
        s: The source table

    Returns:
        True when the instruction renders to the stored text and the target is
        a member of the candidate set
    """
    try:
        if render_instruction(triplet.spec, s) != triplet.instruction_text:
            return False
        candidates = select_targets(triplet.spec, s)
    except ParamOutOfRange as e:
        logger.debug(f"triplet for {triplet.source_id} does not bind: {e}")
        return False
    if candidates.kind is not triplet.target.kind:
        return False
    if candidates.kind is TargetKind.FULL_STRUCTURE:
        return candidates.serialized == triplet.target.serialized
    members = set(candidates.cells)
    return len(triplet.target.cells) == 1 and triplet.target.cells[0] in members
