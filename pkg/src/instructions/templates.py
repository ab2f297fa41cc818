#!/usr/bin/env python3
"""
The instruction library: thirteen templates in four groups.

Group 1 asks for the whole structure, group 2 for cells at given positions,
group 3 for empty or non-empty cells and group 4 for merged cells. Positional
parameters are 1-based, as they appear in the rendered text.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from src.core.errors import ParamOutOfRange
from src.table.structure import TableStructure


@dataclass(frozen=True)
class Template:
    text: str
    needs: FrozenSet[str] = frozenset()


# Shared by group 1 variant 1 and prediction time
RECOGNIZE_ALL = "Recognize all cells"

TEMPLATES: Dict[Tuple[int, int], Template] = {
    (1, 1): Template(RECOGNIZE_ALL),
    (1, 2): Template("Recognize all cells, the table has {n} rows."),
    (1, 3): Template("Recognize all cells, the table has {m} columns."),
    (1, 4): Template("Recognize all cells, the table has {n} rows and {m} columns."),
    (2, 1): Template("Cells in the {R} rows.", frozenset({"R"})),
    (2, 2): Template("Cells in the {C} columns.", frozenset({"C"})),
    (2, 3): Template("Cells in the {x} row and the {y} column.", frozenset({"x", "y"})),
    (2, 4): Template(
        "Cells around the cell in the {x} row and the {y} column.", frozenset({"x", "y"})
    ),
    (3, 1): Template("Recognize all empty cells."),
    (3, 2): Template("Recognize all non-empty cells."),
    (4, 1): Template("Cells merged across multiple rows."),
    (4, 2): Template("Cells merged across multiple columns."),
    (4, 3): Template("Cells merged across multiple rows and multiple columns."),
}

ALL_GROUPS: Tuple[int, ...] = (1, 2, 3, 4)


@dataclass(frozen=True)
class InstructionSpec:
    """A template choice plus its bound parameters."""

    group: int
    variant: int
    rows: Tuple[int, ...] = field(default_factory=tuple)
    cols: Tuple[int, ...] = field(default_factory=tuple)
    x: Optional[int] = None
    y: Optional[int] = None

    @property
    def template(self) -> Template:
        try:
            return TEMPLATES[(self.group, self.variant)]
        except KeyError:
            raise ParamOutOfRange(f"no template for group {self.group} variant {self.variant}")

    def given_params(self) -> FrozenSet[str]:
        given = set()
        if self.rows:
            given.add("R")
        if self.cols:
            given.add("C")
        if self.x is not None:
            given.add("x")
        if self.y is not None:
            given.add("y")
        return frozenset(given)

    def as_dict(self) -> dict:
        data = {"group": self.group, "variant": self.variant}
        if self.rows:
            data["R"] = list(self.rows)
        if self.cols:
            data["C"] = list(self.cols)
        if self.x is not None:
            data["x"] = self.x
            data["y"] = self.y
        return data


def template_keys(groups=ALL_GROUPS) -> List[Tuple[int, int]]:
    """Template keys of the given groups in library order."""
    wanted = set(groups)
    return [key for key in TEMPLATES if key[0] in wanted]


def check_params(spec: InstructionSpec, s: TableStructure) -> None:
    """
    Make sure the spec's parameters are exactly those its template needs and
    that every index falls inside the table.

    Raises:
        ParamOutOfRange: on a missing, extra or out-of-range parameter
    """
    needs = spec.template.needs
    given = spec.given_params()
    if given != needs:
        raise ParamOutOfRange(
            f"group {spec.group} variant {spec.variant} takes {sorted(needs)}, got {sorted(given)}"
        )
    for r in spec.rows:
        if not 1 <= r <= s.n_rows:
            raise ParamOutOfRange(f"row {r} outside 1..{s.n_rows}")
    for c in spec.cols:
        if not 1 <= c <= s.n_cols:
            raise ParamOutOfRange(f"column {c} outside 1..{s.n_cols}")
    if len(set(spec.rows)) != len(spec.rows) or len(set(spec.cols)) != len(spec.cols):
        raise ParamOutOfRange("row and column index sets must not repeat indices")
    if spec.x is not None and not 1 <= spec.x <= s.n_rows:
        raise ParamOutOfRange(f"x={spec.x} outside 1..{s.n_rows}")
    if spec.y is not None and not 1 <= spec.y <= s.n_cols:
        raise ParamOutOfRange(f"y={spec.y} outside 1..{s.n_cols}")


def _index_list(indices: Tuple[int, ...]) -> str:
    return ", ".join(str(i) for i in sorted(indices))


def render_instruction(spec: InstructionSpec, s: TableStructure) -> str:
    """
    Render the instruction text for a spec bound to a table.

    Args:
        spec: Template and parameters
        s: Table the instruction refers to

    Returns:
        Instruction text, e.g. "Cells in the 1, 3 rows."
    """
    check_params(spec, s)
    return spec.template.text.format(
        n=s.n_rows,
        m=s.n_cols,
        R=_index_list(spec.rows),
        C=_index_list(spec.cols),
        x=spec.x,
        y=spec.y,
    )


def prediction_instruction() -> str:
    """The single instruction used at prediction time."""
    return RECOGNIZE_ALL
