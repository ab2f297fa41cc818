#!/usr/bin/env python3
"""
Render manifests and reported geometry.

Rendering happens out of process: a headless browser reads the manifest,
writes one image per document and a JSONL geometry file of
{row, col, box: [x_min, y_min, x_max, y_max]} lines. This module writes the
manifest, applies the image constraints and checks returned geometry.
"""

import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

from src.core.errors import UnreadablePath
from src.render.document import cell_xpath
from src.table.structure import TableStructure

logger = logging.getLogger("render-manifest")

MANIFEST_NAME = "render_manifest.json"


@dataclass(frozen=True)
class RenderConstraints:
    max_height_px: int = 5000
    max_width_px: int = 3000
    min_font_height_px: int = 12


CONSTRAINTS = RenderConstraints()


def check_constraints(
    reported_width: float,
    reported_height: float,
    min_glyph_height: float,
    constraints: RenderConstraints = CONSTRAINTS,
) -> str:
    """Return "keep" or "discard" for a rendered sample."""
    if (
        reported_width > constraints.max_width_px
        or reported_height > constraints.max_height_px
        or min_glyph_height < constraints.min_font_height_px
    ):
        return "discard"
    return "keep"


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    document: str
    image: str
    geometry: str
    locators: Tuple[Tuple[int, int, str], ...]

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "document": self.document,
            "image": self.image,
            "geometry": self.geometry,
            "locators": [{"row": r, "col": c, "xpath": xp} for r, c, xp in self.locators],
        }


def manifest_entry(record_id: str, structure: TableStructure) -> ManifestEntry:
    """Entry for one record; paths are relative to the dataset directory."""
    locators = tuple(
        (cell.anchor_row, cell.anchor_col, cell_xpath(cell.anchor_row, cell.anchor_col))
        for cell in structure.cells
    )
    return ManifestEntry(
        record_id,
        f"documents/{record_id}.html",
        f"images/{record_id}.png",
        f"geometry/{record_id}.jsonl",
        locators,
    )


def render_manifest(
    entries: Iterable[ManifestEntry],
    out_dir: Union[str, Path],
    constraints: RenderConstraints = CONSTRAINTS,
) -> Path:
    """
    Write the render manifest.

    Args:
        entries: One entry per record, in record order
        out_dir: Dataset directory the entry paths are relative to
        constraints: Image constraints the renderer must apply

    Returns:
        Path of the manifest file
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = list(entries)
    manifest = {
        "constraints": asdict(constraints),
        "entries": [e.as_dict() for e in entries],
    }
    path = out_dir / MANIFEST_NAME
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"wrote render manifest with {len(entries)} entries to {path}")
    return path


@dataclass(frozen=True)
class GeometryRecord:
    row: int
    col: int
    box: Tuple[float, float, float, float]

    @property
    def cell_id(self) -> Tuple[int, int]:
        return (self.row, self.col)


def load_geometry(path: Union[str, Path]) -> List[GeometryRecord]:
    """
    Read a renderer's JSONL geometry file.

    Raises:
        UnreadablePath: if the file cannot be read
        ValueError: on a line that is not a geometry record
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise UnreadablePath(f"cannot read geometry {path}: {e}")
    records = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
            box = tuple(float(v) for v in data["box"])
            if len(box) != 4:
                raise ValueError("box needs 4 numbers")
            records.append(GeometryRecord(int(data["row"]), int(data["col"]), box))
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"{path}:{lineno}: bad geometry record: {e}")
    return records


def _interiors_overlap(a: Sequence[float], b: Sequence[float]) -> bool:
    return a[0] < b[2] and b[0] < a[2] and a[1] < b[3] and b[1] < a[3]


def verify_geometry(records: Sequence[GeometryRecord], structure: TableStructure) -> List[str]:
    """
    Check reported boxes against a table.

    Every anchor needs exactly one box, coordinates must be ordered and boxes of
    distinct cells must not overlap in their interiors.

    Returns:
        Problem descriptions; empty when the geometry is consistent
    """
    problems: List[str] = []
    anchors = {cell.key for cell in structure.cells}
    seen = {}
    for rec in records:
        if rec.cell_id not in anchors:
            problems.append(f"box for ({rec.row}, {rec.col}) which is not a cell anchor")
        if rec.cell_id in seen:
            problems.append(f"duplicate box for ({rec.row}, {rec.col})")
        seen[rec.cell_id] = rec
        x0, y0, x1, y1 = rec.box
        if x0 > x1 or y0 > y1:
            problems.append(f"unordered box for ({rec.row}, {rec.col}): {list(rec.box)}")
    for key in sorted(anchors - set(seen)):
        problems.append(f"no box for ({key[0]}, {key[1]})")

    boxes = sorted(seen.values(), key=lambda g: g.cell_id)
    for i, a in enumerate(boxes):
        for b in boxes[i + 1:]:
            if _interiors_overlap(a.box, b.box):
                problems.append(f"boxes of ({a.row}, {a.col}) and ({b.row}, {b.col}) overlap")
    return problems
