#!/usr/bin/env python3
"""
Synthetic dataset layout on disk.

    <out>/records.jsonl           one summary line per record, by index
    <out>/failures.jsonl          records that could not be built
    <out>/html/<id>.html          filled markup (structural markup when rejected)
    <out>/matrix/<id>.txt         cell matrix
    <out>/documents/<id>.html     styled standalone document for rendering
    <out>/render_manifest.json    renderer hand-off
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Union

from src.core.errors import UnreadablePath
from src.render.document import emit_document
from src.render.manifest import manifest_entry, render_manifest
from src.synth.pipeline import SynthBatch
from src.table.matrix import CellMatrix

logger = logging.getLogger("synth-pipeline")


def _dump(data: dict) -> str:
    return json.dumps(data, sort_keys=True, ensure_ascii=False)


def write_dataset(batch: SynthBatch, out_dir: Union[str, Path]) -> Path:
    """
    Write a synthesized batch, its documents and the render manifest.

    Args:
        batch: Records to write
        out_dir: Target directory, created when missing

    Returns:
        The output directory
    """
    out = Path(out_dir)
    for sub in ("html", "matrix", "documents"):
        (out / sub).mkdir(parents=True, exist_ok=True)

    entries = []
    with (out / "records.jsonl").open("w", encoding="utf-8") as handle:
        for record in batch.records:
            handle.write(_dump(record.as_dict()) + "\n")
            markup = record.filled_html or record.structural_html
            (out / "html" / f"{record.id}.html").write_text(markup + "\n", encoding="utf-8")
            (out / "matrix" / f"{record.id}.txt").write_text(record.matrix.to_text() + "\n", encoding="utf-8")
            (out / "documents" / f"{record.id}.html").write_text(
                emit_document(markup, record.style, title=record.id), encoding="utf-8"
            )
            entries.append(manifest_entry(record.id, record.structure))

    with (out / "failures.jsonl").open("w", encoding="utf-8") as handle:
        for failure in batch.failures:
            handle.write(_dump({"id": failure.id, "index": failure.index, **failure.error}) + "\n")

    render_manifest(entries, out)
    logger.info(f"wrote {len(batch.records)} records to {out}")
    return out


@dataclass(frozen=True)
class DatasetEntry:
    id: str
    summary: dict
    matrix: CellMatrix
    html: str


def load_dataset(path: Union[str, Path]) -> List[DatasetEntry]:
    """
    Read back a dataset written by write_dataset.

    Raises:
        UnreadablePath: if records.jsonl or a referenced file is missing
    """
    root = Path(path)
    index = root / "records.jsonl"
    if not index.is_file():
        raise UnreadablePath(f"{root} has no records.jsonl")
    entries = []
    try:
        for line in index.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            summary = json.loads(line)
            rid = summary["id"]
            matrix = CellMatrix.from_text((root / "matrix" / f"{rid}.txt").read_text(encoding="utf-8"))
            markup = (root / "html" / f"{rid}.html").read_text(encoding="utf-8").strip()
            entries.append(DatasetEntry(rid, summary, matrix, markup))
    except OSError as e:
        raise UnreadablePath(f"cannot read dataset {root}: {e}")
    return entries
