#!/usr/bin/env python3
"""
Corpus loading for PubTabNet/FinTabNet-style annotations.

Two layouts are read:
- pubtabnet_jsonl: one JSON record per line, structure as a structural token
  array plus one token array per cell
- html_dir: a directory of files holding one table each

Malformed records are skipped and counted. Tables may optionally be repaired
(implicit rows and columns removed) on the way in.
"""

import html
import json
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from src.core.errors import EmptyCorpus, NoCompatibleSource, TabforgeError, UnreadablePath
from src.markup.html_codec import parse_table_html
from src.markup.tokens import StructuralTokenSequence
from src.table.implicit import ImplicitReport, detect_implicit, repair_structure
from src.table.matrix import CellMatrix
from src.table.structure import TableStructure, cells_to_matrix

logger = logging.getLogger("corpus-loader")

HTML_SUFFIXES = (".html", ".htm")


class CorpusFormat(str, Enum):
    PUBTABNET_JSONL = "pubtabnet_jsonl"
    HTML_DIR = "html_dir"


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    structure: TableStructure
    matrix: CellMatrix
    image_ref: Optional[str] = None
    split: Optional[str] = None
    implicit: ImplicitReport = field(default_factory=ImplicitReport)
    repaired: bool = False

    @property
    def n_rows(self) -> int:
        return self.structure.n_rows

    @property
    def n_cols(self) -> int:
        return self.structure.n_cols

    @property
    def defect_flags(self) -> dict:
        return {
            "had_implicit_rows": bool(self.implicit.implicit_rows),
            "implicit_count": len(self.implicit.implicit_rows) + len(self.implicit.implicit_cols),
        }


class Corpus:
    """Immutable collection of tables with a dimension index."""

    def __init__(self, records: Sequence[CorpusRecord], skipped: int = 0, source: str = ""):
        self.records: Tuple[CorpusRecord, ...] = tuple(records)
        self.skipped = skipped
        self.source = source
        self._by_id: Dict[str, CorpusRecord] = {r.id: r for r in self.records}
        self._dim_index: Dict[Tuple[int, int], Tuple[CorpusRecord, ...]] = {}

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[CorpusRecord]:
        return iter(self.records)

    def get(self, record_id: str) -> Optional[CorpusRecord]:
        return self._by_id.get(record_id)

    def compatible(self, min_rows: int, min_cols: int) -> Tuple[CorpusRecord, ...]:
        """Records with at least min_rows rows and min_cols columns, in load order."""
        key = (min_rows, min_cols)
        if key not in self._dim_index:
            self._dim_index[key] = tuple(
                r for r in self.records if r.n_rows >= min_rows and r.n_cols >= min_cols
            )
        return self._dim_index[key]

    def has_compatible(self, min_rows: int, min_cols: int) -> bool:
        return bool(self.compatible(min_rows, min_cols))

    def largest_dims(self, limit: int = 5) -> List[Tuple[int, int]]:
        dims = sorted({(r.n_rows, r.n_cols) for r in self.records}, key=lambda d: (-d[0] * d[1], d))
        return dims[:limit]


def sample_compatible(corpus: Corpus, min_rows: int, min_cols: int, rng: random.Random) -> CorpusRecord:
    """
    Draw uniformly among records of at least min_rows x min_cols.

    Raises:
        NoCompatibleSource: if no record qualifies
    """
    candidates = corpus.compatible(min_rows, min_cols)
    if not candidates:
        raise NoCompatibleSource(min_rows, min_cols, corpus.largest_dims())
    return rng.choice(candidates)


def _is_tag(token: str) -> bool:
    return len(token) > 1 and token.startswith("<") and token.endswith(">")


def reassemble_html(structure_tokens: Sequence[str], cell_tokens: Sequence[Sequence[str]]) -> str:
    """
    Rebuild table markup from a structural token array and per-cell token
    arrays. Content characters are escaped; inline tags such as <b> are kept.
    """
    contents = [
        "".join(tok if _is_tag(tok) else html.escape(tok, quote=False) for tok in tokens)
        for tokens in cell_tokens
    ]
    return StructuralTokenSequence(tuple(structure_tokens)).to_html(contents)


def make_record(
    record_id: str,
    structure: TableStructure,
    repair: bool = False,
    image_ref: Optional[str] = None,
    split: Optional[str] = None,
) -> CorpusRecord:
    """Wrap a parsed table, optionally removing implicit lines."""
    if repair:
        repaired, report = repair_structure(structure)
        return CorpusRecord(
            record_id, repaired, cells_to_matrix(repaired), image_ref, split, report, not report.is_clean
        )
    matrix = cells_to_matrix(structure)
    return CorpusRecord(record_id, structure, matrix, image_ref, split, detect_implicit(matrix))


def _parse_jsonl_line(line: str, lineno: int, repair: bool) -> CorpusRecord:
    data = json.loads(line)
    annotation = data["html"]
    markup = reassemble_html(
        annotation["structure"]["tokens"],
        [cell.get("tokens", []) for cell in annotation.get("cells", [])],
    )
    record_id = str(data.get("imgid", data.get("filename", f"line-{lineno}")))
    doc = parse_table_html(markup)
    return make_record(record_id, doc.structure, repair, data.get("filename"), data.get("split"))


def _load_jsonl(path: Path, repair: bool, split: Optional[str]) -> Tuple[List[CorpusRecord], int]:
    records: List[CorpusRecord] = []
    skipped = 0
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = _parse_jsonl_line(line, lineno, repair)
            except (ValueError, KeyError, TypeError, TabforgeError) as e:
                skipped += 1
                logger.debug(f"{path}:{lineno} skipped: {e}")
                continue
            if split is None or record.split == split:
                records.append(record)
    return records, skipped


def _load_html_dir(path: Path, repair: bool) -> Tuple[List[CorpusRecord], int]:
    records: List[CorpusRecord] = []
    skipped = 0
    for file in sorted(p for p in path.iterdir() if p.suffix.lower() in HTML_SUFFIXES):
        try:
            doc = parse_table_html(file.read_text(encoding="utf-8"))
            records.append(make_record(file.stem, doc.structure, repair, str(file)))
        except (UnicodeDecodeError, TabforgeError) as e:
            skipped += 1
            logger.debug(f"{file} skipped: {e}")
    return records, skipped


def load_annotations(
    path: Union[str, Path],
    fmt: Union[str, CorpusFormat, None] = None,
    repair: bool = False,
    split: Optional[str] = None,
) -> Corpus:
    """
    Load a corpus of annotated tables.

    Args:
        path: A JSONL file or a directory of HTML files
        fmt: Corpus format; inferred from the path when None
        repair: Remove implicit rows/columns from every table
        split: Keep only JSONL records of this split

    Returns:
        The loaded corpus

    Raises:
        UnreadablePath: if the path is missing or unreadable
        EmptyCorpus: if no table could be loaded
    """
    path = Path(path)
    if not path.exists():
        raise UnreadablePath(f"corpus path {path} does not exist")
    if fmt is None:
        fmt = CorpusFormat.HTML_DIR if path.is_dir() else CorpusFormat.PUBTABNET_JSONL
    fmt = CorpusFormat(fmt)

    try:
        if fmt is CorpusFormat.HTML_DIR:
            records, skipped = _load_html_dir(path, repair)
        else:
            records, skipped = _load_jsonl(path, repair, split)
    except OSError as e:
        raise UnreadablePath(f"cannot read corpus {path}: {e}")

    if skipped:
        logger.warning(f"skipped {skipped} malformed records in {path}")
    if not records:
        raise EmptyCorpus(f"no usable tables in {path} ({skipped} skipped)")
    logger.info(f"loaded {len(records)} tables from {path}")
    return Corpus(records, skipped, str(path))
