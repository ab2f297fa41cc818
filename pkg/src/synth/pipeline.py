#!/usr/bin/env python3
"""
Table Mix Expand synthesis.

One record: sample dimensions, cut the grid into blocks, fill each block with
the top-left crop of a real table, splice, inject merges, emit structural
markup, then populate and validate content until a verdict accepts it or the
retry budget runs out.
"""

import hashlib
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Tuple

from tqdm import tqdm

from src.core.error_handler import safe_execute
from src.core.errors import ExternalClientError, InvalidMatrix, MalformedMarkup
from src.corpus.loader import Corpus
from src.markup.html_codec import EmitMode, parse_table_html, same_structure, structure_to_html
from src.render.style import StyleAugmentation, sample_style
from src.synth.blocks import fill_block, partition_grid
from src.synth.content import ContentGenerator, TableValidator
from src.synth.dims import sample_dims
from src.synth.settings import SynthConfig
from src.table.implicit import detect_implicit
from src.table.layout import BlockLayout, splice
from src.table.matrix import CellMatrix, inject_merges
from src.table.structure import TableStructure, matrix_to_cells

logger = logging.getLogger("synth-pipeline")


@dataclass(frozen=True)
class ValidationOutcome:
    attempts: int
    accepted: bool
    reason: str = ""

    def as_dict(self) -> dict:
        return {"attempts": self.attempts, "accepted": self.accepted, "reason": self.reason}


@dataclass(frozen=True)
class SynthRecord:
    id: str
    seed: int
    matrix: CellMatrix
    layout: BlockLayout
    structural_html: str
    filled_html: Optional[str]
    style: StyleAugmentation
    provenance: Tuple[str, ...]
    validation: ValidationOutcome

    @property
    def structure(self) -> TableStructure:
        return matrix_to_cells(self.matrix)

    def as_dict(self) -> dict:
        """Record summary without the raw markup."""
        return {
            "id": self.id,
            "seed": self.seed,
            "n_rows": self.matrix.n_rows,
            "n_cols": self.matrix.n_cols,
            "layout": self.layout.as_dict(),
            "provenance": list(self.provenance),
            "style": self.style.as_dict(),
            "validation": self.validation.as_dict(),
        }


@dataclass(frozen=True)
class SynthFailure:
    id: str
    index: int
    error: dict


@dataclass(frozen=True)
class SynthBatch:
    records: Tuple[SynthRecord, ...] = field(default_factory=tuple)
    failures: Tuple[SynthFailure, ...] = field(default_factory=tuple)

    @property
    def accepted(self) -> int:
        return sum(1 for r in self.records if r.validation.accepted)

    @property
    def rejected(self) -> int:
        return len(self.records) - self.accepted

    @property
    def total_attempts(self) -> int:
        return sum(r.validation.attempts for r in self.records)

    def stats(self) -> dict:
        return {
            "records": len(self.records),
            "accepted": self.accepted,
            "rejected": self.rejected,
            "failed": len(self.failures),
            "attempts": self.total_attempts,
        }


def derive_seed(seed: int, index: int) -> int:
    """Per-record seed mixed from the batch seed and the record index."""
    digest = hashlib.blake2b(f"{seed}:{index}".encode("ascii"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def record_id(index: int) -> str:
    return f"tme-{index:06d}"


def build_matrix(
    cfg: SynthConfig, corpus: Corpus, rng: random.Random
) -> Tuple[CellMatrix, BlockLayout, Tuple[str, ...]]:
    """Dimensions, layout, block fills, splice and merge injection."""
    rows, cols = sample_dims(cfg, rng)
    layout = partition_grid(rows, cols, cfg.n_blocks, rng)
    blocks = []
    provenance = []
    for _, _, h, w in layout.regions:
        block, source_id = fill_block(h, w, corpus, rng)
        blocks.append(block)
        provenance.append(source_id)
    matrix = inject_merges(splice(layout, blocks), cfg.merge_injections, rng, keep_explicit=True)
    report = detect_implicit(matrix)
    if not report.is_clean:
        raise InvalidMatrix(f"synthesized matrix has implicit lines: {report.reasons()}")
    return matrix, layout, tuple(provenance)


def _check_filled(filled: str, expected: TableStructure) -> Optional[str]:
    """Reason the generator output is unusable, or None."""
    try:
        got = parse_table_html(filled).structure
    except MalformedMarkup as e:
        return f"generator_malformed: {e}"
    if not same_structure(expected, got):
        return "generator_structure_mismatch"
    return None


def synthesize_one(
    cfg: SynthConfig,
    corpus: Corpus,
    gen: ContentGenerator,
    val: TableValidator,
    rng: random.Random,
    rid: str = "tme-000000",
    seed: int = 0,
) -> SynthRecord:
    """
    Synthesize one record.

    Generator output is reparsed and must match the structural grid exactly
    before the validator sees it. When the retry budget runs out the record is
    returned with accepted=False and no filled markup.

    Args:
        cfg: Synthesis settings
        corpus: Source tables
        gen: Content generator
        val: Validator
        rng: Random source for this record
        rid: Record id
        seed: Seed the rng was built from, kept on the record

    Returns:
        The record

    Raises:
        ExternalClientError: on generator/validator transport failure, with
            the record id attached
    """
    matrix, layout, provenance = build_matrix(cfg, corpus, rng)
    structure = matrix_to_cells(matrix)
    structural_html = structure_to_html(structure, EmitMode.STRUCTURAL_ONLY)
    style = sample_style(rng)

    reason = ""
    attempts = 0
    for attempts in range(1, cfg.max_validation_retries + 1):
        try:
            filled = gen.populate(structural_html)
            reason = _check_filled(filled, structure)
            if reason is None:
                verdict = val.judge(filled, structural_html)
                if verdict.accept:
                    return SynthRecord(
                        rid, seed, matrix, layout, structural_html, filled, style, provenance,
                        ValidationOutcome(attempts, True, verdict.reason),
                    )
                reason = verdict.reason or "rejected"
        except ExternalClientError as e:
            e.record_id = rid
            raise
        logger.debug(f"{rid} attempt {attempts} rejected: {reason}")

    logger.info(f"{rid} rejected after {attempts} attempts: {reason}")
    return SynthRecord(
        rid, seed, matrix, layout, structural_html, None, style, provenance,
        ValidationOutcome(attempts, False, reason),
    )


def synthesize_batch(
    cfg: SynthConfig,
    corpus: Corpus,
    gen: ContentGenerator,
    val: TableValidator,
    count: int,
    workers: int = 1,
    progress: bool = False,
) -> SynthBatch:
    """
    Synthesize count records.

    Record i draws from its own rng seeded with derive_seed(cfg.seed, i), so
    output is independent of the number of workers. A failing record is logged
    and reported in failures; the rest of the batch carries on.

    Args:
        cfg: Synthesis settings
        corpus: Source tables
        gen: Content generator, called concurrently when workers > 1
        val: Validator, called concurrently when workers > 1
        count: Number of records
        workers: Worker threads
        progress: Show a progress bar on standard error

    Returns:
        Records and failures, both ordered by index
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")

    def run(index: int):
        seed = derive_seed(cfg.seed, index)
        rid = record_id(index)
        outcome = safe_execute(
            synthesize_one, logger, context=rid, args=(cfg, corpus, gen, val, random.Random(seed), rid, seed)
        )
        if not outcome.ok:
            return SynthFailure(rid, index, outcome.error)
        return outcome.value

    indices = range(count)
    if workers <= 1:
        results = [run(i) for i in tqdm(indices, disable=not progress, desc="synthesizing")]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(tqdm(pool.map(run, indices), total=count, disable=not progress, desc="synthesizing"))

    records = tuple(r for r in results if isinstance(r, SynthRecord))
    failures = tuple(r for r in results if isinstance(r, SynthFailure))
    batch = SynthBatch(records, failures)
    logger.info(f"synthesized {len(records)} records, {batch.accepted} accepted, {len(failures)} failed")
    return batch
