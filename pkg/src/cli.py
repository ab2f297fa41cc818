#!/usr/bin/env python3
"""
tabforge command line.

Subcommands: validate, convert, score, synthesize, instruct, audit, stats.
Machine-readable output (JSONL) goes to standard output, human-readable
output and logs to standard error.

Exit status: 0 success, 1 validation or scoring failures present, 2 usage
error, 3 I/O or external-client error.
"""

import argparse
import json
import logging
import random
import sys
from collections import Counter
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Tuple

from src.config.config import config
from src.core.errors import (
    ExternalClientError,
    MalformedMarkup,
    NoValidInstruction,
    TabforgeError,
    UnreadablePath,
    exit_code_for,
)
from src.core.logging_config import configure_logging
from src.corpus.audit import audit_implicit
from src.corpus.loader import load_annotations
from src.instructions.sampler import sample_triplet, verify_triplet
from src.instructions.templates import ALL_GROUPS
from src.markup.html_codec import EmitMode, parse_table_html, structure_to_html
from src.markup.tokens import char_ratio, token_ratio
from src.metrics.teds import TedsConfig, batch_score
from src.synth.content import deterministic_filler, structural_validator
from src.synth.dataset import load_dataset, write_dataset
from src.synth.pipeline import derive_seed, synthesize_batch
from src.synth.settings import ContentMode, load_synth_config
from src.table.implicit import detect_implicit, repair_structure
from src.table.matrix import CellMatrix, validate_matrix
from src.table.structure import cells_to_matrix, matrix_to_cells

logger = logging.getLogger("tabforge-cli")

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2
EXIT_IO = 3

HTML_SUFFIXES = (".html", ".htm")


class UsageError(TabforgeError):
    exit_code = EXIT_USAGE


def emit(out: TextIO, data: dict) -> None:
    out.write(json.dumps(data, sort_keys=True, ensure_ascii=False) + "\n")


def read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UnreadablePath(f"cannot read {path}: {e}")


def _format_of(path: str, given: Optional[str]) -> str:
    if given:
        return given
    return "html" if Path(path).suffix.lower() in HTML_SUFFIXES else "matrix"


def _read_jsonl(path: str) -> List[dict]:
    rows = []
    for lineno, line in enumerate(read_text(path).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append(json.loads(line))
        except ValueError as e:
            raise UsageError(f"{path}:{lineno}: not JSON: {e}")
    return rows


# validate ------------------------------------------------------------------


def cmd_validate(args, out: TextIO) -> int:
    any_invalid = False
    for path in args.inputs:
        fmt = _format_of(path, args.format)
        text = read_text(path)
        entry: dict = {"path": path, "format": fmt}
        if fmt == "html":
            try:
                matrix = cells_to_matrix(parse_table_html(text).structure)
            except MalformedMarkup as e:
                any_invalid = True
                entry.update({"valid": False, "error": str(e)})
                emit(out, entry)
                logger.error(f"{path}: {e}")
                continue
        else:
            try:
                matrix = CellMatrix.from_text(text)
            except TabforgeError as e:
                any_invalid = True
                entry.update({"valid": False, "error": str(e)})
                emit(out, entry)
                logger.error(f"{path}: {e}")
                continue

        report = validate_matrix(matrix)
        entry.update(report.as_dict())
        entry["valid"] = report.is_valid
        if report.is_valid:
            entry["implicit"] = detect_implicit(matrix).as_dict()
            logger.info(f"{path}: valid {matrix.n_rows}x{matrix.n_cols}")
        else:
            any_invalid = True
            for row, col, rule, _ in report.violations:
                logger.error(f"{path}: {rule} at ({row}, {col})")
        emit(out, entry)
    return EXIT_FAILURES if any_invalid else EXIT_OK


# convert -------------------------------------------------------------------


def cmd_convert(args, out: TextIO) -> int:
    source = _format_of(args.input, args.source_format)
    text = read_text(args.input)
    if source == "matrix":
        structure = matrix_to_cells(CellMatrix.from_text(text))
    else:
        structure = parse_table_html(text).structure
        report = detect_implicit(cells_to_matrix(structure))
        if not report.is_clean:
            if not args.repair:
                logger.error(
                    f"{args.input} has implicit rows {[r + 1 for r in report.implicit_rows]} "
                    f"and columns {[c + 1 for c in report.implicit_cols]} (1-based); use --repair"
                )
                emit(out, {"path": args.input, "converted": False, **report.as_dict()})
                return EXIT_FAILURES
            structure, _ = repair_structure(structure)

    if args.target_format == "matrix":
        out.write(cells_to_matrix(structure).to_text() + "\n")
    else:
        mode = EmitMode.STRUCTURAL_ONLY if args.structural_only else EmitMode.WITH_CONTENT
        out.write(structure_to_html(structure, mode) + "\n")
    return EXIT_OK


# score ---------------------------------------------------------------------


def _field(row: dict, *names: str) -> str:
    for name in names:
        if name in row:
            return row[name]
    raise KeyError(names[0])


def _score_pairs(args) -> List[Tuple[str, str, str]]:
    if args.paired:
        rows = _read_jsonl(args.paired)
        try:
            return [(str(r["id"]), _field(r, "pred_html", "pred"), _field(r, "gt_html", "gt")) for r in rows]
        except KeyError as e:
            raise UsageError(f"{args.paired}: record without {e}")
    if not (args.pred and args.gt):
        raise UsageError("score needs --paired, or both --pred and --gt")
    preds = {str(r["id"]): r.get("html", "") for r in _read_jsonl(args.pred)}
    gts = {str(r["id"]): r.get("html", "") for r in _read_jsonl(args.gt)}
    missing = sorted(set(preds) ^ set(gts))
    if missing:
        raise UsageError(f"ids present on one side only: {missing[:10]}")
    return [(i, preds[i], gts[i]) for i in sorted(gts)]


def cmd_score(args, out: TextIO) -> int:
    pairs = _score_pairs(args)
    cfg = TedsConfig(structure_only=args.structure_only, normalize_tbody=args.normalize_tbody)
    report = batch_score(
        pairs, cfg, workers=args.workers, extract=args.extract, progress=args.progress, with_structure=True
    )
    for sample in report.samples:
        row = {"id": sample.id, "s_teds": sample.structure_value}
        if not args.structure_only:
            row["teds"] = sample.value
        if sample.flag:
            row["flag"] = sample.flag
        emit(out, row)

    means = {"s_teds": report.structure_mean}
    if not args.structure_only:
        means["teds"] = report.mean
    summary = {"count": len(report.samples), "flags": report.flags}
    summary.update({f"mean_{name}": value for name, value in means.items()})
    emit(out, summary)
    for name, value in means.items():
        mean_text = "undefined" if value is None else f"{value:.4f}"
        label = "S-TEDS" if name == "s_teds" else "TEDS"
        sys.stderr.write(f"{label} over {len(report.samples)} samples: {mean_text}\n")
    return EXIT_FAILURES if report.flags else EXIT_OK


# synthesize ----------------------------------------------------------------


def _interfaces(cfg, offline: bool):
    if offline:
        return deterministic_filler(cfg.empty_fraction, cfg.seed), structural_validator()
    from src.api.llm_client import LLMClient, LLMContentGenerator, LLMTableValidator

    generator = LLMContentGenerator(LLMClient())
    validator = LLMTableValidator(LLMClient(model_name=config.get("VALIDATOR_MODEL_NAME")))
    return generator, validator


def cmd_synthesize(args, out: TextIO) -> int:
    if args.count < 1:
        raise UsageError(f"--count must be at least 1, got {args.count}")
    overrides = {"seed": args.seed}
    if args.external:
        overrides["content_mode"] = ContentMode.EXTERNAL.value
    cfg = load_synth_config(args.config, **overrides)
    corpus = load_annotations(args.corpus, repair=cfg.repair_sources)
    offline = args.offline or cfg.content_mode is ContentMode.DETERMINISTIC
    gen, val = _interfaces(cfg, offline)
    workers = args.workers or config.get("WORKERS", 1)

    batch = synthesize_batch(cfg, corpus, gen, val, args.count, workers=workers, progress=args.progress)
    write_dataset(batch, args.out)

    stats = batch.stats()
    emit(out, stats)
    sys.stderr.write(
        f"records={stats['records']} accepted={stats['accepted']} rejected={stats['rejected']} "
        f"failed={stats['failed']} attempts={stats['attempts']}\n"
    )
    if any(f.error.get("error") == ExternalClientError.__name__ for f in batch.failures):
        return EXIT_IO
    return EXIT_FAILURES if batch.failures else EXIT_OK


# instruct ------------------------------------------------------------------


def cmd_instruct(args, out: TextIO) -> int:
    groups = tuple(g for g in ALL_GROUPS if g not in set(args.exclude_group or ()))
    if not groups:
        raise UsageError("every instruction group is excluded")
    corpus = load_annotations(args.corpus, repair=args.repair)
    seed = args.seed if args.seed is not None else config.get("SEED", 0)
    failed = 0
    for i in range(args.count):
        rng = random.Random(derive_seed(seed, i))
        record = corpus.records[rng.randrange(len(corpus))]
        try:
            triplet = sample_triplet(record.structure, record.id, rng, groups)
        except NoValidInstruction as e:
            failed += 1
            logger.error(f"triplet {i}: {e}")
            emit(out, {"index": i, "source_id": record.id, **e.details()})
            continue
        if not verify_triplet(triplet, record.structure):
            failed += 1
            logger.error(f"triplet {i} for {record.id} does not verify")
        emit(out, triplet.as_dict())
    logger.info(f"{args.count} draws from {len(corpus)} tables, {failed} failed")
    return EXIT_FAILURES if failed else EXIT_OK


# audit ---------------------------------------------------------------------


def cmd_audit(args, out: TextIO) -> int:
    corpus = load_annotations(args.corpus, fmt=args.format)
    report = audit_implicit(corpus)
    summary = report.summary()
    summary["skipped_records"] = corpus.skipped
    emit(out, {"summary": summary})
    for entry in report.per_record:
        emit(out, entry.as_dict())

    lines = [
        f"{'records':<22}{report.total_records:>12}",
        f"{'affected records':<22}{report.affected_records:>12}",
        f"{'affected fraction':<22}{report.affected_fraction:>12.4f}",
        f"{'implicit rows':<22}{report.total_implicit_rows:>12}",
        f"{'implicit columns':<22}{report.total_implicit_cols:>12}",
        f"{'skipped (malformed)':<22}{corpus.skipped:>12}",
    ]
    sys.stderr.write("\n".join(lines) + "\n")
    return EXIT_OK


# stats ---------------------------------------------------------------------


def _histogram(values: Iterable) -> Dict[str, int]:
    counts = Counter(values)
    return {str(k): counts[k] for k in sorted(counts)}


def _mean_min_max(values: List[float]) -> dict:
    if not values:
        return {"mean": None, "min": None, "max": None}
    return {"mean": sum(values) / len(values), "min": min(values), "max": max(values)}


def cmd_stats(args, out: TextIO) -> int:
    entries = load_dataset(args.dataset)
    if not entries:
        logger.error(f"{args.dataset} holds no records")
        return EXIT_FAILURES

    cells, merged, empty, dims, tok, chars, html_lengths = [], [], [], [], [], [], []
    for entry in entries:
        structure = parse_table_html(entry.html).structure
        cells.append(len(structure.cells))
        merged.append(len(structure.merged_cells()))
        empty.append(len(structure.empty_cells()))
        dims.append(f"{structure.n_rows}x{structure.n_cols}")
        tok.append(token_ratio(entry.matrix, structure))
        chars.append(char_ratio(entry.matrix, structure))
        html_lengths.append(len(entry.html))

    histograms = {
        "cell_count": _histogram(cells),
        "merged_cell_count": _histogram(merged),
        "empty_cell_count": _histogram(empty),
        "rows_x_cols": _histogram(dims),
    }
    for name, bins in histograms.items():
        emit(out, {"histogram": name, "bins": bins})
    summary = {
        "records": len(entries),
        "token_ratio": _mean_min_max(tok),
        "char_ratio": _mean_min_max(chars),
        "max_html_chars": max(html_lengths),
    }
    emit(out, {"summary": summary})

    t = summary["token_ratio"]
    c = summary["char_ratio"]
    sys.stderr.write(
        f"{'records':<18}{len(entries):>10}\n"
        f"{'token ratio':<18}{t['mean']:>10.4f} (min {t['min']:.4f}, max {t['max']:.4f})\n"
        f"{'char ratio':<18}{c['mean']:>10.4f} (min {c['min']:.4f}, max {c['max']:.4f})\n"
        f"{'max html chars':<18}{summary['max_html_chars']:>10}\n"
    )
    return EXIT_OK


# entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tabforge", description="Table structure tooling")
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="Check matrices or HTML tables for well-formedness")
    p.add_argument("inputs", nargs="+", help="Matrix (.txt) or HTML files")
    p.add_argument("--format", choices=("matrix", "html"), help="Input format (default: by suffix)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("convert", help="Convert between matrix and HTML")
    p.add_argument("input", help="Input file")
    p.add_argument("--from", dest="source_format", choices=("matrix", "html"), help="Input format")
    p.add_argument("--to", dest="target_format", choices=("matrix", "html"), required=True)
    p.add_argument("--structural-only", action="store_true", help="Leave cells empty in HTML output")
    p.add_argument("--repair", action="store_true", help="Remove implicit rows/columns from HTML input")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("score", help="TEDS / S-TEDS scoring")
    p.add_argument("--paired", help="JSONL with id, pred_html, gt_html per line")
    p.add_argument("--pred", help="JSONL with id, html per line")
    p.add_argument("--gt", help="JSONL with id, html per line")
    p.add_argument("--structure-only", action="store_true", help="Report S-TEDS only")
    p.add_argument("--normalize-tbody", action="store_true", help="Wrap bare rows in tbody before scoring")
    p.add_argument("--extract", action="store_true", help="Take the first <table> span of each prediction")
    p.add_argument("--workers", type=int, default=1, help="Worker processes")
    p.add_argument("--progress", action="store_true", help="Show a progress bar")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("synthesize", help="Generate a Table Mix Expand dataset")
    p.add_argument("--config", help="JSON file with synthesis settings")
    p.add_argument("--corpus", required=True, help="Source corpus (JSONL file or HTML directory)")
    p.add_argument("--count", type=int, required=True, help="Number of records")
    p.add_argument("--out", required=True, help="Output directory")
    p.add_argument("--seed", type=int, default=None, help="Batch seed")
    p.add_argument("--workers", type=int, default=None, help="Worker threads")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--offline", action="store_true", help="Built-in filler and validator (default)")
    mode.add_argument("--external", action="store_true", help="Use the configured LLM generator and validator")
    p.add_argument("--progress", action="store_true", help="Show a progress bar")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("instruct", help="Sample instruction training triplets")
    p.add_argument("--corpus", required=True, help="Source corpus")
    p.add_argument("--count", type=int, required=True, help="Number of triplets")
    p.add_argument("--seed", type=int, default=None, help="Seed")
    p.add_argument("--exclude-group", type=int, action="append", choices=ALL_GROUPS, help="Leave an instruction group out (repeatable)")
    p.add_argument("--repair", action="store_true", help="Remove implicit lines on load")
    p.set_defaults(func=cmd_instruct)

    p = sub.add_parser("audit", help="Audit a corpus for implicit rows/columns")
    p.add_argument("--corpus", required=True, help="Corpus path")
    p.add_argument("--format", choices=("pubtabnet_jsonl", "html_dir"), default=None)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("stats", help="Distribution report for a synthesized dataset")
    p.add_argument("--dataset", required=True, help="Dataset directory")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: Optional[List[str]] = None, out: TextIO = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.func(args, out)
    except Exception as e:
        code = exit_code_for(e)
        if isinstance(e, TabforgeError):
            logger.error(f"{args.command}: {e}")
        else:
            logger.exception(f"{args.command} failed: {e}")
        return code


if __name__ == "__main__":
    sys.exit(main())
