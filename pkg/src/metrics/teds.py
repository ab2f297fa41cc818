#!/usr/bin/env python3
"""
Tree-edit-distance-based similarity (TEDS) and its structure-only variant.

Costs: insert and delete 1; renaming across tags, or between td nodes whose
spans differ, 1; renaming td to td with equal spans costs the normalized
character edit distance of their contents (0 in structure-only mode).
"""

import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from rapidfuzz.distance import Levenshtein
from rapidfuzz.process import cdist
from tqdm import tqdm

from src.core.errors import GroundTruthMalformed, MalformedMarkup
from src.markup.html_codec import parse_table_html
from src.metrics.edit_distance import AnnotatedTree, tree_distance
from src.metrics.tree import TableTreeNode, build_tree, normalize_grouping

logger = logging.getLogger("teds")

VLM_TABLE_PROMPT = (
    "This is an image containing only one table, please convert the table in the "
    "image to HTML (begin with <table> and end with </table>) format. Only the "
    "content in the image needs to be output without expanding other content."
)

_TABLE_SPAN = re.compile(r"<table\b.*?</table>", re.IGNORECASE | re.DOTALL)


@dataclass(frozen=True)
class TedsConfig:
    structure_only: bool = False
    normalize_tbody: bool = False


@dataclass(frozen=True)
class TedsScore:
    value: float
    distance: float
    size_pred: int
    size_gt: int


def normalized_string_distance(a: Optional[str], b: Optional[str]) -> float:
    """Character edit distance divided by the longer length; 0 for two empties."""
    return Levenshtein.normalized_distance(a or "", b or "")


def rename_matrix(a: Sequence[TableTreeNode], b: Sequence[TableTreeNode], structure_only: bool) -> np.ndarray:
    """
    Rename costs between every node of a and every node of b.

    Args:
        a: Nodes of the first tree, in any fixed order
        b: Nodes of the second tree
        structure_only: Ignore td contents

    Returns:
        len(a) x len(b) float matrix
    """
    tag_ids: Dict[str, int] = {}
    tags_a = np.array([tag_ids.setdefault(n.tag, len(tag_ids)) for n in a])
    tags_b = np.array([tag_ids.setdefault(n.tag, len(tag_ids)) for n in b])
    costs = (tags_a[:, None] != tags_b[None, :]).astype(np.float64)

    cells_a = np.flatnonzero([n.tag == "td" for n in a])
    cells_b = np.flatnonzero([n.tag == "td" for n in b])
    if not (cells_a.size and cells_b.size):
        return costs
    spans_a = np.array([(a[i].rowspan, a[i].colspan) for i in cells_a])
    spans_b = np.array([(b[j].rowspan, b[j].colspan) for j in cells_b])
    same_span = (spans_a[:, None, :] == spans_b[None, :, :]).all(axis=2)
    if structure_only:
        cell_costs = np.where(same_span, 0.0, 1.0)
    else:
        content = cdist(
            [a[i].content or "" for i in cells_a],
            [b[j].content or "" for j in cells_b],
            scorer=Levenshtein.normalized_distance,
            dtype=np.float64,
        )
        cell_costs = np.where(same_span, content, 1.0)
    costs[np.ix_(cells_a, cells_b)] = cell_costs
    return costs


def tree_edit_distance(a: TableTreeNode, b: TableTreeNode, cfg: TedsConfig = TedsConfig()) -> float:
    """
    Minimum-cost ordered tree edit distance under the TEDS cost model.

    Args:
        a: First tree
        b: Second tree
        cfg: Whether contents take part in renames

    Returns:
        Non-negative edit distance
    """
    # Costs are symmetric; keyroot passes run over the smaller tree
    if a.size() > b.size():
        a, b = b, a
    left, right = AnnotatedTree.of(a), AnnotatedTree.of(b)
    return tree_distance(left, right, rename_matrix(left.nodes, right.nodes, cfg.structure_only))


def extract_table_html(text: str) -> Optional[str]:
    """First <table>...</table> span of free-form model output, if any."""
    match = _TABLE_SPAN.search(text or "")
    return match.group(0) if match else None


def _tree_for(markup: str, side: str, cfg: TedsConfig) -> TableTreeNode:
    try:
        doc = parse_table_html(markup, allow_ragged=True)
    except MalformedMarkup as e:
        raise type(e)(f"{side}: {e}", side=side) from e
    tree = build_tree(doc)
    return normalize_grouping(tree) if cfg.normalize_tbody else tree


def _similarity(pred_tree: TableTreeNode, gt_tree: TableTreeNode, cfg: TedsConfig) -> Tuple[float, float]:
    dist = tree_edit_distance(pred_tree, gt_tree, cfg)
    value = 1.0 - dist / max(pred_tree.size(), gt_tree.size())
    return min(1.0, max(0.0, value)), dist


def teds(pred: str, gt: str, cfg: TedsConfig = TedsConfig()) -> TedsScore:
    """
    Score a predicted table against the ground truth.

    value = 1 - distance / max(size_pred, size_gt), sizes counted in nodes
    including the table root.

    Raises:
        MalformedMarkup: with side set to "pred" or "gt"
    """
    tree_pred = _tree_for(pred, "pred", cfg)
    tree_gt = _tree_for(gt, "gt", cfg)
    value, dist = _similarity(tree_pred, tree_gt, cfg)
    return TedsScore(value, dist, tree_pred.size(), tree_gt.size())


@dataclass(frozen=True)
class SampleScore:
    id: str
    value: float
    distance: Optional[float] = None
    flag: Optional[str] = None
    structure_value: Optional[float] = None

    def as_dict(self) -> dict:
        data = {"id": self.id, "score": self.value}
        if self.structure_value is not None:
            data["structure_score"] = self.structure_value
        if self.flag:
            data["flag"] = self.flag
        return data


def _mean(values: List[float]) -> Optional[float]:
    return sum(values) / len(values) if values else None


@dataclass(frozen=True)
class BatchReport:
    samples: Tuple[SampleScore, ...] = field(default_factory=tuple)

    @property
    def mean(self) -> Optional[float]:
        return _mean([s.value for s in self.samples])

    @property
    def structure_mean(self) -> Optional[float]:
        """Mean S-TEDS when the batch was scored with_structure, else None."""
        values = [s.structure_value for s in self.samples if s.structure_value is not None]
        if len(values) != len(self.samples):
            return None
        return _mean(values)

    @property
    def flags(self) -> List[str]:
        flags = [f"{s.id}:{s.flag}" for s in self.samples if s.flag]
        if not self.samples:
            flags.append("mean_undefined")
        return flags

    def by_id(self) -> dict:
        return {s.id: s for s in self.samples}


def _score_pair(job: Tuple[str, str, str, TedsConfig, bool, bool]) -> SampleScore:
    sample_id, pred, gt, cfg, extract, with_structure = job
    try:
        gt_tree = _tree_for(gt, "gt", cfg)
    except MalformedMarkup as e:
        raise GroundTruthMalformed(sample_id, e)
    if extract:
        pred = extract_table_html(pred) or ""
    try:
        pred_tree = _tree_for(pred, "pred", cfg)
    except MalformedMarkup as e:
        logger.debug(f"prediction for {sample_id} unparseable: {e}")
        return SampleScore(sample_id, 0.0, None, "pred_malformed", 0.0 if with_structure else None)
    value, dist = _similarity(pred_tree, gt_tree, cfg)
    structure_value = None
    if with_structure:
        if cfg.structure_only:
            structure_value = value
        else:
            structure_value, _ = _similarity(pred_tree, gt_tree, replace(cfg, structure_only=True))
    return SampleScore(sample_id, value, dist, None, structure_value)


def batch_score(
    pairs: Iterable[Tuple[str, str, str]],
    cfg: TedsConfig = TedsConfig(),
    workers: int = 1,
    extract: bool = False,
    progress: bool = False,
    with_structure: bool = False,
) -> BatchReport:
    """
    Score (id, pred, gt) triples.

    Unparseable predictions score 0.0 and are flagged; an unparseable ground
    truth raises GroundTruthMalformed. Results keep input order regardless of
    the number of workers.

    Args:
        pairs: Samples to score
        cfg: TEDS configuration
        workers: Worker processes; 1 scores in-process
        extract: Pull the first <table> span out of each prediction first
        progress: Show a progress bar on standard error
        with_structure: Also compute S-TEDS from the same parsed trees

    Returns:
        Per-sample scores and their macro average
    """
    jobs = [(str(i), p, g, cfg, extract, with_structure) for i, p, g in pairs]
    if workers <= 1 or len(jobs) < 2:
        results = [_score_pair(job) for job in tqdm(jobs, disable=not progress, desc="scoring")]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(
                tqdm(pool.map(_score_pair, jobs, chunksize=8), total=len(jobs), disable=not progress, desc="scoring")
            )
    report = BatchReport(tuple(results))
    if report.mean is not None:
        logger.info(f"scored {len(results)} samples, mean {report.mean:.4f}")
    return report
