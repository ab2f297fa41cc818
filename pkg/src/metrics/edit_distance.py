#!/usr/bin/env python3
"""
Zhang-Shasha ordered tree edit distance on numpy tables.

Insertions and deletions cost 1; renames are read from a cost matrix indexed
by the postorder positions of both trees. Distances between a single node
and a subtree have a closed form, so the keyroot passes only run over
internal keyroots. Each pass fills one row of the forest-distance table for
every keyroot of the second tree at once: keyroots are grouped by nesting
level and padded into 2-D blocks, and the row-wise insertion chain is a
running minimum. Keyroots of the first tree at the same level share rows in
the same way.
"""

from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from src.metrics.tree import TableTreeNode


@dataclass(frozen=True)
class AnnotatedTree:
    """Postorder view of a tree with leftmost-leaf indices and keyroots."""

    nodes: List[TableTreeNode]
    lmd: np.ndarray
    sizes: np.ndarray
    keyroots: List[int]

    def __len__(self) -> int:
        return len(self.nodes)

    @classmethod
    def of(cls, root: TableTreeNode) -> "AnnotatedTree":
        nodes: List[TableTreeNode] = []
        lmd: List[int] = []

        def walk(node: TableTreeNode) -> None:
            start = len(nodes)
            for child in node.children:
                walk(child)
            lmd.append(start)
            nodes.append(node)

        walk(root)
        lmd_arr = np.array(lmd, dtype=np.intp)
        sizes = np.arange(len(nodes)) - lmd_arr + 1
        # A keyroot is the highest node sharing its leftmost leaf
        highest: Dict[int, int] = {}
        for i, leaf in enumerate(lmd):
            highest[leaf] = i
        return cls(nodes, lmd_arr, sizes, sorted(highest.values()))

    def internal_levels(self) -> List[List[int]]:
        """
        Internal keyroots grouped by nesting depth, innermost first.

        A keyroot's level is one more than the deepest internal keyroot inside
        its subtree, so keyroots sharing a level never contain each other.
        """
        internal = [k for k in self.keyroots if self.sizes[k] > 1]
        level: Dict[int, int] = {}
        for k in internal:
            inner = [level[j] for j in internal if self.lmd[k] <= j < k]
            level[k] = 1 + max(inner) if inner else 0
        groups: List[List[int]] = [[] for _ in range(1 + max(level.values(), default=-1))]
        for k in internal:
            groups[level[k]].append(k)
        return groups


class _ColumnBlock:
    """Forest-distance columns of same-level keyroots of the second tree, padded to one width."""

    def __init__(self, tree: AnnotatedTree, keyroots: Sequence[int]):
        n = len(tree)
        self.n_seg = len(keyroots)
        self.width = 1 + max(int(tree.sizes[k]) for k in keyroots)
        self.offsets = np.arange(self.width, dtype=np.float64)

        nodes = np.full((self.n_seg, self.width), n, dtype=np.intp)
        back = np.zeros((self.n_seg, self.width), dtype=np.intp)
        left = np.zeros((self.n_seg, self.width), dtype=bool)
        for s, k in enumerate(keyroots):
            start = int(tree.lmd[k])
            size = int(tree.sizes[k])
            ys = np.arange(start, start + size)
            nodes[s, 1 : size + 1] = ys
            back[s, 1 : size + 1] = tree.lmd[ys] - start
            left[s, 1 : size + 1] = tree.lmd[ys] == start
            back[s] += s * self.width

        self.nodes = nodes.ravel()
        self.back = back.ravel()
        self.left = np.flatnonzero(left.ravel())
        self.left_nodes = self.nodes[self.left]
        self.first_row = np.tile(self.offsets, self.n_seg)

    def table(self, n_rows: int, n_batch: int) -> np.ndarray:
        table = np.empty((n_rows + 1, n_batch, self.n_seg * self.width))
        table[0] = self.first_row
        return table

    def close_insertions(self, row: np.ndarray) -> None:
        """Apply fd[y] = min(fd[y], fd[y - 1] + 1) along every segment, in place."""
        view = row.reshape(row.shape[0], self.n_seg, self.width)
        view -= self.offsets
        np.minimum.accumulate(view, axis=2, out=view)
        view += self.offsets


def _leaf_distances(a: AnnotatedTree, b: AnnotatedTree, rename: np.ndarray, dist: np.ndarray) -> None:
    """
    Fill every pair where one side is a single node.

    A leaf against a subtree costs the subtree size minus one, plus the
    cheapest rename into the subtree (capped at delete-and-insert).
    """
    n1, n2 = len(a), len(b)
    leaves_a = np.flatnonzero(a.sizes == 1)
    leaves_b = np.flatnonzero(b.sizes == 1)

    spans_b = np.empty(2 * n2, dtype=np.intp)
    spans_b[0::2] = b.lmd
    spans_b[1::2] = np.arange(1, n2 + 1)
    cheapest = np.minimum.reduceat(rename[leaves_a], spans_b, axis=1)[:, 0::2]
    dist[leaves_a, :n2] = b.sizes - 1 + np.minimum(cheapest, 2.0)

    spans_a = np.empty(2 * n1, dtype=np.intp)
    spans_a[0::2] = a.lmd
    spans_a[1::2] = np.arange(1, n1 + 1)
    cheapest = np.minimum.reduceat(rename[:, leaves_b], spans_a, axis=0)[0::2]
    dist[:n1, leaves_b] = a.sizes[:, None] - 1 + np.minimum(cheapest, 2.0)


def _run_level(
    a: AnnotatedTree,
    keyroots: Sequence[int],
    blocks: List[_ColumnBlock],
    rename: np.ndarray,
    dist: np.ndarray,
) -> None:
    n1 = len(a)
    batch = np.arange(len(keyroots))
    starts = a.lmd[keyroots]
    sizes = a.sizes[keyroots]
    n_rows = int(sizes.max())
    tables = [block.table(n_rows, len(keyroots)) for block in blocks]

    for i in range(1, n_rows + 1):
        live = i <= sizes
        x = np.where(live, starts + i - 1, n1)
        back_row = np.where(live, a.lmd[np.minimum(x, n1 - 1)] - starts, 0)
        on_path = live & (back_row == 0)
        chained = bool(np.all(back_row == i - 1))
        path_rows = np.flatnonzero(on_path)

        for block, table in zip(blocks, tables):
            prev = table[i - 1]
            cur = table[i]
            base = prev if chained else table[back_row, batch]
            cand = base[:, block.back] + dist[x[:, None], block.nodes[None, :]]
            if path_rows.size:
                cand[np.ix_(path_rows, block.left)] = (
                    prev[np.ix_(path_rows, block.left - 1)]
                    + rename[x[path_rows][:, None], block.left_nodes[None, :]]
                )
            np.minimum(prev + 1.0, cand, out=cur)
            block.close_insertions(cur)
            if path_rows.size:
                dist[x[path_rows][:, None], block.left_nodes[None, :]] = cur[np.ix_(path_rows, block.left)]


def tree_distance(a: AnnotatedTree, b: AnnotatedTree, rename: np.ndarray) -> float:
    """
    Minimum-cost ordered edit distance between two annotated trees.

    Args:
        a: First tree
        b: Second tree
        rename: len(a) x len(b) rename costs, each at most 2

    Returns:
        Non-negative edit distance
    """
    n1, n2 = len(a), len(b)
    # One extra row and column of +inf stand in for padding positions
    costs = np.full((n1 + 1, n2 + 1), np.inf)
    costs[:n1, :n2] = rename
    dist = np.full((n1 + 1, n2 + 1), np.inf)

    _leaf_distances(a, b, costs, dist)
    blocks = [_ColumnBlock(b, level) for level in b.internal_levels()]
    if blocks:
        for level in a.internal_levels():
            _run_level(a, level, blocks, costs, dist)
    return float(dist[n1 - 1, n2 - 1])
