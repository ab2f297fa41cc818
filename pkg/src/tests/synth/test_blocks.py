#!/usr/bin/env python3
"""
Unit tests for block partitioning and filling.
"""

import random
import unittest

from src.core.errors import NoCompatibleSource, Unpartitionable
from src.corpus.loader import Corpus, make_record
from src.synth.blocks import fill_block, grid_shape, partition_grid
from src.table.implicit import detect_implicit
from src.table.matrix import crop_top_left
from src.tests.common.fixtures import collapsed_row_structure, fixture_corpus


class TestGridShape(unittest.TestCase):
    def test_square_preferred(self):
        self.assertEqual(grid_shape(10, 10, 4), (2, 2))
        self.assertEqual(grid_shape(10, 10, 1), (1, 1))

    def test_falls_back_to_thin_grids(self):
        self.assertEqual(grid_shape(1, 10, 4), (1, 4))
        self.assertEqual(grid_shape(10, 1, 4), (4, 1))

    def test_tie_prefers_more_rows(self):
        self.assertEqual(grid_shape(6, 6, 6), (3, 2))

    def test_unpartitionable(self):
        with self.assertRaises(Unpartitionable):
            grid_shape(2, 2, 5)
        with self.assertRaises(Unpartitionable):
            partition_grid(4, 4, 0, random.Random(0))


class TestPartitionGrid(unittest.TestCase):
    def test_regions_tile_the_grid(self):
        rng = random.Random(1)
        for _ in range(300):
            rows, cols = rng.randint(4, 20), rng.randint(4, 20)
            layout = partition_grid(rows, cols, 4, rng)
            self.assertEqual(layout.n_blocks, 4)
            covered = set()
            for r0, c0, h, w in layout.regions:
                self.assertGreater(h, 0)
                self.assertGreater(w, 0)
                cells = {(r, c) for r in range(r0, r0 + h) for c in range(c0, c0 + w)}
                self.assertFalse(covered & cells)
                covered |= cells
            self.assertEqual(len(covered), rows * cols)

    def test_smallest_grid(self):
        layout = partition_grid(2, 2, 4, random.Random(2))
        self.assertEqual((layout.row_cuts, layout.col_cuts), ((1,), (1,)))

    def test_cuts_vary(self):
        rng = random.Random(3)
        cuts = {partition_grid(20, 20, 4, rng).row_cuts for _ in range(200)}
        self.assertEqual({c for (c,) in cuts}, set(range(1, 20)))


class TestFillBlock(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.corpus = fixture_corpus()

    def test_crop_size_and_source(self):
        rng = random.Random(4)
        for h, w in ((1, 1), (3, 7), (10, 10), (20, 20)):
            block, source_id = fill_block(h, w, self.corpus, rng)
            self.assertEqual((block.n_rows, block.n_cols), (h, w))
            source = self.corpus.get(source_id)
            self.assertEqual(block, crop_top_left(source.matrix, h, w))
            self.assertTrue(detect_implicit(block).is_clean)

    def test_no_source_large_enough(self):
        with self.assertRaises(NoCompatibleSource) as ctx:
            fill_block(21, 5, self.corpus, random.Random(5))
        self.assertEqual((ctx.exception.min_rows, ctx.exception.min_cols), (21, 5))
        self.assertEqual(ctx.exception.largest, [(20, 20)])

    def test_defective_crops_redrawn(self):
        corpus = Corpus([make_record("collapsed_row", collapsed_row_structure())])
        with self.assertRaises(NoCompatibleSource):
            fill_block(3, 2, corpus, random.Random(6), max_attempts=5)
        block, _ = fill_block(2, 2, corpus, random.Random(6))
        self.assertEqual(block.to_text(), "CC\nCL")


if __name__ == "__main__":
    unittest.main()
