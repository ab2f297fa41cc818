#!/usr/bin/env python3
"""
Unit tests for TEDS and S-TEDS.
"""

import os
import random
import time
import unittest

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.errors import GroundTruthMalformed, MalformedMarkup
from src.markup.html_codec import EmitMode, structure_to_html
from src.metrics.teds import (
    TedsConfig,
    batch_score,
    extract_table_html,
    normalized_string_distance,
    teds,
    tree_edit_distance,
)
from src.metrics.tree import TableTreeNode
from src.tests.common.fixtures import random_structure
from src.tests.common.oracles import as_tuple_tree, forest_distance, random_tree, unit_rename
from src.tests.common.strategies import content_maps, labeled_trees, structures

STRUCTURE_ONLY = TedsConfig(structure_only=True)

ONE_CELL = "<table><tr><td>a</td></tr></table>"
TWO_BY_TWO = "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr></table>"


class TestTreeEditDistanceOracle(unittest.TestCase):
    """The DP distance agrees with an exhaustive forest recursion."""

    def _check(self, a: TableTreeNode, b: TableTreeNode):
        expected = forest_distance(as_tuple_tree(a), as_tuple_tree(b), unit_rename)
        self.assertEqual(tree_edit_distance(a, b), expected, f"{a.bracket()} vs {b.bracket()}")

    def test_random_pairs(self):
        rng = random.Random(2024)
        for _ in range(10_000):
            self._check(random_tree(rng), random_tree(rng))

    @settings(max_examples=500, deadline=None)
    @given(labeled_trees(), labeled_trees())
    def test_generated_pairs(self, a, b):
        self._check(a, b)

    def test_identical_is_zero(self):
        tree = random_tree(random.Random(3), max_nodes=8)
        self.assertEqual(tree_edit_distance(tree, tree), 0.0)

    def test_single_node_against_chain(self):
        chain = TableTreeNode("a", children=[TableTreeNode("b", children=[TableTreeNode("c")])])
        self.assertEqual(tree_edit_distance(TableTreeNode("a"), chain), 2.0)


class TestTeds(unittest.TestCase):
    def test_one_cell_against_two_by_two(self):
        score = teds(ONE_CELL, TWO_BY_TWO)
        self.assertEqual((score.size_pred, score.size_gt), (3, 7))
        self.assertEqual(score.distance, 4.0)
        self.assertAlmostEqual(score.value, 1 - 4 / 7)

    def test_identical_markup_scores_one(self):
        rng = random.Random(5)
        for _ in range(50):
            s = random_structure(rng, rng.randint(1, 10), rng.randint(1, 10), contents=True)
            markup = structure_to_html(s)
            self.assertEqual(teds(markup, markup).value, 1.0)
            self.assertEqual(teds(markup, markup, STRUCTURE_ONLY).value, 1.0)

    def test_single_content_rename(self):
        rng = random.Random(6)
        for _ in range(50):
            s = random_structure(rng, rng.randint(1, 10), rng.randint(1, 10), contents=True)
            index = rng.randrange(len(s.cells))
            contents = [c.content for c in s.cells]
            contents[index] = "~" * max(1, len(contents[index] or ""))
            gt = structure_to_html(s)
            pred = structure_to_html(s.with_contents(contents))
            score = teds(pred, gt)
            n = score.size_gt
            self.assertEqual(score.distance, 1.0)
            self.assertAlmostEqual(score.value, 1 - 1 / n)
            self.assertEqual(teds(pred, gt, STRUCTURE_ONLY).value, 1.0)

    def test_partial_content_difference(self):
        score = teds("<table><tr><td>abcd</td></tr></table>", "<table><tr><td>abce</td></tr></table>")
        self.assertAlmostEqual(score.distance, 0.25)
        self.assertAlmostEqual(score.value, 1 - 0.25 / 3)

    def test_span_mismatch_costs_a_rename(self):
        pred = '<table><tr><td colspan="2">a</td></tr></table>'
        gt = "<table><tr><td>a</td></tr></table>"
        self.assertEqual(teds(pred, gt).distance, 1.0)

    def test_symmetric(self):
        rng = random.Random(8)
        for _ in range(100):
            a = structure_to_html(random_structure(rng, rng.randint(1, 6), rng.randint(1, 6), contents=True))
            b = structure_to_html(random_structure(rng, rng.randint(1, 6), rng.randint(1, 6), contents=True))
            self.assertAlmostEqual(teds(a, b).value, teds(b, a).value)

    def test_score_stays_in_unit_interval(self):
        rng = random.Random(9)
        for _ in range(100):
            a = structure_to_html(random_structure(rng, rng.randint(1, 8), rng.randint(1, 8), contents=True))
            b = structure_to_html(random_structure(rng, rng.randint(1, 8), rng.randint(1, 8), contents=True))
            value = teds(a, b).value
            self.assertGreaterEqual(value, 0.0)
            self.assertLessEqual(value, 1.0)

    def test_thead_counts_as_a_node(self):
        gt = "<table><thead><tr><td>a</td></tr></thead><tbody><tr><td>b</td></tr></tbody></table>"
        pred = "<table><tr><td>a</td></tr><tr><td>b</td></tr></table>"
        self.assertEqual(teds(pred, gt).distance, 2.0)

    def test_normalized_tbody(self):
        gt = "<table><tbody><tr><td>a</td></tr><tr><td>b</td></tr></tbody></table>"
        pred = "<table><tr><td>a</td></tr><tr><td>b</td></tr></table>"
        self.assertEqual(teds(pred, gt).distance, 1.0)
        self.assertEqual(teds(pred, gt, TedsConfig(normalize_tbody=True)).value, 1.0)

    def test_ragged_rows_are_scored(self):
        pred = "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td></tr></table>"
        self.assertEqual(teds(pred, TWO_BY_TWO).distance, 1.0)

    def test_malformed_sides(self):
        with self.assertRaises(MalformedMarkup) as ctx:
            teds("<table><tr><td>a</td></table>", ONE_CELL)
        self.assertEqual(ctx.exception.side, "pred")
        with self.assertRaises(MalformedMarkup) as ctx:
            teds(ONE_CELL, "no markup")
        self.assertEqual(ctx.exception.side, "gt")


class TestStructureOnlyInvariance(unittest.TestCase):
    def test_random_content_fills(self):
        rng = random.Random(10)
        for _ in range(200):
            s = random_structure(rng, rng.randint(1, 10), rng.randint(1, 10), span_prob=0.4)
            f = [rng.choice(["", "x", "12.5", "a & b", "<b>"]) for _ in s.cells]
            g = [rng.choice(["", "y", "total", "3"]) for _ in s.cells]
            a = structure_to_html(s.with_contents(f))
            b = structure_to_html(s.with_contents(g))
            self.assertEqual(teds(a, b, STRUCTURE_ONLY).value, 1.0)

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_generated_content_fills(self, data):
        s = data.draw(structures(max_rows=6, max_cols=6))
        a = structure_to_html(s.with_contents(data.draw(content_maps(s))))
        b = structure_to_html(s.with_contents(data.draw(content_maps(s))))
        self.assertEqual(teds(a, b, STRUCTURE_ONLY).value, 1.0)

    def test_structural_emit_matches_filled(self):
        s = random_structure(random.Random(11), 5, 5, contents=True)
        structural = structure_to_html(s, EmitMode.STRUCTURAL_ONLY)
        self.assertEqual(teds(structural, structure_to_html(s), STRUCTURE_ONLY).value, 1.0)


class TestHelpers(unittest.TestCase):
    def test_normalized_string_distance(self):
        self.assertEqual(normalized_string_distance("", ""), 0.0)
        self.assertEqual(normalized_string_distance(None, ""), 0.0)
        self.assertEqual(normalized_string_distance("abc", ""), 1.0)
        self.assertEqual(normalized_string_distance("kitten", "sitting"), 3 / 7)

    def test_extract_table_html(self):
        text = "Here you go:\n<TABLE><tr><td>1</td></tr></TABLE>\nand <table></table>"
        self.assertEqual(extract_table_html(text), "<TABLE><tr><td>1</td></tr></TABLE>")
        self.assertIsNone(extract_table_html("no table"))
        self.assertIsNone(extract_table_html(None))


class TestBatchScore(unittest.TestCase):
    def test_empty_batch(self):
        report = batch_score([])
        self.assertIsNone(report.mean)
        self.assertEqual(report.flags, ["mean_undefined"])

    def test_identical_pairs_average_one(self):
        report = batch_score([("a", ONE_CELL, ONE_CELL), ("b", TWO_BY_TWO, TWO_BY_TWO)])
        self.assertEqual(report.mean, 1.0)
        self.assertEqual(report.flags, [])

    def test_macro_average(self):
        half = "<table><tr><td>ab</td></tr></table>", "<table><tr><td>ab</td><td>c</td></tr></table>"
        # 3 nodes against 4: one insertion
        report = batch_score([("same", ONE_CELL, ONE_CELL), ("half", half[0], half[1])])
        self.assertEqual(report.by_id()["half"].value, 0.75)
        self.assertAlmostEqual(report.mean, 0.875)

    def test_malformed_prediction_scores_zero(self):
        report = batch_score([("ok", ONE_CELL, ONE_CELL), ("bad", "<table><tr>", ONE_CELL)])
        self.assertEqual(report.by_id()["bad"].value, 0.0)
        self.assertEqual(report.flags, ["bad:pred_malformed"])
        self.assertEqual(report.mean, 0.5)
        self.assertEqual(report.by_id()["bad"].as_dict(), {"id": "bad", "score": 0.0, "flag": "pred_malformed"})

    def test_malformed_ground_truth_raises(self):
        with self.assertRaises(GroundTruthMalformed) as ctx:
            batch_score([("ok", ONE_CELL, ONE_CELL), ("broken", ONE_CELL, "<table><td>")])
        self.assertEqual(ctx.exception.sample_id, "broken")
        self.assertEqual(ctx.exception.exit_code, 3)

    def test_extract_from_free_text(self):
        pred = f"The table is:\n{ONE_CELL}\nor maybe {TWO_BY_TWO}"
        self.assertEqual(batch_score([("x", pred, ONE_CELL)]).mean, 0.0)
        self.assertEqual(batch_score([("x", pred, ONE_CELL)], extract=True).mean, 1.0)

    def test_workers_keep_order_and_values(self):
        rng = random.Random(12)
        pairs = []
        for i in range(24):
            a = structure_to_html(random_structure(rng, rng.randint(1, 5), rng.randint(1, 5), contents=True))
            b = structure_to_html(random_structure(rng, rng.randint(1, 5), rng.randint(1, 5), contents=True))
            pairs.append((f"s{i}", a, b))
        serial = batch_score(pairs)
        parallel = batch_score(pairs, workers=2)
        self.assertEqual([s.id for s in parallel.samples], [p[0] for p in pairs])
        self.assertEqual([s.value for s in parallel.samples], [s.value for s in serial.samples])

    def test_structure_only_batch(self):
        report = batch_score([("x", "<table><tr><td>a</td></tr></table>", "<table><tr><td>b</td></tr></table>")], STRUCTURE_ONLY)
        self.assertEqual(report.mean, 1.0)

    def test_with_structure_scores_both_from_one_parse(self):
        report = batch_score(
            [("x", "<table><tr><td>a</td></tr></table>", "<table><tr><td>b</td></tr></table>"), ("bad", "<tr>", ONE_CELL)],
            with_structure=True,
        )
        scores = report.by_id()
        self.assertAlmostEqual(scores["x"].value, 1 - 1 / 3)
        self.assertEqual(scores["x"].structure_value, 1.0)
        self.assertEqual(scores["bad"].structure_value, 0.0)
        self.assertEqual(report.structure_mean, 0.5)
        self.assertEqual(scores["x"].as_dict(), {"id": "x", "score": scores["x"].value, "structure_score": 1.0})

    def test_structure_mean_needs_structure_scores(self):
        self.assertIsNone(batch_score([("a", ONE_CELL, ONE_CELL)]).structure_mean)


@pytest.mark.slow
class TestScoringThroughput(unittest.TestCase):
    """Wall-clock bounds at the largest synthesized table size."""

    def test_thousand_pairs_within_a_minute(self):
        rng = random.Random(13)
        pairs = []
        for i in range(1000):
            rows = rng.randint(2, 30)
            cols = rng.randint(2, min(30, 900 // rows))
            gt = random_structure(rng, rows, cols, span_prob=0.1, contents=True)
            pred = random_structure(rng, rows, cols, span_prob=0.1, contents=True)
            pairs.append((f"p{i}", structure_to_html(pred), structure_to_html(gt)))

        started = time.perf_counter()
        report = batch_score(pairs, workers=os.cpu_count() or 1, with_structure=True)
        elapsed = time.perf_counter() - started

        self.assertEqual(len(report.samples), 1000)
        self.assertIsNotNone(report.structure_mean)
        self.assertLess(elapsed, 60.0)

    def test_largest_table_pair(self):
        rng = random.Random(14)
        a = structure_to_html(random_structure(rng, 30, 30, span_prob=0.0, contents=True, empty_prob=0.0))
        b = structure_to_html(random_structure(rng, 30, 30, span_prob=0.0, contents=True, empty_prob=0.0))

        started = time.perf_counter()
        score = teds(a, b)
        elapsed = time.perf_counter() - started

        self.assertEqual((score.size_pred, score.size_gt), (931, 931))
        self.assertLess(elapsed, 5.0)


if __name__ == "__main__":
    unittest.main()
