#!/usr/bin/env python3
"""
Unit tests for corpus loading and source sampling.
"""

import random
from collections import Counter

from src.core.errors import EmptyCorpus, NoCompatibleSource, UnreadablePath
from src.corpus.loader import Corpus, CorpusFormat, load_annotations, make_record, reassemble_html, sample_compatible
from src.markup.html_codec import parse_table_html, structure_to_html
from src.markup.tokens import tokenize_structure
from src.table.matrix import CellMatrix
from src.table.structure import matrix_to_cells
from src.tests.common.base import BaseTestCase
from src.tests.common.fixtures import COLLAPSED_ROW_HTML, collapsed_row_structure, pubtabnet_line, random_structure


def plain(n_rows, n_cols):
    return matrix_to_cells(CellMatrix.filled(n_rows, n_cols))


class TestReassemble(BaseTestCase):
    def test_cell_tokens_joined_and_escaped(self):
        s = plain(1, 2)
        markup = reassemble_html(tokenize_structure(s).tokens, [["<b>", "a", "&", "</b>"], ["1", "<"]])
        self.assertEqual(markup, "<table><tr><td><b>a&amp;</b></td><td>1&lt;</td></tr></table>")
        cells = parse_table_html(markup).structure.cells
        self.assertEqual([c.content for c in cells], ["a&", "1<"])

    def test_spanning_structure(self):
        s = collapsed_row_structure()
        markup = reassemble_html(tokenize_structure(s).tokens, [list("a"), list("b"), list("x")])
        self.assertEqual(parse_table_html(markup).structure, parse_table_html(COLLAPSED_ROW_HTML).structure)


class TestLoadJsonl(BaseTestCase):
    def test_malformed_line_skipped(self):
        directory = self.make_temp_dir()
        lines = [
            pubtabnet_line("a", plain(2, 2)),
            '{"imgid": "broken", "html": {"structure": {"tokens": ["<tr>", "<td>"]}, "cells": []}}',
            "not json at all",
            pubtabnet_line("c", plain(3, 1)),
        ]
        path = self.write_file(directory, "ann.jsonl", "\n".join(lines) + "\n\n")
        corpus = load_annotations(path)
        self.assertEqual([r.id for r in corpus], ["a", "c"])
        self.assertEqual(corpus.skipped, 2)
        self.assertEqual(corpus.get("c").n_rows, 3)
        self.assertEqual(corpus.get("a").image_ref, "a.png")
        self.assertIsNone(corpus.get("zzz"))

    def test_contents_survive(self):
        s = random_structure(random.Random(1), 6, 6, contents=True)
        path = self.write_corpus(self.make_temp_dir(), [s])
        record = load_annotations(path).get("t000")
        self.assertEqual(record.structure, s.with_contents([c.content or "" for c in s.cells]))

    def test_split_filter(self):
        directory = self.make_temp_dir()
        lines = [
            pubtabnet_line("tr1", plain(2, 2), split="train"),
            pubtabnet_line("va1", plain(2, 2), split="val"),
            pubtabnet_line("tr2", plain(2, 2), split="train"),
        ]
        path = self.write_file(directory, "ann.jsonl", "\n".join(lines))
        self.assertEqual([r.id for r in load_annotations(path, split="train")], ["tr1", "tr2"])
        self.assertEqual(load_annotations(path, split="val").get("va1").split, "val")
        with self.assertRaises(EmptyCorpus):
            load_annotations(path, split="test")

    def test_repair(self):
        path = self.write_corpus(self.make_temp_dir(), [collapsed_row_structure(), plain(2, 2)])
        raw = load_annotations(path)
        self.assertEqual(raw.get("t000").matrix.to_text(), "CC\nCL\nUX")
        self.assertEqual(raw.get("t000").defect_flags, {"had_implicit_rows": True, "implicit_count": 1})
        repaired = load_annotations(path, repair=True)
        record = repaired.get("t000")
        self.assertTrue(record.repaired)
        self.assertEqual(record.matrix.to_text(), "CC\nCL")
        self.assertEqual(record.defect_flags["implicit_count"], 1)
        self.assertFalse(repaired.get("t001").repaired)

    def test_missing_path(self):
        with self.assertRaises(UnreadablePath):
            load_annotations(self.make_temp_dir() / "nope.jsonl")

    def test_nothing_usable(self):
        path = self.write_file(self.make_temp_dir(), "empty.jsonl", "garbage\n")
        with self.assertRaises(EmptyCorpus) as ctx:
            load_annotations(path)
        self.assertEqual(ctx.exception.exit_code, 3)


class TestLoadHtmlDir(BaseTestCase):
    def test_directory_of_tables(self):
        directory = self.make_temp_dir()
        self.write_file(directory, "b.html", structure_to_html(plain(2, 3)))
        self.write_file(directory, "a.htm", COLLAPSED_ROW_HTML)
        self.write_file(directory, "c.html", "<table><tr><td>")
        self.write_file(directory, "notes.txt", "ignored")
        corpus = load_annotations(directory)
        self.assertEqual([r.id for r in corpus], ["a", "b"])
        self.assertEqual(corpus.skipped, 1)
        self.assertEqual(corpus.get("a").implicit.implicit_rows, (2,))

    def test_explicit_format(self):
        directory = self.make_temp_dir()
        self.write_file(directory, "t.html", structure_to_html(plain(1, 1)))
        corpus = load_annotations(directory, fmt=CorpusFormat.HTML_DIR)
        self.assertEqual(len(corpus), 1)
        self.assertEqual(corpus.source, str(directory))


class TestSampleCompatible(BaseTestCase):
    def setUp(self):
        self.corpus = Corpus(
            [
                make_record("small", plain(2, 2)),
                make_record("wide", plain(3, 10)),
                make_record("tall", plain(10, 3)),
                make_record("big", plain(10, 10)),
            ]
        )

    def test_filter(self):
        self.assertEqual([r.id for r in self.corpus.compatible(3, 3)], ["wide", "tall", "big"])
        self.assertEqual([r.id for r in self.corpus.compatible(5, 5)], ["big"])
        self.assertFalse(self.corpus.has_compatible(11, 1))

    def test_largest_dims(self):
        self.assertEqual(self.corpus.largest_dims(2), [(10, 10), (3, 10)])

    def test_uniform_over_qualifiers(self):
        rng = random.Random(2)
        draws = 10000
        counts = Counter(sample_compatible(self.corpus, 3, 3, rng).id for _ in range(draws))
        self.assertEqual(set(counts), {"wide", "tall", "big"})
        # chi-square, 2 degrees of freedom, 99.9% quantile
        expected = draws / 3
        chi2 = sum((n - expected) ** 2 / expected for n in counts.values())
        self.assertLess(chi2, 13.82)

    def test_single_big_table(self):
        corpus = Corpus([make_record("only", plain(20, 20))])
        self.assertEqual(sample_compatible(corpus, 20, 20, random.Random(3)).id, "only")

    def test_no_qualifier(self):
        with self.assertRaises(NoCompatibleSource) as ctx:
            sample_compatible(self.corpus, 11, 11, random.Random(4))
        self.assertIn("(10, 10)", str(ctx.exception))
