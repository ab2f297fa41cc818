#!/usr/bin/env python3
"""
Unit tests for structural token sequences and token-economy counts.
"""

import unittest

from hypothesis import given, settings

from src.markup.html_codec import parse_table_html, same_structure
from src.markup.tokens import (
    StructuralTokenSequence,
    char_ratio,
    count_matrix_tokens,
    token_ratio,
    tokenize_structure,
)
from src.table.matrix import CellMatrix
from src.table.structure import LogicalCell, TableStructure, cells_to_matrix, matrix_to_cells
from src.tests.common.strategies import structures


class TestTokenizeStructure(unittest.TestCase):
    def test_plain_row(self):
        s = matrix_to_cells(CellMatrix.from_text("CC"))
        self.assertEqual(
            list(tokenize_structure(s).tokens),
            ["<tr>", "<td>", "</td>", "<td>", "</td>", "</tr>"],
        )
        self.assertAlmostEqual(token_ratio(cells_to_matrix(s), s), 2 / 6)

    def test_spanned_cell(self):
        s = matrix_to_cells(CellMatrix.from_text("CL\nUX"))
        self.assertEqual(
            list(tokenize_structure(s).tokens),
            ["<tr>", "<td", ' rowspan="2"', ' colspan="2"', ">", "</td>", "</tr>", "<tr>", "</tr>"],
        )

    def test_header_groups(self):
        s = TableStructure(2, 1, (LogicalCell(0, 0, is_header=True), LogicalCell(1, 0)))
        tokens = list(tokenize_structure(s).tokens)
        self.assertEqual(tokens[0], "<thead>")
        self.assertEqual(tokens[5:7], ["</thead>", "<tbody>"])
        self.assertEqual(tokens[-1], "</tbody>")

    def test_closed_form_count(self):
        s = matrix_to_cells(CellMatrix.filled(20, 10))
        self.assertEqual(len(tokenize_structure(s)), 440)
        self.assertAlmostEqual(token_ratio(cells_to_matrix(s), s), 200 / 440)

    @settings(max_examples=200, deadline=None)
    @given(structures(headers=True))
    def test_balanced_and_reassembles(self, s):
        seq = tokenize_structure(s)
        self.assertTrue(seq.is_balanced())
        self.assertTrue(same_structure(parse_table_html(seq.to_html()).structure, s))

    def test_unbalanced_sequences(self):
        self.assertFalse(StructuralTokenSequence(("<tr>", "<td>", "</tr>", "</td>")).is_balanced())
        self.assertFalse(StructuralTokenSequence(("<tr>", ' rowspan="2"', "</tr>")).is_balanced())
        self.assertFalse(StructuralTokenSequence(("<tr>",)).is_balanced())

    def test_to_html_inserts_contents(self):
        s = matrix_to_cells(CellMatrix.from_text("CC"))
        markup = tokenize_structure(s).to_html(["a", "b"])
        self.assertEqual(markup, "<table><tr><td>a</td><td>b</td></tr></table>")


class TestCounts(unittest.TestCase):
    def test_matrix_tokens(self):
        self.assertEqual(count_matrix_tokens(CellMatrix.filled(2, 2)), 4)
        self.assertEqual(count_matrix_tokens(CellMatrix.filled(1, 1)), 1)
        self.assertEqual(count_matrix_tokens(CellMatrix.filled(30, 30)), 900)

    def test_plain_table_ratio_floor(self):
        plain = CellMatrix.filled(4, 4)
        self.assertAlmostEqual(token_ratio(plain, matrix_to_cells(plain)), 4 / 10)
        for n in range(4, 21):
            for m in range(4, 21):
                plain = CellMatrix.filled(n, m)
                ratio = token_ratio(plain, matrix_to_cells(plain))
                self.assertAlmostEqual(ratio, m / (2 + 2 * m))
                self.assertTrue(0.4 <= ratio < 0.5)

    def test_char_ratio(self):
        s = matrix_to_cells(CellMatrix.from_text("CC"))
        # "CC" against "<table><tr><td></td><td></td></tr></table>"
        self.assertAlmostEqual(char_ratio(cells_to_matrix(s), s), 2 / 42)


if __name__ == "__main__":
    unittest.main()
