#!/usr/bin/env python3
"""
Unit tests for the exception hierarchy and exit-status mapping.
"""

import pickle
import unittest

from src.core.errors import (
    ConfigError,
    EmptyCorpus,
    ExternalClientError,
    GroundTruthMalformed,
    InvalidMatrix,
    MalformedMarkup,
    MultipleTables,
    NoCompatibleSource,
    NonTiling,
    TabforgeError,
    UnreadablePath,
    ValidationExhausted,
    exit_code_for,
)


class TestExitCodes(unittest.TestCase):
    def test_library_errors(self):
        self.assertEqual(exit_code_for(NonTiling("gap")), 1)
        self.assertEqual(exit_code_for(InvalidMatrix("bad")), 1)
        self.assertEqual(exit_code_for(ConfigError("bad")), 2)
        for error in (UnreadablePath("x"), EmptyCorpus("x"), ExternalClientError("x"), GroundTruthMalformed("s", ValueError())):
            self.assertEqual(exit_code_for(error), 3, type(error).__name__)

    def test_foreign_errors(self):
        self.assertEqual(exit_code_for(FileNotFoundError("x")), 3)
        self.assertEqual(exit_code_for(ValueError("x")), 2)
        self.assertEqual(exit_code_for(RuntimeError("x")), 1)

    def test_markup_family(self):
        self.assertTrue(issubclass(MultipleTables, MalformedMarkup))
        self.assertTrue(issubclass(MalformedMarkup, TabforgeError))


class TestDetails(unittest.TestCase):
    def test_base_details(self):
        self.assertEqual(NonTiling("gap").details(), {"error": "NonTiling", "message": "gap"})

    def test_violations_listed(self):
        error = InvalidMatrix("bad", [(0, 1, "L_left", "L needs a left neighbour")])
        self.assertEqual(error.details()["violations"], [[0, 1, "L_left", "L needs a left neighbour"]])

    def test_markup_side(self):
        self.assertEqual(MalformedMarkup("x", side="gt").details()["side"], "gt")
        self.assertNotIn("side", MalformedMarkup("x").details())

    def test_no_compatible_source_message(self):
        error = NoCompatibleSource(30, 12, [(20, 20)])
        self.assertEqual((error.min_rows, error.min_cols), (30, 12))
        self.assertIn("[(20, 20)]", str(error))
        self.assertNotIn("largest", str(NoCompatibleSource(3, 3)))

    def test_validation_exhausted(self):
        error = ValidationExhausted("tme-000002", 3, "incoherent")
        self.assertEqual((error.record_id, error.attempts, error.reason), ("tme-000002", 3, "incoherent"))

    def test_ground_truth_error_pickles(self):
        error = pickle.loads(pickle.dumps(GroundTruthMalformed("s1", ValueError("no table"))))
        self.assertEqual(error.sample_id, "s1")
        self.assertIn("s1", str(error))


if __name__ == "__main__":
    unittest.main()
