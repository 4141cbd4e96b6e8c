import json
import os
import tempfile
import unittest

from biquotient_tools import reference_tables
from biquotient_tools.reference_tables import TABLES, Erratum, Mismatch


class TestReferenceTables(unittest.TestCase):

    def setUp(self):
        self.tempdir = tempfile.TemporaryDirectory()
        self.golden = self.tempdir.name
        with open(os.path.join(self.golden, "h8_orders.json"), "w") as file:
            json.dump({"h8_orders": {"A": 3, "B": {"published": 9, "erratum": {"reproduced": 13, "note": "det"}}}},
                      file)
        with open(os.path.join(self.golden, "sp1_pairs.json"), "w") as file:
            json.dump({"sp1_pairs": [["phi5", "3phi1"], ["2phi2", "phi5"]]}, file)

    def tearDown(self):
        self.tempdir.cleanup()

    def test_packaged_tables(self):
        for table in TABLES:
            self.assertTrue(reference_tables.load_table(table))

    def test_missing(self):
        self.assertRaises(KeyError, reference_tables.load_table, "h9_orders")
        self.assertRaises(KeyError, reference_tables.load_table, "pontryagin", self.golden)
        with open(os.path.join(self.golden, "differentials.json"), "w") as file:
            json.dump({"dx3": {}}, file)
        self.assertRaises(KeyError, reference_tables.load_table, "differentials", self.golden)

    def test_split_entry(self):
        self.assertEqual(reference_tables.split_entry("t", "k", 5), (5, None))
        value, erratum = reference_tables.split_entry(
            "t", "k", {"published": 1, "erratum": {"reproduced": 2, "note": "typo"}})
        self.assertEqual(value, 2)
        self.assertEqual(erratum, Erratum("t", "k", 1, 2, "typo"))
        self.assertEqual(str(erratum), "t/k: published 1, reproduced 2 (typo)")

    def test_compare(self):
        mismatches, errata = reference_tables.compare("h8_orders", {"A": 3, "B": 13}, self.golden)
        self.assertListEqual(mismatches, [])
        self.assertEqual([e.key for e in errata], ["B"])
        mismatches, _ = reference_tables.compare("h8_orders", {"A": 4, "B": 9, "C": 1}, self.golden)
        self.assertListEqual(mismatches, [Mismatch("h8_orders", "A", 3, 4), Mismatch("h8_orders", "B", 13, 9),
                                          Mismatch("h8_orders", "C", None, 1)])

    def test_compare_missing_key(self):
        with self.assertLogs("biquotient_tools.reference_tables", level="WARNING"):
            mismatches, _ = reference_tables.compare("h8_orders", {"A": 3}, self.golden)
        self.assertEqual(mismatches, [Mismatch("h8_orders", "B", 13, None)])

    def test_normalize(self):
        mismatches, _ = reference_tables.compare("h8_orders", {"A": -3, "B": -13}, self.golden, normalize=abs)
        self.assertListEqual(mismatches, [])

    def test_compare_pairs(self):
        self.assertListEqual(reference_tables.compare_pairs("sp1_pairs", [("3phi1", "phi5"), ("phi5", "2phi2")],
                                                            self.golden), [])
        mismatches = reference_tables.compare_pairs("sp1_pairs", [("3phi1", "phi5"), ("phi5", "phi1+phi3")],
                                                    self.golden)
        self.assertEqual([(m.key, m.expected, m.actual) for m in mismatches],
                         [("2phi2 / phi5", ("2phi2", "phi5"), None),
                          ("phi1+phi3 / phi5", None, ("phi1+phi3", "phi5"))])


if __name__ == "__main__":
    unittest.main()
