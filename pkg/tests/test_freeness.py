from fractions import Fraction
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from biquotient_tools import freeness, reps
from biquotient_tools.freeness import NO_VIOLATION, SUSPECT, Status
from biquotient_tools.reference_tables import compare, compare_pairs
from biquotient_tools.reps import BiquotientSpec, TorusImage


def sp1_spec(left: str, right: str) -> BiquotientSpec:
    return freeness.sp1_pair_spec(reps.RepDecomposition.parse(left), reps.RepDecomposition.parse(right))


class TestCertify(unittest.TestCase):

    def setUp(self):
        self.library = reps.load_library()
        self.cube_root = sp1_spec("2phi0+phi3", "4phi0+phi1")
        self.scalar = BiquotientSpec("scalar", TorusImage(((1, 0),)*3), TorusImage(((0, 1),)*3))

    def test_patterns(self):
        self.assertEqual(len(freeness.patterns(3)), 48)
        self.assertEqual(len(set(freeness.patterns(3))), 48)
        self.assertEqual(len(freeness.patterns(1)), 2)

    def test_central_class(self):
        spec = self.library["N4"]
        self.assertEqual(freeness.central_class(spec, (0, 0)), 0)
        self.assertIsNone(freeness.central_class(spec, (Fraction(1, 2), Fraction(1, 2))))
        self.assertEqual(freeness.central_class(self.scalar, (Fraction(1, 2), Fraction(1, 2))), Fraction(1, 2))

    def test_library_effectively_free(self):
        for name, spec in self.library.items():
            if name == "N11":
                continue
            verdict = freeness.certify(spec)
            self.assertIs(verdict.status, Status.FREE, name)
            self.assertEqual(verdict.witnesses, ())

    def test_printed_n11_not_free(self):
        spec = self.library["N11"]
        verdict = freeness.certify(spec)
        self.assertIs(verdict.status, Status.NOT_FREE)
        fifth = (Fraction(1, 5), Fraction(2, 5))
        self.assertIn(fifth, [w.x for w in verdict.witnesses])
        self.assertTrue(freeness.is_conjugate(spec.left, spec.right, fifth))
        self.assertEqual(sorted(spec.left.angles(fifth)), sorted(spec.right.angles(fifth)))
        for witness in verdict.witnesses:
            self.assertTrue(freeness.is_violation(spec, witness.x))

    def test_free(self):
        spec = BiquotientSpec("free", TorusImage(((1, 0), (0, 0), (0, 0))), TorusImage(((1, 0), (1, 0), (0, 1))))
        verdict = freeness.certify(spec)
        self.assertIs(verdict.status, Status.FREE)
        self.assertTrue(verdict.is_effectively_free)

    def test_half_central(self):
        verdict = freeness.certify(self.scalar)
        self.assertIs(verdict.status, Status.NOT_FREE)
        self.assertIn((Fraction(1, 3), Fraction(1, 3)), [w.x for w in verdict.witnesses])
        # square root of the central element (-1, -1)
        self.assertTrue(freeness.is_violation(self.scalar, (Fraction(1, 4), Fraction(1, 4))))

    def test_cube_root_witness(self):
        verdict = freeness.certify(self.cube_root)
        self.assertIs(verdict.status, Status.NOT_FREE)
        self.assertIn((Fraction(1, 3),), [w.x for w in verdict.witnesses])
        for witness in verdict.witnesses:
            self.assertTrue(freeness.is_violation(self.cube_root, witness.x))
        self.assertEqual(verdict.witnesses, tuple(sorted(verdict.witnesses, key=lambda w: w.x)))

    def test_witness_json(self):
        data = freeness.certify(self.cube_root).to_json()
        self.assertEqual(data["status"], "NotFree")
        self.assertIn(["1/3"], [w["x"] for w in data["witnesses"]])

    def test_counterexamples(self):
        specs = freeness.counterexamples()
        self.assertEqual(len(specs), 3)
        for spec in specs:
            verdict = freeness.certify(spec)
            self.assertIs(verdict.status, Status.NOT_FREE, spec.name)
            self.assertGreater(len(verdict.witnesses), 0)
            for witness in verdict.witnesses:
                self.assertTrue(freeness.is_conjugate(spec.left, spec.right, witness.x))
                self.assertIsNone(freeness.central_class(spec, witness.x))

    def test_restrictions(self):
        for name, spec in self.library.items():
            for label, verdict in freeness.restriction_verdicts(spec).items():
                self.assertTrue(verdict.is_effectively_free, f"{name} {label}")

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1), st.sampled_from(["N1", "N6", "N8", "O1", "M4"]))
    def test_symmetry_invariant(self, seed, name):
        spec = self.library[name]
        moved = reps.random_symmetry(spec, np.random.default_rng(seed))
        self.assertEqual(freeness.certify(moved).status, freeness.certify(spec).status)


class TestSp1Pairs(unittest.TestCase):

    def setUp(self):
        self.pairs = freeness.certify_sp1_pairs()

    def test_reference_pairs(self):
        self.assertEqual(len(self.pairs), 10)
        self.assertListEqual(compare_pairs("sp1_pairs", [p.labels for p in self.pairs]), [])

    def test_rejected(self):
        everything = freeness.certify_sp1_pairs(keep_rejected=True)
        self.assertEqual(len(everything), 21)
        rejected = [p for p in everything if not p.verdict.is_effectively_free]
        self.assertEqual(len(rejected), 11)
        labels = [set(p.labels) for p in rejected]
        self.assertIn({"2phi0+phi3", "4phi0+phi1"}, labels)


class TestClassification(unittest.TestCase):

    def setUp(self):
        self.classes = freeness.classify_all()

    def test_count(self):
        self.assertEqual(len(self.classes), 18)
        self.assertEqual(sum(c.homogeneous for c in self.classes), 4)
        self.assertListEqual([c.spec.name for c in self.classes], [n for n in reps.load_library() if n != "N11"])

    def test_unclassified(self):
        missing = freeness.unclassified(self.classes)
        self.assertEqual([v.name for v in missing], ["N11"])
        self.assertIs(missing[0].status, Status.NOT_FREE)
        actual = {c.spec.name: "effectively free" for c in self.classes}
        actual.update({v.name: v.status.value for v in missing})
        mismatches, errata = compare("classification", actual)
        self.assertListEqual(mismatches, [])
        self.assertEqual([(e.key, e.published, e.reproduced) for e in errata],
                         [("N11", "effectively free", "NotFree")])

    def test_canonical(self):
        library = reps.load_library()
        for c in self.classes:
            self.assertEqual(c.spec.key(), reps.canonicalize(library[c.spec.name]).key())
            self.assertEqual(c.verdict.name, c.spec.name)

    def test_candidates(self):
        candidates = freeness.candidate_pairs()
        self.assertEqual(len({c.key() for c in candidates}), len(candidates))
        self.assertTrue(all(c.rank == 2 for c in candidates))


class TestOracle(unittest.TestCase):

    def setUp(self):
        self.library = reps.load_library()

    def test_free_spec(self):
        for name in ("N4", "N8", "O1"):
            spec = self.library[name]
            oracle = freeness.sample_oracle(spec, grid_n=24)
            self.assertEqual(oracle.status, NO_VIOLATION)
            self.assertListEqual(freeness.confirmed_conflicts(spec, freeness.certify(spec), oracle), [])

    def test_cube_root(self):
        spec = sp1_spec("2phi0+phi3", "4phi0+phi1")
        oracle = freeness.sample_oracle(spec, grid_n=24)
        self.assertEqual(oracle.status, SUSPECT)
        self.assertIn((Fraction(1, 3),), oracle.suspects)
        self.assertEqual(oracle.count, 2)
        self.assertListEqual(freeness.confirmed_conflicts(spec, freeness.certify(spec), oracle), [])

    def test_missed_violation(self):
        # a grid of 8 never lands on a third root of unity
        spec = sp1_spec("2phi0+phi3", "4phi0+phi1")
        oracle = freeness.sample_oracle(spec, grid_n=8)
        self.assertEqual(oracle.status, NO_VIOLATION)
        self.assertEqual(len(freeness.confirmed_conflicts(spec, freeness.certify(spec), oracle)), 1)

    def test_all_candidates(self):
        conflicts = []
        for spec in freeness.candidate_pairs():
            conflicts += freeness.confirmed_conflicts(spec, freeness.certify(spec), freeness.sample_oracle(spec, 720))
        self.assertListEqual(conflicts, [])

    def test_small_grid(self):
        self.assertRaises(ValueError, freeness.sample_oracle, self.library["N4"], 4)


if __name__ == "__main__":
    unittest.main()
