from fractions import Fraction
from itertools import combinations
from math import gcd, prod
import unittest

import numpy as np
import sympy
from hypothesis import given, settings, strategies as st

from biquotient_tools import intlin

entries = st.integers(min_value=-12, max_value=12)


def matrices(rows: int, cols: int):
    return st.lists(st.lists(entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def determinantal_divisor(A, k: int) -> int:
    """gcd of all k x k minors, computed with sympy."""
    matrix = sympy.Matrix(A)
    out = 0
    for rows in combinations(range(matrix.rows), k):
        for cols in combinations(range(matrix.cols), k):
            out = gcd(out, int(matrix.extract(list(rows), list(cols)).det()))
    return out


class TestSnf(unittest.TestCase):

    def setUp(self):
        self.A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]

    def test_known_form(self):
        result = intlin.snf(self.A)
        self.assertListEqual(result.divisors, [2, 6, 12])

    def test_zero_matrix(self):
        self.assertListEqual(intlin.snf([[0, 0], [0, 0]]).divisors, [0, 0])

    @settings(max_examples=60, deadline=None)
    @given(st.sampled_from([(3, 3), (2, 3), (6, 2), (3, 2)]).flatmap(lambda shape: matrices(*shape)))
    def test_decomposition(self, A):
        result = intlin.snf(A)
        A = intlin.int_matrix(A)
        self.assertTrue(np.array_equal(result.U @ A @ result.V, result.D))
        self.assertTrue(np.array_equal(result.U_inv @ result.D @ result.V_inv, A))
        self.assertTrue(np.array_equal(result.U @ result.U_inv, intlin.int_eye(A.shape[0])))
        self.assertTrue(np.array_equal(result.V @ result.V_inv, intlin.int_eye(A.shape[1])))
        off_diagonal = result.D.copy()
        for i in range(min(A.shape)):
            off_diagonal[i, i] = 0
        self.assertFalse(off_diagonal.any())
        divisors = result.divisors
        self.assertTrue(all(d >= 0 for d in divisors))
        for d, e in zip(divisors, divisors[1:]):
            self.assertEqual(e % d if d else e, 0)

    @settings(max_examples=40, deadline=None)
    @given(matrices(3, 3))
    def test_determinantal_divisors(self, A):
        divisors = intlin.snf(A).divisors
        for k in range(1, 4):
            self.assertEqual(prod(divisors[:k]), determinantal_divisor(A, k))

    @given(matrices(3, 3))
    def test_det3(self, A):
        self.assertEqual(intlin.det3(A), int(sympy.Matrix(A).det()))

    def test_det3_shape(self):
        self.assertRaises(ValueError, intlin.det3, [[1, 2], [3, 4]])

    def test_int_matrix(self):
        self.assertRaises(ValueError, intlin.int_matrix, [[1.5, 0]])
        self.assertRaises(ValueError, intlin.int_matrix, [1, 2, 3])
        big = intlin.int_matrix([[2**70]])
        self.assertEqual(big[0, 0], 2**70)


class TestTorus(unittest.TestCase):

    def test_reduce_mod1(self):
        self.assertEqual(intlin.reduce_mod1([Fraction(-1, 3), 2, Fraction(7, 4)]),
                         (Fraction(2, 3), Fraction(0), Fraction(3, 4)))

    def test_primitive(self):
        self.assertEqual(intlin.primitive([0, -4, 6]), (0, 2, -3))
        self.assertEqual(intlin.primitive([3, 0]), (1, 0))
        self.assertRaises(ValueError, intlin.primitive, [0, 0])

    def test_finite_subgroup(self):
        group = intlin.solve_torus([[2, 0], [0, 3]])
        self.assertEqual(group.free_directions, ())
        self.assertEqual(len(group.torsion_reps), 6)
        self.assertIn((Fraction(1, 2), Fraction(2, 3)), group.torsion_reps)

    def test_circle_subgroup(self):
        group = intlin.solve_torus([[1, 1]])
        self.assertEqual(len(group.free_directions), 1)
        self.assertEqual(group.free_directions[0], (1, -1))
        self.assertEqual(group.torsion_reps, ((Fraction(0), Fraction(0)),))

    def test_disconnected_circle(self):
        # 2x + 4y in Z: the circle x = -2y and its translate by x = 1/2
        group = intlin.solve_torus([[2, 4]])
        self.assertEqual(group.free_directions, ((2, -1),))
        self.assertEqual(len(group.torsion_reps), 2)
        self.assertTrue(all(group.contains(x) for x in group.torsion_reps))

    def test_empty(self):
        self.assertRaises(ValueError, intlin.solve_torus, np.empty((0, 2), dtype=object))

    @settings(max_examples=40, deadline=None)
    @given(matrices(3, 2))
    def test_components(self, M):
        group = intlin.solve_torus(M)
        divisors = [d for d in intlin.snf(M).divisors if d]
        self.assertEqual(len(group.torsion_reps), prod(divisors))
        self.assertEqual(len(group.free_directions), 2 - len(divisors))
        for x in group.torsion_reps:
            self.assertTrue(group.contains(x))
        for direction in group.free_directions:
            self.assertTrue(group.contains([Fraction(v, 7) for v in direction]))


if __name__ == "__main__":
    unittest.main()
