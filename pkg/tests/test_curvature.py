import math
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from biquotient_tools import curvature, hlinalg, reps
from biquotient_tools.curvature import INCONCLUSIVE, POSITIVE, ZERO_PLANE, MetricConfig
from biquotient_tools.hlinalg import I, J

CURVATURE_SPECS = [f"N{i}" for i in range(1, 9)]


def n4_zero_pair():
    X = hlinalg.unit(1, 1, I)
    Y = hlinalg.unit(0, 2, J) + hlinalg.unit(2, 0, J)
    return X, Y


class TestMetric(unittest.TestCase):

    def setUp(self):
        self.config = MetricConfig(t=2.0)
        self.rng = np.random.default_rng(11)

    def test_validation(self):
        self.assertRaises(ValueError, MetricConfig, t=0.0)
        self.assertRaises(ValueError, MetricConfig, zero_threshold=1e-3, positivity_threshold=1e-6)

    def test_phi_inverse(self):
        X = hlinalg.random_algebra(self.rng)
        np.testing.assert_allclose(self.config.phi(self.config.phi_inverse(X)), X, atol=1e-12)
        self.assertAlmostEqual(self.config.phi_scale, 2/3)
        # Phi is g0-symmetric
        Y = hlinalg.random_algebra(self.rng)
        self.assertAlmostEqual(hlinalg.g0(self.config.phi(X), Y), hlinalg.g0(X, self.config.phi(Y)))

    def test_horizontal_lift(self):
        p = hlinalg.rotation_point(0.7)
        X = hlinalg.random_algebra(self.rng)
        first, second = curvature.horizontal_lift(self.config, p, X)
        np.testing.assert_allclose(self.config.phi(second), X, atol=1e-12)
        np.testing.assert_allclose(hlinalg.ad_p(p, self.config.phi(-first)), X, atol=1e-12)

    def test_metric_inner(self):
        p = hlinalg.rotation_point(0.0)
        k = hlinalg.unit(0, 0, I)
        off = hlinalg.unit(0, 1) - hlinalg.unit(1, 0)
        # k directions are stretched by (t+1)/t on both lifts, p directions are not
        self.assertAlmostEqual(curvature.metric_inner(self.config, p, k, k), 2*1.5*hlinalg.g0(k, k))
        self.assertAlmostEqual(curvature.metric_inner(self.config, p, off, off), 2*hlinalg.g0(off, off))
        self.assertAlmostEqual(curvature.metric_inner(self.config, p, k, off), 0.0)
        X, Y = hlinalg.random_algebra(self.rng), hlinalg.random_algebra(self.rng)
        q = hlinalg.rotation_point(0.7)
        self.assertAlmostEqual(curvature.metric_inner(self.config, q, X, Y),
                               curvature.metric_inner(self.config, q, Y, X))
        self.assertNotAlmostEqual(curvature.metric_inner(self.config, q, X, X),
                                  curvature.metric_inner(MetricConfig(t=1.0), q, X, X))

    def test_classify_minimum(self):
        config = MetricConfig()
        self.assertEqual(curvature.classify_minimum(1e-3, config), POSITIVE)
        self.assertEqual(curvature.classify_minimum(1e-12, config), ZERO_PLANE)
        self.assertEqual(curvature.classify_minimum(1e-8, config), INCONCLUSIVE)


class TestHorizontalSpace(unittest.TestCase):

    def setUp(self):
        self.library = reps.load_library()
        self.rng = np.random.default_rng(5)

    def test_lie_algebra_pair(self):
        pair = curvature.lie_algebra_pair(self.library["N4"])
        self.assertEqual(pair.u1.shape, (6, 6, 6))
        np.testing.assert_allclose(pair.u1[0], hlinalg.diag(I, I, I))
        np.testing.assert_allclose(pair.u1[3:], 0)
        np.testing.assert_allclose(pair.u2[5], hlinalg.diag(0, 0, hlinalg.K))

    def test_pair_is_homomorphism(self):
        for name in CURVATURE_SPECS + ["M3", "N9"]:
            pair = curvature.lie_algebra_pair(self.library[name])
            for u in (pair.u1, pair.u2):
                for offset in (0, 3):
                    i, j, k = u[offset], u[offset + 1], u[offset + 2]
                    np.testing.assert_allclose(hlinalg.bracket(i, j), 2*k, atol=1e-12, err_msg=name)
                    np.testing.assert_allclose(hlinalg.bracket(j, k), 2*i, atol=1e-12, err_msg=name)

    def test_missing_blocks(self):
        self.assertRaises(ValueError, curvature.lie_algebra_pair, self.library["N10"])
        broken = reps.BiquotientSpec("broken", self.library["N4"].left, self.library["N4"].right,
                                     blocks=(("p", "p"), ("1", "p", "q")))
        self.assertRaises(ValueError, curvature.lie_algebra_pair, broken)
        unknown = reps.BiquotientSpec("unknown", self.library["N4"].left, self.library["N4"].right,
                                      blocks=(("p", "p", "r"), ("1", "p", "q")))
        self.assertRaises(ValueError, curvature.lie_algebra_pair, unknown)

    def test_dimension(self):
        for name in CURVATURE_SPECS + ["M1", "M2", "M3", "N9"]:
            for theta in (0.5, math.pi/2):
                space = curvature.horizontal_space(self.library[name], hlinalg.rotation_point(theta))
                self.assertEqual(space.dimension, curvature.HORIZONTAL_DIMENSION, f"{name} {theta}")
                np.testing.assert_allclose(space.basis.T @ space.basis, np.eye(15), atol=1e-12)
                np.testing.assert_allclose(space.constraints @ space.basis, 0, atol=1e-12)

    def test_left_factor_fixed(self):
        p = hlinalg.rotation_point(0.5)
        for name in CURVATURE_SPECS:
            pair = curvature.lie_algebra_pair(self.library[name])
            np.testing.assert_allclose(hlinalg.ad_p(p, pair.u1), pair.u1, atol=1e-12, err_msg=name)

    def test_entry_constraints(self):
        p = hlinalg.rotation_point(0.5)
        for name in CURVATURE_SPECS[:6]:
            space = curvature.horizontal_space(self.library[name], p)
            vectors = hlinalg.from_coordinates(self.rng.standard_normal((50, 15)) @ space.basis.T)
            for X in vectors:
                x11, x22, x33 = (hlinalg.entry(X, a, a) for a in range(3))
                self.assertLess(x33.norm(), 1e-12, name)
                if name in ("N4", "N5"):
                    self.assertLess(x11.norm(), 1e-12, name)
                else:
                    self.assertLess((x11 + x22).norm(), 1e-12, name)


class TestDefect(unittest.TestCase):

    def setUp(self):
        self.n4 = reps.load_spec("N4")
        self.rng = np.random.default_rng(2)

    def test_zero_pair(self):
        X, Y = n4_zero_pair()
        result = curvature.defect(self.n4, hlinalg.rotation_point(math.pi/2), X, Y)
        self.assertLess(result.raw, 1e-24)
        self.assertAlmostEqual(result.gram, 2.0)
        self.assertFalse(result.dependent)

    def test_middle_slot_horizontal(self):
        space = curvature.horizontal_space(self.n4, hlinalg.rotation_point(math.pi/2))
        self.assertLess(space.residual(hlinalg.unit(1, 1, I)), 1e-12)
        self.assertGreater(space.residual(hlinalg.unit(0, 0, I)), 0.1)

    def test_same_span(self):
        p = hlinalg.rotation_point(0.5)
        space = curvature.horizontal_space(self.n4, p)
        X, Y = hlinalg.from_coordinates(self.rng.standard_normal((2, 15)) @ space.basis.T)
        value = curvature.plane_defect(p, X, Y).value
        for _ in range(5):
            (a, b), (c, d) = self.rng.standard_normal((2, 2))
            if abs(a*d - b*c) < 0.1:
                continue
            moved = curvature.plane_defect(p, a*X + b*Y, c*X + d*Y)
            self.assertAlmostEqual(moved.value/value, 1.0, places=8)

    def test_zero_pair_tilted(self):
        X, Y = n4_zero_pair()
        result = curvature.defect(self.n4, hlinalg.rotation_point(0.5), X, Y)
        self.assertGreater(result.value, 1e-3)

    def test_not_horizontal(self):
        X, Y = n4_zero_pair()
        self.assertRaises(ValueError, curvature.defect, self.n4, hlinalg.rotation_point(0.5), hlinalg.unit(0, 0, I), Y)

    def test_dependent(self):
        X, _ = n4_zero_pair()
        result = curvature.plane_defect(hlinalg.rotation_point(0.5), X, 2*X)
        self.assertTrue(result.dependent)

    def test_tensor_matches_brackets(self):
        p = hlinalg.rotation_point(0.5)
        space = curvature.horizontal_space(self.n4, p)
        T = curvature.bracket_tensor(space, p)
        self.assertEqual(T.shape, (105, 15, 15))
        a, b = self.rng.standard_normal(15), self.rng.standard_normal(15)
        X = hlinalg.from_coordinates(space.basis @ a)
        Y = hlinalg.from_coordinates(space.basis @ b)
        value, _ = curvature.objective(T, np.stack([a, b], axis=-1))
        self.assertAlmostEqual(float(value)/curvature.plane_defect(p, X, Y).raw, 1.0, places=9)

    @settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_gradient(self, seed):
        p = hlinalg.rotation_point(0.5)
        space = curvature.horizontal_space(self.n4, p)
        T = curvature.bracket_tensor(space, p)
        Y = np.random.default_rng(seed).standard_normal((15, 2))
        np.testing.assert_allclose(curvature.gradient(T, Y), curvature.numerical_gradient(T, Y),
                                   rtol=1e-6, atol=1e-8)


class TestMinDefect(unittest.TestCase):

    def setUp(self):
        self.library = reps.load_library()
        self.config = MetricConfig()

    def test_positive(self):
        for name in CURVATURE_SPECS:
            result = curvature.min_defect(self.library[name], 0.5, restarts=64, config=self.config, seed=42)
            self.assertGreaterEqual(result.value, self.config.positivity_threshold, name)
            self.assertAlmostEqual(result.gram, 1.0, places=6)
            # both lifts are at least as long as X in g0
            self.assertGreater(result.metric_gram, 3.99, name)
            self.assertAlmostEqual(float(result.a @ result.a), 1.0)

    def test_zero_plane(self):
        result = curvature.min_defect(self.library["N4"], math.pi/2, restarts=64, config=self.config, seed=42)
        self.assertLessEqual(result.value, self.config.zero_threshold)
        self.assertEqual(curvature.classify_minimum(result.value, self.config), ZERO_PLANE)

    def test_restarts(self):
        self.assertRaises(ValueError, curvature.min_defect, self.library["N4"], 0.5, 0)

    def test_scan(self):
        config = MetricConfig(max_iterations=200)
        rows = curvature.theta_scan(self.library["N2"], [0.3, 0.5], restarts=4, config=config, seed=7)
        again = curvature.theta_scan(self.library["N2"], [0.3, 0.5], restarts=4, config=config, seed=7)
        self.assertEqual([r.theta for r in rows], [0.3, 0.5])
        self.assertEqual([r.min_defect for r in rows], [r.min_defect for r in again])
        data = rows[0].to_json()
        self.assertEqual(data["spec"], "N2")
        self.assertEqual(len(data["argmin"][0]), 15)
        self.assertGreater(data["metric_gram"], 3.99)


if __name__ == "__main__":
    unittest.main()
