# -*- coding: utf-8 -*-
# pylint: disable=relative-beyond-top-level, too-few-public-methods, unused-argument
# pylint: disable=missing-class-docstring, missing-module-docstring, invalid-name

import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from python_ftscluster import models, spectra
from python_ftscluster.exceptions import FtsParameterError
from python_ftscluster.models import ModelSpec, OperatorSpec


class TestOperators(unittest.TestCase):
    def test_positive_norm(self):
        """
        test kappa = 0.75 gives spectral norm 0.75
        """
        A = models.gen_operator(OperatorSpec("exp", 0.75, 15), models.make_rng(1))
        self.assertAlmostEqual(np.linalg.norm(A, 2), 0.75, places=8)
        lead = np.linalg.eigvals(A)[np.argmax(np.abs(np.linalg.eigvals(A)))]
        self.assertGreaterEqual(lead.real, 0.0)

    def test_negative_norm(self):
        """
        test kappa = -0.4 negates the rescaled draw
        """
        negative = models.gen_operator(OperatorSpec("power", -0.4, 15), models.make_rng(2))
        positive = models.gen_operator(OperatorSpec("power", 0.4, 15), models.make_rng(2))
        self.assertAlmostEqual(np.linalg.norm(negative, 2), 0.4, places=8)
        assert_allclose(negative, -positive)

    def test_deterministic(self):
        """
        test same seed, same matrix
        """
        spec = OperatorSpec("exp", 0.8, 10)
        assert_array_equal(
            models.gen_operator(spec, models.make_rng((4, 2))),
            models.gen_operator(spec, models.make_rng((4, 2))),
        )

    def test_unknown_rule(self):
        """
        test unknown variance rule
        """
        self.assertRaises(
            FtsParameterError,
            lambda: models.gen_operator(OperatorSpec("flat", 1.0, 3), models.make_rng(0)),
        )

    def test_variance_rules(self):
        """
        test nu entries
        """
        self.assertAlmostEqual(models.variance_rule("exp", 3)[0, 1], np.exp(-3.0))
        self.assertAlmostEqual(models.variance_rule("power", 3)[1, 2], 1.0 / (2.0 + 3.0**1.5))


class TestInnovations(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.eps = models.gen_innovations(100000, 15, models.make_rng(3))

    def test_first_column(self):
        """
        test column 1 variance
        """
        self.assertAlmostEqual(self.eps[:, 0].var(), 1.0, delta=0.02)

    def test_eleventh_column(self):
        """
        test column 11 variance
        """
        self.assertAlmostEqual(self.eps[:, 10].var(), np.exp(-1.0), delta=0.02)

    def test_growing_variances(self):
        """
        test post-break variances
        """
        assert_allclose(models.innovation_variances(3, growing=True), 2.0 * np.exp([0, 0.1, 0.2]))


class TestSchedules(unittest.TestCase):
    def test_sigma2_positive(self):
        """
        test time-varying variance stays positive
        """
        u = np.linspace(0.0, 1.0, 10001)
        self.assertGreater(models.sigma2_schedule(u).min(), 0.0)

    def test_kappa1(self):
        """
        test first-lag norm schedule
        """
        self.assertAlmostEqual(models.kappa1_schedule(0.0), 1.8 * np.cos(0.5))
        self.assertAlmostEqual(models.kappa1_schedule(0.25), 1.8 * np.cos(2.5))


class TestSimulateModel(unittest.TestCase):
    def test_white_noise(self):
        """
        test model I lag one autocorrelation
        """
        T = 2048
        x = models.simulate_model(ModelSpec("I", T, seed=8)).coeffs[:, 0]
        x = x - x.mean()
        rho = np.dot(x[1:], x[:-1]) / np.dot(x, x)
        self.assertLess(abs(rho), 3.0 / np.sqrt(T))

    def test_all_models(self):
        """
        test every model gives a finite T x L series
        """
        for model in models.MODELS:
            series = models.simulate_model(ModelSpec(model, 256, L=9, seed=1), id=model)
            self.assertEqual(series.coeffs.shape, (256, 9))
            self.assertTrue(np.all(np.isfinite(series.coeffs)))
            self.assertEqual(series.id, model)

    def test_deterministic(self):
        """
        test model II is reproducible
        """
        spec = ModelSpec("II", 256, seed=(3, 1, 4))
        assert_array_equal(
            models.simulate_model(spec).coeffs, models.simulate_model(spec).coeffs
        )

    def test_stationary_bounded(self):
        """
        test stationary models do not blow up on a long run
        """
        for model in ("I", "II", "III"):
            coeffs = models.simulate_model(ModelSpec(model, 2**14, seed=2)).coeffs
            self.assertLess(np.abs(coeffs).max(), 50.0)

    def test_break(self):
        """
        test model VI first coefficient variance rises after the break
        """
        T = 4096
        cut = 3 * T // 8
        hits = 0
        for seed in range(100):
            first = models.simulate_model(ModelSpec("VI", T, seed=seed)).coeffs[:, 0]
            hits += np.var(first[cut:]) > np.var(first[:cut])
        self.assertGreaterEqual(hits, 95)

    def test_shared_operators(self):
        """
        test specs with one operator seed share operators, not innovations
        """
        first = ModelSpec("V", 256, L=5, seed=(1, 0), operator_seed=(1,))
        second = ModelSpec("V", 256, L=5, seed=(1, 1), operator_seed=(1,))
        for t in (1, 100, 256):
            for A, B in zip(models.draw_operators(first)(t), models.draw_operators(second)(t)):
                assert_array_equal(A, B)
        self.assertFalse(
            np.array_equal(
                models.simulate_model(first).coeffs, models.simulate_model(second).coeffs
            )
        )
        self.assertIsNone(models.draw_operators(ModelSpec("I", 256)))

    def test_operator_seed_unset(self):
        """
        test without an operator seed the draw follows the series seed
        """
        spec = ModelSpec("II", 256, L=5, seed=7)
        shared = ModelSpec("II", 256, L=5, seed=7, operator_seed=7)
        for A, B in zip(models.draw_operators(spec)(1), models.draw_operators(shared)(1)):
            assert_array_equal(A, B)

    def test_unknown_model(self):
        """
        test unknown model and bad sizes
        """
        self.assertRaises(FtsParameterError, lambda: ModelSpec("VII", 256))
        self.assertRaises(FtsParameterError, lambda: ModelSpec("I", 1))


class TestMakeSetting(unittest.TestCase):
    def test_groups_share_spectra(self):
        """
        test members of a model are closer to each other than to other models
        """
        n = 4
        collection = models.make_setting(1, n, 512, seed=5, L=5)
        sim = spectra.similarity_matrix(collection.series, spectra.make_block_plan(512, 16))
        off = ~np.eye(n, dtype=bool)
        for group in range(3):
            member = collection.labels == group
            within = sim.values[np.ix_(member, member)][off].mean()
            between = sim.values[np.ix_(member, ~member)].mean()
            self.assertLess(within, between, msg=f"model {collection.models[group * n]}")

    def test_group_operators(self):
        """
        test every member of a group is drawn with the group's operator seed
        """
        collection = models.make_setting(2, 3, 128, seed=9, L=5)
        for g, model in enumerate(models.SETTINGS[2]):
            spec = ModelSpec(model, 128, 5, seed=(9, g, 2), operator_seed=(9, g))
            assert_array_equal(
                models.simulate_model(spec).coeffs, collection.series[3 * g + 2].coeffs
            )

    def test_setting_one(self):
        """
        test setting 1 sizes and labels
        """
        collection = models.make_setting(1, 10, 256)
        self.assertEqual(len(collection.series), 30)
        assert_array_equal(collection.labels, np.repeat([0, 1, 2], 10))
        self.assertEqual(collection.ids[0], "I-001")
        self.assertEqual(collection.ids[29], "III-010")
        self.assertEqual(collection.models[10], "II")

    def test_setting_three(self):
        """
        test setting 3 has six labels
        """
        collection = models.make_setting(3, 2, 64, L=5)
        self.assertEqual(len(collection.series), 12)
        self.assertEqual(np.unique(collection.labels).size, 6)

    def test_workers(self):
        """
        test threaded generation matches serial
        """
        serial = models.make_setting(2, 3, 128, seed=4, workers=1)
        threaded = models.make_setting(2, 3, 128, seed=4, workers=4)
        for a, b in zip(serial.series, threaded.series):
            assert_array_equal(a.coeffs, b.coeffs)

    def test_seeds(self):
        """
        test distinct seeds give different collections
        """
        first = models.make_setting(1, 2, 64, seed=1)
        second = models.make_setting(1, 2, 64, seed=2)
        self.assertFalse(np.array_equal(first.series[0].coeffs, second.series[0].coeffs))

    def test_bad_setting(self):
        """
        test unknown setting and empty groups
        """
        self.assertRaises(FtsParameterError, lambda: models.make_setting(4, 2, 64))
        self.assertRaises(FtsParameterError, lambda: models.make_setting(1, 0, 64))


if __name__ == "__main__":
    unittest.main(verbosity=2)
