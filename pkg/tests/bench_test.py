# -*- coding: utf-8 -*-
# pylint: disable=relative-beyond-top-level, too-few-public-methods, unused-argument
# pylint: disable=missing-class-docstring, missing-module-docstring, invalid-name

import os
import unittest

import numpy as np
from pandas.testing import assert_frame_equal

from python_ftscluster import bench
from python_ftscluster.bench import BenchSpec
from python_ftscluster.exceptions import FtsParameterError, FtsPlanError

# full-size replications take minutes to tens of minutes
SLOW = os.environ.get("FTSCLUSTER_SLOW") == "1"


class TestBenchSmall(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.spec = BenchSpec(
            setting=1, n=3, T=128, M=4, L=5, replications=2,
            methods=("true", "relgap"), k_max=4, restarts=3, seed=1,
        )

    def test_cluster_table(self):
        """
        test one row per method with mean and sd columns
        """
        table = bench.run_bench(self.spec, "cluster")
        self.assertEqual(table["method"].tolist(), ["true", "relgap"])
        self.assertEqual(
            list(table.columns),
            ["method", "k_mean", "k_sd", "misclustering_mean", "misclustering_sd"],
        )
        true_row = table[table["method"] == "true"].iloc[0]
        self.assertEqual(true_row["k_mean"], 3.0)
        self.assertEqual(true_row["k_sd"], 0.0)
        self.assertTrue(0.0 <= true_row["misclustering_mean"] <= 100.0)

    def test_workers(self):
        """
        test tables do not depend on the number of workers
        """
        serial = bench.run_bench(self.spec, "cluster")
        threaded = bench.run_bench(
            BenchSpec(
                setting=1, n=3, T=128, M=4, L=5, replications=2,
                methods=("true", "relgap"), k_max=4, restarts=3, seed=1, workers=2,
            ),
            "cluster",
        )
        assert_frame_equal(serial, threaded)

    def test_eta_table(self):
        """
        test one row per (method, eta)
        """
        spec = BenchSpec(
            setting=1, n=3, T=128, M=4, L=5, replications=1, methods=("true",),
            eta_sweep=(0.5, 5.0), restarts=3,
        )
        table = bench.run_bench(spec, "eta")
        self.assertEqual(table["eta"].tolist(), [0.5, 5.0])

    def test_test_table(self):
        """
        test rejection columns for every model pair
        """
        spec = BenchSpec(T=128, M=4, L=5, replications=2, models=("I", "V"))
        table = bench.run_bench(spec, "test")
        self.assertEqual(
            list(zip(table["model_a"], table["model_b"])), [("I", "I"), ("I", "V"), ("V", "V")]
        )
        for column in ("reject_0.05", "reject_0.1", "sigma2_hat"):
            self.assertIn(column, table.columns)
        self.assertTrue(np.all(table["reject_0.1"] >= table["reject_0.05"]))

    def test_same_model_size(self):
        """
        test a model with operators against itself rejects near the nominal rate
        """
        spec = BenchSpec(T=256, M=8, L=5, replications=20, models=("II",), seed=2)
        table = bench.run_bench(spec, "test")
        self.assertEqual(list(zip(table["model_a"], table["model_b"])), [("II", "II")])
        self.assertLessEqual(table["reject_0.05"].iloc[0], 30.0)

    def test_bad_spec(self):
        """
        test invalid bench parameters
        """
        self.assertRaises(FtsParameterError, lambda: BenchSpec(replications=0))
        self.assertRaises(FtsParameterError, lambda: BenchSpec(methods=("gap",)))
        self.assertRaises(FtsParameterError, lambda: BenchSpec(models=("VII",)))
        self.assertRaises(FtsParameterError, lambda: BenchSpec(alphas=(1.5,)))
        self.assertRaises(FtsParameterError, lambda: BenchSpec(sigma2_method="hac"))
        self.assertRaises(FtsPlanError, lambda: BenchSpec(T=100))
        self.assertRaises(FtsParameterError, lambda: bench.run_bench(BenchSpec(), "power"))

    def test_replication_seed(self):
        """
        test derived seeds are stable and distinct
        """
        self.assertEqual(bench.replication_seed(0, 1), bench.replication_seed(0, 1))
        self.assertNotEqual(bench.replication_seed(0, 1), bench.replication_seed(0, 2))


@unittest.skipUnless(SLOW, "set FTSCLUSTER_SLOW=1 for the replicated experiments")
class TestBenchAcceptance(unittest.TestCase):
    def test_known_k(self):
        """
        test known k on setting 1, T=256, n=10
        """
        spec = BenchSpec(setting=1, n=10, T=256, replications=100, methods=("true",))
        table = bench.run_bench(spec, "cluster")
        self.assertLessEqual(table["misclustering_mean"].iloc[0], 1.5)

    def test_ch_selection(self):
        """
        test CH picks three clusters on setting 1, T=512, n=30
        """
        spec = BenchSpec(setting=1, n=30, T=512, replications=100, methods=("ch",))
        table = bench.run_bench(spec, "cluster")
        self.assertAlmostEqual(table["k_mean"].iloc[0], 3.0, delta=0.1)

    def test_eta_sweep(self):
        """
        test misclustering stays low across eta with known k
        """
        spec = BenchSpec(
            setting=1, n=30, T=512, replications=50, methods=("true",),
            eta_sweep=(0.5, 2.5, 5.0, 10.0),
        )
        table = bench.run_bench(spec, "eta")
        self.assertTrue(np.all(table["misclustering_mean"] <= 1.0))

    def test_size_and_power(self):
        """
        test rejection rates of I vs I and I vs V
        """
        spec = BenchSpec(T=512, M=16, replications=500, models=("I", "V"))
        table = bench.run_bench(spec, "test").set_index(["model_a", "model_b"])
        size = table.loc[("I", "I")]
        self.assertTrue(3.0 <= size["reject_0.05"] <= 8.0)
        self.assertTrue(7.5 <= size["reject_0.1"] <= 13.5)
        self.assertGreaterEqual(table.loc[("I", "V")]["reject_0.05"], 99.0)


if __name__ == "__main__":
    unittest.main(verbosity=2)
