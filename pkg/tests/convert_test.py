# -*- coding: utf-8 -*-
# pylint: disable=relative-beyond-top-level, too-few-public-methods, unused-argument
# pylint: disable=missing-class-docstring, missing-module-docstring, invalid-name

import tempfile
import unittest
from pathlib import Path

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from python_ftscluster import convert
from python_ftscluster.basis import BasisSpec, FunctionalTimeSeries
from python_ftscluster.exceptions import FtsInputError
from python_ftscluster.spectra import SimilarityMatrix, make_block_plan

coefficients = """alpha,3,2
1,0.5
-2.25,3.0000000000000004
0.10000000000000001,1e-300
beta,2,2
0,0
7,-7
"""


class TestCoefficients(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = Path(cls.tmp.name)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def test_parse(self):
        """
        test parsing a two-series file
        """
        series = convert.parse_coefficients(coefficients)
        self.assertEqual([s.id for s in series], ["alpha", "beta"])
        self.assertEqual(series[0].coeffs.shape, (3, 2))
        self.assertEqual(series[0].coeffs[1, 1], 3.0000000000000004)
        self.assertEqual(series[1].coeffs[1, 1], -7.0)

    def test_round_trip(self):
        """
        test written files are reproduced byte for byte
        """
        rng = np.random.default_rng(0)
        series = [
            FunctionalTimeSeries(rng.normal(size=(6, 4)), BasisSpec(4), "x"),
            FunctionalTimeSeries(rng.normal(size=(3, 4)) * 1e-12, BasisSpec(4), "y"),
        ]
        first = self.dir / "first.csv"
        second = self.dir / "second.csv"
        convert.write_coefficients(first, series)
        loaded = convert.read_coefficients(first)
        for original, copy in zip(series, loaded):
            assert_array_equal(original.coeffs, copy.coeffs)
        convert.write_coefficients(second, loaded)
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_bad_value(self):
        """
        test a non-numeric value names its line
        """
        text = "s,2,2\n1,2\n3,x\n"
        with self.assertRaises(FtsInputError) as caught:
            convert.parse_coefficients(text, "bad.csv")
        self.assertEqual(caught.exception.line, 3)
        self.assertIn("bad.csv, line 3", str(caught.exception))

    def test_wrong_width(self):
        """
        test a row with the wrong number of values
        """
        with self.assertRaises(FtsInputError) as caught:
            convert.parse_coefficients("s,2,3\n1,2,3\n4,5\n")
        self.assertEqual(caught.exception.line, 3)

    def test_truncated(self):
        """
        test a file shorter than its header says
        """
        self.assertRaises(
            FtsInputError, lambda: convert.parse_coefficients("s,4,2\n1,2\n3,4\n")
        )

    def test_bad_header(self):
        """
        test malformed header lines
        """
        for text in ("s,2\n1,2\n3,4\n", "s,two,2\n1,2\n3,4\n", "s,1,2\n1,2\n", ""):
            self.assertRaises(FtsInputError, lambda text=text: convert.parse_coefficients(text))

    def test_missing_file(self):
        """
        test reading a file that is not there
        """
        self.assertRaises(
            FtsInputError, lambda: convert.read_coefficients(self.dir / "nothing.csv")
        )


class TestGridded(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = Path(cls.tmp.name)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def write(self, name, text):
        path = self.dir / name
        path.write_text(text, encoding="utf-8")
        return path

    def test_missing_values(self):
        """
        test NA cells become NaN
        """
        path = self.write("grid.csv", "1,2,3,4\n5,NA,7,8\n")
        sample = convert.read_gridded(path)
        self.assertEqual(sample.id, "grid")
        self.assertTrue(np.isnan(sample.values[1, 1]))
        assert_allclose(sample.grid, [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0])
        assert_allclose(sample.missing_fraction, [0.0, 0.25])

    def test_column_names(self):
        """
        test a non-numeric first row is skipped
        """
        path = self.write("named.csv", "h0,h1,h2\n1,2,3\n4,5,6\n")
        sample = convert.read_gridded(path, series_id="pm10")
        self.assertEqual(sample.values.shape, (2, 3))
        self.assertEqual(sample.id, "pm10")

    def test_grid_header(self):
        """
        test first row as grid points
        """
        path = self.write("header.csv", "0,0.25,1\n1,2,3\n")
        sample = convert.read_gridded(path, grid_header=True)
        assert_allclose(sample.grid, [0.0, 0.25, 1.0])
        assert_allclose(sample.values, [[1.0, 2.0, 3.0]])

    def test_bad_cell(self):
        """
        test a non-numeric cell names its line
        """
        path = self.write("badcell.csv", "1,2,3\n4,oops,6\n")
        with self.assertRaises(FtsInputError) as caught:
            convert.read_gridded(path)
        self.assertEqual(caught.exception.line, 2)

    def test_ragged(self):
        """
        test rows of different length
        """
        path = self.write("ragged.csv", "1,2,3\n4,5,6,7\n")
        self.assertRaises(FtsInputError, lambda: convert.read_gridded(path))


class TestMatrices(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = Path(cls.tmp.name)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def test_similarity_round_trip(self):
        """
        test write and read of a similarity matrix
        """
        values = np.array([[0.0, 0.3, -0.01], [0.3, 0.0, 0.7], [-0.01, 0.7, 0.0]])
        path = self.dir / "sim.csv"
        convert.write_matrix(path, values, ["a", "b", "c"])
        sim = convert.read_similarity(path)
        assert_array_equal(sim.values, values)
        self.assertEqual(sim.ids, ["a", "b", "c"])

    def test_asymmetric(self):
        """
        test an asymmetric similarity matrix is refused
        """
        path = self.dir / "asym.csv"
        convert.write_matrix(path, [[0.0, 0.3], [0.4, 0.0]], ["a", "b"])
        self.assertRaises(FtsInputError, lambda: convert.read_similarity(path))

    def test_not_square(self):
        """
        test ids and rows disagree
        """
        path = self.dir / "square.csv"
        path.write_text("a,b\n0,1\n", encoding="utf-8")
        self.assertRaises(FtsInputError, lambda: convert.read_matrix(path))

    def test_envelope(self):
        """
        test JSON envelope carries the plan
        """
        sim = SimilarityMatrix(np.zeros((2, 2)), ["a", "b"], make_block_plan(64, 2))
        envelope = convert.similarity_envelope(sim)
        self.assertEqual(envelope["plan"], {"T": 64, "M": 2, "N": 32})
        path = self.dir / "sim.json"
        convert.write_json(path, envelope)
        self.assertEqual(convert.read_json(path)["values"], [[0.0, 0.0], [0.0, 0.0]])

    def test_to_builtin(self):
        """
        test numpy values and non-finite floats
        """
        out = convert.to_builtin({"a": np.float64(1.5), "b": np.arange(2), 3: float("inf")})
        self.assertEqual(out, {"a": 1.5, "b": [0, 1], "3": "inf"})

    def test_labels(self):
        """
        test labels sidecar reordered by ids
        """
        path = self.dir / "labels.json"
        convert.write_labels(path, ["x", "y", "z"], np.array([0, 1, 1]), ["I", "II", "II"])
        assert_array_equal(convert.read_labels(path), [0, 1, 1])
        assert_array_equal(convert.read_labels(path, ["z", "x"]), [1, 0])
        self.assertRaises(FtsInputError, lambda: convert.read_labels(path, ["w"]))

    def test_bad_json(self):
        """
        test invalid JSON
        """
        path = self.dir / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        self.assertRaises(FtsInputError, lambda: convert.read_json(path))


if __name__ == "__main__":
    unittest.main(verbosity=2)
