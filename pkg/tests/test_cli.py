#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests for the command-line interface
"""

from contextlib import redirect_stderr, redirect_stdout
import io
import json
import os
import sys
import tempfile
import unittest

from click.testing import CliRunner

# Add src to path for imports
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from cli import cli, run
from utils.file_parser import read_points


def invoke(*args):
    """Run the command line, returning (status, stdout, stderr)"""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        status = run(list(args))
    return status, out.getvalue(), err.getvalue()


class TestCli(unittest.TestCase):
    """Test the klmi subcommands"""

    def setUp(self):
        """Write the worked example as a points file and as a matrix file"""
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.points = self.write("points.csv", "A,0.0\nA,0.1\nB,10.0\nB,10.1\n")
        self.matrix = self.write("matrix.csv", "A,0,0.1,10,10.1\nA,0.1,0,9.9,10\n"
                                               "B,10,9.9,0,0.1\nB,10.1,10,0.1,0\n")

    def write(self, name, text):
        path = os.path.join(self.tmp.name, name)
        with open(path, "w", encoding="utf-8") as file:
            file.write(text)
        return path

    def test_help(self):
        """Every subcommand documents itself"""
        runner = CliRunner()
        result = runner.invoke(cli, ["--help"])
        self.assertEqual(result.exit_code, 0)
        for command in ("estimate", "sweep", "bias", "simulate", "generate"):
            self.assertIn(command, result.output)
            self.assertEqual(runner.invoke(cli, [command, "--help"]).exit_code, 0)
        self.assertIn("--tie-epsilon", runner.invoke(cli, ["estimate", "--help"]).output)

    def test_estimate_points(self):
        """Worked example: I_e = 2/3"""
        status, out, _ = invoke("estimate", "--points", self.points, "--h", "2")
        self.assertEqual(status, 0)
        data = json.loads(out)
        self.assertEqual(data["i0_bits"], 1.0)
        self.assertAlmostEqual(data["ie_bits"], 2 / 3, places=12)

    def test_estimate_h_one(self):
        """h = 1 estimates exactly zero"""
        status, out, _ = invoke("estimate", "--points", self.points, "--metric", "euclidean", "--h", "1")
        self.assertEqual(status, 0)
        self.assertEqual(json.loads(out)["ie_bits"], 0.0)

    def test_deterministic_output(self):
        """Identical invocations print identical bytes"""
        args = ("simulate", "--points", self.points, "--h", "2", "--replicates", "50", "--seed", "4")
        self.assertEqual(invoke(*args)[1], invoke(*args)[1])

    def test_estimate_matrix(self):
        """The matrix form gives the same answer"""
        status, out, _ = invoke("estimate", "--matrix", self.matrix, "--h", "2")
        self.assertEqual(status, 0)
        self.assertAlmostEqual(json.loads(out)["ie_bits"], 2 / 3, places=12)

    def test_estimate_tsv(self):
        """--format tsv writes a header and one row"""
        status, out, _ = invoke("estimate", "--points", self.points, "--h", "2", "--format", "tsv")
        self.assertEqual(status, 0)
        self.assertEqual(len(out.splitlines()), 2)
        self.assertTrue(out.startswith("h\t"))

    def test_sweep(self):
        """Default sweep selects h = 2"""
        status, out, _ = invoke("sweep", "--points", self.points)
        self.assertEqual(status, 0)
        data = json.loads(out)
        self.assertEqual(data["selected_h"], 2)
        self.assertEqual(len(data["sweep"]), 3)

        status, out, _ = invoke("sweep", "--points", self.points, "--metric", "euclidean",
                                "--h-min", "1", "--h-max", "2")
        self.assertEqual(status, 0)
        data = json.loads(out)
        self.assertEqual(data["selected_h"], 2)
        self.assertAlmostEqual(data["ie_bits"], 2 / 3, places=12)

        status, out, _ = invoke("sweep", "--points", self.points, "--h-min", "4")
        self.assertEqual(status, 0)
        data = json.loads(out)
        self.assertEqual(data["selected_h"], 4)
        self.assertEqual(len(data["sweep"]), 1)

    def test_bias(self):
        """bias --counts 2,2 --h 2 gives 1/3 bit"""
        status, out, _ = invoke("bias", "--counts", "2,2", "--h", "2")
        self.assertEqual(status, 0)
        data = json.loads(out)
        self.assertAlmostEqual(data["ib_bits"], 1 / 3, places=12)
        self.assertEqual(len(data["p_r"]), 2)

    def test_simulate_on_file(self):
        """Permutation oracle over a file's geometry"""
        status, out, _ = invoke("simulate", "--points", self.points, "--h", "2",
                                "--replicates", "500", "--seed", "1")
        self.assertEqual(status, 0)
        data = json.loads(out)
        self.assertEqual(data["replicates"], 500)
        self.assertEqual(data["analytic_p_r"], json.loads(invoke("bias", "--counts", "2,2", "--h", "2")[1])["p_r"])

    def test_simulate_generated(self):
        """Independence suite on generated data"""
        status, out, _ = invoke("simulate", "--n", "30", "--class-probs", "0.5,0.5", "--h", "3",
                                "--replicates", "20", "--threads", "2")
        self.assertEqual(status, 0)
        self.assertEqual(json.loads(out)["n"], 30)

    def test_generate(self):
        """generate writes a readable points file"""
        path = os.path.join(self.tmp.name, "generated.csv")
        status, _, _ = invoke("generate", "--family", "gaussian-clusters", "--n", "50",
                              "--class-probs", "0.5,0.5", "--dim", "2", "--seed", "3", "-o", path)
        self.assertEqual(status, 0)
        dataset = read_points(path)
        self.assertEqual(dataset.n, 50)
        self.assertEqual(dataset.points.shape[1], 2)

    def test_usage_errors_exit_2(self):
        """Malformed invocations exit with status 2"""
        for args in [
            ("estimate", "--points", self.points),
            ("estimate", "--h", "2"),
            ("estimate", "--points", self.points, "--matrix", self.matrix, "--h", "2"),
            ("estimate", "--points", self.points, "--h", "0"),
            ("estimate", "--points", self.points, "--h", "2", "--format", "xml"),
            ("estimate", "--points", self.points, "--h", "2", "--metric", "cosine"),
            ("sweep", "--points", self.points, "--h-min", "3", "--h-max", "2"),
            ("bias", "--counts", "a,b", "--h", "2"),
            ("frobnicate",),
        ]:
            status, _, err = invoke(*args)
            self.assertEqual(status, 2, args)
            self.assertEqual(len(err.splitlines()), 1, err)
            self.assertTrue(err.startswith("klmi: error: "), err)
        self.assertIn("--bogus", invoke("estimate", "--bogus")[2])

    def test_data_errors_exit_1(self):
        """Bad data exits with status 1 and a message on stderr"""
        asymmetric = self.write("asym.csv", "A,0,1\nB,2,0\n")
        status, out, err = invoke("estimate", "--matrix", asymmetric, "--h", "1")
        self.assertEqual(status, 1)
        self.assertEqual(out, "")
        self.assertIn("asymmetric", err)

        ragged = self.write("ragged.csv", "A,0,1\nB,2\n")
        self.assertEqual(invoke("estimate", "--points", ragged, "--h", "1")[0], 1)
        self.assertEqual(invoke("estimate", "--points", self.points, "--h", "5")[0], 1)
        self.assertEqual(invoke("estimate", "--points", os.path.join(self.tmp.name, "nope.csv"),
                                "--h", "1")[0], 1)
        undecodable = os.path.join(self.tmp.name, "latin.csv")
        with open(undecodable, "wb") as file:
            file.write(b"A,0.0\n\xff\xfe,1.0\n")
        status, out, err = invoke("estimate", "--points", undecodable, "--h", "1")
        self.assertEqual(status, 1)
        self.assertEqual(out, "")
        self.assertIn("UTF-8", err)
        self.assertEqual(invoke("bias", "--counts", "2,0", "--h", "1")[0], 1)
        self.assertEqual(invoke("simulate", "--class-probs", "0.5,0.4", "--h", "2",
                                "--replicates", "2")[0], 1)

    def test_log_level(self):
        """--log-level DEBUG sends diagnostics to stderr only"""
        status, out, err = invoke("--log-level", "DEBUG", "estimate", "--points", self.points, "--h", "2")
        self.assertEqual(status, 0)
        self.assertIn("DEBUG", err)
        json.loads(out)
        invoke("--log-level", "WARNING", "bias", "--counts", "1", "--h", "1")


if __name__ == '__main__':
    unittest.main()
