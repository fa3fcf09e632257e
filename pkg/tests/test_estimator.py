#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Unit tests for the nearest-neighbour mutual information estimator
"""

import itertools
import math
import os
import sys
import unittest

import numpy as np

# Add src to path for imports
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from exceptions import DomainError, InvariantError
from dataset import LabeledDataset
from estimator import (
    EstimatorOptions, SameLabelCounts, batch_same_label_counts, bias_table, default_h_range,
    naive_mi, same_label_counts, select_maximum, sweep_h, unbiased_mi,
)
from algorithms.metric_space import validate_matrix


def worked_dataset():
    """Two well separated pairs"""
    return LabeledDataset.from_tokens(["A", "A", "B", "B"], np.array([0.0, 0.1, 10.0, 10.1]))


def random_dataset(seed, n=25, classes=3, d=2):
    rng = np.random.default_rng(seed)
    return LabeledDataset(labels=rng.integers(0, classes, size=n), geometry=rng.random((n, d)))


def brute_force_counts(dataset, h):
    """h_y by sorting every row in plain Python; only valid without ties"""
    dm = dataset.distances.entries
    values = []
    for i in range(dataset.n):
        others = sorted((dm[i, j], j) for j in range(dataset.n) if j != i)
        members = [j for _, j in others[:h - 1]]
        values.append(1 + sum(dataset.labels[j] == dataset.labels[i] for j in members))
    return values


class TestSameLabelCounts(unittest.TestCase):
    """Test same_label_counts"""

    def test_worked_example(self):
        """Each point's nearest neighbour shares its label"""
        counts = same_label_counts(worked_dataset(), 2)
        self.assertEqual(counts.values.tolist(), [2.0, 2.0, 2.0, 2.0])
        self.assertEqual(counts.fractional_seeds, 0)
        self.assertTrue(np.array_equal(counts.values, np.round(counts.values)))

    def test_h_one(self):
        """h = 1 counts only the seed"""
        counts = same_label_counts(random_dataset(0), 1)
        self.assertTrue(np.all(counts.values == 1.0))

    def test_fractional_tie(self):
        """A seed with three tied neighbours, two of them same-label"""
        dm = validate_matrix([[0, 1, 1, 1], [1, 0, 2, 2], [1, 2, 0, 2], [1, 2, 2, 0]])
        dataset = LabeledDataset.from_tokens(["A", "A", "A", "B"], dm)
        counts = same_label_counts(dataset, 2)
        self.assertAlmostEqual(counts.values[0], 5 / 3, places=15)
        self.assertEqual(counts.values[1], 2.0)
        self.assertEqual(counts.values[3], 1.0)
        self.assertEqual(counts.fractional_seeds, 1)
        self.assertNotEqual(counts.values[0], round(counts.values[0]))

    def test_matches_brute_force(self):
        """Draw-free data gives integer counts equal to a direct count"""
        dataset = random_dataset(5)
        for h in range(1, dataset.n + 1):
            counts = same_label_counts(dataset, h)
            self.assertEqual(counts.values.tolist(), brute_force_counts(dataset, h))

    def test_batch_matches_single(self):
        """Batched labelings agree with one-at-a-time counting"""
        dataset = random_dataset(8, n=15)
        rng = np.random.default_rng(2)
        batch = np.stack([rng.permutation(dataset.labels) for _ in range(6)])
        for h in (1, 3, 8):
            batched = batch_same_label_counts(dataset.ordering(), h, batch)
            for row, labels in zip(batched, batch):
                single = same_label_counts(dataset.with_labels(labels), h)
                self.assertEqual(row.tolist(), single.values.tolist())

    def test_h_out_of_range(self):
        """h must lie in [1, n]"""
        with self.assertRaises(DomainError):
            same_label_counts(worked_dataset(), 0)
        with self.assertRaises(DomainError):
            same_label_counts(worked_dataset(), 5)


class TestNaiveMi(unittest.TestCase):
    """Test naive_mi"""

    def test_single_seed_term(self):
        """Red seed with four red points among its seven: log2(8/7)"""
        value = naive_mi(SameLabelCounts(h=7, values=[4.0]), n_x=2)
        self.assertAlmostEqual(value, math.log2(8 / 7), places=14)
        self.assertAlmostEqual(value, 0.19265, places=4)

    def test_h_one_is_log_nx(self):
        """With h = 1 every term is log2(n_x)"""
        value = naive_mi(SameLabelCounts(h=1, values=np.ones(10)), n_x=3)
        self.assertAlmostEqual(value, math.log2(3), places=15)

    def test_invariant_violations(self):
        """Counts below 1 or above h break the estimator's invariants"""
        with self.assertRaises(InvariantError):
            naive_mi(SameLabelCounts(h=2, values=[0.5]), n_x=2)
        with self.assertRaises(InvariantError):
            naive_mi(SameLabelCounts(h=2, values=[3.0]), n_x=2)


class TestBiasTable(unittest.TestCase):
    """Test bias_table"""

    def test_two_pairs(self):
        """[2, 2] with h = 2: P = (2/3, 1/3), I_b = 1/3"""
        table = bias_table([2, 2], 2)
        self.assertAlmostEqual(table.p_r[0], 2 / 3, places=14)
        self.assertAlmostEqual(table.p_r[1], 1 / 3, places=14)
        self.assertAlmostEqual(table.i_b, 1 / 3, places=12)
        self.assertEqual(table.to_dict()["class_counts"], [2, 2])

    def test_h_one(self):
        """All mass on r = 1, bias log2(n_x)"""
        table = bias_table([5, 3, 2], 1)
        self.assertEqual(table.p_r.tolist(), [1.0])
        self.assertAlmostEqual(table.i_b, math.log2(3), places=15)

    def test_full_ball(self):
        """h = n puts each class's mass on r = n_c"""
        table = bias_table([3, 2], 5)
        self.assertAlmostEqual(table.p_r[2], 3 / 5, places=15)
        self.assertAlmostEqual(table.p_r[1], 2 / 5, places=15)
        self.assertEqual(table.p_r[0], 0.0)

    def test_singleton_class(self):
        """A class of one always sees h_y = 1"""
        table = bias_table([1, 4], 3)
        self.assertAlmostEqual(table.p_r[0], 0.2, places=15)
        self.assertAlmostEqual(table.p_r[1], 0.4, places=15)
        self.assertAlmostEqual(table.p_r[2], 0.4, places=15)

    def test_distribution_invariants(self):
        """P sums to one and I_b is the expectation of the log terms"""
        for counts, h in [([10, 7, 3], 6), ([50, 50], 17), ([400, 300, 299], 64), ([1, 1, 1, 1], 4)]:
            table = bias_table(counts, h)
            self.assertAlmostEqual(math.fsum(table.p_r), 1.0, places=12)
            self.assertTrue(np.all(table.p_r >= 0))
            self.assertAlmostEqual(table.i_b, math.fsum(table.p_r * table.terms()), places=12)

    def test_class_order_irrelevant(self):
        """Permuting class counts leaves the table bitwise unchanged"""
        a = bias_table([7, 2, 5], 4)
        b = bias_table([2, 5, 7], 4)
        self.assertEqual(a.p_r.tolist(), b.p_r.tolist())
        self.assertEqual(a.i_b, b.i_b)

    def test_per_class_log_variant(self):
        """The nc variant puts each class's own size inside the logarithm"""
        self.assertAlmostEqual(bias_table([3, 1], 2).i_b, 0.5, places=14)
        expected = 0.75 * (math.log2(1.5) / 3 + 2 * math.log2(3) / 3) + 0.25 * math.log2(0.5)
        self.assertAlmostEqual(bias_table([3, 1], 2, log_variant="nc").i_b, expected, places=14)

    def test_errors(self):
        """Bad counts, h or n_x"""
        with self.assertRaises(DomainError):
            bias_table([], 1)
        with self.assertRaises(DomainError):
            bias_table([2, 0], 1)
        with self.assertRaises(DomainError):
            bias_table([3, 2], 0)
        with self.assertRaises(DomainError):
            bias_table([3, 2], 6)
        with self.assertRaises(DomainError):
            bias_table([3, 2], 2, n_x=1)
        with self.assertRaises(DomainError):
            bias_table([3, 2], 2, log_variant="nn")


class TestUnbiasedMi(unittest.TestCase):
    """Test unbiased_mi"""

    def test_worked_example(self):
        """I_0 = 1, I_b = 1/3, I_e = 2/3"""
        estimate = unbiased_mi(worked_dataset(), 2)
        self.assertEqual(estimate.i0, 1.0)
        self.assertAlmostEqual(estimate.ib, 1 / 3, places=12)
        self.assertAlmostEqual(estimate.ie, 2 / 3, places=12)
        self.assertEqual(set(estimate.to_dict()),
                         {"n", "n_x", "class_counts", "h", "i0_bits", "ib_bits", "ie_bits"})

    def test_h_one_collapses_to_zero(self):
        """h = 1 gives exactly zero"""
        for seed in range(5):
            self.assertEqual(unbiased_mi(random_dataset(seed), 1).ie, 0.0)

    def test_single_class_is_zero(self):
        """n_x = 1 gives exactly zero for every h"""
        dataset = LabeledDataset(labels=np.zeros(8, dtype=int), geometry=np.arange(8.0))
        for h in range(1, 9):
            estimate = unbiased_mi(dataset, h)
            self.assertEqual((estimate.i0, estimate.ib, estimate.ie), (0.0, 0.0, 0.0))

    def test_naive_estimate_bounded_by_label_entropy(self):
        """I_0 never exceeds log2(n_x)"""
        for seed in range(5):
            dataset = random_dataset(seed)
            for h in (2, 5, 12):
                self.assertLessEqual(unbiased_mi(dataset, h).i0, math.log2(dataset.n_x) + 1e-12)

    def test_exact_unbiasedness_over_all_labelings(self):
        """Averaging I_0 over every distinct labeling reproduces I_b"""
        rng = np.random.default_rng(4)
        for base, h in [([0, 0, 0, 1, 1, 1], 3), ([0, 0, 1, 1, 2], 3), ([0, 0, 0, 1, 1, 1], 5)]:
            dataset = LabeledDataset(labels=base, geometry=rng.random((len(base), 2)))
            labelings = sorted(set(itertools.permutations(base)))
            i0 = [unbiased_mi(dataset.with_labels(labels), h).i0 for labels in labelings]
            expected = bias_table(dataset.class_counts, h).i_b
            self.assertAlmostEqual(math.fsum(i0) / len(i0), expected, places=12)

    def test_nx_override_shifts_both_terms(self):
        """Declaring unseen labels moves I_0 and I_b together"""
        dataset = random_dataset(3, classes=2)
        plain = unbiased_mi(dataset, 4)
        declared = unbiased_mi(dataset, 4, EstimatorOptions(nx_override=4))
        self.assertEqual(declared.n_x, 4)
        self.assertAlmostEqual(declared.i0 - plain.i0, 1.0, places=12)
        self.assertAlmostEqual(declared.ie, plain.ie, places=12)
        with self.assertRaises(DomainError):
            unbiased_mi(dataset, 4, EstimatorOptions(nx_override=1))

    def test_tie_warning(self):
        """Fractional balls are logged"""
        dm = validate_matrix([[0, 1, 1, 1], [1, 0, 2, 2], [1, 2, 0, 2], [1, 2, 2, 0]])
        dataset = LabeledDataset.from_tokens(["A", "A", "A", "B"], dm)
        with self.assertLogs("estimator", level="WARNING"):
            estimate = unbiased_mi(dataset, 2)
        self.assertEqual(estimate.fractional_seeds, 1)


class TestOptions(unittest.TestCase):
    """Test EstimatorOptions"""

    def test_validation(self):
        """Unknown variants and out-of-range values are rejected"""
        with self.assertRaises(DomainError):
            EstimatorOptions(log_variant="ln")
        with self.assertRaises(DomainError):
            EstimatorOptions(tie_epsilon=-1.0)
        with self.assertRaises(DomainError):
            EstimatorOptions(nx_override=0)
        self.assertEqual(EstimatorOptions(nx_override=5).effective_nx(3), 5)
        self.assertEqual(EstimatorOptions().effective_nx(3), 3)


class TestSweep(unittest.TestCase):
    """Test sweep_h and h selection"""

    def test_default_range(self):
        """[1, min(64, n-1)], never empty"""
        self.assertEqual(default_h_range(4), (1, 3))
        self.assertEqual(default_h_range(1000), (1, 64))
        self.assertEqual(default_h_range(2), (1, 1))
        self.assertEqual(default_h_range(1), (1, 1))

    def test_worked_example(self):
        """h = 2 beats h = 1 and h = 3"""
        result = sweep_h(worked_dataset())
        self.assertEqual([e.h for e in result.estimates], [1, 2, 3])
        self.assertEqual(result.selected_h, 2)
        self.assertAlmostEqual(result.selected.ie, 2 / 3, places=12)
        self.assertEqual(result.to_dict()["selected_h"], 2)
        self.assertEqual(len(result.to_dict()["sweep"]), 3)

    def test_single_h(self):
        """A one-point range returns that h"""
        result = sweep_h(worked_dataset(), 1, 1)
        self.assertEqual(result.selected_h, 1)
        self.assertEqual(result.selected.ie, 0.0)

    def test_ties_go_to_smallest_h(self):
        """All-zero estimates select the first h"""
        dataset = LabeledDataset(labels=np.zeros(6, dtype=int), geometry=np.arange(6.0))
        self.assertEqual(sweep_h(dataset).selected_h, 1)

    def test_select_maximum(self):
        """First maximum wins"""
        a, b, c = (unbiased_mi(worked_dataset(), h) for h in (1, 2, 2))
        self.assertEqual(select_maximum([a, b, c]), 1)
        with self.assertRaises(DomainError):
            select_maximum([])

    def test_threads_do_not_change_results(self):
        """Thread count leaves the sweep bitwise unchanged"""
        dataset = random_dataset(9, n=40)
        serial = sweep_h(dataset, 1, 20, EstimatorOptions(threads=1))
        threaded = sweep_h(dataset, 1, 20, EstimatorOptions(threads=4))
        self.assertEqual(serial.to_dict(), threaded.to_dict())

    def test_bad_ranges(self):
        """Empty or out-of-range h intervals are rejected"""
        with self.assertRaises(DomainError):
            sweep_h(worked_dataset(), 3, 2)
        with self.assertRaises(DomainError):
            sweep_h(worked_dataset(), 1, 5)
        with self.assertRaises(DomainError):
            sweep_h(worked_dataset(), 5)

    def test_lone_h_min(self):
        """Without h_max the range runs from h_min to the default end, or just h_min past it"""
        result = sweep_h(worked_dataset(), 2)
        self.assertEqual([estimate.h for estimate in result.estimates], [2, 3])
        result = sweep_h(worked_dataset(), 4)
        self.assertEqual([estimate.h for estimate in result.estimates], [4])
        self.assertEqual(result.selected.ie, 0.0)


if __name__ == '__main__':
    unittest.main()
