#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Synthetic Datasets and Monte Carlo Oracles
==========================================

Generators for datasets with known structure, plus two Monte Carlo checks of
the bias formula:

- permutation_bias_oracle keeps the geometry and the label multiset fixed
  and shuffles labels, which is exactly the urn model behind the bias; the
  empirical distribution of h_y must match the analytic BiasTable and the
  mean naive estimate must match I_b.
- independence_suite draws fresh independent datasets and checks that the
  unbiased estimate averages to zero.

Every replicate draws from its own stream spawned from (rng_seed, replicate
index) by numpy's SeedSequence, so results do not depend on scheduling.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from exceptions import DomainError, ShapeError
from dataset import LabeledDataset
from estimator import (
    EstimatorOptions, batch_same_label_counts, bias_table, naive_mi, same_label_counts,
)
from algorithms.metric_space import DistanceMatrix, NeighborOrdering, pairwise_distances
from utils.parallel import batched, parallel_map


logger = logging.getLogger(__name__)

FAMILIES = ("independent-uniform", "gaussian-clusters", "label-permutation")
INDEPENDENT_FAMILIES = ("independent-uniform", "label-permutation")

RNG_NAME = "numpy.random.PCG64 via SeedSequence"

# stream key for the fixed geometry of the label-permutation family
_GEOMETRY_STREAM = 0x6E0

# cap on booleans materialized per oracle batch
_BATCH_CELLS = 20_000_000


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator for an integer seed or a SeedSequence"""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.PCG64(seed))


def replicate_streams(rng_seed: int, replicates: int) -> List[np.random.SeedSequence]:
    """One independent SeedSequence per replicate index"""
    return np.random.SeedSequence(rng_seed).spawn(int(replicates))


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of a synthetic dataset family"""
    n: int
    class_probs: Tuple[float, ...]
    family: str = "independent-uniform"
    d: int = 1
    rng_seed: int = 0
    spread: float = 0.01  # gaussian-clusters: isotropic standard deviation
    separation: float = 1.0  # gaussian-clusters: distance between consecutive class means
    means: Optional[Tuple[Tuple[float, ...], ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "class_probs", tuple(float(p) for p in self.class_probs))
        if self.means is not None:
            object.__setattr__(self, "means", tuple(tuple(float(v) for v in m) for m in self.means))
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if not self.class_probs:
            raise DomainError("class probabilities are empty")
        if any(not p > 0 for p in self.class_probs):
            raise DomainError(f"class probabilities must be positive, got {self.class_probs}")
        if abs(math.fsum(self.class_probs) - 1.0) > 1e-12:
            raise DomainError(f"class probabilities sum to {math.fsum(self.class_probs)}, not 1")
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.d < 1:
            raise DomainError(f"dimension must be >= 1, got {self.d}")
        if not self.spread > 0:
            raise DomainError(f"spread must be positive, got {self.spread}")
        if self.means is not None and (len(self.means) != self.n_x
                                       or any(len(m) != self.d for m in self.means)):
            raise ShapeError(f"means must be {self.n_x} vectors of dimension {self.d}")

    @property
    def n_x(self) -> int:
        return len(self.class_probs)

    @property
    def independent(self) -> bool:
        return self.family in INDEPENDENT_FAMILIES

    def class_means(self) -> np.ndarray:
        """Mean vector per class; by default spaced along the first axis"""
        if self.means is not None:
            return np.array(self.means, dtype=float)
        means = np.zeros((self.n_x, self.d))
        means[:, 0] = self.separation * np.arange(self.n_x)
        return means


@dataclass(frozen=True, eq=False)
class OracleReport:
    """Empirical versus analytic behaviour of the naive estimate"""
    replicates: int
    h: int
    n: int
    n_x: int
    class_counts: Optional[Tuple[int, ...]]
    empirical_p_r: np.ndarray
    analytic_p_r: np.ndarray
    mean_i0: float
    mean_ib: float
    mean_ie: float
    stderr_i0: float
    stderr_ie: float
    fractional_share: float = 0.0
    log_variant: str = "nx"
    rng: str = RNG_NAME

    @property
    def tv_distance(self) -> float:
        """Total variation distance between the two h_y distributions"""
        return 0.5 * float(np.abs(self.empirical_p_r - self.analytic_p_r).sum())

    def i0_matches_bias(self, k: float = 4.0) -> bool:
        """|mean I_0 - mean I_b| within k standard errors"""
        return abs(self.mean_i0 - self.mean_ib) <= k * self.stderr_i0

    def ie_consistent_with_zero(self, k: float = 4.0) -> bool:
        """|mean I_e| within k standard errors"""
        return abs(self.mean_ie) <= k * self.stderr_ie

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "n_x": self.n_x,
            "class_counts": list(self.class_counts) if self.class_counts is not None else None,
            "h": self.h,
            "i0_bits": float(self.mean_i0),
            "ib_bits": float(self.mean_ib),
            "ie_bits": float(self.mean_ie),
            "replicates": self.replicates,
            "empirical_p_r": [float(p) for p in self.empirical_p_r],
            "analytic_p_r": [float(p) for p in self.analytic_p_r],
            "tv_distance": self.tv_distance,
            "mean_i0_bits": float(self.mean_i0),
            "mean_ie_bits": float(self.mean_ie),
            "stderr_i0_bits": float(self.stderr_i0),
            "mean_ib_bits": float(self.mean_ib),
            "stderr_ie_bits": float(self.stderr_ie),
            "fractional_share": float(self.fractional_share),
            "log_variant": self.log_variant,
            "rng": self.rng,
        }


def _stderr(values: np.ndarray) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def _histogram(values: np.ndarray, h: int) -> Tuple[np.ndarray, int]:
    """Counts of integral h_y values r = 1..h and the number of fractional values"""
    flat = np.asarray(values, dtype=float).ravel()
    rounded = np.round(flat)
    integral = np.abs(flat - rounded) <= 1e-9
    counts = np.bincount(rounded[integral].astype(int), minlength=h + 1)[1:h + 1]
    return counts, int(flat.size - np.count_nonzero(integral))


@lru_cache(maxsize=16)
def _permutation_base(spec: GeneratorSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Fixed points and label multiset of the label-permutation family"""
    rng = make_rng(np.random.SeedSequence([spec.rng_seed, _GEOMETRY_STREAM]))
    labels = np.sort(rng.choice(spec.n_x, size=spec.n, p=spec.class_probs))
    points = rng.random((spec.n, spec.d))
    points.flags.writeable = False
    labels.flags.writeable = False
    return points, labels


def generate(spec: GeneratorSpec, rng: Optional[np.random.Generator] = None) -> LabeledDataset:
    """
    Draw a synthetic dataset

    Labels are iid draws from class_probs, so class counts are multinomial.
    independent-uniform places points uniformly in [0, 1]^d regardless of
    label; gaussian-clusters places them around per-class means;
    label-permutation keeps one geometry and label multiset per rng_seed and
    shuffles the labels.

    Args:
        spec: Generator parameters
        rng: Generator to draw from (default: seeded from spec.rng_seed)

    Returns:
        LabeledDataset with vector geometry
    """
    if rng is None:
        rng = make_rng(spec.rng_seed)

    if spec.family == "label-permutation":
        points, base_labels = _permutation_base(spec)
        labels = rng.permutation(base_labels)
    else:
        labels = rng.choice(spec.n_x, size=spec.n, p=spec.class_probs)
        if spec.family == "independent-uniform":
            points = rng.random((spec.n, spec.d))
        else:
            points = spec.class_means()[labels] + spec.spread * rng.standard_normal((spec.n, spec.d))
        present = len(np.unique(labels))
        if present < spec.n_x:
            logger.warning("%d of %d classes drew no records; n_x counts the %d present",
                           spec.n_x - present, spec.n_x, present)

    return LabeledDataset(labels=labels, geometry=points, metric="euclidean")


def permutation_bias_oracle(geometry: DistanceMatrix, class_counts: Sequence[int], h: int,
                            replicates: int, rng_seed: int = 0,
                            options: Optional[EstimatorOptions] = None) -> OracleReport:
    """
    Shuffle a fixed label multiset over a fixed geometry and compare with the urn model

    Args:
        geometry: Distance matrix, preferably draw-free
        class_counts: Label multiset as records per class
        h: Ball occupancy
        replicates: Number of label permutations
        rng_seed: Root seed of the replicate streams
        options: Tie epsilon, n_x override, log variant, threads

    Returns:
        OracleReport
    """
    options = options or EstimatorOptions()
    counts = [int(c) for c in class_counts]
    if replicates < 1:
        raise DomainError(f"replicates must be >= 1, got {replicates}")
    if sum(counts) != geometry.size:
        raise ShapeError(f"class counts sum to {sum(counts)} but geometry has {geometry.size} points")
    n = geometry.size
    if not 1 <= h <= n:
        raise DomainError(f"h must lie in [1, {n}], got {h}")
    n_x = options.effective_nx(len(counts))
    table = bias_table(counts, h, n_x=n_x, log_variant=options.log_variant)

    ordering = NeighborOrdering(geometry, options.tie_epsilon)
    if ordering.has_draws():
        logger.warning("Geometry has tied distances; fractional h_y values are left out of the histogram")
    base = np.repeat(np.arange(len(counts)), counts)
    batch_size = max(1, min(1000, _BATCH_CELLS // max(1, n * n)))

    def run_batch(streams: Sequence[np.random.SeedSequence]):
        labels = np.stack([make_rng(stream).permutation(base) for stream in streams])
        hy = batch_same_label_counts(ordering, h, labels)
        i0 = np.log2(n_x * hy / h).mean(axis=1)
        hist, fractional = _histogram(hy, h)
        return i0, hist, fractional

    results = parallel_map(run_batch, batched(replicate_streams(rng_seed, replicates), batch_size),
                           options.threads)
    i0 = np.concatenate([r[0] for r in results])
    hist = np.sum([r[1] for r in results], axis=0)
    fractional = sum(r[2] for r in results)
    total = replicates * n

    mean_i0 = float(i0.mean())
    stderr_i0 = _stderr(i0)
    logger.info("Permutation oracle: %d replicates, mean I_0=%.6f, I_b=%.6f (stderr %.2g)",
                replicates, mean_i0, table.i_b, stderr_i0)
    report = OracleReport(
        replicates=replicates,
        h=h,
        n=n,
        n_x=n_x,
        class_counts=tuple(counts),
        empirical_p_r=hist / total,
        analytic_p_r=table.p_r,
        mean_i0=mean_i0,
        mean_ib=table.i_b,
        mean_ie=mean_i0 - table.i_b,
        stderr_i0=stderr_i0,
        stderr_ie=stderr_i0,
        fractional_share=fractional / total,
        log_variant=options.log_variant,
    )
    if not report.i0_matches_bias():
        logger.warning("Mean I_0 %.6f is more than 4 standard errors from I_b %.6f",
                       report.mean_i0, report.mean_ib)
    return report


def _draw_free_dataset(spec: GeneratorSpec, stream: np.random.SeedSequence, tie_epsilon: float,
                       max_attempts: int = 100) -> LabeledDataset:
    """Generate from a stream, regenerating from child streams while distances tie"""
    for attempt in range(max_attempts):
        dataset = generate(spec, make_rng(stream))
        if not dataset.ordering(tie_epsilon).has_draws():
            return dataset
        logger.warning("Generated dataset has tied distances; regenerating (attempt %d)", attempt + 1)
        stream = stream.spawn(1)[0]
    raise DomainError(f"could not generate a draw-free dataset in {max_attempts} attempts")


def independence_suite(spec: GeneratorSpec, h: int, replicates: int,
                       options: Optional[EstimatorOptions] = None) -> OracleReport:
    """
    Estimate on fresh independent datasets and summarize the unbiased estimate

    Args:
        spec: Generator parameters of an independent family
        h: Ball occupancy
        replicates: Number of datasets
        options: Tie epsilon, n_x override, log variant, threads

    Returns:
        OracleReport; analytic_p_r is the bias table averaged over replicates
    """
    options = options or EstimatorOptions()
    if not spec.independent:
        raise DomainError(f"family {spec.family!r} makes X and Y dependent; "
                          f"use one of {', '.join(INDEPENDENT_FAMILIES)}")
    if replicates < 1:
        raise DomainError(f"replicates must be >= 1, got {replicates}")
    if not 1 <= h <= spec.n:
        raise DomainError(f"h must lie in [1, {spec.n}], got {h}")

    if spec.family == "label-permutation":
        points, _ = _permutation_base(spec)
        if NeighborOrdering(pairwise_distances(points), options.tie_epsilon).has_draws():
            raise DomainError("the fixed label-permutation geometry has tied distances")

    def run_replicate(stream: np.random.SeedSequence):
        dataset = _draw_free_dataset(spec, stream, options.tie_epsilon)
        n_x = options.effective_nx(dataset.n_x)
        counts = same_label_counts(dataset, h, options.tie_epsilon)
        i0 = naive_mi(counts, n_x)
        table = bias_table(dataset.class_counts, h, n_x=n_x, log_variant=options.log_variant)
        hist, fractional = _histogram(counts.values, h)
        return i0, table.i_b, table.p_r, hist, fractional, n_x

    results = parallel_map(run_replicate, replicate_streams(spec.rng_seed, replicates),
                           options.threads)
    i0 = np.array([r[0] for r in results])
    ib = np.array([r[1] for r in results])
    ie = i0 - ib
    total = replicates * spec.n
    n_x = max(r[5] for r in results)

    report = OracleReport(
        replicates=replicates,
        h=h,
        n=spec.n,
        n_x=n_x,
        class_counts=None,
        empirical_p_r=np.sum([r[3] for r in results], axis=0) / total,
        analytic_p_r=np.mean([r[2] for r in results], axis=0),
        mean_i0=float(i0.mean()),
        mean_ib=float(ib.mean()),
        mean_ie=float(ie.mean()),
        stderr_i0=_stderr(i0),
        stderr_ie=_stderr(ie),
        fractional_share=sum(r[4] for r in results) / total,
        log_variant=options.log_variant,
    )
    logger.info("Independence suite: %d replicates, mean I_e=%.6f (stderr %.2g)",
                replicates, report.mean_ie, report.stderr_ie)
    if not report.ie_consistent_with_zero():
        logger.warning("Mean I_e %.6f is more than 4 standard errors from zero", report.mean_ie)
    return report
