#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Unbiased Kozachenko-Leonenko Mutual Information Estimator

Estimates the mutual information between a discrete label X and a variable Y
living in a metric space. For every seed point a ball of its h nearest points
(seed included) is formed and the number h_y(i) of ball members sharing the
seed's label is counted. The naive estimate

    I_0 = (1/n) sum_i log2(n_x h_y(i) / h)

is biased; under independence of X and Y the ball members are a random draw
from the other points, so the bias is an exact hypergeometric expectation

    I_b = sum_r P(h_y = r) log2(n_x r / h),
    P(h_y = r) = sum_c (n_c / n) Hypergeometric(n-1, n_c-1, h-1) at r-1

and I_e = I_0 - I_b is unbiased. All logarithms are base 2.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from exceptions import DomainError, InvariantError
from dataset import LabeledDataset
from algorithms.hypergeom import HypergeomParams, hypergeom_pmf
from algorithms.metric_space import NeighborOrdering
from utils.parallel import parallel_map


logger = logging.getLogger(__name__)

LOG_VARIANTS = ("nx", "nc")

# Upper end of the default sweep range
DEFAULT_SWEEP_MAX = 64


@dataclass(frozen=True)
class EstimatorOptions:
    """Knobs shared by estimation, sweeping and simulation"""
    tie_epsilon: float = 0.0
    nx_override: Optional[int] = None
    log_variant: str = "nx"
    threads: Optional[int] = 1

    def __post_init__(self):
        if not self.tie_epsilon >= 0 or not math.isfinite(self.tie_epsilon):
            raise DomainError(f"tie epsilon must be finite and >= 0, got {self.tie_epsilon}")
        if self.log_variant not in LOG_VARIANTS:
            raise DomainError(f"log variant must be one of {LOG_VARIANTS}, got {self.log_variant!r}")
        if self.nx_override is not None and self.nx_override < 1:
            raise DomainError(f"nx override must be >= 1, got {self.nx_override}")

    def effective_nx(self, present: int) -> int:
        """n_x used inside the logarithms"""
        if self.nx_override is None:
            return present
        if self.nx_override < present:
            raise DomainError(
                f"nx override {self.nx_override} is smaller than the {present} classes present")
        return self.nx_override


@dataclass(frozen=True, eq=False)
class SameLabelCounts:
    """Per-seed (possibly fractional) count of same-label ball members"""
    h: int
    values: np.ndarray
    fractional_seeds: int = 0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(len(self.values))


@dataclass(frozen=True, eq=False)
class BiasTable:
    """Distribution of h_y under independence and the bias it implies"""
    h: int
    n: int
    n_x: int
    class_counts: Tuple[int, ...]
    p_r: np.ndarray
    i_b: float
    log_variant: str = "nx"

    @property
    def r(self) -> np.ndarray:
        return np.arange(1, self.h + 1)

    def terms(self) -> np.ndarray:
        """log2(n_x r / h) for r = 1..h"""
        return np.log2(self.n_x * self.r / self.h)

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "n_x": self.n_x,
            "class_counts": list(self.class_counts),
            "h": self.h,
            "p_r": [float(p) for p in self.p_r],
            "ib_bits": float(self.i_b),
        }


@dataclass(frozen=True)
class MiEstimate:
    """Naive, bias and unbiased estimates for one h"""
    n: int
    n_x: int
    class_counts: Tuple[int, ...]
    h: int
    i0: float
    ib: float
    ie: float
    log_variant: str = "nx"
    fractional_seeds: int = 0

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "n_x": self.n_x,
            "class_counts": list(self.class_counts),
            "h": self.h,
            "i0_bits": float(self.i0),
            "ib_bits": float(self.ib),
            "ie_bits": float(self.ie),
        }


@dataclass(frozen=True)
class SweepResult:
    """Estimates over a range of h and the index of the largest I_e"""
    estimates: List[MiEstimate] = field(default_factory=list)
    selected_index: int = 0

    @property
    def selected(self) -> MiEstimate:
        return self.estimates[self.selected_index]

    @property
    def selected_h(self) -> int:
        return self.selected.h

    def to_dict(self) -> Dict:
        result = self.selected.to_dict()
        result["sweep"] = [estimate.to_dict() for estimate in self.estimates]
        result["selected_h"] = self.selected_h
        return result


def _check_h(h: int, n: int) -> int:
    if isinstance(h, bool) or int(h) != h:
        raise DomainError(f"h must be an integer, got {h!r}")
    h = int(h)
    if h < 1 or h > n:
        raise DomainError(f"h must lie in [1, {n}], got {h}")
    return h


def same_label_counts(ds: LabeledDataset, h: int, tie_epsilon: float = 0.0,
                      ordering: Optional[NeighborOrdering] = None) -> SameLabelCounts:
    """
    Count same-label members of every seed's h-nearest ball

    Boundary points that tie count with the ball's fractional weight.

    Args:
        ds: Labeled dataset
        h: Ball occupancy, 1 <= h <= n
        tie_epsilon: Relative width within which radii count as equal
        ordering: Precomputed neighbour ordering of ds, reused across h

    Returns:
        SameLabelCounts with h_y(i) for every seed i
    """
    h = _check_h(h, ds.n)
    if ordering is None:
        ordering = ds.ordering(tie_epsilon)
    _, inner, boundary, weight = ordering.resolve(h)

    same = ds.labels[ordering.order] == ds.labels[:, None]
    inner_same = np.count_nonzero(inner & same, axis=1)
    boundary_same = np.count_nonzero(boundary & same, axis=1)
    values = 1.0 + inner_same + weight * boundary_same

    fractional = int(np.count_nonzero(weight < 1.0))
    return SameLabelCounts(h=h, values=values, fractional_seeds=fractional)


def batch_same_label_counts(ordering: NeighborOrdering, h: int, label_batch: np.ndarray) -> np.ndarray:
    """
    Same-label counts for many labelings of one geometry

    Args:
        ordering: Neighbour ordering of the fixed geometry
        h: Ball occupancy
        label_batch: R x n array, one labeling per row

    Returns:
        R x n array of h_y values
    """
    _, inner, boundary, weight = ordering.resolve(h)
    label_batch = np.asarray(label_batch)
    same = label_batch[:, ordering.order] == label_batch[:, :, None]
    inner_same = np.count_nonzero(same & inner[None, :, :], axis=2)
    boundary_same = np.count_nonzero(same & boundary[None, :, :], axis=2)
    return 1.0 + inner_same + weight[None, :] * boundary_same


def naive_mi(counts: SameLabelCounts, n_x: int) -> float:
    """
    Naive nearest-neighbour estimate I_0 in bits

    The mean is taken over the histogram of distinct h_y values, which makes
    the result independent of record order.

    Args:
        counts: Same-label counts for one h
        n_x: Number of label classes

    Returns:
        (1/n) sum_i log2(n_x h_y(i) / h)
    """
    values = counts.values
    if counts.n == 0:
        raise DomainError("no same-label counts to average")
    if np.any(values < 1.0):
        raise InvariantError(f"same-label count below 1 (min {values.min()})")
    if np.any(values > counts.h + 1e-9):
        raise InvariantError(f"same-label count above h={counts.h} (max {values.max()})")
    distinct, occurrences = np.unique(values, return_counts=True)
    terms = np.log2(n_x * distinct / counts.h)
    return math.fsum((occurrences / counts.n) * terms)


def bias_table(class_counts: Sequence[int], h: int, n_x: Optional[int] = None,
               log_variant: str = "nx") -> BiasTable:
    """
    Exact bias of the naive estimate under independence

    Args:
        class_counts: Records per class, all >= 1
        h: Ball occupancy, 1 <= h <= n
        n_x: Class count inside the logarithm (defaults to len(class_counts))
        log_variant: "nx" puts n_x inside the logarithm; "nc" puts each
            class's own n_c there instead

    Returns:
        BiasTable with P(h_y = r) for r = 1..h and the bias I_b
    """
    counts = [int(c) for c in class_counts]
    if not counts:
        raise DomainError("class counts are empty")
    if any(c < 1 for c in counts):
        raise DomainError(f"every class count must be >= 1, got {counts}")
    if log_variant not in LOG_VARIANTS:
        raise DomainError(f"log variant must be one of {LOG_VARIANTS}, got {log_variant!r}")
    n = sum(counts)
    h = _check_h(h, n)
    present = len(counts)
    if n_x is None:
        n_x = present
    elif n_x < present:
        raise DomainError(f"n_x={n_x} is smaller than the {present} classes given")

    # classes of equal size contribute identically
    sizes = sorted(set(counts))
    multiplicity = {size: counts.count(size) for size in sizes}
    conditional = {}
    for size in sizes:
        params = HypergeomParams(population=n - 1, successes=size - 1, draws=h - 1)
        conditional[size] = np.array([hypergeom_pmf(params, r - 1) for r in range(1, h + 1)])

    r = np.arange(1, h + 1)
    p_r = np.array([
        math.fsum(multiplicity[size] * size * conditional[size][k] for size in sizes) / n
        for k in range(h)
    ])

    if log_variant == "nx":
        i_b = math.fsum(p_r * np.log2(n_x * r / h))
    else:
        i_b = math.fsum(
            multiplicity[size] * size / n * conditional[size][k] * math.log2(size * (k + 1) / h)
            for size in sizes for k in range(h)
        )
    return BiasTable(h=h, n=n, n_x=n_x, class_counts=tuple(counts), p_r=p_r, i_b=float(i_b),
                     log_variant=log_variant)


def unbiased_mi(ds: LabeledDataset, h: int, options: Optional[EstimatorOptions] = None,
                ordering: Optional[NeighborOrdering] = None) -> MiEstimate:
    """
    Unbiased estimate I_e = I_0 - I_b for one h

    Args:
        ds: Labeled dataset
        h: Ball occupancy, 1 <= h <= n
        options: Tie epsilon, n_x override and log variant
        ordering: Precomputed neighbour ordering of ds

    Returns:
        MiEstimate with every intermediate value
    """
    options = options or EstimatorOptions()
    h = _check_h(h, ds.n)
    n_x = options.effective_nx(ds.n_x)

    counts = same_label_counts(ds, h, options.tie_epsilon, ordering)
    i0 = naive_mi(counts, n_x)
    table = bias_table(ds.class_counts, h, n_x=n_x, log_variant=options.log_variant)
    if counts.fractional_seeds:
        logger.warning("h=%d: %d seeds have a tied ball boundary; the bias assumes draw-free data",
                       h, counts.fractional_seeds)

    return MiEstimate(
        n=ds.n,
        n_x=n_x,
        class_counts=ds.class_counts,
        h=h,
        i0=i0,
        ib=table.i_b,
        ie=i0 - table.i_b,
        log_variant=options.log_variant,
        fractional_seeds=counts.fractional_seeds,
    )


def default_h_range(n: int) -> Tuple[int, int]:
    """Sweep range [1, min(64, n-1)], never empty"""
    return 1, max(1, min(DEFAULT_SWEEP_MAX, n - 1))


def select_maximum(estimates: Sequence[MiEstimate]) -> int:
    """Index of the largest I_e, the smallest h winning ties"""
    if not estimates:
        raise DomainError("no estimates to select from")
    best = 0
    for index, estimate in enumerate(estimates):
        if estimate.ie > estimates[best].ie:
            best = index
    return best


def sweep_h(ds: LabeledDataset, h_min: Optional[int] = None, h_max: Optional[int] = None,
            options: Optional[EstimatorOptions] = None) -> SweepResult:
    """
    Evaluate the unbiased estimate for every h in [h_min, h_max]

    The h with the largest I_e is selected, ties going to the smallest h.

    Args:
        ds: Labeled dataset
        h_min: Smallest h (default 1)
        h_max: Largest h (default min(64, n-1), raised to h_min when only h_min is given)
        options: Estimator options; options.threads spreads h over threads

    Returns:
        SweepResult
    """
    options = options or EstimatorOptions()
    default_min, default_max = default_h_range(ds.n)
    if h_max is None:
        # a lone h_min past the default end sweeps from h_min, up to n
        h_max = default_max if h_min is None else min(ds.n, max(h_min, default_max))
    h_min = _check_h(default_min if h_min is None else h_min, ds.n)
    h_max = _check_h(h_max, ds.n)
    if h_min > h_max:
        raise DomainError(f"empty h range [{h_min}, {h_max}]")

    ordering = ds.ordering(options.tie_epsilon)
    estimates = parallel_map(lambda h: unbiased_mi(ds, h, options, ordering),
                             range(h_min, h_max + 1), options.threads)
    selected = select_maximum(estimates)
    logger.info("Sweep over h in [%d, %d] selected h=%d (I_e=%.6f bits)",
                h_min, h_max, estimates[selected].h, estimates[selected].ie)
    return SweepResult(estimates=estimates, selected_index=selected)
