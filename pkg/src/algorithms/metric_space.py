#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Metric Space Geometry for Nearest-Neighbour Estimation

The estimator consumes nothing but a matrix of distances. This module builds
that matrix from feature vectors, validates matrices supplied directly, and
resolves the h-nearest ball around each seed point, including the fractional
weighting of points that tie on the ball boundary.

Neighbour order is computed by sorting each seed's distance row once; no
spatial index is used because only the metric is assumed.
"""

from dataclasses import dataclass
from typing import FrozenSet, Sequence, Tuple, Union
import logging

import numpy as np
from scipy.spatial.distance import pdist, squareform

from exceptions import DomainError, InvariantError, ShapeError, ValidationError


logger = logging.getLogger(__name__)

# Public metric names mapped onto scipy's metric identifiers
METRICS = {
    "euclidean": "euclidean",
    "manhattan": "cityblock",
    "chebyshev": "chebyshev",
    "hamming": "hamming",
}

SYMMETRY_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric n x n matrix of non-negative distances with a zero diagonal"""
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float, copy=True)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ShapeError(f"distance matrix must be square, got shape {entries.shape}")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])

    def permuted(self, order: Sequence[int]) -> "DistanceMatrix":
        """Copy with records reordered so that new record i is old record order[i]"""
        order = np.asarray(order, dtype=int)
        return DistanceMatrix(self.entries[np.ix_(order, order)])


@dataclass(frozen=True)
class NeighborBall:
    """Resolution of the h-nearest ball around one seed point"""
    seed: int
    h: int
    inner: FrozenSet[int]
    boundary: FrozenSet[int]
    boundary_weight: float
    radius: float

    def __post_init__(self):
        if abs(self.weighted_size() - self.h) > 1e-9 * self.h:
            raise InvariantError(f"ball around seed {self.seed} has total weight "
                                 f"{self.weighted_size()}, not h={self.h}")

    @property
    def c(self) -> int:
        """Points strictly inside the boundary, seed included"""
        return len(self.inner)

    @property
    def b(self) -> int:
        """Points on the boundary"""
        return len(self.boundary)

    def weighted_size(self) -> float:
        """Inner count plus weighted boundary count; equals h"""
        return self.c + self.boundary_weight * self.b


def pairwise_distances(points: Union[np.ndarray, Sequence[Sequence[float]]],
                       metric: str = "euclidean") -> DistanceMatrix:
    """
    Full pairwise distance matrix of a set of feature vectors

    Args:
        points: n vectors of a common dimension d >= 1
        metric: One of euclidean, manhattan, chebyshev, hamming

    Returns:
        DistanceMatrix of size n
    """
    if metric not in METRICS:
        raise DomainError(f"unknown metric {metric!r}; choose from {', '.join(METRICS)}")

    if not isinstance(points, np.ndarray):
        points = list(points)
        if not points:
            raise DomainError("cannot compute distances of an empty point set")
        widths = {len(p) for p in points}
        if len(widths) != 1:
            raise ShapeError(f"points have ragged dimensions {sorted(widths)}")
    array = np.asarray(points, dtype=float)
    if array.size == 0 or array.shape[0] == 0:
        raise DomainError("cannot compute distances of an empty point set")
    if array.ndim == 1:
        array = array[:, None]
    if array.ndim != 2 or array.shape[1] < 1:
        raise ShapeError(f"points must form an n x d array with d >= 1, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise DomainError("points contain non-finite coordinates")

    # squareform(pdist) is exactly symmetric with an exact zero diagonal
    entries = squareform(pdist(array, metric=METRICS[metric]))
    logger.debug("Computed %dx%d %s distance matrix", array.shape[0], array.shape[0], metric)
    return DistanceMatrix(entries)


def validate_matrix(entries: Union[np.ndarray, Sequence[Sequence[float]]]) -> DistanceMatrix:
    """
    Validate a user-supplied distance matrix

    Zero diagonal, symmetry within a relative tolerance, non-negative and
    finite entries are required. The triangle inequality is not checked, so
    non-metric dissimilarities are accepted.

    Args:
        entries: Square n x n array

    Returns:
        DistanceMatrix, symmetrized by averaging with its transpose
    """
    try:
        array = np.array(entries, dtype=float)
    except ValueError as exc:
        raise ShapeError(f"distance matrix is not a rectangular numeric array: {exc}") from exc
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise ShapeError(f"distance matrix must be square, got shape {array.shape}")
    if array.shape[0] == 0:
        raise DomainError("distance matrix is empty")

    bad = np.argwhere(~np.isfinite(array))
    if len(bad):
        raise ValidationError("non-finite distance", bad)
    bad = np.argwhere(array < 0)
    if len(bad):
        raise ValidationError("negative distance", bad)
    diagonal = np.flatnonzero(np.diag(array) != 0)
    if len(diagonal):
        raise ValidationError("nonzero diagonal", [(i, i) for i in diagonal])

    transpose = array.T
    scale = np.maximum(np.abs(array), np.abs(transpose))
    asymmetric = np.abs(array - transpose) > SYMMETRY_RTOL * scale
    bad = np.argwhere(np.triu(asymmetric, k=1))
    if len(bad):
        raise ValidationError("asymmetric distances", bad)

    return DistanceMatrix((array + transpose) / 2.0)


def _check_h(h: int, n: int) -> int:
    if isinstance(h, bool) or int(h) != h:
        raise DomainError(f"h must be an integer, got {h!r}")
    h = int(h)
    if h < 1 or h > n:
        raise DomainError(f"h must lie in [1, {n}], got {h}")
    return h


def _resolve(sorted_rows: np.ndarray, h: int,
             tie_epsilon: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Apply the ball rule to rows of ascending non-seed distances

    Returns:
        radius, inner mask, boundary mask and boundary weight per row; masks
        refer to positions in the sorted rows and exclude the seed
    """
    rows, others = sorted_rows.shape
    if h == 1:
        return (np.zeros(rows), np.zeros((rows, others), dtype=bool),
                np.zeros((rows, others), dtype=bool), np.ones(rows))

    radius = sorted_rows[:, h - 2]
    if tie_epsilon > 0:
        tolerance = (tie_epsilon * radius)[:, None]
        inner = sorted_rows < radius[:, None] - tolerance
        boundary = np.abs(sorted_rows - radius[:, None]) <= tolerance
    else:
        inner = sorted_rows < radius[:, None]
        boundary = sorted_rows == radius[:, None]

    c = 1 + inner.sum(axis=1)
    b = boundary.sum(axis=1)
    weight = (h - c) / b
    return radius, inner, boundary, weight


class NeighborOrdering:
    """
    Per-seed neighbour order of a distance matrix

    Each seed's row is sorted once (stable, so equal distances keep index
    order); balls for any h are then read off the sorted rows.
    """

    def __init__(self, dm: DistanceMatrix, tie_epsilon: float = 0.0):
        if tie_epsilon < 0 or not np.isfinite(tie_epsilon):
            raise DomainError(f"tie epsilon must be finite and >= 0, got {tie_epsilon}")
        self.dm = dm
        self.tie_epsilon = float(tie_epsilon)
        n = dm.size
        masked = np.array(dm.entries, dtype=float)
        # the seed sorts last and is dropped; it is always inner with weight 1
        np.fill_diagonal(masked, np.inf)
        order = np.argsort(masked, axis=1, kind="stable")[:, :n - 1]
        self.order = order
        self.sorted_distances = np.take_along_axis(masked, order, axis=1)

    @property
    def size(self) -> int:
        return self.dm.size

    def resolve(self, h: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Radius, inner mask, boundary mask and weight for every seed (sorted-row positions)"""
        h = _check_h(h, self.size)
        return _resolve(self.sorted_distances, h, self.tie_epsilon)

    def ball(self, seed: int, h: int) -> NeighborBall:
        """Neighbour ball of one seed"""
        n = self.size
        if not 0 <= seed < n:
            raise DomainError(f"seed must lie in [0, {n - 1}], got {seed}")
        h = _check_h(h, n)
        radius, inner, boundary, weight = _resolve(self.sorted_distances[seed:seed + 1], h,
                                                   self.tie_epsilon)
        row = self.order[seed]
        return NeighborBall(
            seed=seed,
            h=h,
            inner=frozenset([seed] + row[inner[0]].tolist()),
            boundary=frozenset(row[boundary[0]].tolist()),
            boundary_weight=float(weight[0]),
            radius=float(radius[0]),
        )

    def has_draws(self) -> bool:
        """True when some seed sees two non-seed points at equal distance"""
        if self.size < 3:
            return False
        gaps = np.diff(self.sorted_distances, axis=1)
        if self.tie_epsilon > 0:
            return bool(np.any(gaps <= self.tie_epsilon * self.sorted_distances[:, 1:]))
        return bool(np.any(gaps == 0))


def neighbor_ball(dm: DistanceMatrix, seed: int, h: int, tie_epsilon: float = 0.0) -> NeighborBall:
    """
    Resolve the h-nearest ball around one seed

    The seed is always inside its own ball with weight 1, including when other
    points sit at distance 0. The boundary radius is the smallest radius at
    which the ball holds at least h points; the c points strictly inside are
    counted fully and the b points on the boundary share the remaining h - c
    with weight (h - c) / b each.

    Args:
        dm: Distance matrix
        seed: Index of the seed point
        h: Ball occupancy, 1 <= h <= n
        tie_epsilon: Relative width within which radii count as equal

    Returns:
        NeighborBall for the seed
    """
    n = dm.size
    if not 0 <= seed < n:
        raise DomainError(f"seed must lie in [0, {n - 1}], got {seed}")
    h = _check_h(h, n)
    if tie_epsilon < 0:
        raise DomainError(f"tie epsilon must be >= 0, got {tie_epsilon}")

    row = np.array(dm.entries[seed], dtype=float)
    row[seed] = np.inf
    order = np.argsort(row, kind="stable")[:n - 1]
    sorted_row = row[order][None, :]
    radius, inner, boundary, weight = _resolve(sorted_row, h, float(tie_epsilon))
    return NeighborBall(
        seed=seed,
        h=h,
        inner=frozenset([seed] + order[inner[0]].tolist()),
        boundary=frozenset(order[boundary[0]].tolist()),
        boundary_weight=float(weight[0]),
        radius=float(radius[0]),
    )


def has_draws(dm: DistanceMatrix, tie_epsilon: float = 0.0) -> bool:
    """True when any seed has two other points at the same distance"""
    return NeighborOrdering(dm, tie_epsilon).has_draws()
