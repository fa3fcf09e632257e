#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Labeled Dataset Definition
==========================

n labeled outcomes: a discrete class label per record together with either a
feature vector per record or a precomputed distance matrix.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union

import numpy as np

from exceptions import DomainError, ShapeError
from algorithms.metric_space import (
    METRICS, DistanceMatrix, NeighborOrdering, pairwise_distances,
)


def encode_labels(tokens: Sequence[Hashable]) -> Tuple[np.ndarray, Tuple[Hashable, ...]]:
    """
    Map label tokens to dense class ids in order of first appearance

    Args:
        tokens: One label token per record

    Returns:
        (class ids, tokens indexed by class id)
    """
    mapping: Dict[Hashable, int] = {}
    ids = np.empty(len(tokens), dtype=int)
    for i, token in enumerate(tokens):
        ids[i] = mapping.setdefault(token, len(mapping))
    return ids, tuple(mapping)


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Labels plus geometry (feature vectors or a DistanceMatrix)"""
    labels: np.ndarray
    geometry: Union[np.ndarray, DistanceMatrix]
    label_names: Tuple[Hashable, ...] = ()
    metric: str = "euclidean"
    _orderings: Dict[float, NeighborOrdering] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        # ids are re-encoded densely; label_names, when given, is indexed by the original ids
        ids, originals = encode_labels(np.asarray(self.labels).tolist())
        names = originals
        if self.label_names:
            try:
                names = tuple(self.label_names[v] for v in originals)
            except (IndexError, TypeError) as exc:
                raise DomainError(f"label_names does not cover every label id: {exc}") from exc
        object.__setattr__(self, "labels", ids)
        object.__setattr__(self, "label_names", names)

        if len(ids) == 0:
            raise DomainError("a dataset needs at least one record")
        if self.metric not in METRICS:
            raise DomainError(f"unknown metric {self.metric!r}")

        if isinstance(self.geometry, DistanceMatrix):
            size = self.geometry.size
        else:
            points = np.asarray(self.geometry, dtype=float)
            if points.ndim == 1:
                points = points[:, None]
            if points.ndim != 2 or points.shape[1] < 1:
                raise ShapeError(f"feature vectors must form an n x d array, got {points.shape}")
            points.flags.writeable = False
            object.__setattr__(self, "geometry", points)
            size = points.shape[0]
        if size != len(ids):
            raise ShapeError(f"{len(ids)} labels but geometry holds {size} records")

    @classmethod
    def from_tokens(cls, tokens: Sequence[Hashable], geometry: Union[np.ndarray, DistanceMatrix],
                    metric: str = "euclidean") -> "LabeledDataset":
        """Build a dataset from arbitrary label tokens"""
        ids, names = encode_labels(tokens)
        return cls(labels=ids, geometry=geometry, label_names=names, metric=metric)

    @property
    def n(self) -> int:
        return int(len(self.labels))

    @property
    def n_x(self) -> int:
        """Number of classes present"""
        return int(self.labels.max()) + 1

    @cached_property
    def class_counts(self) -> Tuple[int, ...]:
        """Records per class id"""
        return tuple(int(c) for c in np.bincount(self.labels, minlength=self.n_x))

    @property
    def has_vectors(self) -> bool:
        return not isinstance(self.geometry, DistanceMatrix)

    @property
    def points(self) -> Optional[np.ndarray]:
        return self.geometry if self.has_vectors else None

    @cached_property
    def distances(self) -> DistanceMatrix:
        """Distance matrix of the geometry"""
        if isinstance(self.geometry, DistanceMatrix):
            return self.geometry
        return pairwise_distances(self.geometry, self.metric)

    def ordering(self, tie_epsilon: float = 0.0) -> NeighborOrdering:
        """Cached neighbour ordering for a tie epsilon"""
        key = float(tie_epsilon)
        if key not in self._orderings:
            self._orderings[key] = NeighborOrdering(self.distances, key)
        return self._orderings[key]

    def with_labels(self, labels: Sequence[Hashable]) -> "LabeledDataset":
        """Same geometry with different labels"""
        ids, names = encode_labels(list(labels))
        dataset = LabeledDataset(labels=ids, geometry=self.geometry, label_names=names,
                                 metric=self.metric)
        if "distances" in self.__dict__:
            dataset.__dict__["distances"] = self.distances
        dataset._orderings.update(self._orderings)
        return dataset

    def permuted(self, order: Sequence[int]) -> "LabeledDataset":
        """Records reordered so that new record i is old record order[i]"""
        order = np.asarray(order, dtype=int)
        if sorted(order.tolist()) != list(range(self.n)):
            raise DomainError("order must be a permutation of the record indices")
        tokens = [self.label_names[c] for c in self.labels[order]]
        if isinstance(self.geometry, DistanceMatrix):
            geometry = self.geometry.permuted(order)
        else:
            geometry = self.geometry[order]
        return LabeledDataset.from_tokens(tokens, geometry, metric=self.metric)

    def summary(self) -> str:
        kind = f"{self.geometry.shape[1]}-d vectors ({self.metric})" if self.has_vectors \
            else "distance matrix"
        return f"n={self.n}, n_x={self.n_x}, class_counts={list(self.class_counts)}, {kind}"

    def label_mapping(self) -> List[Tuple[int, Hashable]]:
        return list(enumerate(self.label_names))
