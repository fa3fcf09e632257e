"""
Numerical Core

- hypergeom: hypergeometric pmf used by the exact bias formula
- metric_space: distance matrices and neighbour balls with fractional ties
"""

from .hypergeom import HypergeomParams, hypergeom_pmf, log_binomial
from .metric_space import (
    METRICS, DistanceMatrix, NeighborBall, NeighborOrdering,
    has_draws, neighbor_ball, pairwise_distances, validate_matrix,
)
