"""
KL Mutual Information Toolkit

Unbiased nearest-neighbour estimation of the mutual information between a
discrete label and a variable in a metric space.
"""

__version__ = "1.0.0"
__author__ = "KLMI Developers"
