#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
KL Mutual Information Toolkit
=============================

Unbiased Kozachenko-Leonenko estimate of the mutual information between a
discrete label and a variable in a metric space, with the exact
hypergeometric bias correction, fractional handling of distance ties,
selection of the smoothing parameter h, and Monte Carlo checks.

Run `python main.py --help` for the subcommands.
"""

import os
import sys

# Add src to Python path
sys.path.append(os.path.join(os.path.dirname(os.path.abspath(__file__)), 'src'))

from cli import run  # noqa: E402


if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
