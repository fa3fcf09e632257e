"""
Utilities for the KL Mutual Information Toolkit

- file_parser: labeled points and distance-matrix files
- result_writer: JSON / TSV serialization of results
- parallel: deterministic thread fan-out
- log: stderr logging setup

Submodules are imported explicitly; the estimator depends on utils.parallel
and result_writer depends on the estimator.
"""
