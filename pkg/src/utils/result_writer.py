#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Serialization of estimates, sweeps, bias tables and oracle reports

JSON carries the full result; TSV carries one row per h (or per r for
distributions) with a header line. Reals are written with enough digits to
round-trip a double exactly.
"""

from typing import Union
import json

import pandas as pd

from exceptions import UsageError
from estimator import BiasTable, MiEstimate, SweepResult
from synthesis import OracleReport


FORMATS = ("json", "tsv")

Result = Union[MiEstimate, SweepResult, BiasTable, OracleReport]


def _estimate_row(estimate: MiEstimate, selected_h: int) -> dict:
    return {
        "h": estimate.h,
        "n": estimate.n,
        "n_x": estimate.n_x,
        "i0_bits": estimate.i0,
        "ib_bits": estimate.ib,
        "ie_bits": estimate.ie,
        "selected": int(estimate.h == selected_h),
    }


def _table(result: Result) -> pd.DataFrame:
    if isinstance(result, SweepResult):
        return pd.DataFrame([_estimate_row(e, result.selected_h) for e in result.estimates])
    if isinstance(result, MiEstimate):
        return pd.DataFrame([_estimate_row(result, result.h)])
    if isinstance(result, BiasTable):
        return pd.DataFrame({
            "h": result.h,
            "r": result.r,
            "p_r": result.p_r,
            "log2_term": result.terms(),
            "ib_bits": result.i_b,
        })
    return pd.DataFrame({
        "h": result.h,
        "r": range(1, result.h + 1),
        "empirical_p_r": result.empirical_p_r,
        "analytic_p_r": result.analytic_p_r,
    })


def write_result(result: Result, fmt: str = "json") -> str:
    """
    Serialize a result

    Args:
        result: Estimate, sweep, bias table or oracle report
        fmt: "json" or "tsv"

    Returns:
        Serialized text ending in a newline
    """
    if fmt not in FORMATS:
        raise UsageError(f"unknown output format {fmt!r}; choose from {', '.join(FORMATS)}")
    if not isinstance(result, (MiEstimate, SweepResult, BiasTable, OracleReport)):
        raise UsageError(f"cannot serialize {type(result).__name__}")
    if fmt == "json":
        return json.dumps(result.to_dict(), indent=2) + "\n"
    return _table(result).to_csv(sep="\t", index=False, float_format="%.17g", lineterminator="\n")
