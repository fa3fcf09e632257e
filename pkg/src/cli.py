#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Command-line interface for the KL mutual information toolkit.

Usage:
    klmi estimate --points data.csv --metric euclidean --h 8
    klmi sweep --points data.csv --h-min 1 --h-max 64
    klmi bias --counts 100,60,40 --h 8
    klmi simulate --family independent-uniform --n 200 --class-probs 0.5,0.3,0.2 --h 8
    klmi simulate --matrix distances.csv --h 6 --replicates 100000
    klmi generate --family gaussian-clusters --n 1000 --class-probs 0.5,0.5 -o clusters.csv

Results go to standard output (JSON by default); diagnostics go to standard
error. Exit status is 0 on success, 2 on usage errors and 1 on data errors.
"""

from typing import List, Optional, Sequence
import functools
import logging
import sys

import click

from exceptions import KLMIError, UsageError
from dataset import LabeledDataset
from estimator import EstimatorOptions, LOG_VARIANTS, bias_table, sweep_h, unbiased_mi
from synthesis import FAMILIES, INDEPENDENT_FAMILIES, GeneratorSpec, generate, \
    independence_suite, permutation_bias_oracle
from algorithms.metric_space import METRICS
from utils.file_parser import read_matrix, read_points, write_points
from utils.log import LOG_LEVELS, setup_logging
from utils.result_writer import FORMATS, write_result


__all__ = ["cli", "run", "main"]

logger = logging.getLogger(__name__)


def _parse_list(value: Optional[str], kind, name: str) -> Optional[List]:
    if value is None:
        return None
    try:
        items = [kind(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"{value!r} is not a comma-separated list", param_hint=name)
    if not items:
        raise click.BadParameter("list is empty", param_hint=name)
    return items


def input_options(required: bool):
    """--points/--matrix plus the reader flags"""
    def decorator(func):
        options = [
            click.option("--points", "points_path", metavar="PATH",
                         help="Labeled points file: label,x1,...,xd per line."),
            click.option("--matrix", "matrix_path", metavar="PATH",
                         help="Labeled distance-matrix file: label,d1,...,dn per line."),
            click.option("--metric", type=click.Choice(list(METRICS)), default="euclidean",
                         show_default=True, help="Metric applied to points files."),
            click.option("--delimiter", default=",", show_default=True, metavar="CHAR",
                         help="Field separator; 'tab' or '\\t' for tabs."),
            click.option("--header", is_flag=True, help="Skip the first line of the input file."),
        ]
        for option in reversed(options):
            func = option(func)

        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            points_path, matrix_path = kwargs.get("points_path"), kwargs.get("matrix_path")
            if points_path and matrix_path:
                raise click.UsageError("give either --points or --matrix, not both")
            if required and not (points_path or matrix_path):
                raise click.UsageError("one of --points or --matrix is required")
            return func(*args, **kwargs)
        return wrapper
    return decorator


def estimator_options(func):
    """Flags shared by estimate, sweep and simulate"""
    options = [
        click.option("--tie-epsilon", type=click.FloatRange(min=0.0), default=0.0, show_default=True,
                     help="Relative width within which ball radii count as a draw."),
        click.option("--nx-override", type=click.IntRange(min=1), default=None,
                     help="Declared number of labels, if larger than the number present."),
        click.option("--log-variant", type=click.Choice(LOG_VARIANTS), default="nx",
                     show_default=True, help="Count inside the bias logarithm: n_x or per-class n_c."),
        click.option("--threads", type=click.IntRange(min=0), default=0, envvar="KLMI_THREADS",
                     show_default=True, help="Worker threads; 0 uses all cores."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def output_option(func):
    return click.option("--format", "fmt", type=click.Choice(FORMATS), default="json",
                        show_default=True, help="Output format.")(func)


def _load(points_path: Optional[str], matrix_path: Optional[str], metric: str,
          delimiter: str, header: bool) -> LabeledDataset:
    if points_path:
        return read_points(points_path, delimiter=delimiter, header=header, metric=metric)
    return read_matrix(matrix_path, delimiter=delimiter, header=header)


def _options(tie_epsilon, nx_override, log_variant, threads) -> EstimatorOptions:
    return EstimatorOptions(tie_epsilon=tie_epsilon, nx_override=nx_override,
                            log_variant=log_variant, threads=threads)


@click.group(context_settings={"help_option_names": ["--help"]})
@click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), default="WARNING",
              envvar="KLMI_LOG_LEVEL", show_default=True, help="Diagnostics written to stderr.")
def cli(log_level):
    """Unbiased nearest-neighbour mutual information between labels and metric-space data."""
    setup_logging(log_level)


@cli.command()
@input_options(required=True)
@click.option("--h", "h", type=click.IntRange(min=1), required=True, help="Ball occupancy h.")
@estimator_options
@output_option
def estimate(points_path, matrix_path, metric, delimiter, header, h,
             tie_epsilon, nx_override, log_variant, threads, fmt):
    """Estimate I_0, I_b and I_e for one h."""
    dataset = _load(points_path, matrix_path, metric, delimiter, header)
    result = unbiased_mi(dataset, h, _options(tie_epsilon, nx_override, log_variant, threads))
    click.echo(write_result(result, fmt), nl=False)
    return 0


@cli.command()
@input_options(required=True)
@click.option("--h-min", type=click.IntRange(min=1), default=None, help="Smallest h [default: 1].")
@click.option("--h-max", type=click.IntRange(min=1), default=None,
              help="Largest h [default: min(64, n-1), or --h-min if larger].")
@estimator_options
@output_option
def sweep(points_path, matrix_path, metric, delimiter, header, h_min, h_max,
          tie_epsilon, nx_override, log_variant, threads, fmt):
    """Estimate over a range of h and select the h maximizing I_e."""
    if h_min is not None and h_max is not None and h_min > h_max:
        raise click.UsageError(f"empty h range [{h_min}, {h_max}]")
    dataset = _load(points_path, matrix_path, metric, delimiter, header)
    result = sweep_h(dataset, h_min, h_max, _options(tie_epsilon, nx_override, log_variant, threads))
    click.echo(write_result(result, fmt), nl=False)
    return 0


@cli.command()
@click.option("--counts", required=True, metavar="LIST",
              help="Records per class, e.g. 100,60,40.")
@click.option("--h", "h", type=click.IntRange(min=1), required=True, help="Ball occupancy h.")
@click.option("--nx-override", type=click.IntRange(min=1), default=None,
              help="Declared number of labels, if larger than the number present.")
@click.option("--log-variant", type=click.Choice(LOG_VARIANTS), default="nx", show_default=True,
              help="Count inside the bias logarithm: n_x or per-class n_c.")
@output_option
def bias(counts, h, nx_override, log_variant, fmt):
    """Print the bias table P(h_y = r) and I_b for given class counts."""
    class_counts = _parse_list(counts, int, "--counts")
    result = bias_table(class_counts, h, n_x=nx_override, log_variant=log_variant)
    click.echo(write_result(result, fmt), nl=False)
    return 0


@cli.command()
@input_options(required=False)
@click.option("--h", "h", type=click.IntRange(min=1), required=True, help="Ball occupancy h.")
@click.option("--replicates", type=click.IntRange(min=1), default=1000, show_default=True,
              help="Monte Carlo replicates.")
@click.option("--seed", type=int, default=0, show_default=True, help="Root RNG seed.")
@click.option("--family", type=click.Choice(INDEPENDENT_FAMILIES), default="independent-uniform",
              show_default=True, help="Generator family when no input file is given.")
@click.option("--n", "n", type=click.IntRange(min=1), default=200, show_default=True,
              help="Records per generated dataset.")
@click.option("--class-probs", default="0.5,0.3,0.2", show_default=True, metavar="LIST",
              help="Class probabilities of generated datasets.")
@click.option("--dim", type=click.IntRange(min=1), default=2, show_default=True,
              help="Dimension of generated points.")
@estimator_options
@output_option
def simulate(points_path, matrix_path, metric, delimiter, header, h, replicates, seed, family, n,
             class_probs, dim, tie_epsilon, nx_override, log_variant, threads, fmt):
    """
    Monte Carlo check of the bias formula.

    With --points or --matrix, labels of that file are shuffled over its fixed
    geometry (permutation oracle). Otherwise fresh independent datasets are
    generated and the mean unbiased estimate is reported (independence suite).
    """
    options = _options(tie_epsilon, nx_override, log_variant, threads)
    if points_path or matrix_path:
        dataset = _load(points_path, matrix_path, metric, delimiter, header)
        result = permutation_bias_oracle(dataset.distances, dataset.class_counts, h,
                                         replicates, rng_seed=seed, options=options)
    else:
        spec = GeneratorSpec(n=n, class_probs=_parse_list(class_probs, float, "--class-probs"),
                             family=family, d=dim, rng_seed=seed)
        result = independence_suite(spec, h, replicates, options)
    click.echo(write_result(result, fmt), nl=False)
    return 0


@cli.command(name="generate")
@click.option("--family", type=click.Choice(FAMILIES), default="independent-uniform",
              show_default=True, help="Generator family.")
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of records.")
@click.option("--class-probs", required=True, metavar="LIST", help="Class probabilities.")
@click.option("--dim", type=click.IntRange(min=1), default=1, show_default=True,
              help="Dimension of the points.")
@click.option("--spread", type=click.FloatRange(min=0.0, min_open=True), default=0.01,
              show_default=True, help="gaussian-clusters: standard deviation around each mean.")
@click.option("--separation", type=float, default=1.0, show_default=True,
              help="gaussian-clusters: distance between consecutive class means.")
@click.option("--seed", type=int, default=0, show_default=True, help="RNG seed.")
@click.option("--delimiter", default=",", show_default=True, metavar="CHAR", help="Field separator.")
@click.option("--output", "-o", "output", type=click.File("w", encoding="utf-8"), default="-",
              help="Output points file [default: stdout].")
def generate_command(family, n, class_probs, dim, spread, separation, seed, delimiter, output):
    """Write a synthetic labeled points file."""
    spec = GeneratorSpec(n=n, class_probs=_parse_list(class_probs, float, "--class-probs"),
                         family=family, d=dim, rng_seed=seed, spread=spread, separation=separation)
    write_points(generate(spec), output, delimiter=delimiter)
    return 0


def run(args: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line

    Args:
        args: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Exit status: 0 on success, 2 on usage errors, 1 on data errors
    """
    try:
        status = cli.main(args=list(args) if args is not None else None, prog_name="klmi",
                          standalone_mode=False)
    except click.ClickException as exc:
        click.echo(f"klmi: error: {exc.format_message()}", err=True)
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("klmi: aborted", err=True)
        return 1
    except UsageError as exc:
        click.echo(f"klmi: error: {exc}", err=True)
        return 2
    except (KLMIError, OSError) as exc:
        click.echo(f"klmi: error: {exc}", err=True)
        return 1
    return status if isinstance(status, int) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
