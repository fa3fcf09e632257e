#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
File Parser for Labeled Point and Distance-Matrix Files

Both formats are delimited UTF-8 text with one record per line and the label
token in the first column:

    points file:  label,x1,x2,...,xd
    matrix file:  label,d(i,1),d(i,2),...,d(i,n)

Label tokens are opaque strings mapped to class ids in order of first
appearance. LF and CRLF line endings are both accepted.
"""

from typing import List, Optional, Sequence, Tuple
import csv
import logging
import math

import numpy as np

from exceptions import ParseError
from dataset import LabeledDataset
from algorithms.metric_space import validate_matrix


logger = logging.getLogger(__name__)


def normalize_delimiter(delimiter: str) -> str:
    """Accept 'tab' and the escape '\\t' as the tab character"""
    if delimiter in ("tab", "\\t", "\t"):
        return "\t"
    if len(delimiter) != 1:
        raise ParseError(f"delimiter must be a single character, got {delimiter!r}")
    return delimiter


class FileParser:
    """Reader and writer for labeled data files"""

    @staticmethod
    def _records(path: str, delimiter: str, header: bool) -> List[Tuple[int, str, List[str]]]:
        """(line number, label token, remaining cells) for every non-blank record"""
        delimiter = normalize_delimiter(delimiter)
        records = []
        with open(path, "r", encoding="utf-8", newline="") as file:
            reader = csv.reader(file, delimiter=delimiter)
            try:
                for row in reader:
                    if header and reader.line_num == 1:
                        continue
                    cells = [cell.strip() for cell in row]
                    if not any(cells):
                        continue
                    records.append((reader.line_num, cells[0], cells[1:]))
            except UnicodeDecodeError as exc:
                raise ParseError(f"not valid UTF-8 text ({exc.reason})", path=path,
                                 line=reader.line_num + 1) from exc
        if not records:
            raise ParseError("file holds no records", path=path)
        return records

    @staticmethod
    def _numbers(cells: Sequence[str], path: str, line: int, offset: int = 2) -> List[float]:
        values = []
        for column, cell in enumerate(cells, start=offset):
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(f"column {column}: {cell!r} is not a number", path=path, line=line)
            if not math.isfinite(value):
                raise ParseError(f"column {column}: {cell!r} is not finite", path=path, line=line)
            values.append(value)
        return values

    @staticmethod
    def read_points(path: str, delimiter: str = ",", header: bool = False,
                    metric: str = "euclidean") -> LabeledDataset:
        """
        Read a labeled points file

        Args:
            path: Path to the file
            delimiter: Field separator
            header: Skip the first line
            metric: Metric attached to the dataset's vector geometry

        Returns:
            LabeledDataset with vector geometry
        """
        records = FileParser._records(path, delimiter, header)
        width = None
        tokens, rows = [], []
        for line, label, cells in records:
            if not cells:
                raise ParseError("record has no feature columns", path=path, line=line)
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise ParseError(f"expected {width} feature columns, found {len(cells)}",
                                 path=path, line=line)
            tokens.append(label)
            rows.append(FileParser._numbers(cells, path, line))

        dataset = LabeledDataset.from_tokens(tokens, np.array(rows, dtype=float), metric=metric)
        logger.info("Read %s: %s", path, dataset.summary())
        logger.debug("Label mapping for %s: %s", path, dataset.label_mapping())
        return dataset

    @staticmethod
    def read_matrix(path: str, delimiter: str = ",", header: bool = False) -> LabeledDataset:
        """
        Read a labeled distance-matrix file

        Args:
            path: Path to the file
            delimiter: Field separator
            header: Skip the first line

        Returns:
            LabeledDataset with a validated DistanceMatrix as geometry
        """
        records = FileParser._records(path, delimiter, header)
        n = len(records)
        tokens, rows = [], []
        for line, label, cells in records:
            if len(cells) != n:
                raise ParseError(f"matrix has {n} rows but this row has {len(cells)} distances",
                                 path=path, line=line)
            tokens.append(label)
            rows.append(FileParser._numbers(cells, path, line))

        dataset = LabeledDataset.from_tokens(tokens, validate_matrix(rows))
        logger.info("Read %s: %s", path, dataset.summary())
        logger.debug("Label mapping for %s: %s", path, dataset.label_mapping())
        return dataset

    @staticmethod
    def write_points(dataset: LabeledDataset, path_or_file, delimiter: str = ",") -> None:
        """
        Write a vector-geometry dataset as a points file, 17 significant digits per value

        Args:
            dataset: Dataset with feature vectors
            path_or_file: Output path or open text file
            delimiter: Field separator
        """
        if not dataset.has_vectors:
            raise ParseError("only datasets with feature vectors can be written as points")
        delimiter = normalize_delimiter(delimiter)

        def emit(file):
            writer = csv.writer(file, delimiter=delimiter, lineterminator="\n")
            for label, row in zip(dataset.labels, dataset.points):
                writer.writerow([str(dataset.label_names[label])] + [format(v, ".17g") for v in row])

        if hasattr(path_or_file, "write"):
            emit(path_or_file)
        else:
            with open(path_or_file, "w", encoding="utf-8", newline="") as file:
                emit(file)
        logger.info("Wrote %d points", dataset.n)


read_points = FileParser.read_points
read_matrix = FileParser.read_matrix
write_points = FileParser.write_points
