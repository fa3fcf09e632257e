#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Exception hierarchy for the KL mutual information toolkit.

Every error raised on purpose by the library derives from KLMIError so the
command-line front end can map it to a data-error exit status.
"""

from typing import List, Optional, Sequence, Tuple


class KLMIError(Exception):
    """Base class for all toolkit errors"""


class DomainError(KLMIError, ValueError):
    """An argument lies outside the domain of the operation (h, counts, empty input)"""


class ShapeError(KLMIError, ValueError):
    """Input arrays have inconsistent or unexpected shapes"""


class InvariantError(KLMIError, AssertionError):
    """An internal invariant was violated"""


class ValidationError(KLMIError, ValueError):
    """A distance matrix failed validation"""

    def __init__(self, message: str, indices: Optional[Sequence[Tuple[int, int]]] = None):
        self.indices: List[Tuple[int, int]] = [tuple(map(int, ij)) for ij in ([] if indices is None else indices)]
        if self.indices:
            shown = ", ".join(f"({i}, {j})" for i, j in self.indices[:5])
            more = f" and {len(self.indices) - 5} more" if len(self.indices) > 5 else ""
            message = f"{message} at {shown}{more}"
        super().__init__(message)


class ParseError(KLMIError, ValueError):
    """A data file could not be parsed"""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")


class UsageError(KLMIError, ValueError):
    """A caller asked for an option that does not exist (unknown output format)"""
