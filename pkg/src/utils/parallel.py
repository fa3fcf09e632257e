#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Deterministic fan-out of independent work items

Results always come back in submission order, so output does not depend on
how many workers ran or how they were scheduled.
"""

from typing import Callable, Iterable, List, Optional, Sequence, TypeVar
import logging

from joblib import Parallel, delayed

from exceptions import DomainError


logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: Optional[int]) -> int:
    """
    Translate a thread count into a joblib n_jobs value

    Args:
        threads: None or 0 for all cores, otherwise a positive count

    Returns:
        n_jobs for joblib.Parallel
    """
    if threads is None or threads == 0:
        return -1
    if threads < 0:
        raise DomainError(f"thread count must be >= 0, got {threads}")
    return int(threads)


def parallel_map(func: Callable[[T], R], items: Iterable[T], threads: Optional[int] = 1) -> List[R]:
    """Apply func to every item, in threads when more than one is requested"""
    items = list(items)
    n_jobs = resolve_threads(threads)
    if n_jobs == 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug("Dispatching %d work items to %s threads", len(items), n_jobs)
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(func)(item) for item in items)


def batched(items: Sequence[T], batch_size: int) -> List[Sequence[T]]:
    """Split a sequence into consecutive batches"""
    if batch_size < 1:
        raise DomainError(f"batch size must be >= 1, got {batch_size}")
    return [items[i:i + batch_size] for i in range(0, len(items), batch_size)]
