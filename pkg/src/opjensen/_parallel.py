"""Deterministic thread fan-out capped by ``OPJENSEN_THREADS``."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def max_workers() -> int:
    try:
        return max(1, int(os.environ.get("OPJENSEN_THREADS", "1")))
    except ValueError:
        return 1


def ordered_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """``list(map(fn, items))``, possibly threaded; results keep input order."""
    items = list(items)
    workers = min(max_workers(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(workers) as ex:
        return list(ex.map(fn, items))


def first_hit(fn: Callable[[T], R | None], items: Iterable[T], chunk: int = 64) -> R | None:
    """First non-None ``fn(x)`` in input order; trials run in chunks when threaded."""
    items = list(items)
    if max_workers() <= 1:
        for x in items:
            r = fn(x)
            if r is not None:
                return r
        return None
    for start in range(0, len(items), chunk):
        for r in ordered_map(fn, items[start:start + chunk]):
            if r is not None:
                return r
    return None
