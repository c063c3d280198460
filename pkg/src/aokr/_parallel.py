from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")

# momenta handled by one task; fixed so results never depend on the worker count
CHUNK_MOMENTA = 256


def chunk_bounds(n: int, size: int = CHUNK_MOMENTA) -> List[tuple[int, int]]:
    return [(lo, min(lo + size, n)) for lo in range(0, n, size)]


def ordered_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """Apply ``func`` to every item, returning results in input order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
