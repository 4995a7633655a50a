import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "OSCILLATORS_THREADS"


def thread_count() -> int:
    """Number of worker threads for grid evaluations, read from OSCILLATORS_THREADS.

    Returns:
        int: at least 1, 1 meaning sequential evaluation.
    """
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(func: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Map func over items, keeping the input order."""
    items = list(items)
    workers = thread_count()
    if workers == 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
