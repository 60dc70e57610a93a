from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from typing import TypeVar

from loguru import logger

from zerosum_forests.lib import log

T = TypeVar("T")
R = TypeVar("R")


def run_map(func: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    """Map a picklable top-level function over items.

    Results come back in input order whatever the job count, so merged
    reports do not depend on scheduling.

    Args:
        func: Module-level function, one call per instance
        items: Instance descriptions, e.g. (n, seed) tuples
        jobs: Worker processes; 1 runs in the calling process

    Returns:
        List of results aligned with items
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    chunksize = max(1, len(items) // (jobs * 4))
    log("SWEEP", getattr(func, "__name__", "func"), f"items={len(items)} jobs={jobs}")
    try:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(func, items, chunksize=chunksize))
    except Exception:
        logger.exception("worker pool failed")
        raise
