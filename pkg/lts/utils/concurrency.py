"""Bounded parallel map used by pruning, refinement and evaluation.

Work is split into independent shards whose results are combined in input
order, so outputs do not depend on the number of threads.
"""

import threading
from collections.abc import Callable, Iterable
from concurrent.futures import Future, ThreadPoolExecutor
from typing import Any, TypeVar

from lts.logging_config import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class BoundedExecutor:
    """
    Thread pool executor with semaphore-based concurrency limiting.

    With a single worker, tasks run inline on the calling thread.

    Example:
        >>> with BoundedExecutor(max_workers=4) as executor:
        ...     partials = executor.map(accumulate_layer, layers)
    """

    def __init__(self, max_workers: int, max_concurrent: int | None = None):
        """
        Initialize bounded executor.

        Args:
            max_workers: Maximum number of worker threads
            max_concurrent: Maximum concurrent tasks (defaults to max_workers)
        """
        if max_workers < 1:
            raise ValueError("max_workers must be ≥ 1")
        self.max_workers = max_workers
        self.max_concurrent = max_concurrent or max_workers
        self._executor = ThreadPoolExecutor(max_workers=max_workers) if max_workers > 1 else None
        self._semaphore = threading.Semaphore(self.max_concurrent)

        logger.debug(
            f"Initialized BoundedExecutor: {max_workers} workers, "
            f"{self.max_concurrent} max concurrent",
            extra={"max_workers": max_workers, "max_concurrent": self.max_concurrent},
        )

    def submit(self, fn: Callable[..., T], *args: Any, **kwargs: Any) -> Future[T]:
        """
        Submit a task with concurrency limiting.

        Acquires semaphore before submission, releases after completion.
        """
        if self._executor is None:
            future: Future[T] = Future()
            try:
                future.set_result(fn(*args, **kwargs))
            except Exception as e:
                future.set_exception(e)
            return future

        def wrapped() -> T:
            try:
                return fn(*args, **kwargs)
            finally:
                self._semaphore.release()

        self._semaphore.acquire()
        return self._executor.submit(wrapped)

    def map(self, fn: Callable[[T], R], iterable: Iterable[T]) -> list[R]:
        """
        Map function over iterable with concurrency limiting.

        Results are returned in input order. The first failure (in input order)
        is re-raised after pending tasks are cancelled.
        """
        items = list(iterable)
        futures = [self.submit(fn, item) for item in items]

        results: list[R] = []
        for idx, future in enumerate(futures):
            try:
                results.append(future.result())
            except Exception as e:
                logger.error(
                    f"Task failed for item at index {idx}: {e}",
                    extra={"index": idx},
                )
                for remaining in futures[idx + 1 :]:
                    remaining.cancel()
                raise
        return results

    def shutdown(self, wait: bool = True) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=wait, cancel_futures=not wait)

    def __enter__(self) -> "BoundedExecutor":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.shutdown(wait=True)
        return False
