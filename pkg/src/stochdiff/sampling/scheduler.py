"""
Sample Scheduler - runs independent sample solves on a bounded worker pool

Tasks are identified by (level, index). Each task runs in a worker thread via
asyncio.to_thread; an asyncio.Semaphore caps how many run at once. Results come
back in task order whatever order the workers finish in, so reductions done
afterwards are identical for every worker count.
"""

from __future__ import annotations

import asyncio
import logging
import os
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Generic, TypeVar

from stochdiff.errors import SampleFailureError

logger = logging.getLogger(__name__)

T = TypeVar("T")

WORKERS_ENV = "STOCHDIFF_WORKERS"


def resolve_workers(requested: int | None = None) -> int:
    """
    Worker count: the STOCHDIFF_WORKERS environment variable wins, then the
    requested count, then the CPU count.
    """
    env_value = os.environ.get(WORKERS_ENV)
    if env_value:
        try:
            workers = int(env_value)
        except ValueError as e:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {env_value!r}") from e
    elif requested is not None:
        workers = requested
    else:
        workers = os.cpu_count() or 1
    if workers < 1:
        raise ValueError(f"Worker count must be at least 1, got {workers}")
    return workers


@dataclass
class SampleTask(Generic[T]):
    """One unit of estimator work"""

    level: int
    index: int
    run: Callable[[], T]
    elapsed: float = field(default=0.0, init=False)


class SampleScheduler:
    """
    Executes sample tasks concurrently with deterministic result order.
    """

    def __init__(self, workers: int | None = None) -> None:
        """
        Initialize the scheduler.

        Args:
            workers: Maximum concurrent tasks; see resolve_workers
        """
        self.workers = resolve_workers(workers)
        self.completed = 0

    async def run(self, tasks: Sequence[SampleTask[T]]) -> list[T]:
        """
        Run all tasks and return their results in task order.

        Raises:
            SampleFailureError: for the first failed task in task order, chained
                to the original exception
        """
        if not tasks:
            return []

        semaphore = asyncio.Semaphore(self.workers)

        async def execute(task: SampleTask[T]) -> T:
            async with semaphore:
                started = time.perf_counter()
                try:
                    return await asyncio.to_thread(task.run)
                finally:
                    task.elapsed = time.perf_counter() - started

        logger.debug(f"Scheduling {len(tasks)} sample tasks on {self.workers} workers")
        outcomes = await asyncio.gather(*(execute(task) for task in tasks), return_exceptions=True)

        results: list[T] = []
        for task, outcome in zip(tasks, outcomes, strict=True):
            if isinstance(outcome, BaseException):
                logger.error(f"Sample (level={task.level}, index={task.index}) failed: {outcome}", exc_info=outcome)
                raise SampleFailureError(task.level, task.index, str(outcome)) from outcome
            results.append(outcome)
        self.completed += len(results)
        return results

    def run_sync(self, tasks: Sequence[SampleTask[T]]) -> list[T]:
        """
        Blocking wrapper around run() for synchronous callers.

        Inside a running event loop the tasks get their own loop on a helper
        thread; the calling loop is blocked until they finish.
        """
        try:
            asyncio.get_running_loop()
        except RuntimeError:
            return asyncio.run(self.run(tasks))
        logger.debug("Event loop already running, scheduling samples on a helper thread")
        with ThreadPoolExecutor(max_workers=1, thread_name_prefix="stochdiff-samples") as helper:
            return helper.submit(asyncio.run, self.run(tasks)).result()


def run_samples(tasks: Sequence[SampleTask[T]], workers: int | None = None) -> list[T]:
    """Run tasks on a fresh scheduler and return results in task order"""
    return SampleScheduler(workers).run_sync(tasks)
