#!/usr/bin/env python3
"""
Sweep executor for independent parameter points.

Points are evaluated serially or on a thread pool; results always come back
in input order, so the assembled output does not depend on the worker count.
numpy releases the GIL inside its dense kernels, which is where the time goes.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from mixedness.errors import ConfigError

logger = logging.getLogger(__name__)

WORKERS_ENV = "MIXEDNESS_WORKERS"

P = TypeVar("P")
R = TypeVar("R")


def workers_from_env(default: int = 1) -> int:
    """
    Worker count from MIXEDNESS_WORKERS.

    Raises:
        ConfigError: If the variable is set but not a positive integer.
    """
    raw = os.getenv(WORKERS_ENV)
    if raw is None or not raw.strip():
        return default
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"expected a positive integer, got {raw!r}", field=WORKERS_ENV)
    if workers < 1:
        raise ConfigError(f"expected a positive integer, got {workers}", field=WORKERS_ENV)
    return workers


class SweepExecutor:
    """Evaluates a function over sweep points with ordered results."""

    def __init__(self, workers: Optional[int] = None):
        """
        Initialize executor.

        Args:
            workers: Thread count; None reads MIXEDNESS_WORKERS (default 1 = serial)
        """
        self.workers = workers if workers is not None else workers_from_env()
        if self.workers < 1:
            raise ConfigError(f"worker count must be positive, got {self.workers}", field="workers")

    def map(self, fn: Callable[[P], R], points: Iterable[P]) -> List[R]:
        """
        Apply fn to every point.

        The first exception raised by any point propagates to the caller.

        Returns:
            Results in the order of ``points``
        """
        points = list(points)
        if self.workers == 1 or len(points) < 2:
            return [fn(point) for point in points]
        logger.debug(f"sweeping {len(points)} points on {self.workers} threads")
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, points))
