"""Timing and memoization helpers."""

import functools
import logging
import threading
import time
from collections import OrderedDict
from typing import Any, Callable, Hashable, Optional

logger = logging.getLogger(__name__)


def measure_time(func: Callable) -> Callable:
    """Decorator logging the wall time of each call at DEBUG level."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        try:
            return func(*args, **kwargs)
        finally:
            elapsed = time.perf_counter() - start
            logger.debug(f"{func.__qualname__} took {elapsed:.3f}s")

    return wrapper


def memoize(key: Callable[..., Hashable], maxsize: int = 512):
    """Decorator caching results under an explicit key, thread-safe.

    Unlike ``functools.lru_cache`` the key is computed by ``key`` from the
    call arguments, so unhashable inputs (arrays, models) can be reduced to
    a digest.

    Args:
        key: Function mapping the call arguments to a hashable cache key
        maxsize: Entries kept before the least recently used is evicted
    """

    def decorator(func: Callable) -> Callable:
        cache: "OrderedDict[Hashable, Any]" = OrderedDict()
        lock = threading.Lock()
        stats = {"hits": 0, "misses": 0}

        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            cache_key = key(*args, **kwargs)
            with lock:
                if cache_key in cache:
                    cache.move_to_end(cache_key)
                    stats["hits"] += 1
                    logger.debug(f"Cache hit for {func.__name__}")
                    return cache[cache_key]
                stats["misses"] += 1

            result = func(*args, **kwargs)

            with lock:
                cache[cache_key] = result
                cache.move_to_end(cache_key)
                while len(cache) > maxsize:
                    cache.popitem(last=False)
            return result

        def cache_clear() -> None:
            with lock:
                cache.clear()
                stats["hits"] = stats["misses"] = 0

        def cache_info() -> dict:
            with lock:
                return {"size": len(cache), "maxsize": maxsize, **stats}

        wrapper.cache_clear = cache_clear
        wrapper.cache_info = cache_info
        return wrapper

    return decorator


class Stopwatch:
    """Context manager recording elapsed wall time in ``elapsed``."""

    def __init__(self, label: Optional[str] = None):
        self.label = label
        self.elapsed = 0.0
        self._start = 0.0

    def __enter__(self):
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.elapsed = time.perf_counter() - self._start
        if self.label:
            logger.debug(f"{self.label} took {self.elapsed:.3f}s")
        return False
