import threading
from collections import OrderedDict
from typing import Any, Callable, Dict, Hashable, Optional

import numpy as np


class TableCache:
    """
    Thread-safe LRU store of block lookup tables.

    Keys are ``(basis key, letters)`` pairs; values are read-only numpy arrays shared
    between estimator calls and worker threads.
    """

    def __init__(self, max_size: int = 256):
        """
        Args:
            max_size: Maximum number of tables kept
        """
        self._tables: "OrderedDict[Hashable, np.ndarray]" = OrderedDict()
        self._max_size = max(1, max_size)
        self._hits = 0
        self._misses = 0
        self._evictions = 0
        self._lock = threading.RLock()

    def get(self, key: Hashable) -> Optional[np.ndarray]:
        with self._lock:
            table = self._tables.get(key)
            if table is None:
                self._misses += 1
                return None
            self._hits += 1
            self._tables.move_to_end(key)
            return table

    def store(self, key: Hashable, table: np.ndarray) -> None:
        with self._lock:
            self._tables[key] = table
            self._tables.move_to_end(key)
            while len(self._tables) > self._max_size:
                self._tables.popitem(last=False)
                self._evictions += 1

    def get_or_build(self, key: Hashable, builder: Callable[[], np.ndarray]) -> np.ndarray:
        """Cached table, building it under the lock on a miss."""
        with self._lock:
            table = self.get(key)
            if table is None:
                table = builder()
                self.store(key, table)
            return table

    def clear(self) -> None:
        with self._lock:
            self._tables.clear()
            self._hits = 0
            self._misses = 0
            self._evictions = 0

    def get_statistics(self) -> Dict[str, Any]:
        with self._lock:
            return {
                "hits": self._hits,
                "misses": self._misses,
                "evictions": self._evictions,
                "cache_size": len(self._tables),
                "max_size": self._max_size,
            }

    def __len__(self) -> int:
        return len(self._tables)

    def __contains__(self, key: Hashable) -> bool:
        return key in self._tables
