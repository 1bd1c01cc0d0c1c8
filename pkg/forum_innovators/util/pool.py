"""
Worker pool management
"""

# stdlib
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Iterable, Optional, Sequence


def chunked(items: Sequence, count: int) -> list[Sequence]:
    """Split a sequence into at most count contiguous, nonempty chunks"""
    count = max(1, min(count, len(items)))
    size, extra = divmod(len(items), count)
    chunks, start = [], 0
    for i in range(count):
        stop = start + size + (1 if i < extra else 0)
        chunks.append(items[start:stop])
        start = stop
    return [c for c in chunks if len(c)]


class WorkerPool:
    """Process pool manager that keeps results in submission order

    A pool with a single worker runs tasks inline
    """

    count: int
    _executor: Optional[ProcessPoolExecutor] = None

    def __init__(self, count: int = 1):
        self.count = max(1, count)

    def __enter__(self) -> "WorkerPool":
        if self.count > 1:
            self._executor = ProcessPoolExecutor(max_workers=self.count)
        return self

    def __exit__(self, *exc):
        self.clean()

    def map(self, func: Callable, args: Iterable[tuple]) -> list[Any]:
        """Run func over argument tuples, returning results in order"""
        if self._executor is None:
            return [func(*arg) for arg in args]
        futures = [self._executor.submit(func, *arg) for arg in args]
        return [f.result() for f in futures]

    def clean(self):
        """Shut down the workers once submitted tasks finish"""
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None
