"""Partitioned subset enumeration over colex rank ranges.

The number of worker processes comes from the ``STOPRED_WORKERS`` environment
variable and defaults to the number of available CPUs.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from math import comb

from . import _kernels

WORKERS_ENV = "STOPRED_WORKERS"
_MIN_CHUNK = 200_000


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        n = int(raw)
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be a positive integer")
        return n
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # pragma: no cover
        return os.cpu_count() or 1


def rank_ranges(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total)) if total else 1
    step, extra = divmod(total, parts)
    out, lo = [], 0
    for i in range(parts):
        hi = lo + step + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def _run(args):
    mode, pcols, n, sig, lo, hi, limit = args
    table = _kernels.binomial_table(n, sig)
    return _kernels.count_range(mode, pcols, n, sig, lo, hi, table, limit)


def count_failures(mode: int, pcols, n: int, sig: int, limit: int = 0,
                   want_first: bool = False, workers: int | None = None, ranges=None):
    """Count sigma-subsets failing the kernel test in ``mode``.

    ``ranges`` overrides the partition of [0, C(n, sig)); results are merged by
    addition, so any partition gives the same total.  With ``want_first`` the
    colex rank of the first failure (or None) is returned instead.
    """
    total = comb(n, sig)
    workers = worker_count() if workers is None else workers
    if ranges is None:
        parts = workers if total >= _MIN_CHUNK * workers else 1
        ranges = rank_ranges(total, parts * (4 if parts > 1 else 1))
    jobs = [(mode, pcols, n, sig, lo, hi, limit) for lo, hi in ranges]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run, jobs))
    else:
        results = []
        for j in jobs:
            results.append(_run(j))
            if want_first and results[-1][1] >= 0:
                break
    if want_first:
        firsts = [int(f) for _, f in results if f >= 0]
        return min(firsts) if firsts else None
    count = sum(int(c) for c, _ in results)
    return min(count, limit) if limit > 0 else count
