"""Worker-pool helpers shared by the parallel kernels.

Kernels are numba functions compiled with ``nogil=True``; a plain thread pool
runs one kernel call per worker so the calls execute concurrently.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

ENV_WORKERS = "PLMSS_WORKERS"


def default_workers():
    value = os.environ.get(ENV_WORKERS)
    if value:
        return resolve_workers(int(value))
    return os.cpu_count() or 1


def resolve_workers(workers=None):
    if workers is None:
        return default_workers()
    workers = int(workers)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return workers


def split_range(n, workers):
    """Even contiguous split of ``range(n)``; returns ``workers + 1`` bounds."""
    return (np.arange(workers + 1, dtype=np.int64) * n) // workers


def run_workers(fn, arg_lists):
    """Call ``fn(*args)`` for each entry of `arg_lists`, one thread each.

    Returns the results in submission order. A single job runs inline.
    """
    if len(arg_lists) == 1:
        return [fn(*arg_lists[0])]
    with ThreadPoolExecutor(max_workers=len(arg_lists)) as pool:
        futures = [pool.submit(fn, *args) for args in arg_lists]
        return [f.result() for f in futures]
