"""Deterministic chunked fan-out for simulation replicates.

Replicates are processed in fixed-size chunks; chunk ``k`` always uses the
substream keyed by ``k`` regardless of worker count, and per-chunk results are
combined by order-independent reduction (integer count sums), so output is
bit-identical for any number of workers.
"""

import os
from concurrent.futures import ProcessPoolExecutor

CHUNK_SIZE = 1024


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("GONOGO_WORKERS", "1")))
    except ValueError:
        return 1


def chunk_plan(n_sims: int, chunk_size: int = CHUNK_SIZE):
    """(chunk_index, start, size) triples covering n_sims replicates."""
    plan = []
    start = 0
    idx = 0
    while start < n_sims:
        size = min(chunk_size, n_sims - start)
        plan.append((idx, start, size))
        start += size
        idx += 1
    return plan


def run_chunks(fn, n_sims: int, workers: int = 1, chunk_size: int = CHUNK_SIZE):
    """Apply ``fn(chunk_index, size)`` over all chunks and return the results
    in chunk order.  ``fn`` must be picklable when workers > 1."""
    plan = chunk_plan(n_sims, chunk_size)
    if workers <= 1 or len(plan) <= 1:
        return [fn(idx, size) for idx, _, size in plan]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, idx, size) for idx, _, size in plan]
        return [f.result() for f in futures]
