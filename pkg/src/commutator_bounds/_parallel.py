"""Deterministic seed splitting and ordered parallel mapping.

Task streams are Philox generators keyed on (seed, *path); because the
generator is counter-based and the key never involves the worker that runs
the task, results are identical for any worker count, and byte-identical for
a fixed seed.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def task_rng(seed: int, *path: int) -> np.random.Generator:
    """Independent counter-based stream for the task addressed by ``path``."""
    entropy = (int(seed),) + tuple(int(p) for p in path)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def map_ordered(fn: Callable[[T], R], tasks: Sequence[T], workers: int) -> list[R]:
    """Map ``fn`` over ``tasks``, returning results in task order.

    Uses a process pool when ``workers`` > 1; ``fn`` and the task payloads
    must then be picklable.
    """
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


def pairwise_reduce(items: Iterable[T], combine: Callable[[T, T], T]) -> T:
    """Reduce by pairing neighbours level by level; deterministic for ordered input."""
    level = list(items)
    if not level:
        raise ValueError("cannot reduce an empty sequence")
    while len(level) > 1:
        nxt = [combine(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0]
