"""Batch driver: expand a task into pairs and score them, optionally in parallel.

Pairs are scored in chunks. Each chunk is vectorized through
``score_axes_batch``; chunks are farmed out to worker processes with a
bounded number in flight and consumed strictly in submission order, so the
output sequence never depends on the worker count and memory stays flat
however many pairs there are.
"""
from __future__ import annotations

import itertools
import multiprocessing as mp
import os
from collections import OrderedDict, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

import numpy as np

from .charmatrix import Parameters, VariableAxis, grid_bound, score_axes_batch
from .statistics import MineStatistics, batch_statistics, pearson_axes

__all__ = [
    "Dataset",
    "AllPairs",
    "MasterVsAll",
    "SinglePair",
    "AnalysisTask",
    "ResultRecord",
    "expand_pairs",
    "pair_count",
    "filter_low_variance",
    "iter_analysis",
    "run_analysis",
]


@dataclass(frozen=True)
class Dataset:
    """``p`` named variables observed on the same ``n`` samples (``values`` is p x n)."""

    names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        if self.values.ndim != 2:
            raise ValueError("values must be a 2-d array (variables x samples)")
        p, n = self.values.shape
        if p < 1:
            raise ValueError("dataset has no variables")
        if n < 2:
            raise ValueError(f"need at least 2 samples, got {n}")
        if len(self.names) != p:
            raise ValueError(f"{len(self.names)} names for {p} variables")
        if len(set(self.names)) != p:
            raise ValueError("variable names must be unique")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")

    @classmethod
    def from_rows(cls, names: Iterable[str], rows) -> "Dataset":
        values = np.asarray(rows, dtype=np.float64)
        return cls(tuple(unique_names(names)), values)

    @property
    def p(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]


def unique_names(names: Iterable[str]) -> list[str]:
    """Suffix repeated names with ``.1``, ``.2``, ... in order of appearance."""
    seen: dict[str, int] = {}
    taken = set()
    out = []
    names = list(names)
    taken.update(names)
    for name in names:
        if name in seen:
            k = seen[name]
            while f"{name}.{k}" in taken:
                k += 1
            seen[name] = k + 1
            new = f"{name}.{k}"
            taken.add(new)
            out.append(new)
        else:
            seen[name] = 1
            out.append(name)
    return out


@dataclass(frozen=True)
class AllPairs:
    pass


@dataclass(frozen=True)
class MasterVsAll:
    index: int


@dataclass(frozen=True)
class SinglePair:
    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("a pair needs two distinct variables")


Mode = Union[AllPairs, MasterVsAll, SinglePair]


@dataclass(frozen=True)
class AnalysisTask:
    """What to score; variable indices are 1-based."""

    mode: Mode = field(default_factory=AllPairs)
    params: Parameters = field(default_factory=Parameters)
    workers: int = 1
    min_variance: float | None = None
    chunk_size: int = 64

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        if self.min_variance is not None and not self.min_variance >= 0:
            raise ValueError("min_variance must be >= 0")


@dataclass(frozen=True)
class ResultRecord:
    index_x: int
    index_y: int
    name_x: str
    name_y: str
    stats: MineStatistics


def _mode(task) -> Mode:
    return task.mode if isinstance(task, AnalysisTask) else task


def _check_index(i: int, p: int):
    if not 1 <= i <= p:
        raise ValueError(f"variable index {i} out of range 1..{p}")


def expand_pairs(task, p: int) -> Iterator[tuple[int, int]]:
    """1-based index pairs to score, in output order."""
    mode = _mode(task)
    if isinstance(mode, AllPairs):
        return ((i, j) for i in range(1, p + 1) for j in range(i + 1, p + 1))
    if isinstance(mode, MasterVsAll):
        _check_index(mode.index, p)
        m = mode.index
        return ((m, j) for j in range(1, p + 1) if j != m)
    if isinstance(mode, SinglePair):
        _check_index(mode.i, p)
        _check_index(mode.j, p)
        return iter([(mode.i, mode.j)])
    raise TypeError(f"unknown analysis mode {mode!r}")


def pair_count(task, p: int) -> int:
    mode = _mode(task)
    if isinstance(mode, AllPairs):
        return p * (p - 1) // 2
    if isinstance(mode, MasterVsAll):
        return p - 1
    return 1


def sample_variances(dataset: Dataset) -> np.ndarray:
    return np.var(dataset.values, axis=1, ddof=1)


def filter_low_variance(dataset: Dataset, threshold: float) -> Dataset:
    """Drop variables whose sample variance is below ``threshold``."""
    if not threshold >= 0:
        raise ValueError("threshold must be >= 0")
    keep = sample_variances(dataset) >= threshold
    if not keep.any():
        raise ValueError(f"no variable has variance >= {threshold}")
    names = tuple(nm for nm, k in zip(dataset.names, keep) if k)
    return Dataset(names, dataset.values[keep])


class _AxisCache:
    """LRU of per-variable sort orders and row maps under a byte budget."""

    def __init__(self, values: np.ndarray, params: Parameters, budget: int = 16 << 20):
        self.values = values
        p, n = values.shape
        top = grid_bound(n, params.alpha) // 2
        per_axis = n * 8 * (4 + top) + 512
        self.limit = max(4, budget // per_axis)
        self._lru: OrderedDict[int, VariableAxis] = OrderedDict()

    def __call__(self, i: int) -> VariableAxis:
        ax = self._lru.get(i)
        if ax is None:
            ax = self._lru[i] = VariableAxis(self.values[i])
            if len(self._lru) > self.limit:
                self._lru.popitem(last=False)
        else:
            self._lru.move_to_end(i)
        return ax


def _score_chunk(axis: _AxisCache, params: Parameters, pairs) -> list[MineStatistics]:
    cols = [axis(i) for i, _ in pairs]
    rows = [axis(j) for _, j in pairs]
    _, M = score_axes_batch(cols, rows, params)
    r = [pearson_axes(a, b) for a, b in zip(cols, rows)]
    return batch_statistics(M, r)


_worker: tuple[_AxisCache, Parameters] | None = None


def _init_worker(values: np.ndarray, params: Parameters):
    global _worker
    _worker = (_AxisCache(values, params), params)


def _work(pairs) -> list[MineStatistics]:
    axis, params = _worker
    return _score_chunk(axis, params, pairs)


def _chunks(it: Iterator, size: int) -> Iterator[list]:
    while True:
        chunk = list(itertools.islice(it, size))
        if not chunk:
            return
        yield chunk


def _selected_pairs(dataset: Dataset, task: AnalysisTask) -> Iterator[tuple[int, int]]:
    pairs = expand_pairs(task, dataset.p)
    if task.min_variance is None:
        return pairs
    keep = sample_variances(dataset) >= task.min_variance
    mode = task.mode
    for i in (
        [mode.index] if isinstance(mode, MasterVsAll)
        else [mode.i, mode.j] if isinstance(mode, SinglePair) else []
    ):
        if not keep[i - 1]:
            raise ValueError(f"variable {i} is removed by the variance filter")
    return ((i, j) for i, j in pairs if keep[i - 1] and keep[j - 1])


def iter_analysis(dataset: Dataset, task: AnalysisTask) -> Iterator[ResultRecord]:
    """Score every selected pair lazily, in ``expand_pairs`` order.

    With a variance filter, pairs touching a filtered variable are skipped;
    indices in the records always refer to ``dataset``.
    """
    pairs = _selected_pairs(dataset, task)
    chunks = (
        (chunk, [(i - 1, j - 1) for i, j in chunk])
        for chunk in _chunks(pairs, task.chunk_size)
    )
    names = dataset.names

    def emit(chunk, stats):
        for (i, j), s in zip(chunk, stats):
            yield ResultRecord(i, j, names[i - 1], names[j - 1], s)

    if task.workers == 1:
        axis = _AxisCache(dataset.values, task.params)
        for chunk, zero_based in chunks:
            yield from emit(chunk, _score_chunk(axis, task.params, zero_based))
        return

    ctx = mp.get_context("fork" if "fork" in mp.get_all_start_methods() else "spawn")
    window = 4 * task.workers
    with ProcessPoolExecutor(
        task.workers, mp_context=ctx, initializer=_init_worker,
        initargs=(dataset.values, task.params),
    ) as pool:
        pending: deque = deque()
        for chunk, zero_based in chunks:
            pending.append((chunk, pool.submit(_work, zero_based)))
            if len(pending) >= window:
                done, fut = pending.popleft()
                yield from emit(done, fut.result())
        while pending:
            done, fut = pending.popleft()
            yield from emit(done, fut.result())


def run_analysis(dataset: Dataset, task: AnalysisTask) -> list[ResultRecord]:
    return list(iter_analysis(dataset, task))


def default_workers() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1
