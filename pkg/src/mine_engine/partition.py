"""Axis partitions that seed the grid search.

The y-axis is cut into rows of near-equal mass (``equipartition_y_axis``);
the x-axis is cut into clumps (``get_clumps_partition``), optionally merged
into at most ``k_hat`` superclumps (``get_superclumps_partition``).

All ordinals produced here are 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "SortedPairs",
    "RowPartition",
    "ColumnPartition",
    "equipartition_y_axis",
    "get_clumps_partition",
    "get_superclumps_partition",
]


@dataclass(frozen=True)
class SortedPairs:
    """A point set ordered by one coordinate.

    Ties on the sort coordinate are broken by the other coordinate, so the
    order is total and reproducible.
    """

    a: np.ndarray
    b: np.ndarray
    sort_key: str = "first"

    def __post_init__(self):
        if self.a.shape != self.b.shape or self.a.ndim != 1:
            raise ValueError("coordinates must be 1-d arrays of equal length")
        if self.a.size < 2:
            raise ValueError("at least two points are required")
        if self.sort_key not in ("first", "second"):
            raise ValueError(f"unknown sort key {self.sort_key!r}")

    @classmethod
    def from_arrays(cls, a, b, sort_key: str = "first") -> "SortedPairs":
        a = np.asarray(a, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        if a.shape != b.shape:
            raise ValueError("coordinates must have equal length")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("coordinates must be finite")
        if sort_key == "first":
            order = np.lexsort((b, a))
        elif sort_key == "second":
            order = np.lexsort((a, b))
        else:
            raise ValueError(f"unknown sort key {sort_key!r}")
        return cls(a[order], b[order], sort_key)

    @property
    def n(self) -> int:
        return self.a.size

    def resort(self, sort_key: str) -> "SortedPairs":
        return SortedPairs.from_arrays(self.a, self.b, sort_key)


@dataclass(frozen=True)
class RowPartition:
    assignment: np.ndarray
    row_count: int


@dataclass(frozen=True)
class ColumnPartition:
    assignment: np.ndarray
    clump_count: int

    @cached_property
    def boundaries(self) -> np.ndarray:
        """Cumulative point counts ``c_0 = 0 < c_1 < ... < c_k = n``."""
        sizes = np.bincount(self.assignment - 1, minlength=self.clump_count)
        return np.concatenate(([0], np.cumsum(sizes)))


def run_lengths(values: np.ndarray) -> np.ndarray:
    """Lengths of the maximal runs of equal consecutive values."""
    n = values.size
    starts = np.flatnonzero(values[1:] != values[:-1]) + 1
    return np.diff(np.concatenate(([0], starts, [n])))


def equipartition(values: np.ndarray, y: int) -> tuple[np.ndarray, int]:
    """Greedy equipartition of sorted ``values`` into at most ``y`` rows.

    Returns the 1-based row of every point and the realized row count.
    """
    n = values.size
    runs = run_lengths(values).tolist()
    labels = []
    desired = n / y
    row = 1
    h = 0
    i = 0
    for s in runs:
        if h != 0 and abs(h + s - desired) >= abs(h - desired):
            row += 1
            h = 0
            desired = (n - i) / (y - row + 1)
        labels.append(row)
        h += s
        i += s
    return np.repeat(np.asarray(labels, dtype=np.int64), runs), row


def clumps(a: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, int]:
    """Clump ordinals for x-sorted ``a`` given row labels ``q`` in that order."""
    lengths = run_lengths(a)
    starts = np.concatenate(([0], np.cumsum(lengths)[:-1]))
    mixed = (lengths > 1) & (
        np.maximum.reduceat(q, starts) != np.minimum.reduceat(q, starts)
    )
    labels = np.repeat(q[starts], lengths)
    if mixed.any():
        # one fresh negative label per tie run that spans several rows
        fresh = -np.cumsum(mixed)
        labels = np.where(np.repeat(mixed, lengths), np.repeat(fresh, lengths), labels)
    changes = np.empty(a.size, dtype=np.int64)
    changes[0] = 1
    changes[1:] = labels[1:] != labels[:-1]
    p = np.cumsum(changes)
    return p, int(p[-1])


def superclumps(a: np.ndarray, q: np.ndarray, k_hat: int) -> tuple[np.ndarray, int]:
    p, k = clumps(a, q)
    if k > k_hat:
        return equipartition(p, k_hat)
    return p, k


def equipartition_y_axis(points: SortedPairs, y: int) -> RowPartition:
    if y < 2:
        raise ValueError(f"row count must be >= 2, got {y}")
    if points.sort_key != "second":
        raise ValueError("points must be sorted by the second coordinate")
    q, rows = equipartition(points.b, y)
    return RowPartition(q, rows)


def _check_aligned(points: SortedPairs, q: RowPartition):
    if points.sort_key != "first":
        raise ValueError("points must be sorted by the first coordinate")
    if q.assignment.shape != points.a.shape:
        raise ValueError(
            f"row map has {q.assignment.size} entries for {points.n} points"
        )


def get_clumps_partition(points: SortedPairs, q: RowPartition) -> ColumnPartition:
    """Clumps of x-consecutive points; equal-x points never split.

    ``q`` must already be aligned with the x-sorted order of ``points``.
    """
    _check_aligned(points, q)
    p, k = clumps(points.a, q.assignment)
    return ColumnPartition(p, k)


def get_superclumps_partition(
    points: SortedPairs, q: RowPartition, k_hat: int
) -> ColumnPartition:
    if k_hat < 1:
        raise ValueError(f"k_hat must be >= 1, got {k_hat}")
    _check_aligned(points, q)
    p, k = superclumps(points.a, q.assignment, k_hat)
    return ColumnPartition(p, k)


def row_partition_in_x_order(points: SortedPairs, y: int) -> RowPartition:
    """Equipartition the y-axis of ``points`` (x-sorted) and re-index to x order."""
    order_y = np.lexsort((points.a, points.b))
    q_y, rows = equipartition(points.b[order_y], y)
    q = np.empty_like(q_y)
    q[order_y] = q_y
    return RowPartition(q, rows)
