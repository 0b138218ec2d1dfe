"""Characteristic matrix of one variable pair."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .mi import optimize_batch
from .partition import equipartition

__all__ = ["Parameters", "CharacteristicMatrix", "grid_bound", "compute_score"]


@dataclass(frozen=True)
class Parameters:
    """Grid resolution ``alpha`` (``B = n**alpha``) and clump budget ``c``."""

    alpha: float = 0.6
    c: float = 15.0

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not (self.c > 0.0 and math.isfinite(self.c)):
            raise ValueError(f"c must be positive, got {self.c}")


def grid_bound(n: int, alpha: float) -> int:
    """Maximum grid size ``B = max(floor(n**alpha), 4)``."""
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    return max(int(math.floor(n**alpha)), 4)


def clump_budget(c: float, columns: int) -> int:
    return max(1, int(math.floor(c * columns)))


@dataclass(frozen=True)
class CharacteristicMatrix:
    """Normalized mutual information for every grid with ``x*y <= B``.

    ``values[x, y]`` holds the entry for ``x`` columns and ``y`` rows; cells
    outside the admissible set are NaN.
    """

    B: int
    values: np.ndarray

    def __getitem__(self, shape: tuple[int, int]) -> float:
        x, y = shape
        if not self.contains(x, y):
            raise KeyError(shape)
        return float(self.values[x, y])

    def contains(self, x: int, y: int) -> bool:
        return x >= 2 and y >= 2 and x * y <= self.B

    def mask(self) -> np.ndarray:
        return ~np.isnan(self.values)

    def shapes(self) -> Iterator[tuple[int, int]]:
        top = self.B // 2
        for x in range(2, top + 1):
            for y in range(2, self.B // x + 1):
                yield x, y

    def items(self) -> Iterator[tuple[tuple[int, int], float]]:
        for x, y in self.shapes():
            yield (x, y), float(self.values[x, y])

    def transpose(self) -> "CharacteristicMatrix":
        return CharacteristicMatrix(self.B, self.values.T.copy())


def check_pair(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.ndim != 1 or ys.ndim != 1:
        raise ValueError("inputs must be 1-d sequences")
    if xs.size != ys.size:
        raise ValueError(f"length mismatch: {xs.size} vs {ys.size}")
    if xs.size < 2:
        raise ValueError(f"need at least 2 samples, got {xs.size}")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise ValueError("inputs must be finite")
    return xs, ys


class VariableAxis:
    """Sort order and row maps of one variable, reusable across pairs.

    Row maps are indexed by original sample position, which makes them
    independent of the partner variable.
    """

    __slots__ = ("values", "order", "sorted", "_rows", "_moments")

    def __init__(self, values: np.ndarray):
        self.values = values
        self.order = np.argsort(values, kind="stable")
        self.sorted = values[self.order]
        self._rows: dict[int, tuple[np.ndarray, int]] = {}
        self._moments = None

    def moments(self) -> tuple[np.ndarray, float] | None:
        """Centered values and their sum of squares; None if constant."""
        if self._moments is None:
            v = self.values
            if self.sorted[0] == self.sorted[-1]:
                self._moments = (None, 0.0)
            else:
                d = v - math.fsum(v) / v.size
                self._moments = (d, math.fsum(d * d))
        d, ss = self._moments
        return None if d is None or ss == 0.0 else (d, ss)

    def rows(self, y: int) -> tuple[np.ndarray, int]:
        got = self._rows.get(y)
        if got is None:
            q_sorted, count = equipartition(self.sorted, y)
            q = np.empty_like(q_sorted)
            q[self.order] = q_sorted
            got = self._rows[y] = (q, count)
        return got

    def nbytes(self) -> int:
        return self.values.nbytes * 2 + self.order.nbytes + sum(
            q.nbytes for q, _ in self._rows.values()
        )


def _clumps_batch(q, new_run, flat_run):
    """Row-wise clump ordinals; a tie run spanning several rows gets its own label."""
    P, n = q.shape
    mixed = np.zeros(P * n, dtype=bool)
    spans = ~new_run[:, 1:] & (q[:, 1:] != q[:, :-1])
    mixed[flat_run[:, 1:][spans]] = True
    labels = np.where(mixed[flat_run], -1 - flat_run, q)
    change = np.ones((P, n), dtype=np.int64)
    change[:, 1:] = labels[:, 1:] != labels[:, :-1]
    p = np.cumsum(change, axis=1)
    return p, p[:, -1].copy()


def _log_table(size: int) -> np.ndarray:
    return np.array([math.log(m) if m > 1 else 1.0 for m in range(size)])


def _pass(cols: Sequence[VariableAxis], rows: Sequence[VariableAxis], B: int, c: float) -> np.ndarray:
    """One orientation for a stack of pairs: rows equipartitioned, columns optimized.

    Returns ``m[i, l, y]``, the normalized score of pair ``i`` for ``l``
    columns and ``y`` rows.
    """
    top = B // 2
    C = np.stack([ax.values for ax in cols])
    R = np.stack([ax.values for ax in rows])
    P, n = C.shape
    # x order with ties broken by the row variable
    order = np.lexsort((R, C), axis=-1)
    a = np.take_along_axis(C, order, axis=1)
    new_run = np.ones((P, n), dtype=bool)
    new_run[:, 1:] = a[:, 1:] != a[:, :-1]
    flat_run = np.cumsum(new_run, axis=1) - 1 + (np.arange(P) * n)[:, None]
    logs = _log_table(top + 1)
    pair = np.arange(P)[:, None]

    out = np.full((P, top + 1, top + 1), np.nan)
    for y in range(2, top + 1):
        xmax = B // y
        maps = [ax.rows(y) for ax in rows]
        q = np.take_along_axis(np.stack([m for m, _ in maps]), order, axis=1)
        yhat = np.array([count for _, count in maps])
        p, k = _clumps_batch(q, new_run, flat_run)
        k_hat = clump_budget(c, xmax)
        for i in np.flatnonzero(k > k_hat):
            p[i], k[i] = equipartition(p[i], k_hat)
        K = int(k.max())
        rmax = int(yhat.max())
        flat = ((pair * K + (p - 1)) * rmax + (q - 1)).ravel()
        counts = np.bincount(flat, minlength=P * K * rmax).reshape(P, K, rmax)
        prof, _ = optimize_batch(counts, k, xmax)
        for l in range(2, xmax + 1):
            lim = np.minimum(l, yhat)
            # exact values lie in [0, 1]; clip the last-ulp rounding overshoot
            norm = np.clip(prof[:, l - 2] / logs[lim], 0.0, 1.0)
            out[:, l, y] = np.where(lim < 2, 0.0, norm)
    return out


def score_axes_batch(
    cols: Sequence[VariableAxis], rows: Sequence[VariableAxis], params: Parameters
) -> tuple[int, np.ndarray]:
    """Characteristic matrices of the pairs ``(cols[i], rows[i])``, stacked."""
    n = cols[0].values.size
    B = grid_bound(n, params.alpha)
    forward = _pass(cols, rows, B, params.c)
    backward = _pass(rows, cols, B, params.c)
    return B, np.fmax(forward, backward.transpose(0, 2, 1))


def score_axes(ax: VariableAxis, ay: VariableAxis, params: Parameters) -> CharacteristicMatrix:
    B, values = score_axes_batch([ax], [ay], params)
    return CharacteristicMatrix(B, values[0])


def compute_score(xs, ys, params: Parameters | None = None) -> CharacteristicMatrix:
    """Characteristic matrix of the pair ``(xs, ys)``.

    Each cell is the larger of the two orientations: rows on ``ys`` with
    columns optimized over ``xs``, and the transposed problem.
    """
    xs, ys = check_pair(xs, ys)
    return score_axes(VariableAxis(xs), VariableAxis(ys), params or Parameters())
