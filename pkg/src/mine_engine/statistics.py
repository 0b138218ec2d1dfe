"""MINE statistics, Pearson correlation and the non-linearity index.

The reductions work on a single ``CharacteristicMatrix`` or, through the
``*_batch`` helpers, on a stack of matrices ``(P, X, Y)``; both routes run
the same numpy reductions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charmatrix import (
    CharacteristicMatrix,
    Parameters,
    VariableAxis,
    check_pair,
    compute_score,
)

__all__ = [
    "MineStatistics",
    "mic",
    "mas",
    "mev",
    "mcn",
    "pearson",
    "nonlinearity",
    "mine_statistics",
    "statistics_from_matrix",
]


@dataclass(frozen=True)
class MineStatistics:
    mic: float
    mas: float
    mev: float
    mcn: float
    pearson_r: float
    nonlinearity: float

    def as_tuple(self) -> tuple[float, ...]:
        return (self.mic, self.mas, self.mev, self.mcn, self.pearson_r, self.nonlinearity)


def mic_batch(M: np.ndarray) -> np.ndarray:
    return np.nanmax(M, axis=(1, 2))


def mas_batch(M: np.ndarray) -> np.ndarray:
    return np.nanmax(np.abs(M - M.transpose(0, 2, 1)), axis=(1, 2))


def mev_batch(M: np.ndarray) -> np.ndarray:
    return np.maximum(np.nanmax(M[:, 2, :], axis=1), np.nanmax(M[:, :, 2], axis=1))


def mcn_batch(M: np.ndarray, top: np.ndarray) -> list[float]:
    size = M.shape[1]
    cells = np.arange(size)[:, None] * np.arange(size)[None, :]
    hit = M == top[:, None, None]
    fewest = np.where(hit, cells[None], np.iinfo(np.int64).max).min(axis=(1, 2))
    return [math.log2(int(v)) for v in fewest]


def mic(m: CharacteristicMatrix) -> float:
    """Largest entry of the matrix."""
    return float(mic_batch(m.values[None])[0])


def mas(m: CharacteristicMatrix) -> float:
    """Largest gap between the entries at transposed grid shapes."""
    return float(mas_batch(m.values[None])[0])


def mev(m: CharacteristicMatrix) -> float:
    """Largest entry on a grid with two rows or two columns."""
    return float(mev_batch(m.values[None])[0])


def mcn(m: CharacteristicMatrix) -> float:
    """``log2`` of the fewest cells among grids whose entry equals MIC exactly."""
    M = m.values[None]
    return mcn_batch(M, mic_batch(M))[0]


def pearson(xs, ys) -> float:
    """Sample correlation; NaN when either variable has zero variance."""
    xs, ys = check_pair(xs, ys)
    return pearson_axes(VariableAxis(xs), VariableAxis(ys))


def pearson_axes(ax: VariableAxis, ay: VariableAxis) -> float:
    # fsum keeps the result independent of batching and summation order
    mx, my = ax.moments(), ay.moments()
    if mx is None or my is None:
        return math.nan
    (dx, sxx), (dy, syy) = mx, my
    r = math.fsum(dx * dy) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def nonlinearity(mic_value: float, r: float) -> float:
    return mic_value - r * r


def batch_statistics(M: np.ndarray, r: list[float]) -> list[MineStatistics]:
    top = mic_batch(M)
    gaps = mas_batch(M)
    edge = mev_batch(M)
    cells = mcn_batch(M, top)
    out = []
    for i, ri in enumerate(r):
        t = float(top[i])
        out.append(MineStatistics(t, float(gaps[i]), float(edge[i]), cells[i], ri, nonlinearity(t, ri)))
    return out


def statistics_from_matrix(m: CharacteristicMatrix, r: float) -> MineStatistics:
    return batch_statistics(m.values[None], [r])[0]


def mine_statistics(xs, ys, params: Parameters | None = None) -> MineStatistics:
    """All six statistics for one pair."""
    m = compute_score(xs, ys, params)
    return statistics_from_matrix(m, pearson(xs, ys))
