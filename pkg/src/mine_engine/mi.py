"""Entropies, cell counts and the column-placement dynamic program.

Entropies are in nats. Every entropy of an integer-count distribution is
evaluated as ``(T[N] - sum_i T[n_i]) / N`` with ``T[m] = m ln m`` looked up
in a shared table, summing over rows in index order. Keeping one arithmetic
path lets the vectorized DP and the loop-based reference in
``mine_engine.oracle`` agree bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .partition import ColumnPartition, RowPartition, SortedPairs

__all__ = [
    "CellCounts",
    "MiProfile",
    "entropy",
    "nlogn_table",
    "build_cell_counts",
    "optimize_x_axis",
]


def entropy(dist) -> float:
    """Shannon entropy (nats) of non-negative weights, normalized to sum 1."""
    w = np.asarray(dist, dtype=np.float64).ravel()
    if w.size == 0 or np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and non-negative")
    total = w.sum()
    if total <= 0:
        raise ValueError("at least one weight must be positive")
    h = 0.0
    for v in w.tolist():
        if v > 0:
            p = v / total
            h -= p * math.log(p)
    return h


def _nlogn(m: int) -> float:
    return m * math.log(m) if m > 0 else 0.0


@lru_cache(maxsize=8)
def _table(size: int) -> np.ndarray:
    t = np.array([_nlogn(m) for m in range(size)], dtype=np.float64)
    t.flags.writeable = False
    return t


def nlogn_table(n: int) -> np.ndarray:
    """Read-only table ``T[m] = m ln m`` for ``m = 0..n`` (at least)."""
    # round the size up so nearby n share one cached table
    size = 64
    while size <= n:
        size *= 2
    return _table(size)


@dataclass(frozen=True)
class CellCounts:
    """Point counts per (clump, row); ``counts[j, r]`` is 0-based."""

    counts: np.ndarray

    def __post_init__(self):
        if self.counts.ndim != 2 or self.counts.shape[0] < 1 or self.counts.shape[1] < 1:
            raise ValueError("counts must be a non-empty 2-d array")
        if np.any(self.counts < 0):
            raise ValueError("counts must be non-negative")
        if np.any(self.counts.sum(axis=1) == 0):
            raise ValueError("every clump must hold at least one point")

    @property
    def clump_count(self) -> int:
        return self.counts.shape[0]

    @property
    def row_count(self) -> int:
        return self.counts.shape[1]

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.counts, axis=0)


@dataclass(frozen=True)
class MiProfile:
    """Maximal mutual information ``values[l - 2]`` for ``l = 2..x``."""

    values: np.ndarray
    h_q: float

    def __getitem__(self, columns: int) -> float:
        if columns < 2:
            raise IndexError(columns)
        return float(self.values[columns - 2])


def build_cell_counts(
    points: SortedPairs, q: RowPartition, p: ColumnPartition
) -> CellCounts:
    if not (q.assignment.size == p.assignment.size == points.n):
        raise ValueError("partitions are not aligned with the points")
    return CellCounts(cell_counts(q.assignment, q.row_count, p.assignment, p.clump_count))


def cell_counts(q: np.ndarray, rows: int, p: np.ndarray, k: int) -> np.ndarray:
    flat = (p - 1) * rows + (q - 1)
    return np.bincount(flat, minlength=k * rows).reshape(k, rows)


def optimize_x_axis(counts: CellCounts, x: int) -> MiProfile:
    """Best mutual information for every column count ``l = 2..x``.

    Column boundaries may only sit on clump boundaries. ``F[l][t]`` holds
    ``-H(Q|P)`` for the best ``l`` columns over the first ``t`` clumps.
    """
    if x < 2:
        raise ValueError(f"column count must be >= 2, got {x}")
    k = counts.clump_count
    values, hq = optimize_batch(counts.counts[None], np.array([k]), x)
    return MiProfile(values[0], float(hq[0]))


# upper bound on P * (K + 1)**2 per vectorized block
_BLOCK_CELLS = 1 << 20


def optimize_batch(
    counts: np.ndarray, k: np.ndarray, x: int
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``optimize_x_axis`` over a stack of problems.

    ``counts`` has shape ``(P, K, R)``; problem ``i`` uses its first ``k[i]``
    clumps, the rest must be zero padding. Returns ``(P, x - 1)`` mutual
    information values and the ``(P,)`` row entropies.
    """
    P = counts.shape[0]
    values = np.empty((P, x - 1))
    hq = np.empty(P)
    start = 0
    while start < P:
        stop = start + 1
        kmax = int(k[start])
        while stop < P:
            km = max(kmax, int(k[stop]))
            if (stop + 1 - start) * (km + 1) ** 2 > _BLOCK_CELLS:
                break
            kmax = km
            stop += 1
        values[start:stop], hq[start:stop] = _optimize_block(
            counts[start:stop, :kmax], k[start:stop], x
        )
        start = stop
    return values, hq


def _optimize_block(counts, k, x):
    P, K, rows = counts.shape
    cum = np.zeros((P, K + 1, rows), dtype=np.int64)
    np.cumsum(counts, axis=1, out=cum[:, 1:])
    c = cum.sum(axis=2)
    n = c[:, -1]
    T = nlogn_table(int(n.max()))
    Tc = T[c]
    cf = c.astype(np.float64)

    row_tot = cum[:, -1]
    acc = 0.0
    for r in range(rows):
        acc = acc + T[row_tot[:, r]]
    hq = (T[n] - acc) / n

    out = np.zeros((P, x - 1))
    if K == 1:
        return out, hq

    pair = np.arange(P)
    single = k == 1
    s_idx = np.arange(K + 1)
    lmax = min(x, K)

    if lmax >= 3:
        # full tables over (s, t) for the layers that feed later ones;
        # sd[i, s, t] = sum_r T[cum[t, r] - cum[s, r]], used for s < t only
        sd = None
        for r in range(rows):
            d = cum[:, None, :, r] - cum[:, :, None, r]
            np.maximum(d, 0, out=d)
            sd = T[d] if sd is None else sd + T[d]
        sa = sd[:, 0, :]  # sum_r T[cum[s, r]]
        width = c[:, None, :] - c[:, :, None]  # c_t - c_s
        valid = width > 0
        safe_width = np.where(valid, width, 1)
        Tw = T[safe_width]
        h_col = (Tw - sd) / safe_width
        ct = np.maximum(cf, 1.0)[:, None, :]  # c_0 = 0 only meets masked cells
        ratio_s = cf[:, :, None] / ct
        ratio_w = width / ct
        s_col = s_idx[None, :, None]
    else:
        sa = None
        for r in range(rows):
            t = T[cum[:, :, r]]
            sa = t if sa is None else sa + t

    # gathered quantities at t = k, the full clump range of each problem
    kk = np.maximum(k, 1)
    cum_k = cum[pair, kk]
    sd_k = None
    for r in range(rows):
        d = np.maximum(cum_k[:, None, r] - cum[:, :, r], 0)
        sd_k = T[d] if sd_k is None else sd_k + T[d]
    c_k = c[pair, kk]
    width_k = c_k[:, None] - c
    valid_k = width_k > 0
    safe_k = np.where(valid_k, width_k, 1)
    Tw_k = T[safe_k]
    ct_k = cf[pair, kk][:, None]
    Tc_k = Tc[pair, kk][:, None]

    # two columns: boundary after clump s, 1 <= s < t
    if lmax >= 3:
        hp3 = (Tc[:, None, :] - Tc[:, :, None] - Tw) / ct
        hp3q = (Tc[:, None, :] - sa[:, :, None] - sd) / ct
        cand = np.where(valid & (s_col >= 1), hp3 - hp3q, -np.inf)
        f = cand.max(axis=1)  # f[i, t], -inf where t < 2
        f2 = f[pair, kk]
    else:
        hp3 = (Tc_k - Tc - Tw_k) / ct_k
        hp3q = (Tc_k - sa - sd_k) / ct_k
        f2 = np.where(valid_k & (s_idx >= 1), hp3 - hp3q, -np.inf).max(axis=1)
    out[:, 0] = np.where(single, 0.0, hq + f2)

    for l in range(3, lmax + 1):
        if l < lmax:
            with np.errstate(invalid="ignore"):
                cand = ratio_s * f[:, :, None] - ratio_w * h_col
            cand = np.where(valid & (s_col >= l - 1), cand, -np.inf)
            f = cand.max(axis=1)
            best = f[pair, kk]
        else:
            h_col_k = (Tw_k - sd_k) / safe_k
            with np.errstate(invalid="ignore"):
                cand = (cf / ct_k) * f - (width_k / ct_k) * h_col_k
            best = np.where(valid_k & (s_idx >= l - 1), cand, -np.inf).max(axis=1)
        out[:, l - 2] = np.where(l <= k, hq + best, out[:, l - 3])
    for l in range(max(lmax, 2) + 1, x + 1):
        out[:, l - 2] = out[:, l - 3]
    return out, hq
