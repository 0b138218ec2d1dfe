"""Slow reference implementations used to check the optimized engine.

``brute_force_max_mi`` enumerates every placement of column boundaries and
evaluates mutual information from probabilities; it shares no code with the
dynamic program. ``reference_statistics`` recomposes the whole pipeline with
plain Python loops, recomputing every entropy where it is needed instead of
caching tables; it must agree with the optimized path bit for bit.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .charmatrix import Parameters, check_pair
from .mi import CellCounts
from .statistics import MineStatistics, nonlinearity, pearson

__all__ = ["OracleResult", "brute_force_max_mi", "reference_statistics"]

MAX_CLUMPS = 14
MAX_COLUMNS = 7


@dataclass(frozen=True)
class OracleResult:
    values: dict[int, float]
    enumerated: int


def _mutual_information(table: list[list[int]]) -> float:
    n = sum(sum(row) for row in table)
    col = [sum(row) for row in table]
    row = [sum(r[j] for r in table) for j in range(len(table[0]))]
    mi = 0.0
    for i, r in enumerate(table):
        for j, v in enumerate(r):
            if v:
                mi += (v / n) * math.log(v * n / (col[i] * row[j]))
    return mi


def brute_force_max_mi(counts: CellCounts, x: int) -> OracleResult:
    """Maximal mutual information for ``l = 2..min(x, k)`` columns by enumeration."""
    k = counts.clump_count
    if k > MAX_CLUMPS or x > MAX_COLUMNS:
        raise ValueError(f"oracle limited to k <= {MAX_CLUMPS}, x <= {MAX_COLUMNS}")
    if x < 2:
        raise ValueError("x must be >= 2")
    cells = counts.counts.tolist()
    best: dict[int, float] = {}
    enumerated = 0
    for l in range(2, min(x, k) + 1):
        top = -math.inf
        for cuts in itertools.combinations(range(1, k), l - 1):
            enumerated += 1
            edges = (0,) + cuts + (k,)
            table = [
                [sum(cells[j][r] for j in range(lo, hi)) for r in range(len(cells[0]))]
                for lo, hi in zip(edges, edges[1:])
            ]
            top = max(top, _mutual_information(table))
        best[l] = top
    return OracleResult(best, enumerated)


def _t(m: int) -> float:
    return m * math.log(m) if m > 0 else 0.0


def _equipartition(values: list[float], y: int) -> tuple[list[int], int]:
    n = len(values)
    q = [0] * n
    desired = n / y
    row, h, i = 1, 0, 0
    while i < n:
        s = 1
        while i + s < n and values[i + s] == values[i]:
            s += 1
        if h != 0 and abs(h + s - desired) >= abs(h - desired):
            row += 1
            h = 0
            desired = (n - i) / (y - row + 1)
        for j in range(i, i + s):
            q[j] = row
        h += s
        i += s
    return q, row


def _clumps(a: list[float], q: list[int]) -> tuple[list[int], int]:
    n = len(a)
    qt = list(q)
    i, c = 0, -1
    while i < n:
        s, flag = 0, False
        for j in range(i + 1, n):
            if a[j] == a[i]:
                s += 1
                if qt[j] != qt[i]:
                    flag = True
        if s != 0 and flag:
            for j in range(s + 1):
                qt[i + j] = c
            c -= 1
        i += s + 1
    p = [1] * n
    for j in range(1, n):
        p[j] = p[j - 1] + (qt[j] != qt[j - 1])
    return p, p[-1]


def _superclumps(a, q, k_hat):
    p, k = _clumps(a, q)
    if k > k_hat:
        return _equipartition([float(v) for v in p], k_hat)
    return p, k


def _optimize(cells: list[list[int]], x: int) -> list[float]:
    k, rows = len(cells), len(cells[0])
    cum = [[0] * rows]
    for row in cells:
        cum.append([u + v for u, v in zip(cum[-1], row)])
    c = [sum(r) for r in cum]
    n = c[k]
    hq = (_t(n) - sum(_t(v) for v in cum[k])) / n
    if k == 1:
        return [0.0] * (x - 1)

    def col_entropy(s, t):
        w = c[t] - c[s]
        return (_t(w) - sum(_t(cum[t][r] - cum[s][r]) for r in range(rows))) / w

    def split(s, t):
        hp3 = (_t(c[t]) - _t(c[s]) - _t(c[t] - c[s])) / c[t]
        joint = sum(_t(cum[s][r]) for r in range(rows))
        rest = sum(_t(cum[t][r] - cum[s][r]) for r in range(rows))
        return hp3 - (_t(c[t]) - joint - rest) / c[t]

    f = {t: max(split(s, t) for s in range(1, t)) for t in range(2, k + 1)}
    out = [hq + f[k]]
    for l in range(3, min(x, k) + 1):
        f = {
            t: max(
                (c[s] / c[t]) * f[s] - ((c[t] - c[s]) / c[t]) * col_entropy(s, t)
                for s in range(l - 1, t)
            )
            for t in range(l, k + 1)
        }
        out.append(hq + f[k])
    while len(out) < x - 1:
        out.append(out[-1])
    return out


def _orientation(a: list[float], b: list[float], B: int, c: float) -> dict:
    n = len(a)
    by_b = sorted(range(n), key=lambda i: (b[i], a[i]))
    by_a = sorted(range(n), key=lambda i: (a[i], b[i]))
    xs = [a[i] for i in by_a]
    out = {}
    for y in range(2, B // 2 + 1):
        xmax = B // y
        q_b, yhat = _equipartition([b[i] for i in by_b], y)
        row_of = {idx: q_b[pos] for pos, idx in enumerate(by_b)}
        q = [row_of[i] for i in by_a]
        p, k = _superclumps(xs, q, max(1, int(math.floor(c * xmax))))
        cells = [[0] * yhat for _ in range(k)]
        for pi, qi in zip(p, q):
            cells[pi - 1][qi - 1] += 1
        prof = _optimize(cells, xmax)
        for l in range(2, xmax + 1):
            lim = min(l, yhat)
            out[l, y] = 0.0 if lim < 2 else min(1.0, max(0.0, prof[l - 2] / math.log(lim)))
    return out


def reference_statistics(xs, ys, params: Parameters | None = None) -> MineStatistics:
    """All statistics for one pair through the naive pipeline (``n <= 200``)."""
    params = params or Parameters()
    xs, ys = check_pair(xs, ys)
    if xs.size > 200:
        raise ValueError("reference pipeline limited to n <= 200")
    a, b = xs.tolist(), ys.tolist()
    n = len(a)
    B = max(int(math.floor(n**params.alpha)), 4)
    fwd = _orientation(a, b, B, params.c)
    bwd = _orientation(b, a, B, params.c)
    M = {(x, y): max(v, bwd[y, x]) for (x, y), v in fwd.items()}
    top = max(M.values())
    gaps = max(abs(v - M[y, x]) for (x, y), v in M.items())
    edge = max(v for (x, y), v in M.items() if x == 2 or y == 2)
    cells = min(x * y for (x, y), v in M.items() if v == top)
    r = pearson(xs, ys)
    return MineStatistics(top, gaps, edge, math.log2(cells), r, nonlinearity(top, r))
