"""Acceptance criteria, one test each, at the stated tolerances.

Each test appends a PASS/FAIL line to the summary printed at the end of the
pytest run (``pytest tests/test_acceptance.py -v``).

Criteria 2 and 3 need the published Spellman and microbiome files, looked up
in ``$MINE_DATA`` or ``<repo>/data``; without them the tests fail.
"""
import math
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import psutil
import pytest

from conftest import ACCEPTANCE, EXAMPLE_P, EXAMPLE_POINTS, EXAMPLE_Q, sin_example
from mine_engine.analysis import AllPairs, AnalysisTask, Dataset, default_workers, run_analysis
from mine_engine.charmatrix import Parameters, clump_budget, compute_score, grid_bound
from mine_engine.io import read_dataset, write_results
from mine_engine.mi import CellCounts, optimize_x_axis
from mine_engine.oracle import brute_force_max_mi
from mine_engine.partition import (
    RowPartition,
    SortedPairs,
    get_clumps_partition,
    get_superclumps_partition,
    row_partition_in_x_order,
)
from mine_engine.statistics import mine_statistics

REPO = Path(__file__).resolve().parents[1]


def report(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok


def data_file(name):
    for root in (os.environ.get("MINE_DATA"), REPO / "data"):
        if root and (Path(root) / name).is_file():
            return Path(root) / name
    return None


def within(got, want, tol):
    return abs(got - want) <= tol


def test_c1_sin_benchmark():
    x, y = sin_example()
    start = time.perf_counter()
    s = mine_statistics(x, y, Parameters(0.6, 15))
    secs = time.perf_counter() - start
    checks = [
        within(s.mic, 0.999999, 1e-3),
        within(s.mev, 0.999999, 1e-3),
        within(s.mcn, 4.584963, 1e-3),
        within(s.mas, 0.728144, 0.02),
        secs < 2.0,
    ]
    ok = report(1, all(checks), f"MIC={s.mic:.6f} MAS={s.mas:.6f} MEV={s.mev:.6f} "
                                f"MCN={s.mcn:.6f} time={secs:.3f}s")
    assert ok


def test_c2_spellman():
    path = data_file("Spellman.csv")
    if path is None:
        report(2, False, "Spellman.csv not found in $MINE_DATA or data/")
        pytest.fail("Spellman.csv is not available")
    ds = read_dataset(path)
    i, j = ds.names.index("time"), ds.names.index("YAL001C")
    s = mine_statistics(ds.values[i], ds.values[j], Parameters(0.67, 15))
    ok = all([
        within(s.mic, 0.6321377, 1e-3), within(s.mas, 0.2537, 0.01),
        within(s.mev, 0.6321, 1e-3), within(s.mcn, 3.0, 1e-6),
    ])
    report(2, ok, f"MIC={s.mic:.7f} MAS={s.mas:.4f} MEV={s.mev:.4f} MCN={s.mcn:.6f}")
    assert ok


MICROBIOME = [("OTU4435", "OTU4496", 0.500), ("OTU1462", "OTU4496", 0.455), ("OTU4496", "OTU6224", 0.438)]


def test_c3_microbiome():
    path = data_file("Microbiome.csv")
    if path is None:
        report(3, False, "Microbiome.csv not found in $MINE_DATA or data/")
        pytest.fail("Microbiome.csv is not available")
    ds = read_dataset(path)
    got = []
    for a, b, want in MICROBIOME:
        s = mine_statistics(ds.values[ds.names.index(a)], ds.values[ds.names.index(b)],
                            Parameters(0.551, 10))
        got.append((a, b, s.mic, within(s.mic, want, 0.01)))
    ok = all(g[3] for g in got)
    report(3, ok, " ".join(f"({a},{b})={v:.3f}" for a, b, v, _ in got))
    assert ok


def random_counts(rng):
    k = int(rng.integers(1, 9))
    rows = int(rng.integers(1, 5))
    n = int(rng.integers(k, 41))
    p = np.concatenate([np.arange(k), rng.integers(0, k, n - k)])
    q = rng.integers(0, rows, n)
    counts = np.zeros((k, rows), dtype=np.int64)
    np.add.at(counts, (p, q), 1)
    return CellCounts(counts)


def test_c4_oracle_equivalence():
    rng = np.random.default_rng(4)
    start = time.perf_counter()
    worst, instances = 0.0, 0
    for _ in range(1000):
        counts = random_counts(rng)
        x = int(rng.integers(2, 7))
        prof = optimize_x_axis(counts, x)
        if counts.clump_count == 1:
            worst = max(worst, float(np.abs(prof.values).max()))
        else:
            for l, v in brute_force_max_mi(counts, x).values.items():
                worst = max(worst, abs(prof[l] - v))
        instances += 1
    secs = time.perf_counter() - start
    ok = report(4, worst <= 1e-12 and secs < 30,
                f"{instances} instances, max |delta|={worst:.2e}, time={secs:.1f}s")
    assert ok


def random_pair(rng):
    n = int(rng.integers(10, 201))
    kind = rng.integers(0, 4)
    x = rng.normal(size=n)
    if kind == 0:
        y = rng.normal(size=n)
    elif kind == 1:
        y = np.sin(4 * x) + 0.2 * rng.normal(size=n)
    elif kind == 2:
        y = x**2
    else:
        x = rng.integers(0, 6, n).astype(float)
        y = rng.integers(0, 4, n).astype(float)
    digits = int(rng.integers(0, 3))
    return np.round(x, digits), np.round(y, digits)


def partition_violations(a, b, params):
    """Superclump budget and shared-clump checks for every row count of one orientation."""
    n = a.size
    B = grid_bound(n, params.alpha)
    pts = SortedPairs.from_arrays(a, b, "first")
    bad = 0
    for y in range(2, B // 2 + 1):
        k_hat = clump_budget(params.c, B // y)
        p = get_superclumps_partition(pts, row_partition_in_x_order(pts, y), k_hat)
        same_x = pts.a[1:] == pts.a[:-1]
        bad += p.clump_count > k_hat
        bad += int(np.any(np.diff(p.assignment)[same_x] != 0))
    return bad


def test_c5_invariants():
    rng = np.random.default_rng(5)
    failures = {}

    def fail(name):
        failures[name] = failures.get(name, 0) + 1

    pairs = 500
    for _ in range(pairs):
        x, y = random_pair(rng)
        n = x.size
        params = Parameters(0.6, float(rng.choice([1.0, 5.0, 15.0])))
        m = compute_score(x, y, params)
        vals = m.values[m.mask()]
        if not (np.all(vals >= 0) and np.all(vals <= 1)):
            fail("entries in [0,1]")
        s = mine_statistics(x, y, params)
        t = mine_statistics(y, x, params)
        if not s.mas <= s.mic:
            fail("MAS <= MIC")
        if not s.mev <= s.mic:
            fail("MEV <= MIC")
        if not 2 <= s.mcn <= math.log2(m.B):
            fail("2 <= MCN <= log2 B")
        if s.as_tuple()[:4] != t.as_tuple()[:4]:
            fail("swap invariance")
        if partition_violations(x, y, params) + partition_violations(y, x, params):
            fail("superclump partitions")
        sat = [compute_score(x, y, Parameters(0.6, c)).values for c in (float(n), 3.0 * n)]
        if not np.array_equal(sat[0], sat[1], equal_nan=True):
            fail("c-saturation")
    ok = report(5, not failures, f"{pairs} pairs, violations: {failures or 'none'}")
    assert ok


def test_c6_clump_example():
    a = np.array([p[0] for p in EXAMPLE_POINTS], float)
    b = np.array([p[1] for p in EXAMPLE_POINTS], float)
    pts = SortedPairs(a, b, "first")
    q = row_partition_in_x_order(pts, 3)
    p = get_clumps_partition(pts, RowPartition(q.assignment, q.row_count))
    ok = q.assignment.tolist() == EXAMPLE_Q and p.assignment.tolist() == EXAMPLE_P
    report(6, ok, f"Q={q.assignment.tolist()} P={p.assignment.tolist()}")
    assert ok


def synthetic(p, n, seed):
    rng = np.random.default_rng(seed)
    v = np.round(rng.lognormal(size=(p, n)), 2)
    v[0] = np.arange(n) * 10.0
    v[1::7] = np.sin(v[0] / 30.0) + 0.1 * v[1::7]
    return Dataset.from_rows([f"G{i}" for i in range(p)], v)


def test_c7_determinism_and_scaling(tmp_path):
    ds = synthetic(200, 23, seed=7)
    outputs, timings = {}, {}
    for workers in (1, 2, 4, 8):
        task = AnalysisTask(AllPairs(), Parameters(), workers)
        out = tmp_path / f"w{workers}.txt"
        start = time.perf_counter()
        write_results(run_analysis(ds, task), out)
        timings[workers] = time.perf_counter() - start
        outputs[workers] = out.read_bytes()
    identical = len(set(outputs.values())) == 1
    pairs = 200 * 199 // 2
    speedup = timings[1] / timings[4]
    ok = identical and pairs >= 5000 and speedup >= 3.0
    report(7, ok, f"byte-identical={identical} over workers 1/2/4/8, {pairs} pairs, "
                  f"speedup(4)={speedup:.2f}x, cpus available={default_workers()}")
    assert identical
    assert speedup >= 3.0


def peak_tree_rss(cmd, interval=0.05):
    child = subprocess.Popen(cmd, stdout=subprocess.DEVNULL, stderr=subprocess.PIPE)
    proc = psutil.Process(child.pid)
    peak = 0
    while child.poll() is None:
        total = 0
        try:
            for pr in [proc, *proc.children(recursive=True)]:
                total += pr.memory_info().rss
        except psutil.NoSuchProcess:
            pass
        peak = max(peak, total)
        time.sleep(interval)
    _, err = child.communicate()
    return child.returncode, peak, err.decode()


@pytest.mark.slow
def test_c8_memory_ceiling(tmp_path):
    rng = np.random.default_rng(8)
    inp = tmp_path / "wide.csv"
    with open(inp, "w") as fh:
        fh.write("time," + ",".join(str(10 * i) for i in range(23)) + "\n")
        for i in range(1, 4382):
            fh.write(f"G{i}," + ",".join(f"{v:.3f}" for v in rng.lognormal(size=23)) + "\n")
    out = tmp_path / "out.txt"
    start = time.perf_counter()
    code, peak, err = peak_tree_rss(
        [sys.executable, "-m", "mine_engine.cli", str(inp), "-j", "1", "-o", str(out)]
    )
    secs = time.perf_counter() - start
    with open(out) as fh:
        records = sum(1 for _ in fh) - 1 if code == 0 else 0
    mb = peak / 2**20
    ok = code == 0 and records == 4382 * 4381 // 2 and mb < 100
    report(8, ok, f"{records} records, peak RSS={mb:.1f}MB, wall={secs:.0f}s")
    assert ok, err
