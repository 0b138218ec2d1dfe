#!/usr/bin/env python3
"""Wall time of an AllPairs run for several worker counts.

    python3 scripts/bench_scaling.py --variables 200 --workers 1 2 4 8
"""
import argparse
import hashlib
import sys
import time
from pathlib import Path

from mine_engine import AnalysisTask, Dataset, run_analysis
from mine_engine.analysis import default_workers

sys.path.insert(0, str(Path(__file__).resolve().parent))
from make_synthetic import synthetic_rows  # noqa: E402


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--variables", type=int, default=200)
    ap.add_argument("--samples", type=int, default=23)
    ap.add_argument("--workers", type=int, nargs="+", default=[1, 2, 4, 8])
    args = ap.parse_args(argv)
    names, rows = zip(*synthetic_rows(args.variables, args.samples))
    ds = Dataset.from_rows(names, rows)
    print(f"{ds.p} variables x {ds.n} samples, {ds.p * (ds.p - 1) // 2} pairs, "
          f"{default_workers()} CPUs available")
    base = None
    for w in args.workers:
        start = time.perf_counter()
        recs = run_analysis(ds, AnalysisTask(workers=w))
        secs = time.perf_counter() - start
        digest = hashlib.sha256(repr([r.stats.as_tuple() for r in recs]).encode()).hexdigest()[:12]
        base = base or secs
        print(f"workers={w:2d}  {secs:7.2f}s  speedup={base / secs:5.2f}x  digest={digest}")


if __name__ == "__main__":
    main()
