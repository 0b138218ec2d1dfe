#!/usr/bin/env python3
"""Peak resident memory of a full ``mine`` run, sampled with psutil.

Generates the 4382 x 23 synthetic dataset (unless one is given), runs the
CLI in a subprocess and reports wall time and the largest RSS seen across
the process tree.
"""
import argparse
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import psutil

sys.path.insert(0, str(Path(__file__).resolve().parent))
from make_synthetic import main as make_dataset  # noqa: E402


def tree_rss(proc: psutil.Process) -> int:
    total = 0
    for p in [proc, *proc.children(recursive=True)]:
        try:
            total += p.memory_info().rss
        except psutil.NoSuchProcess:
            pass
    return total


def peak_rss(cmd, interval=0.05):
    """Run ``cmd``; return (exit code, seconds, peak RSS bytes)."""
    start = time.perf_counter()
    child = subprocess.Popen(cmd, stdout=subprocess.DEVNULL, stderr=subprocess.PIPE)
    proc = psutil.Process(child.pid)
    peak = 0
    while child.poll() is None:
        try:
            peak = max(peak, tree_rss(proc))
        except psutil.NoSuchProcess:
            break
        time.sleep(interval)
    child.wait()
    return child.returncode, time.perf_counter() - start, peak


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--input")
    ap.add_argument("--variables", type=int, default=4382)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    with tempfile.TemporaryDirectory() as tmp:
        inp = args.input or str(Path(tmp) / "synthetic.csv")
        if not args.input:
            make_dataset([inp, "--variables", str(args.variables)])
        out = str(Path(tmp) / "out.txt")
        cmd = [sys.executable, "-m", "mine_engine.cli", inp, "-j", str(args.workers), "-o", out]
        code, secs, peak = peak_rss(cmd)
        lines = sum(1 for _ in open(out)) if code == 0 else 0
    print(f"exit={code} records={max(lines - 1, 0)} wall={secs:.1f}s peak_rss={peak / 2**20:.1f}MB")


if __name__ == "__main__":
    main()
