"""``mine`` command line front end."""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .analysis import (
    AllPairs,
    AnalysisTask,
    MasterVsAll,
    SinglePair,
    default_workers,
    expand_pairs,
    iter_analysis,
)
from .charmatrix import Parameters
from .io import DatasetError, read_dataset, write_results


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mine",
        description="MINE statistics (MIC, MAS, MEV, MCN), Pearson r and "
        "non-linearity for pairs of variables in a delimited file "
        "(one variable per line: label,v1,...,vn).",
    )
    parser.add_argument("input", help="input file")
    parser.add_argument("-a", dest="alpha", type=float, default=0.6,
                        help="grid exponent alpha in (0, 1] (default: 0.6)")
    parser.add_argument("-c", dest="c", type=float, default=15.0,
                        help="clump budget multiplier c > 0 (default: 15)")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("-m", dest="master", type=int, metavar="I",
                      help="score variable I (1-based) against all others")
    mode.add_argument("-p", dest="pair", type=int, nargs=2, metavar=("I", "J"),
                      help="score the single pair I, J (1-based)")
    parser.add_argument("-o", dest="output", help="output file (default: <input stem>_MINE.txt)")
    parser.add_argument("-j", dest="workers", type=int, default=None,
                        help="worker processes (default: available CPUs)")
    parser.add_argument("--min-variance", type=float, default=None, metavar="V",
                        help="skip variables with sample variance below V")
    return parser


def parse_cli(args=None) -> tuple[Path, AnalysisTask, Path]:
    parser = build_parser()
    ns = parser.parse_args(args)
    try:
        params = Parameters(ns.alpha, ns.c)
    except ValueError as exc:
        parser.error(str(exc))
    if ns.master is not None:
        mode = MasterVsAll(ns.master)
    elif ns.pair is not None:
        if ns.pair[0] == ns.pair[1]:
            parser.error("-p needs two distinct variables")
        mode = SinglePair(*ns.pair)
    else:
        mode = AllPairs()
    workers = default_workers() if ns.workers is None else ns.workers
    if workers < 1:
        parser.error("-j must be >= 1")
    if ns.min_variance is not None and not ns.min_variance >= 0:
        parser.error("--min-variance must be >= 0")
    inp = Path(ns.input)
    out = Path(ns.output) if ns.output else inp.with_name(inp.stem + "_MINE.txt")
    return inp, AnalysisTask(mode, params, workers, ns.min_variance), out


def main(argv=None) -> int:
    inp, task, out = parse_cli(argv)
    try:
        dataset = read_dataset(inp)
    except DatasetError as exc:
        print(f"mine: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"mine: cannot read {inp}: {exc.strerror}", file=sys.stderr)
        return 1
    try:
        expand_pairs(task, dataset.p)
    except ValueError as exc:
        print(f"mine: {exc}", file=sys.stderr)
        return 2
    start = time.perf_counter()
    try:
        count = write_results(iter_analysis(dataset, task), out)
    except ValueError as exc:
        print(f"mine: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"mine: {exc}", file=sys.stderr)
        return 1
    print(
        f"mine: {count} pairs from {dataset.p} variables x {dataset.n} samples "
        f"-> {out} ({time.perf_counter() - start:.1f}s, {task.workers} workers)",
        file=sys.stderr,
    )
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
