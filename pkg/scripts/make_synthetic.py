#!/usr/bin/env python3
"""Write a synthetic expression-like dataset in the CLI input format.

The first variable is a sampling-time ramp; the rest are rounded log-normal
values with a few planted functional relationships, so the output carries
both noise pairs and strong associations.

    python3 scripts/make_synthetic.py out.csv --variables 4382 --samples 23
"""
import argparse
import csv

import numpy as np


def synthetic_rows(variables: int, samples: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    t = np.arange(samples) * 10.0
    yield "time", t
    for i in range(1, variables):
        kind = i % 50
        if kind == 1:
            v = np.sin(t / 40.0 + i) + 0.05 * rng.normal(size=samples)
        elif kind == 2:
            v = (t - t.mean()) ** 2 + rng.normal(size=samples)
        else:
            v = rng.lognormal(size=samples)
        yield f"G{i:05d}", np.round(v, 3)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("output")
    ap.add_argument("--variables", type=int, default=4382)
    ap.add_argument("--samples", type=int, default=23)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    with open(args.output, "w", newline="") as fh:
        w = csv.writer(fh)
        for name, v in synthetic_rows(args.variables, args.samples, args.seed):
            w.writerow([name, *(repr(float(x)) for x in v)])


if __name__ == "__main__":
    main()
